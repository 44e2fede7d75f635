/** Chart layout: CSV columns + spec -> scene primitives.
 *
 * No physics lives here: the chart draws exactly the columns named in the
 * spec (plus an optional externally-fitted power law) and nothing else.
 */

import { column, CsvTable } from "./csv.js";
import { makeScale } from "./scale.js";
import { Marker, Primitive, Scene } from "./scene.js";
import { PlotSpec, SlopeFit } from "./spec.js";

const PALETTE = ["#1f4e8c", "#c23b22", "#3b7a3b", "#7b4fa6", "#b8860b"];
const DEFAULT_MARKERS: Marker[] = ["plus", "cross", "circle"];
const MARGIN = { left: 78, right: 24, top: 44, bottom: 52 };

export class ChartError extends Error {}

export function buildScene(spec: PlotSpec, table: CsvTable): Scene {
  const xs = column(table, spec.x_column);
  const seriesData = spec.y_columns.map((s) => ({
    spec: s,
    values: column(table, s.column),
  }));

  const width = spec.width;
  const height = spec.height;
  const plotX: [number, number] = [MARGIN.left, width - MARGIN.right];
  const plotY: [number, number] = [height - MARGIN.bottom, MARGIN.top];

  const allY = seriesData.flatMap((s) => s.values);
  const usableY = spec.log_y ? allY.filter((v) => v > 0) : allY;
  if (usableY.length === 0) {
    throw new ChartError("no plottable y values (log axis drops v <= 0)");
  }
  const xScale = makeScale(xs, plotX, spec.log_x);
  const yScale = makeScale(usableY, plotY, spec.log_y);

  const prims: Primitive[] = [];
  prims.push({ kind: "rect", x: 0, y: 0, w: width, h: height, fill: "#ffffff" });
  // frame
  prims.push(frameLine(plotX[0], plotY[0], plotX[1], plotY[0]));
  prims.push(frameLine(plotX[0], plotY[0], plotX[0], plotY[1]));
  prims.push(frameLine(plotX[0], plotY[1], plotX[1], plotY[1]));
  prims.push(frameLine(plotX[1], plotY[0], plotX[1], plotY[1]));

  for (const t of xScale.ticks()) {
    const px = xScale.toPixel(t.value);
    if (px < plotX[0] - 0.5 || px > plotX[1] + 0.5) continue;
    prims.push({
      kind: "line", x1: px, y1: plotY[0], x2: px, y2: plotY[0] + 5,
      color: "#000000", width: 1,
    });
    prims.push({
      kind: "text", x: px, y: plotY[0] + 18, text: t.label, size: 11,
      color: "#000000", anchor: "middle",
    });
  }
  for (const t of yScale.ticks()) {
    const py = yScale.toPixel(t.value);
    if (py > plotY[0] + 0.5 || py < plotY[1] - 0.5) continue;
    prims.push({
      kind: "line", x1: plotX[0] - 5, y1: py, x2: plotX[0], y2: py,
      color: "#000000", width: 1,
    });
    prims.push({
      kind: "text", x: plotX[0] - 8, y: py + 4, text: t.label, size: 11,
      color: "#000000", anchor: "end",
    });
    prims.push({
      kind: "line", x1: plotX[0], y1: py, x2: plotX[1], y2: py,
      color: "#dddddd", width: 1,
    });
  }

  prims.push({
    kind: "text", x: (plotX[0] + plotX[1]) / 2, y: MARGIN.top - 16,
    text: spec.title, size: 14, color: "#000000", anchor: "middle",
  });
  prims.push({
    kind: "text", x: (plotX[0] + plotX[1]) / 2, y: height - 10,
    text: spec.x_column, size: 12, color: "#000000", anchor: "middle",
  });

  seriesData.forEach((s, i) => {
    const color = s.spec.color ?? PALETTE[i % PALETTE.length];
    const marker = s.spec.marker ?? DEFAULT_MARKERS[i % DEFAULT_MARKERS.length];
    for (let r = 0; r < xs.length; r++) {
      const xv = xs[r];
      const yv = s.values[r];
      if (spec.log_x && xv <= 0) continue;
      if (spec.log_y && yv <= 0) continue;
      prims.push({
        kind: "marker",
        x: xScale.toPixel(xv),
        y: yScale.toPixel(yv),
        shape: marker,
        size: 5,
        color,
        series: s.spec.column,
      });
    }
    const label = s.spec.label ?? s.spec.column;
    const ly = MARGIN.top + 14 + 16 * i;
    prims.push({
      kind: "marker", x: plotX[1] - 150, y: ly - 4, shape: marker, size: 5,
      color, series: `legend:${s.spec.column}`,
    });
    prims.push({
      kind: "text", x: plotX[1] - 140, y: ly, text: label, size: 11,
      color, anchor: "start",
    });
  });

  if (spec.slope_fit) {
    addSlopeOverlay(prims, spec, spec.slope_fit, xScale, yScale, plotX, plotY);
  }

  return { width, height, primitives: prims };
}

function frameLine(x1: number, y1: number, x2: number, y2: number): Primitive {
  return { kind: "line", x1, y1, x2, y2, color: "#000000", width: 1 };
}

function addSlopeOverlay(
  prims: Primitive[],
  spec: PlotSpec,
  fit: SlopeFit,
  xScale: { toPixel(v: number): number; domain: [number, number] },
  yScale: { toPixel(v: number): number; domain: [number, number] },
  plotX: [number, number],
  plotY: [number, number],
) {
  if (!spec.log_x || !spec.log_y) {
    throw new ChartError("slope overlay assumes log-log axes");
  }
  const [x0, x1] = xScale.domain;
  const predict = (x: number) => Math.exp(fit.intercept + fit.slope * Math.log(x));
  const clampY = (py: number) => Math.min(Math.max(py, plotY[1]), plotY[0]);
  prims.push({
    kind: "line",
    x1: xScale.toPixel(x0),
    y1: clampY(yScale.toPixel(predict(x0))),
    x2: xScale.toPixel(x1),
    y2: clampY(yScale.toPixel(predict(x1))),
    color: "#555555",
    width: 1,
    dashed: true,
  });
  const midX = Math.sqrt(x0 * x1);
  prims.push({
    kind: "text",
    x: xScale.toPixel(midX),
    y: clampY(yScale.toPixel(predict(midX))) - 8,
    text: `slope = ${fit.slope.toFixed(2)}`,
    size: 12,
    color: "#333333",
    anchor: "middle",
  });
}
