import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { buildScene } from "../src/chart.js";
import { readCsv } from "../src/csv.js";
import { main, renderSpecFile } from "../src/plot.js";
import { markersOf, textsOf } from "../src/scene.js";
import { plotSpecSchema } from "../src/spec.js";
import { renderSvg } from "../src/svg.js";

const FIXTURES = join(__dirname, "..", "fixtures");

function sweepSpec(csv: string, extra: object = {}) {
  return plotSpecSchema.parse({
    input_csv: join(FIXTURES, csv),
    x_column: "d",
    y_columns: [
      { column: "one_minus_c1c2c3", label: "1 - C1C2C3", marker: "plus" },
      { column: "one_minus_c1c2", label: "1 - C1C2", marker: "cross" },
    ],
    output: "unused",
    title: "scaling",
    ...extra,
  });
}

/** mean pixel gap between the two series at matching x positions */
function seriesGap(csv: string): number {
  const spec = sweepSpec(csv);
  const scene = buildScene(spec, readCsv(spec.input_csv));
  const a = markersOf(scene, "one_minus_c1c2c3");
  const b = markersOf(scene, "one_minus_c1c2");
  expect(a.length).toBeGreaterThan(0);
  expect(b.length).toBeGreaterThan(0);
  let total = 0;
  let n = 0;
  for (const ma of a) {
    const match = b.filter((mb) => Math.abs(mb.x - ma.x) < 0.75);
    if (match.length === 1) {
      total += Math.abs(match[0].y - ma.y);
      n += 1;
    }
  }
  expect(n).toBeGreaterThan(0);
  return total / n;
}

describe("series geometry", () => {
  it("top-panel series coincide", () => {
    expect(seriesGap("fig1_top.csv")).toBeLessThan(2.0);
  });

  it("bottom-panel series are separated", () => {
    expect(seriesGap("fig1_bottom.csv")).toBeGreaterThan(30.0);
  });
});

describe("slope overlay", () => {
  it("annotates the externally fitted slope", () => {
    const fit = JSON.parse(
      readFileSync(join(FIXTURES, "bottom_fit.json"), "utf8"),
    );
    // backaction deficit slope from the exact sweep: close to -1/2
    expect(fit.slope).toBeGreaterThan(-0.6);
    expect(fit.slope).toBeLessThan(-0.4);
    const spec = sweepSpec("fig1_bottom.csv", { slope_fit: fit });
    const scene = buildScene(spec, readCsv(spec.input_csv));
    const annotation = textsOf(scene).find((t) => t.startsWith("slope ="));
    expect(annotation).toBe(`slope = ${fit.slope.toFixed(2)}`);
    expect(renderSvg(scene)).toContain("slope =");
  });

  it("omits the overlay when no fit is given", () => {
    const spec = sweepSpec("fig1_bottom.csv");
    const scene = buildScene(spec, readCsv(spec.input_csv));
    expect(textsOf(scene).some((t) => t.startsWith("slope ="))).toBe(false);
  });
});

describe("end-to-end rendering", () => {
  it("writes svg and png", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const spec = {
      input_csv: join(FIXTURES, "fig1_top.csv"),
      x_column: "d",
      y_columns: [
        { column: "one_minus_c1c2c3", label: "1 - C1C2C3", marker: "plus" },
        { column: "one_minus_c1c2", label: "1 - C1C2", marker: "cross" },
      ],
      title: "top panel",
      output: join(dir, "top"),
    };
    const specPath = join(dir, "spec.json");
    writeFileSync(specPath, JSON.stringify(spec));
    expect(main([specPath])).toBe(0);
    const svg = readFileSync(join(dir, "top.svg"), "utf8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("1 - C1C2C3");
    const png = readFileSync(join(dir, "top.png"));
    expect([...png.subarray(0, 8)]).toEqual([
      0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a,
    ]);
  });

  it("fails with exit 1 on a missing column", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const spec = {
      input_csv: join(FIXTURES, "fig1_top.csv"),
      x_column: "d",
      y_columns: [{ column: "no_such_column" }],
      output: join(dir, "x"),
    };
    const specPath = join(dir, "spec.json");
    writeFileSync(specPath, JSON.stringify(spec));
    expect(main([specPath])).toBe(1);
  });

  it("fails with exit 1 on an empty csv", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    writeFileSync(join(dir, "empty.csv"), "");
    const spec = {
      input_csv: join(dir, "empty.csv"),
      x_column: "d",
      y_columns: [{ column: "c1" }],
      output: join(dir, "x"),
    };
    const specPath = join(dir, "spec.json");
    writeFileSync(specPath, JSON.stringify(spec));
    expect(main([specPath])).toBe(1);
  });

  it("fails with exit 2 on bad usage", () => {
    expect(main([])).toBe(2);
  });

  it("renders byte-identically", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const spec = {
      input_csv: join(FIXTURES, "fig1_bottom.csv"),
      x_column: "d",
      y_columns: [{ column: "one_minus_c1c2c3" }],
      output: join(dir, "a"),
    };
    const specPath = join(dir, "spec.json");
    writeFileSync(specPath, JSON.stringify(spec));
    renderSpecFile(specPath);
    const first = readFileSync(join(dir, "a.png"));
    renderSpecFile(specPath);
    const second = readFileSync(join(dir, "a.png"));
    expect(first.equals(second)).toBe(true);
  });
});
