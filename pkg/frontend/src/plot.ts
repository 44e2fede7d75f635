#!/usr/bin/env node
/** CLI: plot <spec.json> -> <output>.svg and <output>.png */

import { writeFileSync } from "node:fs";
import { buildScene, ChartError } from "./chart.js";
import { CsvError, readCsv } from "./csv.js";
import { encodePng, renderRaster } from "./raster.js";
import { renderSvg } from "./svg.js";
import { loadSpec, SpecError } from "./spec.js";

export function renderSpecFile(specPath: string): { svg: string; png: string } {
  const spec = loadSpec(specPath);
  const table = readCsv(spec.input_csv);
  const scene = buildScene(spec, table);
  const svgPath = `${spec.output}.svg`;
  const pngPath = `${spec.output}.png`;
  writeFileSync(svgPath, renderSvg(scene));
  writeFileSync(pngPath, encodePng(renderRaster(scene)));
  return { svg: svgPath, png: pngPath };
}

export function main(argv: string[]): number {
  if (argv.length !== 1) {
    console.error("usage: plot <spec.json>");
    return 2;
  }
  try {
    const out = renderSpecFile(argv[0]);
    console.log(`wrote ${out.svg} and ${out.png}`);
    return 0;
  } catch (err) {
    if (err instanceof SpecError || err instanceof CsvError || err instanceof ChartError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const isEntry = process.argv[1] && import.meta.url.endsWith("plot.js");
if (isEntry) {
  process.exit(main(process.argv.slice(2)));
}
