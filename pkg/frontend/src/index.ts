export { buildScene, ChartError } from "./chart.js";
export { column, CsvError, parseCsv, readCsv } from "./csv.js";
export { encodePng, Raster, renderRaster } from "./raster.js";
export { markersOf, textsOf } from "./scene.js";
export type { Primitive, Scene } from "./scene.js";
export { loadSpec, plotSpecSchema, SpecError } from "./spec.js";
export type { PlotSpec } from "./spec.js";
export { renderSvg } from "./svg.js";
export { main, renderSpecFile } from "./plot.js";
