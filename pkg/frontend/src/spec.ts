/** Plot specification: what to read, which series, where to write. */

import { readFileSync } from "node:fs";
import { z } from "zod";

const seriesSchema = z.object({
  column: z.string(),
  label: z.string().optional(),
  marker: z.enum(["plus", "cross", "circle"]).optional(),
  color: z.string().optional(),
});

const fitSchema = z.object({
  slope: z.number(),
  intercept: z.number(),
});

export const plotSpecSchema = z.object({
  input_csv: z.string(),
  x_column: z.string(),
  y_columns: z.array(seriesSchema).min(1),
  log_x: z.boolean().default(true),
  log_y: z.boolean().default(true),
  title: z.string().default(""),
  output: z.string(),
  width: z.number().int().positive().default(720),
  height: z.number().int().positive().default(420),
  slope_fit: fitSchema.optional(),
});

export type PlotSpec = z.infer<typeof plotSpecSchema>;
export type SeriesSpec = z.infer<typeof seriesSchema>;
export type SlopeFit = z.infer<typeof fitSchema>;

export class SpecError extends Error {}

export function loadSpec(path: string): PlotSpec {
  let raw: string;
  try {
    raw = readFileSync(path, "utf8");
  } catch (err) {
    throw new SpecError(`cannot read ${path}: ${(err as Error).message}`);
  }
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch (err) {
    throw new SpecError(`${path} is not valid JSON: ${(err as Error).message}`);
  }
  const parsed = plotSpecSchema.safeParse(data);
  if (!parsed.success) {
    throw new SpecError(`invalid plot spec: ${parsed.error.message}`);
  }
  return parsed.data;
}
