/** Strict reader for the sweep CSV contract. */

import { readFileSync } from "node:fs";

export interface CsvTable {
  header: string[];
  rows: number[][];
}

export class CsvError extends Error {}

export function parseCsv(text: string): CsvTable {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("CSV is empty");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  if (lines.length === 1) {
    throw new CsvError("CSV has a header but no data rows");
  }
  const rows: number[][] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        `row has ${cells.length} cells, header has ${header.length}`,
      );
    }
    const row = cells.map((c) => {
      const v = Number(c);
      if (!Number.isFinite(v)) {
        throw new CsvError(`non-numeric cell ${JSON.stringify(c)}`);
      }
      return v;
    });
    rows.push(row);
  }
  return { header, rows };
}

export function readCsv(path: string): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new CsvError(`cannot read ${path}: ${(err as Error).message}`);
  }
  return parseCsv(text);
}

export function column(table: CsvTable, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(
      `column ${JSON.stringify(name)} not in header [${table.header.join(", ")}]`,
    );
  }
  return table.rows.map((r) => r[idx]);
}
