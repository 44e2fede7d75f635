import { describe, expect, it } from "vitest";
import { column, CsvError, parseCsv } from "../src/csv.js";

describe("csv parsing", () => {
  it("parses the sweep schema", () => {
    const table = parseCsv("d,c1,c2\n101,0.5,0.25\n201,0.6,0.3\n");
    expect(table.header).toEqual(["d", "c1", "c2"]);
    expect(column(table, "c2")).toEqual([0.25, 0.3]);
  });

  it("rejects empty input", () => {
    expect(() => parseCsv("")).toThrow(CsvError);
    expect(() => parseCsv("d,c1\n")).toThrow(CsvError);
  });

  it("rejects ragged rows and non-numeric cells", () => {
    expect(() => parseCsv("a,b\n1\n")).toThrow(CsvError);
    expect(() => parseCsv("a,b\n1,x\n")).toThrow(CsvError);
  });

  it("names the missing column", () => {
    const table = parseCsv("a,b\n1,2\n");
    expect(() => column(table, "zz")).toThrow(/zz/);
  });
});
