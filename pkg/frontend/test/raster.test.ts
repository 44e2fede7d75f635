import { inflateSync } from "node:zlib";
import { describe, expect, it } from "vitest";
import { encodePng, Raster, drawText } from "../src/raster.js";

describe("raster", () => {
  it("bresenham endpoints land", () => {
    const r = new Raster(20, 20);
    r.line(2, 3, 17, 11, [10, 20, 30]);
    const at = (x: number, y: number) => r.data[(y * 20 + x) * 4];
    expect(at(2, 3)).toBe(10);
    expect(at(17, 11)).toBe(10);
  });

  it("text marks pixels for every label character", () => {
    const r = new Raster(260, 40);
    const before = r.data.filter((v) => v !== 255).length;
    drawText(r, "slope = -0.44 (1e-3)", 10, 30, 12, [0, 0, 0], "start");
    const after = r.data.filter((v) => v !== 255).length;
    expect(after).toBeGreaterThan(before + 100);
  });

  it("png chunks decode to the raster bytes", () => {
    const r = new Raster(7, 5);
    r.fillRect(1, 1, 3, 2, [200, 100, 50]);
    const png = encodePng(r);
    // IHDR dimensions
    expect(png.readUInt32BE(16)).toBe(7);
    expect(png.readUInt32BE(20)).toBe(5);
    // IDAT payload: 5 scanlines of 1 filter byte + 28 pixel bytes
    const idatLen = png.readUInt32BE(33);
    const idat = png.subarray(41, 41 + idatLen);
    const raw = inflateSync(idat);
    expect(raw.length).toBe(5 * (7 * 4 + 1));
    expect(raw[0]).toBe(0); // filter none
    const px = (x: number, y: number) => raw[y * (7 * 4 + 1) + 1 + x * 4];
    expect(px(1, 1)).toBe(200);
    expect(px(0, 0)).toBe(255);
    // IEND trailer
    expect(png.subarray(png.length - 8, png.length - 4).toString("ascii")).toBe(
      "IEND",
    );
  });
});
