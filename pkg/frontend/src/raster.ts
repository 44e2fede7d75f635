/** Scene -> PNG bytes, with no native dependencies.
 *
 * Drawing is deliberately plain: 1px Bresenham strokes, a small stroke font
 * (uppercase forms; lowercase maps up) that covers the label alphabet, and
 * deflate via node:zlib.  Good enough for batch figures; the SVG twin is
 * the pretty one.
 */

import { deflateSync } from "node:zlib";
import { Primitive, Scene } from "./scene.js";

type RGB = [number, number, number];

function parseColor(c: string): RGB {
  if (c.startsWith("#") && c.length === 7) {
    return [
      parseInt(c.slice(1, 3), 16),
      parseInt(c.slice(3, 5), 16),
      parseInt(c.slice(5, 7), 16),
    ];
  }
  return [0, 0, 0];
}

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, [r, g, b]: RGB) {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const o = (yi * this.width + xi) * 4;
    this.data[o] = r;
    this.data[o + 1] = g;
    this.data[o + 2] = b;
    this.data[o + 3] = 255;
  }

  fillRect(x: number, y: number, w: number, h: number, color: RGB) {
    for (let yy = y; yy < y + h; yy++) {
      for (let xx = x; xx < x + w; xx++) {
        this.set(xx, yy, color);
      }
    }
  }

  line(
    x1: number, y1: number, x2: number, y2: number,
    color: RGB, dashed = false,
  ) {
    let x = Math.round(x1);
    let y = Math.round(y1);
    const ex = Math.round(x2);
    const ey = Math.round(y2);
    const dx = Math.abs(ex - x);
    const dy = -Math.abs(ey - y);
    const sx = x < ex ? 1 : -1;
    const sy = y < ey ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    for (;;) {
      if (!dashed || step % 10 < 6) this.set(x, y, color);
      if (x === ex && y === ey) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
      step++;
    }
  }
}

// stroke font: polylines on a 4-wide, 6-tall grid (y up)
type Glyph = number[][][];
const G: Record<string, Glyph> = {
  "0": [[[0, 0], [4, 0], [4, 6], [0, 6], [0, 0]], [[0, 1], [4, 5]]],
  "1": [[[1, 5], [2, 6], [2, 0]], [[1, 0], [3, 0]]],
  "2": [[[0, 5], [1, 6], [3, 6], [4, 5], [4, 4], [0, 0], [4, 0]]],
  "3": [[[0, 6], [4, 6], [2, 4], [4, 2], [4, 1], [3, 0], [1, 0], [0, 1]]],
  "4": [[[3, 0], [3, 6], [0, 2], [4, 2]]],
  "5": [[[4, 6], [0, 6], [0, 4], [3, 4], [4, 3], [4, 1], [3, 0], [0, 0]]],
  "6": [[[4, 6], [1, 6], [0, 5], [0, 1], [1, 0], [3, 0], [4, 1], [4, 2], [3, 3], [0, 3]]],
  "7": [[[0, 6], [4, 6], [1, 0]]],
  "8": [[[1, 3], [0, 4], [0, 5], [1, 6], [3, 6], [4, 5], [4, 4], [3, 3], [1, 3], [0, 2], [0, 1], [1, 0], [3, 0], [4, 1], [4, 2], [3, 3]]],
  "9": [[[0, 0], [3, 0], [4, 1], [4, 5], [3, 6], [1, 6], [0, 5], [0, 4], [1, 3], [4, 3]]],
  A: [[[0, 0], [2, 6], [4, 0]], [[1, 2], [3, 2]]],
  B: [[[0, 0], [0, 6], [3, 6], [4, 5], [4, 4], [3, 3], [0, 3]], [[3, 3], [4, 2], [4, 1], [3, 0], [0, 0]]],
  C: [[[4, 1], [3, 0], [1, 0], [0, 1], [0, 5], [1, 6], [3, 6], [4, 5]]],
  D: [[[0, 0], [0, 6], [3, 6], [4, 5], [4, 1], [3, 0], [0, 0]]],
  E: [[[4, 0], [0, 0], [0, 6], [4, 6]], [[0, 3], [3, 3]]],
  F: [[[0, 0], [0, 6], [4, 6]], [[0, 3], [3, 3]]],
  G: [[[4, 5], [3, 6], [1, 6], [0, 5], [0, 1], [1, 0], [3, 0], [4, 1], [4, 3], [2, 3]]],
  H: [[[0, 0], [0, 6]], [[4, 0], [4, 6]], [[0, 3], [4, 3]]],
  I: [[[1, 0], [3, 0]], [[2, 0], [2, 6]], [[1, 6], [3, 6]]],
  J: [[[4, 6], [4, 1], [3, 0], [1, 0], [0, 1]]],
  K: [[[0, 0], [0, 6]], [[4, 6], [0, 3], [4, 0]]],
  L: [[[0, 6], [0, 0], [4, 0]]],
  M: [[[0, 0], [0, 6], [2, 3], [4, 6], [4, 0]]],
  N: [[[0, 0], [0, 6], [4, 0], [4, 6]]],
  O: [[[1, 0], [0, 1], [0, 5], [1, 6], [3, 6], [4, 5], [4, 1], [3, 0], [1, 0]]],
  P: [[[0, 0], [0, 6], [3, 6], [4, 5], [4, 4], [3, 3], [0, 3]]],
  Q: [[[1, 0], [0, 1], [0, 5], [1, 6], [3, 6], [4, 5], [4, 1], [3, 0], [1, 0]], [[2, 2], [4, 0]]],
  R: [[[0, 0], [0, 6], [3, 6], [4, 5], [4, 4], [3, 3], [0, 3]], [[2, 3], [4, 0]]],
  S: [[[4, 5], [3, 6], [1, 6], [0, 5], [1, 3.5], [3, 2.5], [4, 1], [3, 0], [1, 0], [0, 1]]],
  T: [[[0, 6], [4, 6]], [[2, 6], [2, 0]]],
  U: [[[0, 6], [0, 1], [1, 0], [3, 0], [4, 1], [4, 6]]],
  V: [[[0, 6], [2, 0], [4, 6]]],
  W: [[[0, 6], [1, 0], [2, 3], [3, 0], [4, 6]]],
  X: [[[0, 0], [4, 6]], [[0, 6], [4, 0]]],
  Y: [[[0, 6], [2, 3], [4, 6]], [[2, 3], [2, 0]]],
  Z: [[[0, 6], [4, 6], [0, 0], [4, 0]]],
  "-": [[[0.5, 3], [3.5, 3]]],
  "+": [[[0.5, 3], [3.5, 3]], [[2, 1], [2, 5]]],
  "=": [[[0.5, 2], [3.5, 2]], [[0.5, 4], [3.5, 4]]],
  ".": [[[1.6, 0], [2, 0], [2, 0.4], [1.6, 0.4], [1.6, 0]]],
  ",": [[[2, 0.5], [1.4, -0.8]]],
  ":": [[[2, 1], [2, 1.5]], [[2, 4], [2, 4.5]]],
  "(": [[[3, 6.5], [2, 5], [2, 1], [3, -0.5]]],
  ")": [[[1, 6.5], [2, 5], [2, 1], [1, -0.5]]],
  "/": [[[0, -0.5], [4, 6.5]]],
  "^": [[[1, 5], [2, 6], [3, 5]]],
  "_": [[[0, 0], [4, 0]]],
  "*": [[[1, 2], [3, 4]], [[1, 4], [3, 2]]],
  "%": [[[0, 0], [4, 6]], [[0.5, 5.5], [1, 6], [1, 5.5], [0.5, 5.5]], [[3, 0.5], [3.5, 1], [3.5, 0.5], [3, 0.5]]],
  " ": [],
};

const GLYPH_W = 6; // advance on the 4-wide grid

function drawChar(r: Raster, ch: string, x: number, y: number, scale: number, color: RGB) {
  const glyph = G[ch] ?? G[ch.toUpperCase()] ?? [[[0, 0], [4, 0], [4, 6], [0, 6], [0, 0]]];
  for (const stroke of glyph) {
    for (let i = 1; i < stroke.length; i++) {
      r.line(
        x + stroke[i - 1][0] * scale,
        y - stroke[i - 1][1] * scale,
        x + stroke[i][0] * scale,
        y - stroke[i][1] * scale,
        color,
      );
    }
  }
}

export function drawText(
  r: Raster,
  text: string,
  x: number,
  y: number,
  size: number,
  color: RGB,
  anchor: "start" | "middle" | "end",
) {
  const scale = size / 9;
  const width = text.length * GLYPH_W * scale;
  let cx = x;
  if (anchor === "middle") cx -= width / 2;
  if (anchor === "end") cx -= width;
  for (const ch of text) {
    drawChar(r, ch, cx, y, scale, color);
    cx += GLYPH_W * scale;
  }
}

function drawPrimitive(r: Raster, p: Primitive) {
  switch (p.kind) {
    case "rect":
      r.fillRect(p.x, p.y, p.w, p.h, parseColor(p.fill));
      break;
    case "line":
      r.line(p.x1, p.y1, p.x2, p.y2, parseColor(p.color), p.dashed ?? false);
      break;
    case "marker": {
      const c = parseColor(p.color);
      const s = p.size;
      if (p.shape === "plus") {
        r.line(p.x - s, p.y, p.x + s, p.y, c);
        r.line(p.x, p.y - s, p.x, p.y + s, c);
      } else if (p.shape === "cross") {
        const h = s * 0.7071;
        r.line(p.x - h, p.y - h, p.x + h, p.y + h, c);
        r.line(p.x - h, p.y + h, p.x + h, p.y - h, c);
      } else {
        const steps = 16;
        for (let i = 0; i < steps; i++) {
          const a = (2 * Math.PI * i) / steps;
          const b = (2 * Math.PI * (i + 1)) / steps;
          r.line(
            p.x + s * 0.8 * Math.cos(a), p.y + s * 0.8 * Math.sin(a),
            p.x + s * 0.8 * Math.cos(b), p.y + s * 0.8 * Math.sin(b), c,
          );
        }
      }
      break;
    }
    case "text":
      drawText(r, p.text, p.x, p.y, p.size, parseColor(p.color), p.anchor);
      break;
  }
}

export function renderRaster(scene: Scene): Raster {
  const r = new Raster(scene.width, scene.height);
  for (const p of scene.primitives) drawPrimitive(r, p);
  return r;
}

// --- PNG encoding ---------------------------------------------------------

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) {
    c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, body: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(body.length, 0);
  head.write(type, 4, "ascii");
  const crcInput = Buffer.concat([head.subarray(4), body]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(crcInput), 0);
  return Buffer.concat([head, body, tail]);
}

export function encodePng(r: Raster): Buffer {
  const sig = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(r.width, 0);
  ihdr.writeUInt32BE(r.height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  const raw = Buffer.alloc((r.width * 4 + 1) * r.height);
  for (let y = 0; y < r.height; y++) {
    const o = y * (r.width * 4 + 1);
    raw[o] = 0; // filter: none
    Buffer.from(
      r.data.subarray(y * r.width * 4, (y + 1) * r.width * 4),
    ).copy(raw, o + 1);
  }
  const idat = deflateSync(raw, { level: 9 });
  return Buffer.concat([
    sig,
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ]);
}
