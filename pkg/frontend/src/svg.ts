/** Scene -> SVG string. */

import { Scene } from "./scene.js";

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const ANCHOR = { start: "start", middle: "middle", end: "end" } as const;

export function renderSvg(scene: Scene): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" ` +
      `height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">`,
  );
  for (const p of scene.primitives) {
    switch (p.kind) {
      case "rect":
        parts.push(
          `<rect x="${p.x}" y="${p.y}" width="${p.w}" height="${p.h}" fill="${p.fill}"/>`,
        );
        break;
      case "line": {
        const dash = p.dashed ? ' stroke-dasharray="6 4"' : "";
        parts.push(
          `<line x1="${fmt(p.x1)}" y1="${fmt(p.y1)}" x2="${fmt(p.x2)}" ` +
            `y2="${fmt(p.y2)}" stroke="${p.color}" stroke-width="${p.width}"${dash}/>`,
        );
        break;
      }
      case "marker": {
        const s = p.size;
        const x = fmt(p.x);
        const y = fmt(p.y);
        if (p.shape === "plus") {
          parts.push(
            `<path d="M ${fmt(p.x - s)} ${y} H ${fmt(p.x + s)} M ${x} ` +
              `${fmt(p.y - s)} V ${fmt(p.y + s)}" stroke="${p.color}" ` +
              `stroke-width="1.5" fill="none" data-series="${esc(p.series)}"/>`,
          );
        } else if (p.shape === "cross") {
          const h = s * 0.7071;
          parts.push(
            `<path d="M ${fmt(p.x - h)} ${fmt(p.y - h)} L ${fmt(p.x + h)} ` +
              `${fmt(p.y + h)} M ${fmt(p.x - h)} ${fmt(p.y + h)} L ` +
              `${fmt(p.x + h)} ${fmt(p.y - h)}" stroke="${p.color}" ` +
              `stroke-width="1.5" fill="none" data-series="${esc(p.series)}"/>`,
          );
        } else {
          parts.push(
            `<circle cx="${x}" cy="${y}" r="${s * 0.8}" stroke="${p.color}" ` +
              `fill="none" stroke-width="1.5" data-series="${esc(p.series)}"/>`,
          );
        }
        break;
      }
      case "text":
        if (p.text.length === 0) break;
        parts.push(
          `<text x="${fmt(p.x)}" y="${fmt(p.y)}" font-size="${p.size}" ` +
            `font-family="Helvetica, Arial, sans-serif" fill="${p.color}" ` +
            `text-anchor="${ANCHOR[p.anchor]}">${esc(p.text)}</text>`,
        );
        break;
    }
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}
