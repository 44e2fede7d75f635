/** Backend-independent description of a rendered chart. */

export type Marker = "plus" | "cross" | "circle";

export type Primitive =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
  | {
      kind: "line";
      x1: number;
      y1: number;
      x2: number;
      y2: number;
      color: string;
      width: number;
      dashed?: boolean;
    }
  | {
      kind: "marker";
      x: number;
      y: number;
      shape: Marker;
      size: number;
      color: string;
      series: string;
    }
  | {
      kind: "text";
      x: number;
      y: number;
      text: string;
      size: number;
      color: string;
      anchor: "start" | "middle" | "end";
    };

export interface Scene {
  width: number;
  height: number;
  primitives: Primitive[];
}

export function markersOf(scene: Scene, series: string) {
  return scene.primitives.filter(
    (p): p is Extract<Primitive, { kind: "marker" }> =>
      p.kind === "marker" && p.series === series,
  );
}

export function textsOf(scene: Scene): string[] {
  return scene.primitives
    .filter((p): p is Extract<Primitive, { kind: "text" }> => p.kind === "text")
    .map((p) => p.text);
}
