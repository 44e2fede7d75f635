/** Linear and log10 axis scales with decade ticks. */

export interface Scale {
  toPixel(value: number): number;
  ticks(): { value: number; label: string }[];
  domain: [number, number];
}

function formatDecade(exp: number): string {
  return `1e${exp}`;
}

function formatLinear(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) return v.toExponential(1).replace("+", "");
  return String(Number(v.toPrecision(4)));
}

export function makeScale(
  values: number[],
  pixelRange: [number, number],
  log: boolean,
): Scale {
  const finite = values.filter((v) => Number.isFinite(v) && (!log || v > 0));
  if (finite.length === 0) {
    throw new Error(log ? "log scale needs positive data" : "no finite data");
  }
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo = log ? lo / 2 : lo - 1;
    hi = log ? hi * 2 : hi + 1;
  }
  const [p0, p1] = pixelRange;
  if (log) {
    const llo = Math.log10(lo) - 0.05;
    const lhi = Math.log10(hi) + 0.05;
    return {
      domain: [lo, hi],
      toPixel: (v) => p0 + ((Math.log10(v) - llo) / (lhi - llo)) * (p1 - p0),
      ticks: () => {
        const out: { value: number; label: string }[] = [];
        for (let e = Math.ceil(llo); e <= Math.floor(lhi); e++) {
          out.push({ value: 10 ** e, label: formatDecade(e) });
        }
        if (out.length < 2) {
          // fewer than two decades: fall back to three linear-ish ticks
          for (const f of [lo, Math.sqrt(lo * hi), hi]) {
            out.push({ value: f, label: formatLinear(f) });
          }
        }
        return out;
      },
    };
  }
  const span = hi - lo;
  const pad = span * 0.05;
  const a = lo - pad;
  const b = hi + pad;
  return {
    domain: [lo, hi],
    toPixel: (v) => p0 + ((v - a) / (b - a)) * (p1 - p0),
    ticks: () => {
      const step = span / 4;
      const out: { value: number; label: string }[] = [];
      for (let i = 0; i <= 4; i++) {
        const v = lo + i * step;
        out.push({ value: v, label: formatLinear(v) });
      }
      return out;
    },
  };
}
