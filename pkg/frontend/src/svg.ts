/**
 * Deterministic SVG primitives: fixed canvas, fixed styles, fixed number
 * formatting, no timestamps or randomness, so identical inputs yield
 * byte-identical files.
 */

export const WIDTH = 800;
export const HEIGHT = 500;
export const MARGIN = { top: 40, right: 30, bottom: 55, left: 75 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

export function fmt(value: number): string {
  if (!Number.isFinite(value)) return "0";
  const rounded = Number(value.toPrecision(6));
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

export interface Scale {
  (value: number): number;
  ticks: number[];
  label: (value: number) => string;
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const nice = step * factor;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / nice) * nice; v <= hi + 1e-12 * span; v += nice) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (!(hi > lo)) {
    hi = lo + 1;
    lo = lo - 1;
  }
  const scale = ((value: number) =>
    outLo + ((value - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  scale.ticks = niceTicks(lo, hi);
  scale.label = (v) => fmt(v);
  return scale;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (!(lo > 0)) {
    throw new Error("log scale needs positive data");
  }
  if (!(hi > lo)) hi = lo * 10;
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const scale = ((value: number) =>
    outLo + ((Math.log10(value) - llo) / (lhi - llo)) * (outHi - outLo)) as Scale;
  const decades: number[] = [];
  for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) {
    decades.push(Math.pow(10, e));
  }
  let ticks = decades;
  if (decades.length < 3) {
    // sparse range: add the standard 2x and 5x subdivisions
    ticks = [];
    for (let e = Math.floor(llo) - 1; e <= Math.ceil(lhi) + 1; e++) {
      for (const m of [1, 2, 5]) {
        const v = m * Math.pow(10, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) ticks.push(v);
      }
    }
  }
  scale.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  scale.label = (v) => {
    const e = Math.log10(v);
    return Number.isInteger(e) ? `1e${e}` : fmt(v);
  };
  return scale;
}

export function polyline(xs: number[], ys: number[], color: string, width = 1.5): string {
  const points = xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
  return `<polyline fill="none" stroke="${color}" stroke-width="${width}" points="${points}"/>`;
}

export function circleDot(x: number, y: number, color: string, r = 3): string {
  return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`;
}

export function text(x: number, y: number, content: string, opts = ""): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-family="Helvetica,Arial,sans-serif" ${opts}>${escapeXml(content)}</text>`;
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function axes(x: Scale, y: Scale, xLabel: string, yLabel: string): string {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const parts: string[] = [];
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#222" stroke-width="1"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#222" stroke-width="1"/>`);
  for (const t of x.ticks) {
    const px = x(t);
    if (px < x0 - 0.5 || px > x1 + 0.5) continue;
    parts.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 5}" stroke="#222" stroke-width="1"/>`);
    parts.push(text(px, y0 + 20, x.label(t), 'font-size="12" text-anchor="middle"'));
  }
  for (const t of y.ticks) {
    const py = y(t);
    if (py > y0 + 0.5 || py < y1 - 0.5) continue;
    parts.push(`<line x1="${x0 - 5}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="#222" stroke-width="1"/>`);
    parts.push(text(x0 - 9, py + 4, y.label(t), 'font-size="12" text-anchor="end"'));
  }
  parts.push(text((x0 + x1) / 2, HEIGHT - 12, xLabel, 'font-size="14" text-anchor="middle"'));
  parts.push(
    `<text x="18" y="${fmt((y0 + y1) / 2)}" font-family="Helvetica,Arial,sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 18 ${fmt((y0 + y1) / 2)})">${escapeXml(yLabel)}</text>`,
  );
  return parts.join("\n");
}

export function document(title: string, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
    text(WIDTH / 2, 24, title, 'font-size="16" text-anchor="middle" font-weight="bold"'),
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
