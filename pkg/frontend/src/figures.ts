/**
 * The five figure renderers.  Each consumes one documented shapeflow CSV
 * schema and returns a complete SVG document as a string.
 */

import { parseCsv, requireColumns, Table } from "./csv.js";
import { FigureKind, FigureSpec } from "./spec.js";
import * as svg from "./svg.js";

const X0 = svg.MARGIN.left;
const X1 = svg.WIDTH - svg.MARGIN.right;
const Y0 = svg.HEIGHT - svg.MARGIN.bottom;
const Y1 = svg.MARGIN.top;

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

function legend(entries: Array<[string, string]>): string {
  const parts: string[] = [];
  entries.forEach(([label, color], i) => {
    const y = Y1 + 16 + 18 * i;
    parts.push(`<line x1="${X1 - 150}" y1="${y - 4}" x2="${X1 - 122}" y2="${y - 4}" stroke="${color}" stroke-width="2"/>`);
    parts.push(svg.text(X1 - 116, y, label, 'font-size="12"'));
  });
  return parts.join("\n");
}

/** Particle trajectories of a compression wave: one polyline per particle. */
export function renderTrajectories(table: Table, title: string): string {
  requireColumns(table, ["particle", "x0", "t", "position"], "trajectories");
  const particle = table.data.get("particle")!;
  const t = table.data.get("t")!;
  const position = table.data.get("position")!;
  const [tLo, tHi] = extent(t);
  const [pLo, pHi] = extent(position);
  const x = svg.linearScale(tLo, tHi, X0, X1);
  const y = svg.linearScale(pLo, pHi, Y0, Y1);

  const ids = [...new Set(particle)].sort((a, b) => a - b);
  const lines: string[] = [];
  ids.forEach((id, i) => {
    const xs: number[] = [];
    const ys: number[] = [];
    for (let r = 0; r < table.rows; r++) {
      if (particle[r] === id) {
        xs.push(x(t[r]));
        ys.push(y(position[r]));
      }
    }
    lines.push(svg.polyline(xs, ys, svg.PALETTE[i % svg.PALETTE.length], 1.0));
  });
  const body = [svg.axes(x, y, "t", "particle position"), ...lines].join("\n");
  return svg.document(title, body);
}

/** Horizontal length against the zig-zag count, log-scaled y. */
export function renderDecay(table: Table, title: string): string {
  requireColumns(table, ["n", "L_hor"], "decay");
  const n = table.data.get("n")!;
  const L = table.data.get("L_hor")!;
  if (L.some((v) => !(v > 0))) {
    throw new Error("decay plot needs positive lengths for the log scale");
  }
  const [nLo, nHi] = extent(n);
  const [lLo, lHi] = extent(L);
  const x = svg.linearScale(nLo, nHi, X0, X1);
  const y = svg.logScale(lLo / 1.2, lHi * 1.2, Y0, Y1);
  const order = [...n.keys()].sort((a, b) => n[a] - n[b]);
  const xs = order.map((i) => x(n[i]));
  const ys = order.map((i) => y(L[i]));
  const body = [
    svg.axes(x, y, "zig-zag count n", "horizontal length"),
    svg.polyline(xs, ys, svg.PALETTE[0]),
    ...xs.map((px, i) => svg.circleDot(px, ys[i], svg.PALETTE[0])),
  ].join("\n");
  return svg.document(title, body);
}

/** Wave energies against epsilon, log-log. */
export function renderEnergySweep(table: Table, title: string): string {
  requireColumns(table, ["epsilon", "basic_energy", "path_energy"], "energy_sweep");
  const eps = table.data.get("epsilon")!;
  const series: Array<[string, number[]]> = [
    ["basic wave", table.data.get("basic_energy")!],
    ["start-stop wave", table.data.get("path_energy")!],
  ];
  const [eLo, eHi] = extent(eps);
  const all = series.flatMap(([, vals]) => vals);
  const [vLo, vHi] = extent(all);
  if (!(vLo > 0) || !(eLo > 0)) {
    throw new Error("energy sweep needs positive energies and epsilons");
  }
  const x = svg.logScale(eLo / 1.2, eHi * 1.2, X0, X1);
  const y = svg.logScale(vLo / 1.2, vHi * 1.2, Y0, Y1);
  const order = [...eps.keys()].sort((a, b) => eps[a] - eps[b]);
  const parts = [svg.axes(x, y, "epsilon", "kinetic energy")];
  series.forEach(([label, vals], s) => {
    const xs = order.map((i) => x(eps[i]));
    const ys = order.map((i) => y(vals[i]));
    parts.push(svg.polyline(xs, ys, svg.PALETTE[s]));
    xs.forEach((px, i) => parts.push(svg.circleDot(px, ys[i], svg.PALETTE[s])));
  });
  parts.push(legend(series.map(([label], s) => [label, svg.PALETTE[s]])));
  return svg.document(title, parts.join("\n"));
}

/** Relative drift of the conserved integrals along a geodesic flow. */
export function renderInvariants(table: Table, title: string): string {
  requireColumns(table, ["t", "mass_drift", "energy_drift"], "invariants");
  const t = table.data.get("t")!;
  const series: Array<[string, number[]]> = [
    ["mass drift", table.data.get("mass_drift")!],
    ["energy drift", table.data.get("energy_drift")!],
  ];
  const [tLo, tHi] = extent(t);
  const [vLo, vHi] = extent(series.flatMap(([, v]) => v));
  const x = svg.linearScale(tLo, tHi, X0, X1);
  const y = svg.linearScale(Math.min(vLo, 0), Math.max(vHi, 1e-300), Y0, Y1);
  const parts = [svg.axes(x, y, "t", "relative drift")];
  series.forEach(([label, vals], s) => {
    parts.push(svg.polyline(t.map((v) => x(v)), vals.map((v) => y(v)), svg.PALETTE[s]));
  });
  parts.push(legend(series.map(([label], s) => [label, svg.PALETTE[s]])));
  return svg.document(title, parts.join("\n"));
}

/** Mean magnitude of each curvature term over the sampled ensemble. */
export function renderCurvatureTerms(table: Table, title: string): string {
  const names = ["term1", "term2", "term3", "term4", "term5", "term6", "term7"];
  requireColumns(table, names, "curvature_terms");
  const means = names.map((c) => {
    const vals = table.data.get(c)!;
    return vals.reduce((a, b) => a + b, 0) / vals.length;
  });
  const [lo, hi] = extent([...means, 0]);
  const x = svg.linearScale(0, names.length, X0, X1);
  const y = svg.linearScale(lo * 1.15 - 1e-12, hi * 1.15 + 1e-12, Y0, Y1);
  const parts = [svg.axes(x, y, "curvature term", "ensemble mean")];
  const zero = y(0);
  means.forEach((m, i) => {
    const left = x(i + 0.2);
    const width = x(i + 0.8) - left;
    const top = Math.min(y(m), zero);
    const height = Math.abs(y(m) - zero);
    const color = m <= 0 ? svg.PALETTE[0] : svg.PALETTE[1];
    parts.push(
      `<rect x="${svg.fmt(left)}" y="${svg.fmt(top)}" width="${svg.fmt(width)}" height="${svg.fmt(Math.max(height, 0.5))}" fill="${color}"/>`,
    );
    parts.push(svg.text(x(i + 0.5), Y0 + 34, String(i + 1), 'font-size="12" text-anchor="middle"'));
  });
  return svg.document(title, parts.join("\n"));
}

const RENDERERS: Record<FigureKind, (table: Table, title: string) => string> = {
  trajectories: renderTrajectories,
  decay: renderDecay,
  energy_sweep: renderEnergySweep,
  invariants: renderInvariants,
  curvature_terms: renderCurvatureTerms,
};

const DEFAULT_TITLES: Record<FigureKind, string> = {
  trajectories: "Compression-wave particle trajectories",
  decay: "Horizontal length of the zig-zag path",
  energy_sweep: "Wave energy against epsilon",
  invariants: "Conserved-integral drift",
  curvature_terms: "Curvature term decomposition",
};

export function renderFigure(spec: FigureSpec, csvText: string): string {
  const table = parseCsv(csvText);
  const title = spec.title ?? DEFAULT_TITLES[spec.figure_kind];
  return RENDERERS[spec.figure_kind](table, title);
}
