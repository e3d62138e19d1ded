/** Figure specification: which CSV, which figure kind, where to write. */

export const FIGURE_KINDS = [
  "trajectories",
  "decay",
  "energy_sweep",
  "invariants",
  "curvature_terms",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  input_csv: string;
  figure_kind: FigureKind;
  output: string;
  /** optional style overrides */
  title?: string;
}

export class SpecError extends Error {}

export function validateSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new SpecError("figure spec must be a JSON object");
  }
  const spec = raw as Record<string, unknown>;
  for (const key of ["input_csv", "figure_kind", "output"]) {
    if (typeof spec[key] !== "string" || (spec[key] as string).length === 0) {
      throw new SpecError(`figure spec needs a string field ${JSON.stringify(key)}`);
    }
  }
  const kind = spec.figure_kind as string;
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    throw new SpecError(
      `unknown figure_kind ${JSON.stringify(kind)}; expected one of ${FIGURE_KINDS.join(", ")}`,
    );
  }
  const output = spec.output as string;
  if (!output.endsWith(".svg")) {
    throw new SpecError("output must be an .svg path (raster output is not supported)");
  }
  if (spec.title !== undefined && typeof spec.title !== "string") {
    throw new SpecError("title must be a string when given");
  }
  return {
    input_csv: spec.input_csv as string,
    figure_kind: kind as FigureKind,
    output,
    title: spec.title as string | undefined,
  };
}
