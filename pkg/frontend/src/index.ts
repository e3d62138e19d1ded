export { parseCsv, requireColumns, CsvError } from "./csv.js";
export { validateSpec, SpecError, FIGURE_KINDS } from "./spec.js";
export type { FigureSpec, FigureKind } from "./spec.js";
export { renderFigure } from "./figures.js";
