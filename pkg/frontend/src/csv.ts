/**
 * Minimal CSV reader for shapeflow artifacts.
 *
 * The upstream writer emits a header row and comma-separated numeric fields
 * ('.' decimal, scientific notation, booleans as true/false) with no quoting
 * or embedded separators, so splitting on commas is exact.
 */

export interface Table {
  columns: string[];
  /** column name -> numeric values (booleans coerced to 0/1) */
  data: Map<string, number[]>;
  rows: number;
}

export class CsvError extends Error {}

function parseCell(cell: string): number {
  if (cell === "true") return 1;
  if (cell === "false") return 0;
  const value = Number(cell);
  if (cell.trim() === "" || Number.isNaN(value)) {
    throw new CsvError(`non-numeric cell ${JSON.stringify(cell)}`);
  }
  return value;
}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV: no header row");
  }
  const columns = lines[0].split(",");
  if (lines.length === 1) {
    throw new CsvError("empty CSV: header but no data rows");
  }
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new CsvError(
        `row ${i} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    cells.forEach((cell, j) => data.get(columns[j])!.push(parseCell(cell)));
  }
  return { columns, data, rows: lines.length - 1 };
}

export function requireColumns(table: Table, needed: string[], kind: string): void {
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new CsvError(
      `CSV does not match the ${kind} schema: missing column(s) ${missing.join(", ")}`,
    );
  }
}
