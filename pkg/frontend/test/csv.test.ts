import { describe, expect, it } from "vitest";

import { CsvError, parseCsv, requireColumns } from "../src/csv.js";

describe("parseCsv", () => {
  it("reads numeric tables round-trip exactly", () => {
    const table = parseCsv("a,b\n1,2.5000000000000001e-01\n-3,true\n");
    expect(table.columns).toEqual(["a", "b"]);
    expect(table.rows).toBe(2);
    expect(table.data.get("a")).toEqual([1, -3]);
    expect(table.data.get("b")![0]).toBeCloseTo(0.25, 15);
    expect(table.data.get("b")![1]).toBe(1);
  });

  it("rejects empty files and header-only files", () => {
    expect(() => parseCsv("")).toThrow(CsvError);
    expect(() => parseCsv("a,b\n")).toThrow(/no data rows/);
  });

  it("rejects ragged rows and non-numeric cells", () => {
    expect(() => parseCsv("a,b\n1\n")).toThrow(/expected 2/);
    expect(() => parseCsv("a\nhello\n")).toThrow(/non-numeric/);
  });

  it("checks schemas by column name", () => {
    const table = parseCsv("n,L_hor\n1,0.5\n");
    expect(() => requireColumns(table, ["n", "K"], "decay")).toThrow(/missing column/);
    expect(() => requireColumns(table, ["n", "L_hor"], "decay")).not.toThrow();
  });
});
