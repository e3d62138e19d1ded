#!/usr/bin/env node
/** `plots render <spec.json>`: turn a shapeflow CSV artifact into an SVG figure. */

import { readFileSync, writeFileSync } from "node:fs";

import { CsvError } from "./csv.js";
import { renderFigure } from "./figures.js";
import { SpecError, validateSpec } from "./spec.js";

export function main(argv: string[]): number {
  if (argv.length !== 2 || argv[0] !== "render") {
    process.stderr.write("usage: plots render <spec.json>\n");
    return 2;
  }
  let specRaw: unknown;
  try {
    specRaw = JSON.parse(readFileSync(argv[1], "utf-8"));
  } catch (err) {
    process.stderr.write(`cannot read spec: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    const spec = validateSpec(specRaw);
    const csvText = readFileSync(spec.input_csv, "utf-8");
    const figure = renderFigure(spec, csvText);
    writeFileSync(spec.output, figure);
    process.stdout.write(`${spec.output}\n`);
    return 0;
  } catch (err) {
    if (err instanceof SpecError || err instanceof CsvError) {
      process.stderr.write(`${err.message}\n`);
    } else {
      process.stderr.write(`render failed: ${(err as Error).message}\n`);
    }
    return 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
