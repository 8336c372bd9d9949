/**
 * CSV loading with explicit schema validation.
 *
 * The renderer consumes only the simulation runner's documented summary
 * tables; any column mismatch fails loudly with the missing names rather
 * than producing an empty plot.
 */

import { readFileSync } from "fs";
import Papa from "papaparse";

export class SchemaError extends Error {
  constructor(path: string, missing: string[], present: string[]) {
    super(
      `schema mismatch in ${path}: missing column(s) [${missing.join(", ")}]; ` +
        `found [${present.join(", ")}]`,
    );
    this.name = "SchemaError";
  }
}

export type CsvRow = Record<string, string>;

/** Parse a CSV file and require the given columns to be present. */
export function loadCsv(path: string, required: string[]): CsvRow[] {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<CsvRow>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`cannot parse ${path}: ${first.message} (row ${first.row})`);
  }
  const present = parsed.meta.fields ?? [];
  const missing = required.filter((c) => !present.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(path, missing, present);
  }
  return parsed.data;
}

/** Strict numeric field accessor; CSV floats round-trip through Number. */
export function num(row: CsvRow, column: string): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new Error(`non-numeric value '${row[column]}' in column ${column}`);
  }
  return value;
}
