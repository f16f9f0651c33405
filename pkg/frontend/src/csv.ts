/** Strict reading of the simulator's CSV artifact tables. */

import { readFileSync } from "node:fs";
import { parse } from "csv-parse/sync";

/** Bad input data or a schema violation; reported with file and column. */
export class DataError extends Error {}

export interface Table {
  file: string;
  columns: string[];
  rows: number[][];
  /** verbatim cell text, for columns that carry labels instead of numbers */
  raw: string[][];
}

function toNumber(raw: string, file: string, column: string, line: number): number {
  // the producer spells IEEE specials as bare words
  if (raw === "inf") return Infinity;
  if (raw === "-inf") return -Infinity;
  if (raw === "nan") return NaN;
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) {
    throw new DataError(
      `${file}: line ${line}: column "${column}": not a number: "${raw}"`,
    );
  }
  return value;
}

/**
 * Read a CSV file and check its header against the documented schema.
 *
 * The header must match `schema` exactly, in order; a file with a header
 * but no data rows is rejected. Cells parse as numbers except in the
 * columns named by `stringColumns`, which stay text (their numeric slot
 * is NaN).
 */
export function readTable(
  file: string,
  schema: string[],
  stringColumns: string[] = [],
): Table {
  let text: string;
  try {
    text = readFileSync(file, "utf-8");
  } catch {
    throw new DataError(`${file}: cannot read file`);
  }
  const records: string[][] = parse(text, { skip_empty_lines: true });
  if (records.length === 0) {
    throw new DataError(`${file}: empty file`);
  }
  const header = records[0];
  for (let i = 0; i < schema.length; i++) {
    if (i >= header.length) {
      throw new DataError(`${file}: missing column "${schema[i]}"`);
    }
    if (header[i] !== schema[i]) {
      throw new DataError(
        `${file}: expected column "${schema[i]}" at position ${i + 1}, ` +
          `found "${header[i]}"`,
      );
    }
  }
  if (header.length > schema.length) {
    throw new DataError(
      `${file}: unexpected column "${header[schema.length]}"`,
    );
  }
  const textual = new Set(stringColumns.map((name) => schema.indexOf(name)));
  const raw = records.slice(1);
  const rows = raw.map((record, r) => {
    if (record.length !== schema.length) {
      throw new DataError(
        `${file}: line ${r + 2}: expected ${schema.length} fields, ` +
          `found ${record.length}`,
      );
    }
    return record.map((cell, c) =>
      textual.has(c) ? NaN : toNumber(cell, file, schema[c], r + 2));
  });
  if (rows.length === 0) {
    throw new DataError(`${file}: no data rows`);
  }
  return { file, columns: schema.slice(), rows, raw };
}

export function column(table: Table, name: string): number[] {
  const i = table.columns.indexOf(name);
  if (i < 0) {
    throw new DataError(`${table.file}: missing column "${name}"`);
  }
  return table.rows.map((row) => row[i]);
}

export function stringColumn(table: Table, name: string): string[] {
  const i = table.columns.indexOf(name);
  if (i < 0) {
    throw new DataError(`${table.file}: missing column "${name}"`);
  }
  return table.raw.map((row) => row[i]);
}
