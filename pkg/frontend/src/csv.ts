/**
 * CSV reading for the drivewave output schemas.  Errors name the missing
 * column or the offending file so pipeline failures are actionable.
 */

import { readFileSync } from "node:fs";

export interface Table {
  header: string[];
  rows: string[][];
}

export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf-8");
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty CSV`);
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}

export function requireColumns(table: Table, names: string[], path: string): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of names) {
    const i = table.header.indexOf(name);
    if (i < 0) {
      throw new Error(`${path}: missing column '${name}' (found: ${table.header.join(",")})`);
    }
    index.set(name, i);
  }
  if (table.rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return index;
}

export function numeric(row: string[], col: number): number {
  const v = Number(row[col]);
  return v;
}

/** Distinct sorted values of one numeric column. */
export function axisValues(table: Table, col: number): number[] {
  const values = new Set<number>();
  for (const row of table.rows) {
    values.add(numeric(row, col));
  }
  return [...values].sort((a, b) => a - b);
}
