import { readFileSync } from "fs";
import { parse } from "papaparse";

export const EXPECTED_COLUMNS = [
  "alpha",
  "s",
  "omega",
  "F0",
  "F1",
  "grad_f",
  "delta_f",
  "clamped",
  "nash",
  "regime",
  "attack_soph",
  "attack_retail",
] as const;

export type Nash = "PoolN" | "PoolW" | "All";

export interface SweepRow {
  alpha: number;
  s: number;
  omega: number;
  f0: number;
  f1: number;
  gradF: number;
  deltaF: number; // may be +-Infinity, flagged by clamped
  clamped: boolean;
  nash: Nash;
  regime: string;
  attackSoph: boolean;
  attackRetail: boolean;
}

/** A rectangular sweep: rows indexed by [sIndex][alphaIndex]. */
export interface SweepGrid {
  alphas: number[]; // ascending
  slippages: number[]; // ascending
  rows: SweepRow[][];
}

export class SchemaError extends Error {}

function parseNumber(raw: string, column: string, line: number): number {
  if (raw === "inf") return Infinity;
  if (raw === "-inf") return -Infinity;
  const value = Number(raw);
  if (raw === "" || Number.isNaN(value)) {
    throw new SchemaError(`line ${line}: column "${column}" is not a number: "${raw}"`);
  }
  return value;
}

function parseBool(raw: string, column: string, line: number): boolean {
  if (raw === "true") return true;
  if (raw === "false") return false;
  throw new SchemaError(`line ${line}: column "${column}" is not true/false: "${raw}"`);
}

function parseNash(raw: string, line: number): Nash {
  if (raw === "PoolN" || raw === "PoolW" || raw === "All") return raw;
  throw new SchemaError(`line ${line}: column "nash" has unknown label: "${raw}"`);
}

export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse error: ${parsed.errors[0].message}`);
  }
  const [header, ...records] = parsed.data;
  if (!header) {
    throw new SchemaError("empty CSV: no header row");
  }
  const missing = EXPECTED_COLUMNS.filter((c) => !header.includes(c));
  const extra = header.filter((c) => !(EXPECTED_COLUMNS as readonly string[]).includes(c));
  if (missing.length > 0 || extra.length > 0) {
    const parts = [];
    if (missing.length > 0) parts.push(`missing columns: ${missing.join(", ")}`);
    if (extra.length > 0) parts.push(`unexpected columns: ${extra.join(", ")}`);
    throw new SchemaError(parts.join("; "));
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const at = (record: string[], column: string) => record[index.get(column)!];

  return records.map((record, i) => {
    const line = i + 2; // header is line 1
    if (record.length !== header.length) {
      throw new SchemaError(`line ${line}: expected ${header.length} fields, got ${record.length}`);
    }
    return {
      alpha: parseNumber(at(record, "alpha"), "alpha", line),
      s: parseNumber(at(record, "s"), "s", line),
      omega: parseNumber(at(record, "omega"), "omega", line),
      f0: parseNumber(at(record, "F0"), "F0", line),
      f1: parseNumber(at(record, "F1"), "F1", line),
      gradF: parseNumber(at(record, "grad_f"), "grad_f", line),
      deltaF: parseNumber(at(record, "delta_f"), "delta_f", line),
      clamped: parseBool(at(record, "clamped"), "clamped", line),
      nash: parseNash(at(record, "nash"), line),
      regime: at(record, "regime"),
      attackSoph: parseBool(at(record, "attack_soph"), "attack_soph", line),
      attackRetail: parseBool(at(record, "attack_retail"), "attack_retail", line),
    };
  });
}

/** Arrange rows into a dense grid; rejects ragged or multi-omega sweeps. */
export function toGrid(rows: SweepRow[]): SweepGrid {
  if (rows.length === 0) {
    throw new SchemaError("CSV has a header but no records");
  }
  const omegas = new Set(rows.map((r) => r.omega));
  if (omegas.size > 1) {
    throw new SchemaError(
      `CSV contains ${omegas.size} omega values; render one omega at a time ` +
        `(found: ${[...omegas].join(", ")})`
    );
  }
  const alphas = [...new Set(rows.map((r) => r.alpha))].sort((a, b) => a - b);
  const slippages = [...new Set(rows.map((r) => r.s))].sort((a, b) => a - b);
  if (alphas.length * slippages.length !== rows.length) {
    throw new SchemaError(
      `records do not form a dense grid: ${alphas.length} alphas x ` +
        `${slippages.length} slippages != ${rows.length} rows`
    );
  }
  const alphaIndex = new Map(alphas.map((a, i) => [a, i]));
  const sIndex = new Map(slippages.map((s, i) => [s, i]));
  const grid: (SweepRow | undefined)[][] = slippages.map(() =>
    new Array(alphas.length).fill(undefined)
  );
  for (const row of rows) {
    const si = sIndex.get(row.s)!;
    const ai = alphaIndex.get(row.alpha)!;
    if (grid[si][ai] !== undefined) {
      throw new SchemaError(`duplicate grid point alpha=${row.alpha}, s=${row.s}`);
    }
    grid[si][ai] = row;
  }
  return { alphas, slippages, rows: grid as SweepRow[][] };
}

export function loadGrid(path: string): SweepGrid {
  return toGrid(parseSweepCsv(readFileSync(path, "utf8")));
}
