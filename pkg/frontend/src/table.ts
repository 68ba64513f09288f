/**
 * Typed views over the two djcqsl file schemas: long-format sweep tables
 * (gamma0_over_lambda, delta_over_lambda, lambda_t, quantity, value, status)
 * and wide series tables (lambda_t plus one column per quantity).
 */

import {
  CsvFormatError,
  CsvTable,
  numericColumn,
  stringColumn,
} from "./csv.js";

export interface SweepGrid {
  quantity: string;
  lambdaT: number;
  /** ascending axis values */
  gammas: number[];
  deltas: number[];
  /** values[iDelta][iGamma]; failed points are NaN */
  values: number[][];
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

/** Pivot the long-format sweep rows for one quantity into a dense grid. */
export function sweepGrid(table: CsvTable, quantity?: string): SweepGrid {
  const gammaCol = numericColumn(table, "gamma0_over_lambda");
  const deltaCol = numericColumn(table, "delta_over_lambda");
  const lambdaCol = numericColumn(table, "lambda_t");
  const quantityCol = stringColumn(table, "quantity");
  const valueCol = numericColumn(table, "value");
  const statusCol = stringColumn(table, "status");

  const present = [...new Set(quantityCol)];
  const wanted = quantity ?? present[0];
  const keep = quantityCol.map((q) => q === wanted);
  if (!keep.some(Boolean)) {
    throw new CsvFormatError(
      `quantity '${wanted}' not in table (present: ${present.join(", ")})`,
    );
  }

  const gammas = uniqueSorted(gammaCol.filter((_, i) => keep[i]));
  const deltas = uniqueSorted(deltaCol.filter((_, i) => keep[i]));
  const gIndex = new Map(gammas.map((g, i) => [g, i]));
  const dIndex = new Map(deltas.map((d, i) => [d, i]));
  const values: number[][] = deltas.map(() => gammas.map(() => NaN));
  let lambdaT = NaN;
  for (let i = 0; i < keep.length; i++) {
    if (!keep[i]) {
      continue;
    }
    const row = dIndex.get(deltaCol[i])!;
    const col = gIndex.get(gammaCol[i])!;
    values[row][col] = statusCol[i] === "ok" ? valueCol[i] : NaN;
    lambdaT = lambdaCol[i];
  }
  return { quantity: wanted, lambdaT, gammas, deltas, values };
}

export interface Series {
  x: number[];
  curves: { name: string; y: number[] }[];
}

/** Wide series file: one x column plus the requested y columns. */
export function seriesTable(
  table: CsvTable,
  xColumn: string,
  yColumns: string[],
): Series {
  const x = numericColumn(table, xColumn);
  const curves = yColumns.map((name) => ({ name, y: numericColumn(table, name) }));
  return { x, curves };
}

export function finiteExtent(values: Iterable<number>): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (lo > hi) {
    throw new CsvFormatError("no finite values to plot");
  }
  return [lo, hi];
}
