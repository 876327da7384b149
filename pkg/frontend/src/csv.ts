/** Reader for the simulation harness CSV logs (fixed 19-column schema). */

import { readFileSync } from "fs";

export const CSV_COLUMNS = [
  "t",
  "phi", "theta", "psi",
  "phi_hat", "theta_hat", "psi_hat",
  "phi_d", "theta_d", "psi_d",
  "Ro_dist", "Rc_dist", "omega_err", "dist_err",
  "wb_norm", "wsigma_fro",
  "tau_x", "tau_y", "tau_z",
] as const;

export type ColumnName = (typeof CSV_COLUMNS)[number];

export interface RunTable {
  /** Source path, used for labeling. */
  path: string;
  columns: Map<ColumnName, number[]>;
  rows: number;
}

export function parseRunCsv(path: string): RunTable {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0].split(",");
  if (header.length !== CSV_COLUMNS.length || header.some((h, i) => h !== CSV_COLUMNS[i])) {
    throw new Error(`${path}: unexpected CSV header`);
  }
  if (lines.length === 1) {
    throw new Error(`${path}: empty record`);
  }
  const columns = new Map<ColumnName, number[]>(CSV_COLUMNS.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const toks = lines[i].split(",");
    if (toks.length !== CSV_COLUMNS.length) {
      throw new Error(`${path}: row ${i} has ${toks.length} fields`);
    }
    for (let j = 0; j < toks.length; j++) {
      const v = Number(toks[j]);
      if (Number.isNaN(v)) {
        throw new Error(`${path}: row ${i} field ${CSV_COLUMNS[j]} is not a number`);
      }
      columns.get(CSV_COLUMNS[j])!.push(v);
    }
  }
  return { path, columns, rows: lines.length - 1 };
}

export function column(table: RunTable, name: ColumnName): number[] {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new Error(`${table.path}: missing column ${name}`);
  }
  return col;
}

/** Label a run by its neuron count when the filename carries one. */
export function runLabel(path: string): string {
  const base = path.split("/").pop() ?? path;
  const m = base.match(/_q(\d+)/);
  return m ? `q=${m[1]}` : base.replace(/\.csv$/, "");
}
