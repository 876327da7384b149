import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { CSV_COLUMNS, column, parseRunCsv, runLabel } from "../src/csv.js";

export const HEADER = CSV_COLUMNS.join(",");

export function sampleCsv(rows: number, scale = 1.0): string {
  const lines = [HEADER];
  for (let k = 0; k < rows; k++) {
    const t = k * 0.01;
    const vals = CSV_COLUMNS.map((name, j) =>
      name === "t" ? t : scale * Math.exp(-t) * (j + 1) * 0.01,
    );
    lines.push(vals.join(","));
  }
  return lines.join("\n") + "\n";
}

export function writeTmpCsv(name: string, content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "attnnsf-plot-"));
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

describe("parseRunCsv", () => {
  it("parses a well-formed table", () => {
    const path = writeTmpCsv("run_q3_seed1.csv", sampleCsv(5));
    const table = parseRunCsv(path);
    expect(table.rows).toBe(5);
    expect(column(table, "t")).toHaveLength(5);
    expect(column(table, "Ro_dist")[0]).toBeGreaterThan(0);
  });

  it("rejects a header-only file as an empty record", () => {
    const path = writeTmpCsv("empty.csv", HEADER + "\n");
    expect(() => parseRunCsv(path)).toThrow(/empty record/);
  });

  it("rejects a wrong header", () => {
    const path = writeTmpCsv("bad.csv", "a,b,c\n1,2,3\n");
    expect(() => parseRunCsv(path)).toThrow(/unexpected CSV header/);
  });

  it("rejects short rows and non-numeric fields", () => {
    const bad = HEADER + "\n" + "1,2,3\n";
    expect(() => parseRunCsv(writeTmpCsv("short.csv", bad))).toThrow(/fields/);
    const row = Array(CSV_COLUMNS.length).fill("0");
    row[3] = "oops";
    const nan = HEADER + "\n" + row.join(",") + "\n";
    expect(() => parseRunCsv(writeTmpCsv("nan.csv", nan))).toThrow(/not a number/);
  });
});

describe("runLabel", () => {
  it("extracts neuron counts from harness filenames", () => {
    expect(runLabel("out/run_q50_seed1.csv")).toBe("q=50");
    expect(runLabel("anything/else.csv")).toBe("else");
  });
});
