/** The four figure kinds built from harness run tables. */

import { RunTable, column, runLabel } from "./csv.js";
import { PALETTE, PanelSpec, renderFigure } from "./svg.js";

export const FIGURE_KINDS = [
  "euler_tracking",
  "error_convergence",
  "weight_norms",
  "neuron_comparison",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

function anglePanel(table: RunTable, name: string, cols: [string, string, string]): PanelSpec {
  const t = column(table, "t");
  const [d, truth, hat] = cols;
  return {
    title: `${name}`,
    xLabel: "t (s)",
    yLabel: `${name} (rad)`,
    series: [
      { label: "desired", x: t, y: column(table, d as never), color: PALETTE[0] },
      { label: "true", x: t, y: column(table, truth as never), color: PALETTE[1], dash: "6 3" },
      { label: "estimated", x: t, y: column(table, hat as never), color: PALETTE[2], dash: "2 3" },
    ],
  };
}

export function eulerTracking(tables: RunTable[]): string {
  const table = tables[0];
  const panels: PanelSpec[] = [
    anglePanel(table, "roll", ["phi_d", "phi", "phi_hat"]),
    anglePanel(table, "pitch", ["theta_d", "theta", "theta_hat"]),
    anglePanel(table, "yaw", ["psi_d", "psi", "psi_hat"]),
  ];
  return renderFigure(panels, `Euler-angle tracking (${runLabel(table.path)})`);
}

export function errorConvergence(tables: RunTable[]): string {
  const table = tables[0];
  const t = column(table, "t");
  const mk = (title: string, yLabel: string, col: string, logY: boolean): PanelSpec => ({
    title,
    xLabel: "t (s)",
    yLabel,
    logY,
    series: [{ label: col, x: t, y: column(table, col as never), color: PALETTE[2] }],
  });
  const panels = [
    mk("attitude estimation error", "distance", "Ro_dist", true),
    mk("attitude tracking error", "distance", "Rc_dist", true),
    mk("angular velocity error", "rad/s", "omega_err", false),
    mk("disturbance estimation error", "N m", "dist_err", false),
  ];
  return renderFigure(panels, `Error convergence (${runLabel(table.path)})`);
}

export function weightNorms(tables: RunTable[]): string {
  const table = tables[0];
  const t = column(table, "t");
  const panels: PanelSpec[] = [
    {
      title: "gyro-bias estimate norm",
      xLabel: "t (s)",
      yLabel: "norm",
      series: [{ label: "wb_norm", x: t, y: column(table, "wb_norm"), color: PALETTE[1] }],
    },
    {
      title: "noise-weight estimate norm",
      xLabel: "t (s)",
      yLabel: "Frobenius norm",
      series: [{ label: "wsigma_fro", x: t, y: column(table, "wsigma_fro"), color: PALETTE[2] }],
    },
  ];
  return renderFigure(panels, `Adaptive weight boundedness (${runLabel(table.path)})`);
}

export function neuronComparison(tables: RunTable[]): string {
  const panel: PanelSpec = {
    title: "steady-state comparison",
    xLabel: "t (s)",
    yLabel: "estimation distance",
    logY: true,
    series: tables.map((table, i) => ({
      label: runLabel(table.path),
      x: column(table, "t"),
      y: column(table, "Ro_dist"),
      color: PALETTE[(i + 1) % PALETTE.length],
    })),
  };
  return renderFigure([panel], "Estimation error vs neuron count");
}

export function render(kind: FigureKind, tables: RunTable[]): string {
  if (tables.length === 0) {
    throw new Error("at least one input CSV is required");
  }
  switch (kind) {
    case "euler_tracking":
      return eulerTracking(tables);
    case "error_convergence":
      return errorConvergence(tables);
    case "weight_norms":
      return weightNorms(tables);
    case "neuron_comparison":
      return neuronComparison(tables);
    default:
      throw new Error(`unknown figure kind: ${kind as string}`);
  }
}
