/** Minimal SVG line-chart builder; emits plain markup, no DOM required. */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  dash?: string;
}

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  /** Log-scale the y axis (clipping nonpositive values). */
  logY?: boolean;
}

export const PALETTE = ["#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

const PANEL_W = 460;
const PANEL_H = 260;
const MARGIN = { top: 34, right: 16, bottom: 42, left: 64 };

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!Number.isFinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function ticks(lo: number, hi: number, n = 5): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = (span / n) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const inc = mult * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / inc) * inc; v <= hi + 1e-12 * span; v += inc) {
    out.push(v);
  }
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Math.round(v * 1e6) / 1e6);
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function renderPanel(spec: PanelSpec, ox: number, oy: number): string {
  const iw = PANEL_W - MARGIN.left - MARGIN.right;
  const ih = PANEL_H - MARGIN.top - MARGIN.bottom;
  const xs = spec.series.flatMap((s) => s.x);
  const [x0, x1] = extent(xs);
  let transform = (v: number) => v;
  let yVals = spec.series.flatMap((s) => s.y);
  if (spec.logY) {
    const floor = 1e-12;
    transform = (v: number) => Math.log10(Math.max(v, floor));
    yVals = yVals.map(transform);
  }
  const [y0, y1] = extent(yVals);
  const px = (v: number) => ox + MARGIN.left + ((v - x0) / (x1 - x0)) * iw;
  const py = (v: number) => oy + MARGIN.top + ih - ((transform(v) - y0) / (y1 - y0)) * ih;

  const parts: string[] = [];
  parts.push(
    `<rect x="${ox + MARGIN.left}" y="${oy + MARGIN.top}" width="${iw}" height="${ih}" ` +
      `fill="none" stroke="#888" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${ox + PANEL_W / 2}" y="${oy + 18}" text-anchor="middle" ` +
      `font-size="13" class="panel-title">${esc(spec.title)}</text>`,
  );
  for (const tx of ticks(x0, x1)) {
    const x = px(tx);
    parts.push(`<line x1="${x}" y1="${oy + MARGIN.top + ih}" x2="${x}" y2="${oy + MARGIN.top + ih + 4}" stroke="#444"/>`);
    parts.push(
      `<text x="${x}" y="${oy + MARGIN.top + ih + 16}" text-anchor="middle" font-size="10">${fmt(tx)}</text>`,
    );
  }
  for (const ty of ticks(y0, y1)) {
    const y = oy + MARGIN.top + ih - ((ty - y0) / (y1 - y0)) * ih;
    parts.push(`<line x1="${ox + MARGIN.left - 4}" y1="${y}" x2="${ox + MARGIN.left}" y2="${y}" stroke="#444"/>`);
    const label = spec.logY ? `1e${fmt(ty)}` : fmt(ty);
    parts.push(
      `<text x="${ox + MARGIN.left - 7}" y="${y + 3}" text-anchor="end" font-size="10">${label}</text>`,
    );
  }
  parts.push(
    `<text x="${ox + MARGIN.left + iw / 2}" y="${oy + PANEL_H - 8}" text-anchor="middle" font-size="11">${esc(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="${ox + 14}" y="${oy + MARGIN.top + ih / 2}" text-anchor="middle" font-size="11" ` +
      `transform="rotate(-90 ${ox + 14} ${oy + MARGIN.top + ih / 2})">${esc(spec.yLabel)}</text>`,
  );
  for (const s of spec.series) {
    const pts: string[] = [];
    const stride = Math.max(1, Math.floor(s.x.length / 2000));
    for (let i = 0; i < s.x.length; i += stride) {
      pts.push(`${px(s.x[i]).toFixed(2)},${py(s.y[i]).toFixed(2)}`);
    }
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline class="series" data-label="${esc(s.label)}" fill="none" ` +
        `stroke="${s.color}" stroke-width="1.3"${dash} points="${pts.join(" ")}"/>`,
    );
  }
  // legend
  let ly = oy + MARGIN.top + 12;
  for (const s of spec.series) {
    const lx = ox + MARGIN.left + iw - 110;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<line x1="${lx}" y1="${ly - 3}" x2="${lx + 22}" y2="${ly - 3}" stroke="${s.color}"${dash}/>`);
    parts.push(`<text x="${lx + 27}" y="${ly}" font-size="10" class="legend-label">${esc(s.label)}</text>`);
    ly += 13;
  }
  return parts.join("\n");
}

/** Lay panels on a grid (two per row) and wrap in an SVG document. */
export function renderFigure(panels: PanelSpec[], title: string): string {
  const cols = panels.length > 1 ? 2 : 1;
  const rows = Math.ceil(panels.length / cols);
  const width = cols * PANEL_W;
  const height = rows * PANEL_H + 24;
  const body = panels
    .map((p, i) => renderPanel(p, (i % cols) * PANEL_W, 24 + Math.floor(i / cols) * PANEL_H))
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    `<text x="${width / 2}" y="16" text-anchor="middle" font-size="14" class="figure-title">${esc(title)}</text>\n` +
    `${body}\n</svg>\n`
  );
}
