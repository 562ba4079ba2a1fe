import type { AxisOptions } from "./spec.js";

const MARGIN = { left: 64, right: 20, top: 36, bottom: 44 };
const SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function makeScale(lo: number, hi: number, outLo: number, outHi: number, log: boolean): Scale {
  let a = lo;
  let b = hi;
  if (log) {
    a = Math.log10(Math.max(lo, 1e-300));
    b = Math.log10(Math.max(hi, 1e-300));
  }
  if (b - a < 1e-12) {
    b = a + 1;
  }
  const scale = ((v: number) => {
    const t = log ? Math.log10(Math.max(v, 1e-300)) : v;
    return outLo + ((t - a) / (b - a)) * (outHi - outLo);
  }) as Scale;
  const ticks: number[] = [];
  if (log) {
    const lo10 = Math.ceil(a);
    const hi10 = Math.floor(b);
    const step = Math.max(1, Math.floor((hi10 - lo10) / 6) || 1);
    for (let e = lo10; e <= hi10; e += step) ticks.push(10 ** e);
    if (ticks.length === 0) ticks.push(10 ** a, 10 ** b);
  } else {
    const span = b - a;
    const raw = span / 5;
    const mag = 10 ** Math.floor(Math.log10(raw));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= 6) ?? mag * 10;
    for (let t = Math.ceil(a / step) * step; t <= b + 1e-12; t += step) ticks.push(t);
  }
  scale.ticks = ticks;
  return scale;
}

function axisFrame(
  width: number,
  height: number,
  sx: Scale,
  sy: Scale,
  axes: AxisOptions,
  title?: string,
): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = width - MARGIN.right;
  const y0 = height - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#444" stroke-width="1"/>`,
  );
  for (const t of sx.ticks) {
    const px = sx(t);
    if (px < x0 - 1e-6 || px > x1 + 1e-6) continue;
    parts.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 5}" stroke="#444"/>`);
    parts.push(
      `<text x="${fmt(px)}" y="${y0 + 18}" font-size="11" text-anchor="middle" fill="#222">${fmt(t)}</text>`,
    );
  }
  for (const t of sy.ticks) {
    const py = sy(t);
    if (py > y0 + 1e-6 || py < y1 - 1e-6) continue;
    parts.push(`<line x1="${x0 - 5}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="#444"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${fmt(py + 4)}" font-size="11" text-anchor="end" fill="#222">${fmt(t)}</text>`,
    );
  }
  if (axes.xLabel) {
    parts.push(
      `<text x="${(x0 + x1) / 2}" y="${height - 8}" font-size="12" text-anchor="middle" fill="#222">${esc(axes.xLabel)}</text>`,
    );
  }
  if (axes.yLabel) {
    parts.push(
      `<text x="16" y="${(y0 + y1) / 2}" font-size="12" text-anchor="middle" fill="#222" transform="rotate(-90 16 ${(y0 + y1) / 2})">${esc(axes.yLabel)}</text>`,
    );
  }
  if (title) {
    parts.push(
      `<text x="${(x0 + x1) / 2}" y="22" font-size="14" text-anchor="middle" fill="#111">${esc(title)}</text>`,
    );
  }
  return parts.join("\n");
}

export interface Series {
  label: string;
  xs: number[];
  ys: number[];
}

export function renderLines(
  width: number,
  height: number,
  series: Series[],
  axes: AxisOptions,
  title?: string,
): string {
  const allX = series.flatMap((s) => s.xs);
  const allY = series.flatMap((s) => s.ys).filter((v) => !axes.logY || v > 0);
  if (allY.length === 0) {
    throw new Error("no positive values for a logarithmic axis");
  }
  const sx = makeScale(Math.min(...allX), Math.max(...allX), MARGIN.left, width - MARGIN.right, !!axes.logX);
  const sy = makeScale(Math.min(...allY), Math.max(...allY), height - MARGIN.bottom, MARGIN.top, !!axes.logY);
  const body: string[] = [axisFrame(width, height, sx, sy, axes, title)];
  series.forEach((s, i) => {
    const pts = s.xs
      .map((x, j) => ({ x, y: s.ys[j] }))
      .filter((p) => !axes.logY || p.y > 0)
      .map((p) => `${fmt(sx(p.x))},${fmt(sy(p.y))}`)
      .join(" ");
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    body.push(`<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.6"/>`);
    body.push(
      `<text x="${width - MARGIN.right - 6}" y="${MARGIN.top + 16 + 16 * i}" font-size="11" text-anchor="end" fill="${color}">${esc(s.label)}</text>`,
    );
  });
  return wrap(width, height, body.join("\n"));
}

/** Two-tone heat ramp (dark blue -> yellow). */
function heatColor(t: number): string {
  const clamp = Math.max(0, Math.min(1, t));
  const r = Math.round(40 + 215 * clamp);
  const g = Math.round(40 + 180 * clamp);
  const b = Math.round(110 - 70 * clamp + 40 * (1 - clamp));
  return `rgb(${r},${g},${b})`;
}

export function renderHeatmap(
  width: number,
  height: number,
  xs: number[],
  ys: number[],
  values: number[],
  axes: AxisOptions,
  title?: string,
): string {
  const ux = Array.from(new Set(xs)).sort((a, b) => a - b);
  const uy = Array.from(new Set(ys)).sort((a, b) => a - b);
  const sx = makeScale(Math.min(...ux), Math.max(...ux), MARGIN.left, width - MARGIN.right, false);
  const sy = makeScale(Math.min(...uy), Math.max(...uy), height - MARGIN.bottom, MARGIN.top, false);
  const vLo = Math.min(...values);
  const vHi = Math.max(...values);
  const cellW = ux.length > 1 ? (width - MARGIN.left - MARGIN.right) / (ux.length - 1) : 8;
  const cellH = uy.length > 1 ? (height - MARGIN.top - MARGIN.bottom) / (uy.length - 1) : 8;
  const body: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    const t = vHi > vLo ? (values[i] - vLo) / (vHi - vLo) : 0.5;
    body.push(
      `<rect x="${fmt(sx(xs[i]) - cellW / 2)}" y="${fmt(sy(ys[i]) - cellH / 2)}" width="${fmt(cellW)}" height="${fmt(cellH)}" fill="${heatColor(t)}"/>`,
    );
  }
  body.push(axisFrame(width, height, sx, sy, axes, title));
  return wrap(width, height, body.join("\n"));
}

function wrap(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}
