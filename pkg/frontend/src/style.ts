/**
 * Shared figure style: fixed canvas, palette and deterministic SVG
 * emission. Rendering is a pure function of the parsed tables, so the
 * same CSV bytes always produce the same SVG bytes.
 */
import type { ResultTable } from "./csv.js";

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 44, right: 28, bottom: 58, left: 76 };

export const PALETTE = ["#1f6fb2", "#d1495b", "#3a8f5f", "#8462a9", "#c98a1f"];

export type Marker = "circle" | "square" | "diamond";

export interface SeriesStyle {
  label: string;
  color: string;
  marker: Marker;
}

export interface FigureDef {
  id: string;
  title: string;
  xLabel: string;
  yLabel: string;
  /** fixed y range (e.g. [0, 1] for probabilities); otherwise padded data extent */
  yDomain?: [number, number];
  /** series name -> style; key order fixes draw and legend order */
  series: Record<string, SeriesStyle>;
}

/** Fixed-point, trailing zeros trimmed; output never depends on locale. */
export function fmt(v: number): string {
  const s = v.toFixed(3).replace(/\.?0+$/, "");
  return s === "-0" ? "0" : s;
}

export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): (v: number) => number {
  const k = d1 === d0 ? 0 : (r1 - r0) / (d1 - d0);
  return (v: number) => r0 + (v - d0) * k;
}

/** Round ticks on a 1-2-5 ladder, kept inside [lo, hi]. */
export function niceTicks(lo: number, hi: number, want = 6): number[] {
  const span = hi - lo;
  if (!(span > 0)) return [lo];
  const raw = span / Math.max(1, want - 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = 10 * mag;
  for (const m of [1, 2, 5]) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let i = Math.ceil(lo / step - 1e-9); i * step <= hi + 1e-9 * span; i++) {
    ticks.push(Math.round(i * step / mag) * mag);
  }
  return ticks;
}

/** Label formatter: enough decimals for the tick step, no more. */
export function tickLabel(v: number, step: number): string {
  const decimals = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  const s = v.toFixed(Math.min(decimals, 6));
  return s === "-0" ? "0" : s;
}

export interface ScenePoint {
  x: number;
  y: number;
  lo: number;
  hi: number;
}

export interface SceneSeries {
  style: SeriesStyle;
  /** analytic values drawn as a solid line */
  line: Array<[number, number]>;
  /** secondary analytic values (a lower bound) drawn dashed */
  dashed: Array<[number, number]>;
  /** simulated values drawn as markers with +/- 2 stderr bars */
  points: ScenePoint[];
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

function markerSvg(m: Marker, cx: number, cy: number, color: string): string {
  const c = `${fmt(cx)},${fmt(cy)}`;
  switch (m) {
    case "circle":
      return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="3.5" fill="${color}"/>`;
    case "square":
      return `<rect x="${fmt(cx - 3.2)}" y="${fmt(cy - 3.2)}" width="6.4" height="6.4" fill="${color}"/>`;
    case "diamond":
      return `<path d="M ${fmt(cx)} ${fmt(cy - 4.4)} L ${fmt(cx + 4.4)} ${fmt(cy)} L ${fmt(cx)} ${fmt(cy + 4.4)} L ${fmt(cx - 4.4)} ${fmt(cy)} Z" fill="${color}"/>`;
    default:
      return `<circle cx="${c}" r="3.5" fill="${color}"/>`;
  }
}

function pathFrom(pts: Array<[number, number]>): string {
  return pts
    .map(([x, y], i) => `${i === 0 ? "M" : "L"} ${fmt(x)} ${fmt(y)}`)
    .join(" ");
}

/** Lay out and serialize the whole figure. */
export function renderScene(def: FigureDef, series: SceneSeries[]): string {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of series) {
    for (const [x, y] of s.line) {
      xs.push(x);
      ys.push(y);
    }
    for (const [x, y] of s.dashed) {
      xs.push(x);
      ys.push(y);
    }
    for (const p of s.points) {
      xs.push(p.x);
      ys.push(p.lo, p.hi);
    }
  }
  if (xs.length === 0) {
    throw new Error(`${def.id}: nothing to draw (all cells empty)`);
  }
  const [x0, x1] = extent(xs);
  let [y0, y1] = def.yDomain ?? extent(ys);
  if (!def.yDomain) {
    const pad = (y1 - y0 || Math.abs(y0) || 1) * 0.06;
    y0 -= pad;
    y1 += pad;
  }
  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;
  const sx = linearScale(x0, x1, left, right);
  const sy = linearScale(y0, y1, bottom, top);

  const xTicks = niceTicks(x0, x1);
  const yTicks = niceTicks(y0, y1);
  const xStep = xTicks.length > 1 ? xTicks[1] - xTicks[0] : 1;
  const yStep = yTicks.length > 1 ? yTicks[1] - yTicks[0] : 1;

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  out.push(
    `<text x="${fmt(WIDTH / 2)}" y="24" text-anchor="middle" font-size="15" fill="#222222">${def.title}</text>`,
  );

  // grid and ticks
  for (const t of yTicks) {
    const y = sy(t);
    out.push(
      `<line x1="${left}" y1="${fmt(y)}" x2="${right}" y2="${fmt(y)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${left - 8}" y="${fmt(y + 3.5)}" text-anchor="end" font-size="11" fill="#444444">${tickLabel(t, yStep)}</text>`,
    );
  }
  for (const t of xTicks) {
    const x = sx(t);
    out.push(
      `<line x1="${fmt(x)}" y1="${bottom}" x2="${fmt(x)}" y2="${bottom + 5}" stroke="#444444" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${fmt(x)}" y="${bottom + 20}" text-anchor="middle" font-size="11" fill="#444444">${tickLabel(t, xStep)}</text>`,
    );
  }
  out.push(
    `<line x1="${left}" y1="${bottom}" x2="${right}" y2="${bottom}" stroke="#222222" stroke-width="1"/>`,
  );
  out.push(
    `<line x1="${left}" y1="${top}" x2="${left}" y2="${bottom}" stroke="#222222" stroke-width="1"/>`,
  );
  out.push(
    `<text x="${fmt((left + right) / 2)}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13" fill="#222222">${def.xLabel}</text>`,
  );
  out.push(
    `<text x="20" y="${fmt((top + bottom) / 2)}" text-anchor="middle" font-size="13" fill="#222222" transform="rotate(-90 20 ${fmt((top + bottom) / 2)})">${def.yLabel}</text>`,
  );

  // series: lines first, then error bars, then markers on top
  for (const s of series) {
    if (s.line.length > 0) {
      const d = pathFrom(s.line.map(([x, y]) => [sx(x), sy(y)] as [number, number]));
      out.push(
        `<path d="${d}" fill="none" stroke="${s.style.color}" stroke-width="1.8"/>`,
      );
    }
    if (s.dashed.length > 0) {
      const d = pathFrom(s.dashed.map(([x, y]) => [sx(x), sy(y)] as [number, number]));
      out.push(
        `<path d="${d}" fill="none" stroke="${s.style.color}" stroke-width="1.4" stroke-dasharray="6 4"/>`,
      );
    }
    for (const p of s.points) {
      const x = sx(p.x);
      if (p.hi > p.lo) {
        const yl = sy(p.lo);
        const yh = sy(p.hi);
        out.push(
          `<line x1="${fmt(x)}" y1="${fmt(yl)}" x2="${fmt(x)}" y2="${fmt(yh)}" stroke="${s.style.color}" stroke-width="1.2"/>`,
        );
        out.push(
          `<line x1="${fmt(x - 4)}" y1="${fmt(yl)}" x2="${fmt(x + 4)}" y2="${fmt(yl)}" stroke="${s.style.color}" stroke-width="1.2"/>`,
        );
        out.push(
          `<line x1="${fmt(x - 4)}" y1="${fmt(yh)}" x2="${fmt(x + 4)}" y2="${fmt(yh)}" stroke="${s.style.color}" stroke-width="1.2"/>`,
        );
      }
    }
    for (const p of s.points) {
      out.push(markerSvg(s.style.marker, sx(p.x), sy(p.y), s.style.color));
    }
  }

  // legend, top-right inside the plot area
  const lx = right - 190;
  let ly = top + 10;
  for (const s of series) {
    out.push(
      `<line x1="${lx}" y1="${fmt(ly)}" x2="${lx + 26}" y2="${fmt(ly)}" stroke="${s.style.color}" stroke-width="1.8"/>`,
    );
    out.push(markerSvg(s.style.marker, lx + 13, ly, s.style.color));
    out.push(
      `<text x="${lx + 34}" y="${fmt(ly + 3.5)}" font-size="11" fill="#222222">${s.style.label}</text>`,
    );
    ly += 18;
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}

/** Build scene series from parsed tables and render the figure. */
export function renderFigure(def: FigureDef, tables: ResultTable[]): string {
  if (tables.length === 0) {
    throw new Error(`${def.id}: no input tables`);
  }
  const byName = new Map<string, ResultTable>();
  for (const t of tables) {
    if (!(t.name in def.series)) {
      const known = Object.keys(def.series).join(", ");
      throw new Error(
        `${t.path}: ${def.id} has no series named "${t.name}" (expected one of: ${known})`,
      );
    }
    if (byName.has(t.name)) {
      throw new Error(`${t.path}: series "${t.name}" given twice`);
    }
    byName.set(t.name, t);
  }
  const series: SceneSeries[] = [];
  for (const name of Object.keys(def.series)) {
    const t = byName.get(name);
    if (!t) continue;
    const line: Array<[number, number]> = [];
    const dashed: Array<[number, number]> = [];
    const points: ScenePoint[] = [];
    for (const r of t.rows) {
      if (r.analytic_ub !== null) line.push([r.sweep, r.analytic_ub]);
      if (r.analytic_lb !== null) dashed.push([r.sweep, r.analytic_lb]);
      if (r.mc_value !== null) {
        const spread = r.mc_stderr !== null ? 2 * r.mc_stderr : 0;
        points.push({
          x: r.sweep,
          y: r.mc_value,
          lo: r.mc_value - spread,
          hi: r.mc_value + spread,
        });
      }
    }
    series.push({ style: def.series[name], line, dashed, points });
  }
  return renderScene(def, series);
}
