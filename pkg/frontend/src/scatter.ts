// Plot geometry for the two diagrams: data<->pixel transforms, brush
// handling, and point styling. Pure functions so they can be tested
// without a DOM.

import { DiagramKind, DiagramPointDto, FeatureKind, RectDto } from "./types";

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const PLOT_MARGIN: Margin = { top: 10, right: 14, bottom: 28, left: 44 };

export interface Extent {
  min: number;
  max: number;
}

/** Padded extent of values; degenerate inputs widen to a unit interval. */
export function padded(values: number[], fraction = 0.08): Extent {
  if (values.length === 0) {
    return { min: 0, max: 1 };
  }
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const pad = (max - min) * fraction;
  return { min: min - pad, max: max + pad };
}

export interface Transform {
  kind: DiagramKind;
  width: number;
  height: number;
  margin: Margin;
  x: Extent;
  y: Extent;
  /** PV volume axis renders on log10; stored values stay raw. */
  logY: boolean;
}

function forward(extent: Extent, log: boolean, v: number): number {
  const lo = log ? Math.log10(extent.min) : extent.min;
  const hi = log ? Math.log10(extent.max) : extent.max;
  const t = ((log ? Math.log10(v) : v) - lo) / (hi - lo);
  return t;
}

function backward(extent: Extent, log: boolean, t: number): number {
  const lo = log ? Math.log10(extent.min) : extent.min;
  const hi = log ? Math.log10(extent.max) : extent.max;
  const v = lo + t * (hi - lo);
  return log ? Math.pow(10, v) : v;
}

export function makeTransform(
  points: DiagramPointDto[],
  kind: DiagramKind,
  width: number,
  height: number,
  margin: Margin = PLOT_MARGIN,
): Transform {
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  if (kind === "pd") {
    // shared extent keeps the diagonal at 45 degrees
    const both = padded(xs.concat(ys));
    return { kind, width, height, margin, x: both, y: both, logY: false };
  }
  const x = padded([0, ...xs]);
  const rawY = ys.length ? ys : [1];
  const y = { min: Math.max(0.8, Math.min(...rawY) * 0.8), max: Math.max(...rawY) * 1.25 };
  return { kind, width, height, margin, x, y, logY: true };
}

export function toPxX(t: Transform, v: number): number {
  const inner = t.width - t.margin.left - t.margin.right;
  return t.margin.left + forward(t.x, false, v) * inner;
}

export function toPxY(t: Transform, v: number): number {
  const inner = t.height - t.margin.top - t.margin.bottom;
  return t.margin.top + (1 - forward(t.y, t.logY, v)) * inner;
}

export function fromPxX(t: Transform, px: number): number {
  const inner = t.width - t.margin.left - t.margin.right;
  return backward(t.x, false, (px - t.margin.left) / inner);
}

export function fromPxY(t: Transform, px: number): number {
  const inner = t.height - t.margin.top - t.margin.bottom;
  return backward(t.y, t.logY, 1 - (px - t.margin.top) / inner);
}

export interface PixelRect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

/** Order a drag's corners regardless of direction. */
export function normalizeDrag(ax: number, ay: number, bx: number, by: number): PixelRect {
  return {
    x0: Math.min(ax, bx),
    y0: Math.min(ay, by),
    x1: Math.max(ax, bx),
    y1: Math.max(ay, by),
  };
}

const MIN_DRAG_PX = 3;

/**
 * Convert a pixel-space drag to a data-space brush rectangle.
 * Returns null for clicks too small to be a deliberate brush.
 */
export function dragToRect(t: Transform, drag: PixelRect): RectDto | null {
  if (drag.x1 - drag.x0 < MIN_DRAG_PX || drag.y1 - drag.y0 < MIN_DRAG_PX) {
    return null;
  }
  const xa = fromPxX(t, drag.x0);
  const xb = fromPxX(t, drag.x1);
  // pixel y grows downward, data y grows upward
  const ya = fromPxY(t, drag.y1);
  const yb = fromPxY(t, drag.y0);
  return {
    x: [Math.min(xa, xb), Math.max(xa, xb)],
    y: [Math.min(ya, yb), Math.max(ya, yb)],
  };
}

/** Join features draw blue, split features red, the global pair gray. */
export function pointColor(kind: FeatureKind): string {
  switch (kind) {
    case "join":
      return "#2b6cb0";
    case "split":
      return "#c53030";
    case "global":
      return "#718096";
  }
}

/** Endpoints of the birth = death guide for a persistence diagram. */
export function diagonalEndpoints(t: Transform): [number, number, number, number] {
  const lo = Math.max(t.x.min, t.y.min);
  const hi = Math.min(t.x.max, t.y.max);
  return [toPxX(t, lo), toPxY(t, lo), toPxX(t, hi), toPxY(t, hi)];
}

/** Round axis tick positions for a linear extent. */
export function linearTicks(extent: Extent, count = 5): number[] {
  const span = extent.max - extent.min;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, step * 2, step * 5, step * 10];
  const chosen = candidates.find((s) => span / s <= count) ?? step * 10;
  const ticks: number[] = [];
  for (let v = Math.ceil(extent.min / chosen) * chosen; v <= extent.max + 1e-12; v += chosen) {
    ticks.push(Number(v.toFixed(12)));
  }
  return ticks;
}

/** Powers of ten inside a log extent. */
export function logTicks(extent: Extent): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(extent.min)); Math.pow(10, e) <= extent.max; e += 1) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}
