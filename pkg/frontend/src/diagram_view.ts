// Canvas scatterplot with click-and-drag brushing. Emits brush rectangles
// in diagram data coordinates; all selection resolution happens on the
// server.

import {
  diagonalEndpoints,
  dragToRect,
  linearTicks,
  logTicks,
  makeTransform,
  normalizeDrag,
  pointColor,
  PixelRect,
  toPxX,
  toPxY,
  Transform,
} from "./scatter";
import { DiagramKind, DiagramPointDto, RectDto } from "./types";

const POINT_RADIUS = 4;

export class DiagramView {
  private ctx: CanvasRenderingContext2D;
  private transform: Transform | null = null;
  private points: DiagramPointDto[] = [];
  private kind: DiagramKind = "pv";
  private selected = new Set<number>();
  private dragStart: { x: number; y: number } | null = null;
  private dragNow: { x: number; y: number } | null = null;
  private onBrush: (rect: RectDto) => void = () => undefined;

  constructor(private readonly canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) {
      throw new Error("canvas 2d context unavailable");
    }
    this.ctx = ctx;
    canvas.addEventListener("mousedown", (ev) => this.beginDrag(ev));
    canvas.addEventListener("mousemove", (ev) => this.moveDrag(ev));
    window.addEventListener("mouseup", (ev) => this.endDrag(ev));
  }

  brushed(handler: (rect: RectDto) => void): void {
    this.onBrush = handler;
  }

  render(points: DiagramPointDto[], kind: DiagramKind, selected: Iterable<number>): void {
    this.points = points;
    this.kind = kind;
    this.selected = new Set(selected);
    this.transform = makeTransform(points, kind, this.canvas.width, this.canvas.height);
    this.draw();
  }

  private localPos(ev: MouseEvent): { x: number; y: number } {
    const bounds = this.canvas.getBoundingClientRect();
    return {
      x: ((ev.clientX - bounds.left) / bounds.width) * this.canvas.width,
      y: ((ev.clientY - bounds.top) / bounds.height) * this.canvas.height,
    };
  }

  private beginDrag(ev: MouseEvent): void {
    this.dragStart = this.localPos(ev);
    this.dragNow = this.dragStart;
  }

  private moveDrag(ev: MouseEvent): void {
    if (!this.dragStart) {
      return;
    }
    this.dragNow = this.localPos(ev);
    this.draw();
  }

  private endDrag(ev: MouseEvent): void {
    if (!this.dragStart || !this.transform) {
      return;
    }
    const start = this.dragStart;
    const end = this.localPos(ev);
    this.dragStart = null;
    this.dragNow = null;
    const rect = dragToRect(this.transform, normalizeDrag(start.x, start.y, end.x, end.y));
    this.draw();
    if (rect) {
      this.onBrush(rect);
    }
  }

  private draw(): void {
    const { ctx, canvas } = this;
    const t = this.transform;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (!t) {
      return;
    }
    this.drawAxes(t);
    if (this.kind === "pd") {
      const [x0, y0, x1, y1] = diagonalEndpoints(t);
      ctx.strokeStyle = "#cbd5e0";
      ctx.setLineDash([4, 3]);
      ctx.beginPath();
      ctx.moveTo(x0, y0);
      ctx.lineTo(x1, y1);
      ctx.stroke();
      ctx.setLineDash([]);
    }
    for (const p of this.points) {
      const px = toPxX(t, p.x);
      const py = toPxY(t, p.y);
      ctx.beginPath();
      ctx.arc(px, py, POINT_RADIUS, 0, Math.PI * 2);
      ctx.fillStyle = pointColor(p.kind);
      ctx.fill();
      if (this.selected.has(p.pair)) {
        ctx.strokeStyle = "#1a202c";
        ctx.lineWidth = 2;
        ctx.stroke();
        ctx.lineWidth = 1;
      }
    }
    if (this.dragStart && this.dragNow) {
      const r: PixelRect = normalizeDrag(this.dragStart.x, this.dragStart.y, this.dragNow.x, this.dragNow.y);
      ctx.fillStyle = "rgba(66, 153, 225, 0.15)";
      ctx.strokeStyle = "#4299e1";
      ctx.fillRect(r.x0, r.y0, r.x1 - r.x0, r.y1 - r.y0);
      ctx.strokeRect(r.x0, r.y0, r.x1 - r.x0, r.y1 - r.y0);
    }
  }

  private drawAxes(t: Transform): void {
    const { ctx } = this;
    const left = t.margin.left;
    const bottom = t.height - t.margin.bottom;
    ctx.strokeStyle = "#a0aec0";
    ctx.beginPath();
    ctx.moveTo(left, t.margin.top);
    ctx.lineTo(left, bottom);
    ctx.lineTo(t.width - t.margin.right, bottom);
    ctx.stroke();
    ctx.fillStyle = "#4a5568";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "center";
    for (const v of linearTicks(t.x)) {
      const px = toPxX(t, v);
      ctx.fillText(formatTick(v), px, bottom + 14);
    }
    ctx.textAlign = "right";
    const yTicks = t.logY ? logTicks(t.y) : linearTicks(t.y);
    for (const v of yTicks) {
      const py = toPxY(t, v);
      ctx.fillText(formatTick(v), left - 5, py + 3);
    }
    ctx.textAlign = "center";
    const xLabel = this.kind === "pd" ? "birth" : "persistence";
    const yLabel = this.kind === "pd" ? "death" : "volume (log)";
    ctx.fillText(xLabel, (left + t.width - t.margin.right) / 2, t.height - 4);
    ctx.save();
    ctx.translate(11, (t.margin.top + bottom) / 2);
    ctx.rotate(-Math.PI / 2);
    ctx.fillText(yLabel, 0, 0);
    ctx.restore();
  }
}

function formatTick(v: number): string {
  if (Math.abs(v) >= 1000) {
    return v.toExponential(0);
  }
  return Number.isInteger(v) ? String(v) : v.toFixed(1);
}
