/** Shared plot frame: margins, data-to-pixel mapping, ticks and labels. */

import { BLACK, Canvas, Color, textWidth } from "./raster.js";

export interface FrameSpec {
  width: number;
  height: number;
  xRange: readonly [number, number];
  yRange: readonly [number, number];
  xLabel: string;
  yLabel: string;
}

export class Frame {
  readonly canvas: Canvas;
  readonly left = 46;
  readonly right = 64; // leaves room for a colorbar
  readonly top = 12;
  readonly bottom = 30;
  readonly spec: FrameSpec;

  constructor(spec: FrameSpec) {
    this.spec = spec;
    this.canvas = new Canvas(spec.width, spec.height);
  }

  get plotWidth(): number {
    return this.spec.width - this.left - this.right;
  }

  get plotHeight(): number {
    return this.spec.height - this.top - this.bottom;
  }

  px(x: number): number {
    const [lo, hi] = this.spec.xRange;
    return this.left + ((x - lo) / (hi - lo)) * this.plotWidth;
  }

  py(y: number): number {
    const [lo, hi] = this.spec.yRange;
    return this.top + (1 - (y - lo) / (hi - lo)) * this.plotHeight;
  }

  drawAxes(xTicks: number[], yTicks: number[]): void {
    const c = this.canvas;
    c.line(this.left, this.top, this.left, this.top + this.plotHeight, BLACK);
    c.line(this.left, this.top + this.plotHeight,
           this.left + this.plotWidth, this.top + this.plotHeight, BLACK);
    for (const t of xTicks) {
      const x = Math.round(this.px(t));
      c.line(x, this.top + this.plotHeight, x, this.top + this.plotHeight + 3, BLACK);
      const label = formatTick(t);
      c.text(x - textWidth(label) / 2, this.top + this.plotHeight + 6, label, BLACK);
    }
    for (const t of yTicks) {
      const y = Math.round(this.py(t));
      c.line(this.left - 3, y, this.left, y, BLACK);
      const label = formatTick(t);
      c.text(this.left - 6 - textWidth(label), y - 3, label, BLACK);
    }
    c.text(this.left + this.plotWidth / 2, this.spec.height - 9, this.spec.xLabel, BLACK);
    c.text(2, this.top + 2, this.spec.yLabel, BLACK);
  }

  drawColorbar(colormap: (v: number) => Color, lo: number, hi: number): void {
    const x0 = this.spec.width - this.right + 14;
    const barWidth = 12;
    for (let i = 0; i < this.plotHeight; i++) {
      const v = hi - (i / (this.plotHeight - 1)) * (hi - lo);
      const color = colormap(v);
      for (let dx = 0; dx < barWidth; dx++) {
        this.canvas.set(x0 + dx, this.top + i, color);
      }
    }
    for (const v of [lo, 0, hi]) {
      if (v < lo || v > hi) continue;
      const y = this.top + Math.round((1 - (v - lo) / (hi - lo)) * (this.plotHeight - 1));
      this.canvas.text(x0 + barWidth + 3, y - 3, formatTick(v), BLACK);
    }
  }
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const rounded = Math.round(v * 100) / 100;
  return String(rounded);
}

export function pickTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  const step = niceStep(span / count);
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12; v += step) {
    ticks.push(Math.round(v * 1e9) / 1e9);
  }
  return ticks;
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  if (norm < 1.5) return mag;
  if (norm < 3.5) return 2 * mag;
  if (norm < 7.5) return 5 * mag;
  return 10 * mag;
}
