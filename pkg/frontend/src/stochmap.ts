/**
 * Stochastic outcome map: one colored cell per run.  Wild-type extinction
 * (drive fixed) in blue, drive extinction in yellow, timeout in black;
 * intensity scales with how fast the extinction happened.
 */

import { axisValues, numeric, readCsv, requireColumns } from "./csv.js";
import { Frame, pickTicks } from "./frame.js";
import { encodePng } from "./png.js";
import { Color } from "./raster.js";

export interface StochMapOptions {
  input: string;
  output: string;
  xLabel: string;
  yLabel: string;
  width: number;
  height: number;
}

export const STOCHMAP_DEFAULTS = { xLabel: "s", yLabel: "r", width: 480, height: 380 };

function outcomeColor(result: string, extinctionTime: number, tMax: number): Color {
  if (result === "Timeout") return [15, 15, 15];
  const speediness = Math.max(0.15, 1 - extinctionTime / Math.max(tMax, 1e-9));
  if (result === "DriveFixed") {
    return [Math.round(235 - 195 * speedy(speediness)), Math.round(240 - 170 * speedy(speediness)), 255];
  }
  return [255, Math.round(250 - 60 * speedy(speediness)), Math.round(225 - 215 * speedy(speediness))];
}

function speedy(v: number): number {
  return Math.max(0, Math.min(1, v));
}

export function renderStochMap(options: StochMapOptions): Buffer {
  const table = readCsv(options.input);
  const cols = requireColumns(table, ["s", "r", "result", "extinction_time"], options.input);
  const xs = axisValues(table, cols.get("s")!);
  const ys = axisValues(table, cols.get("r")!);
  let tMax = 0;
  for (const row of table.rows) {
    const raw = row[cols.get("extinction_time")!];
    if (raw !== "") tMax = Math.max(tMax, Number(raw));
  }
  const frame = new Frame({
    width: options.width,
    height: options.height,
    xRange: [xs[0], xs[xs.length - 1] + (xs.length > 1 ? xs[1] - xs[0] : 1)],
    yRange: [ys[0], ys[ys.length - 1] + (ys.length > 1 ? ys[1] - ys[0] : 1)],
    xLabel: options.xLabel,
    yLabel: options.yLabel,
  });
  const dx = xs.length > 1 ? xs[1] - xs[0] : 1;
  const dy = ys.length > 1 ? ys[1] - ys[0] : 1;
  for (const row of table.rows) {
    const s = numeric(row, cols.get("s")!);
    const r = numeric(row, cols.get("r")!);
    const result = row[cols.get("result")!];
    const raw = row[cols.get("extinction_time")!];
    const color = outcomeColor(result, raw === "" ? NaN : Number(raw), tMax);
    const x0 = Math.round(frame.px(s));
    const x1 = Math.round(frame.px(s + dx));
    const y0 = Math.round(frame.py(r + dy));
    const y1 = Math.round(frame.py(r));
    frame.canvas.fillRect(x0, y0, Math.max(1, x1 - x0), Math.max(1, y1 - y0), color);
  }
  frame.drawAxes(pickTicks(xs[0], xs[xs.length - 1]), pickTicks(ys[0], ys[ys.length - 1]));
  return encodePng(frame.canvas.width, frame.canvas.height, frame.canvas.pixels);
}
