/**
 * Speed heatmap from a sweep CSV, with optional overlays: the measured
 * zero-level contour, the eradication threshold of the demography variant,
 * and the monostability boundary.
 */

import { axisValues, numeric, readCsv, requireColumns } from "./csv.js";
import { Segment, zeroContour } from "./contour.js";
import { Frame, pickTicks } from "./frame.js";
import { encodePng } from "./png.js";
import { BLACK, Color } from "./raster.js";

export interface HeatmapOptions {
  input: string;
  output: string;
  clip: number; // colour scale saturates at +/- clip
  zeroContour: boolean;
  eradicationCurve: boolean;
  monostabilityLine: boolean;
  demography: string; // variant tag for the eradication closed form
  alleeThreshold: number;
  xLabel: string;
  yLabel: string;
  width: number;
  height: number;
}

export const HEATMAP_DEFAULTS = {
  clip: 2.0,
  zeroContour: true,
  eradicationCurve: false,
  monostabilityLine: false,
  demography: "logistic_b",
  alleeThreshold: 0.0,
  xLabel: "s",
  yLabel: "r",
  width: 480,
  height: 380,
};

/** Diverging blue-white-red scale centered at zero, saturating at +/-clip. */
export function divergingColor(v: number, clip: number): Color {
  if (!Number.isFinite(v)) return [40, 40, 40];
  const t = Math.max(-1, Math.min(1, v / clip));
  if (t < 0) {
    const u = 1 + t; // 0 at -clip, 1 at 0
    return [Math.round(40 + 215 * u), Math.round(70 + 185 * u), 255];
  }
  const u = 1 - t;
  return [255, Math.round(70 + 185 * u), Math.round(40 + 215 * u)];
}

export interface HeatmapData {
  xs: number[];
  ys: number[];
  speed: (ix: number, iy: number) => number;
  segments: Segment[];
}

export function loadHeatmap(path: string): HeatmapData {
  const table = readCsv(path);
  const cols = requireColumns(table, ["axis1", "axis2", "speed", "class"], path);
  const xs = axisValues(table, cols.get("axis1")!);
  const ys = axisValues(table, cols.get("axis2")!);
  const grid = new Map<string, number>();
  for (const row of table.rows) {
    const x = numeric(row, cols.get("axis1")!);
    const y = numeric(row, cols.get("axis2")!);
    const cls = row[cols.get("class")!];
    const v = cls === "NotConverged" ? NaN : numeric(row, cols.get("speed")!);
    grid.set(`${x}|${y}`, v);
  }
  const speed = (ix: number, iy: number) =>
    grid.get(`${xs[ix]}|${ys[iy]}`) ?? NaN;
  return { xs, ys, speed, segments: zeroContour(xs, ys, speed) };
}

export function eradicationThreshold(demography: string, a: number, s: number): number {
  switch (demography) {
    case "logistic_b":
    case "const_b_logistic_d":
      return s / (1 - s);
    case "allee_b":
      return (4 * s) / ((1 - s) * (1 - a) * (1 - a));
    case "const_b_allee_d": {
      const d = (1 - a) * (1 - a) - 4 * s;
      return d <= 0 ? Infinity : (4 * s) / d;
    }
    default:
      throw new Error(`unknown demography variant '${demography}'`);
  }
}

export function renderHeatmap(options: HeatmapOptions): Buffer {
  const data = loadHeatmap(options.input);
  const { xs, ys } = data;
  if (xs.length < 1 || ys.length < 1) {
    throw new Error(`${options.input}: empty axis`);
  }
  const frame = new Frame({
    width: options.width,
    height: options.height,
    xRange: [xs[0], xs[xs.length - 1]],
    yRange: [ys[0], ys[ys.length - 1]],
    xLabel: options.xLabel,
    yLabel: options.yLabel,
  });

  // cell extents: midpoints between neighbouring axis values
  const xEdges = edges(xs);
  const yEdges = edges(ys);
  for (let iy = 0; iy < ys.length; iy++) {
    for (let ix = 0; ix < xs.length; ix++) {
      const color = divergingColor(data.speed(ix, iy), options.clip);
      const x0 = Math.round(frame.px(xEdges[ix]));
      const x1 = Math.round(frame.px(xEdges[ix + 1]));
      const y0 = Math.round(frame.py(yEdges[iy + 1]));
      const y1 = Math.round(frame.py(yEdges[iy]));
      frame.canvas.fillRect(x0, y0, Math.max(1, x1 - x0), Math.max(1, y1 - y0), color);
    }
  }

  if (options.zeroContour && xs.length > 1 && ys.length > 1) {
    for (const [x0, y0, x1, y1] of data.segments) {
      frame.canvas.line(frame.px(x0), frame.py(y0), frame.px(x1), frame.py(y1), BLACK, 3);
    }
  }
  if (options.eradicationCurve) {
    const points: Array<readonly [number, number]> = [];
    for (let i = 0; i <= 200; i++) {
      const s = xs[0] + ((xs[xs.length - 1] - xs[0]) * i) / 200;
      const r = eradicationThreshold(options.demography, options.alleeThreshold, s);
      if (r >= ys[0] && r <= ys[ys.length - 1]) points.push([frame.px(s), frame.py(r)]);
    }
    frame.canvas.polyline(points, [20, 20, 20], 5);
  }
  if (options.monostabilityLine) {
    const s = 0.5;
    if (s >= xs[0] && s <= xs[xs.length - 1]) {
      frame.canvas.line(frame.px(s), frame.py(ys[0]), frame.px(s), frame.py(ys[ys.length - 1]),
                        BLACK);
    }
  }

  frame.drawAxes(pickTicks(xs[0], xs[xs.length - 1]), pickTicks(ys[0], ys[ys.length - 1]));
  frame.drawColorbar((v) => divergingColor(v, options.clip), -options.clip, options.clip);
  return encodePng(frame.canvas.width, frame.canvas.height, frame.canvas.pixels);
}

function edges(values: number[]): number[] {
  if (values.length === 1) {
    return [values[0] - 0.5, values[0] + 0.5];
  }
  const out = [values[0] - (values[1] - values[0]) / 2];
  for (let i = 0; i + 1 < values.length; i++) {
    out.push((values[i] + values[i + 1]) / 2);
  }
  out.push(values[values.length - 1] + (values[values.length - 1] - values[values.length - 2]) / 2);
  return out;
}
