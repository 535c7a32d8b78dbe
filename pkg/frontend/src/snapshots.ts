/**
 * Multi-panel profile figure from a snapshot CSV (t,x,u1,u2): up to six
 * evenly spaced times, one panel each, u1 in blue and u2 in green.
 */

import { numeric, readCsv, requireColumns } from "./csv.js";
import { encodePng } from "./png.js";
import { BLACK, Canvas, Color, GRAY, textWidth } from "./raster.js";

export interface SnapshotOptions {
  input: string;
  output: string;
  panels: number;
  width: number;
  height: number;
}

export const SNAPSHOT_DEFAULTS = { panels: 6, width: 720, height: 460 };

const U1_COLOR: Color = [40, 80, 220];
const U2_COLOR: Color = [30, 160, 60];

interface Snapshot {
  t: number;
  x: number[];
  u1: number[];
  u2: number[] | null;
}

export function loadSnapshots(path: string): Snapshot[] {
  const table = readCsv(path);
  const cols = requireColumns(table, ["t", "x", "u1", "u2"], path);
  const byTime = new Map<number, { x: number[]; u1: number[]; u2: number[]; hasU2: boolean }>();
  for (const row of table.rows) {
    const t = numeric(row, cols.get("t")!);
    let bucket = byTime.get(t);
    if (!bucket) {
      bucket = { x: [], u1: [], u2: [], hasU2: true };
      byTime.set(t, bucket);
    }
    bucket.x.push(numeric(row, cols.get("x")!));
    bucket.u1.push(numeric(row, cols.get("u1")!));
    const rawU2 = row[cols.get("u2")!];
    if (rawU2 === "" || rawU2 === undefined) {
      bucket.hasU2 = false;
    } else {
      bucket.u2.push(Number(rawU2));
    }
  }
  return [...byTime.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([t, b]) => ({ t, x: b.x, u1: b.u1, u2: b.hasU2 ? b.u2 : null }));
}

export function renderSnapshots(options: SnapshotOptions): Buffer {
  const snaps = loadSnapshots(options.input);
  const count = Math.min(options.panels, snaps.length);
  const picks = count === 1
    ? [snaps[0]]
    : Array.from({ length: count }, (_, i) =>
        snaps[Math.round((i * (snaps.length - 1)) / (count - 1))]);

  const cols = Math.min(2, count);
  const rows = Math.ceil(count / cols);
  const canvas = new Canvas(options.width, options.height);
  const panelW = Math.floor(options.width / cols);
  const panelH = Math.floor(options.height / rows);

  const xMin = Math.min(...picks[0].x);
  const xMax = Math.max(...picks[0].x);
  let yMax = 0;
  for (const snap of picks) {
    yMax = Math.max(yMax, ...snap.u1);
    if (snap.u2) yMax = Math.max(yMax, ...snap.u2);
  }
  yMax = Math.max(1.0, yMax) * 1.05;

  picks.forEach((snap, k) => {
    const px0 = (k % cols) * panelW + 34;
    const py0 = Math.floor(k / cols) * panelH + 16;
    const w = panelW - 44;
    const h = panelH - 34;
    const mapX = (x: number) => px0 + ((x - xMin) / (xMax - xMin)) * w;
    const mapY = (v: number) => py0 + (1 - v / yMax) * h;
    canvas.line(px0, py0, px0, py0 + h, GRAY);
    canvas.line(px0, py0 + h, px0 + w, py0 + h, GRAY);
    const drawField = (xs: number[], vs: number[], color: Color) => {
      const pts = xs.map((x, i) => [mapX(x), mapY(vs[i])] as const);
      canvas.polyline(pts, color);
    };
    drawField(snap.x, snap.u1, U1_COLOR);
    if (snap.u2) drawField(snap.x, snap.u2, U2_COLOR);
    const label = `t=${Math.round(snap.t * 100) / 100}`;
    canvas.text(px0 + w - textWidth(label) - 2, py0 + 2, label, BLACK);
    canvas.text(px0 - 30, py0 - 2, "1", BLACK);
    canvas.text(px0 - 30, py0 + h - 6, "0", BLACK);
  });

  return encodePng(canvas.width, canvas.height, canvas.pixels);
}
