/**
 * Zero-level contour of a scalar field sampled on a rectangular grid,
 * by marching squares with linear interpolation along cell edges.
 *
 * Cells containing NaN values are skipped.  By construction every grid
 * edge whose endpoints have strictly opposite signs is crossed by exactly
 * one emitted segment endpoint.
 */

export type Segment = readonly [number, number, number, number]; // x0,y0,x1,y1 in data units

function interp(a: number, b: number, va: number, vb: number): number {
  return a + (0 - va) * (b - a) / (vb - va);
}

export function zeroContour(
  xs: number[],
  ys: number[],
  value: (ix: number, iy: number) => number,
): Segment[] {
  const segments: Segment[] = [];
  for (let iy = 0; iy < ys.length - 1; iy++) {
    for (let ix = 0; ix < xs.length - 1; ix++) {
      const v00 = value(ix, iy);
      const v10 = value(ix + 1, iy);
      const v01 = value(ix, iy + 1);
      const v11 = value(ix + 1, iy + 1);
      if ([v00, v10, v01, v11].some((v) => !Number.isFinite(v))) continue;
      const crossings: Array<readonly [number, number]> = [];
      if (v00 * v10 < 0) crossings.push([interp(xs[ix], xs[ix + 1], v00, v10), ys[iy]]);
      if (v01 * v11 < 0) crossings.push([interp(xs[ix], xs[ix + 1], v01, v11), ys[iy + 1]]);
      if (v00 * v01 < 0) crossings.push([xs[ix], interp(ys[iy], ys[iy + 1], v00, v01)]);
      if (v10 * v11 < 0) crossings.push([xs[ix + 1], interp(ys[iy], ys[iy + 1], v10, v11)]);
      // 0, 2 or 4 crossings; pair them in order (the saddle case pairs
      // bottom-left and top-right arbitrarily but consistently)
      for (let k = 0; k + 1 < crossings.length; k += 2) {
        const [x0, y0] = crossings[k];
        const [x1, y1] = crossings[k + 1];
        segments.push([x0, y0, x1, y1]);
      }
    }
  }
  return segments;
}
