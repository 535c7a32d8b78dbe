import { describe, expect, it } from "vitest";
import { zeroContour } from "../src/contour.js";

/** Deterministic pseudo-random values for the property test. */
function lcg(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0;
    return state / 2 ** 32;
  };
}

describe("zero contour", () => {
  it("crosses a simple vertical sign change at the interpolated position", () => {
    const xs = [0, 1];
    const ys = [0, 1];
    const values = [
      [-1, 3],
      [-1, 3],
    ];
    const segments = zeroContour(xs, ys, (ix, iy) => values[iy][ix]);
    expect(segments.length).toBe(1);
    const [x0, , x1] = segments[0];
    expect(x0).toBeCloseTo(0.25, 12);
    expect(x1).toBeCloseTo(0.25, 12);
  });

  it("crosses every sign-change edge of a random field", () => {
    const rand = lcg(2024);
    const xs = Array.from({ length: 9 }, (_, i) => i * 0.5);
    const ys = Array.from({ length: 7 }, (_, i) => i * 1.0);
    const field = ys.map(() => xs.map(() => rand() * 2 - 1));
    const segments = zeroContour(xs, ys, (ix, iy) => field[iy][ix]);

    const touches = (x: number, y: number) =>
      segments.some(([x0, y0, x1, y1]) =>
        (Math.abs(x0 - x) < 1e-9 && Math.abs(y0 - y) < 1e-9) ||
        (Math.abs(x1 - x) < 1e-9 && Math.abs(y1 - y) < 1e-9));

    for (let iy = 0; iy < ys.length; iy++) {
      for (let ix = 0; ix + 1 < xs.length; ix++) {
        const a = field[iy][ix];
        const b = field[iy][ix + 1];
        if (a * b < 0) {
          const xc = xs[ix] + (0 - a) * (xs[ix + 1] - xs[ix]) / (b - a);
          expect(touches(xc, ys[iy]), `horizontal edge (${ix},${iy})`).toBe(true);
        }
      }
    }
    for (let iy = 0; iy + 1 < ys.length; iy++) {
      for (let ix = 0; ix < xs.length; ix++) {
        const a = field[iy][ix];
        const b = field[iy + 1][ix];
        if (a * b < 0) {
          const yc = ys[iy] + (0 - a) * (ys[iy + 1] - ys[iy]) / (b - a);
          expect(touches(xs[ix], yc), `vertical edge (${ix},${iy})`).toBe(true);
        }
      }
    }
  });

  it("skips cells containing NaN", () => {
    const xs = [0, 1, 2];
    const ys = [0, 1];
    const values = [
      [-1, NaN, 1],
      [-1, NaN, 1],
    ];
    expect(zeroContour(xs, ys, (ix, iy) => values[iy][ix])).toEqual([]);
  });
});
