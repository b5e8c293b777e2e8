import { PNG } from "pngjs";
import { CONTOUR, OVERLAY, Rgb, divergingColor, nashColor } from "./colors";
import { SweepGrid } from "./schema";

export type ValueColumn = "nash" | "delta_f";

export interface RenderSpec {
  value: ValueColumn;
  /** Saturation magnitude for delta_f rendering. */
  clamp: number;
  /** Draw the two participation-bound curves; needs the pool fee. */
  overlayThresholds: boolean;
  fee: number;
  /** Mark a dotted |delta_f| = level contour, if set. */
  contourLevel?: number;
}

export const DEFAULT_SPEC: RenderSpec = {
  value: "delta_f",
  clamp: 0.02,
  overlayThresholds: false,
  fee: 0.003,
  contourLevel: undefined,
};

/** One image pixel per grid point: column i is alphas[i] (left to right),
 * row 0 is the largest slippage (top), so the origin sits bottom-left. */
export function renderHeatmap(grid: SweepGrid, spec: RenderSpec): PNG {
  const width = grid.alphas.length;
  const height = grid.slippages.length;
  const png = new PNG({ width, height });

  const put = (ai: number, si: number, [r, g, b]: Rgb) => {
    const y = height - 1 - si;
    const offset = (y * width + ai) * 4;
    png.data[offset] = r;
    png.data[offset + 1] = g;
    png.data[offset + 2] = b;
    png.data[offset + 3] = 255;
  };

  for (let si = 0; si < height; si++) {
    for (let ai = 0; ai < width; ai++) {
      const row = grid.rows[si][ai];
      const color =
        spec.value === "nash" ? nashColor(row.nash) : divergingColor(row.deltaF, spec.clamp);
      put(ai, si, color);
    }
  }

  if (spec.contourLevel !== undefined) {
    drawContour(grid, spec.contourLevel, put);
  }
  if (spec.overlayThresholds) {
    drawThresholds(grid, spec.fee, put);
  }
  return png;
}

type PutPixel = (ai: number, si: number, color: Rgb) => void;

/** Dotted marker wherever |delta_f| crosses the level between neighbors. */
function drawContour(grid: SweepGrid, level: number, put: PutPixel) {
  const width = grid.alphas.length;
  const height = grid.slippages.length;
  const side = (si: number, ai: number) => {
    const v = Math.abs(grid.rows[si][ai].deltaF);
    return v >= level ? 1 : -1;
  };
  for (let si = 0; si < height; si++) {
    for (let ai = 0; ai < width; ai++) {
      if ((ai + si) % 2 !== 0) continue; // dotted
      const here = side(si, ai);
      const crossesRight = ai + 1 < width && side(si, ai + 1) !== here;
      const crossesUp = si + 1 < height && side(si + 1, ai) !== here;
      if (crossesRight || crossesUp) {
        put(ai, si, CONTOUR);
      }
    }
  }
}

function nearestIndex(values: number[], target: number): number | undefined {
  if (target < values[0] || target > values[values.length - 1]) return undefined;
  let best = 0;
  for (let i = 1; i < values.length; i++) {
    if (Math.abs(values[i] - target) < Math.abs(values[best] - target)) best = i;
  }
  return best;
}

/** The protected-pool participation bound is a vertical line in the benefit
 * axis; the unprotected-pool bound rises with the slippage tolerance. */
function drawThresholds(grid: SweepGrid, fee: number, put: PutPixel) {
  const boundN = fee / (1 - fee);
  const columnN = nearestIndex(grid.alphas, boundN);
  for (let si = 0; si < grid.slippages.length; si++) {
    if (columnN !== undefined) {
      put(columnN, si, OVERLAY);
    }
    const s = grid.slippages[si];
    const boundW = (fee + s - s * fee) / ((1 - fee) * (1 - s));
    const columnW = nearestIndex(grid.alphas, boundW);
    if (columnW !== undefined) {
      put(columnW, si, OVERLAY);
    }
  }
}
