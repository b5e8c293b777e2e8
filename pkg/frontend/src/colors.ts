import { Nash } from "./schema";

export type Rgb = [number, number, number];

// Diverging endpoints: blue for the protected pool / positive gradients,
// red for the unprotected pool / negative ones, white at zero.
export const BLUE: Rgb = [33, 102, 172];
export const RED: Rgb = [178, 24, 43];
export const WHITE: Rgb = [255, 255, 255];
export const OVERLAY: Rgb = [40, 40, 40];
export const CONTOUR: Rgb = [8, 24, 98]; // dark blue marker line

function mix(from: Rgb, to: Rgb, t: number): Rgb {
  const clamped = Math.min(Math.max(t, 0), 1);
  return [
    Math.round(from[0] + (to[0] - from[0]) * clamped),
    Math.round(from[1] + (to[1] - from[1]) * clamped),
    Math.round(from[2] + (to[2] - from[2]) * clamped),
  ];
}

/** White-to-blue for positive values, white-to-red for negative, saturating
 * at +-clampAt. Infinities saturate fully. */
export function divergingColor(value: number, clampAt: number): Rgb {
  if (value === 0) return WHITE;
  const magnitude = Math.min(Math.abs(value) / clampAt, 1);
  return mix(WHITE, value > 0 ? BLUE : RED, magnitude);
}

export function nashColor(nash: Nash): Rgb {
  switch (nash) {
    case "PoolN":
      return BLUE;
    case "PoolW":
      return RED;
    case "All":
      return WHITE;
  }
}
