/** Viridis colormap (piecewise-linear over the standard anchor points). */

import { Color } from "./raster.js";

const ANCHORS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export const MISSING_COLOR: Color = [235, 235, 235];

export function viridis(t: number): Color {
  if (!Number.isFinite(t)) {
    return MISSING_COLOR;
  }
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (ANCHORS.length - 1);
  const i = Math.min(ANCHORS.length - 2, Math.floor(pos));
  const frac = pos - i;
  const a = ANCHORS[i];
  const b = ANCHORS[i + 1];
  return [
    Math.round(a[0] + (b[0] - a[0]) * frac),
    Math.round(a[1] + (b[1] - a[1]) * frac),
    Math.round(a[2] + (b[2] - a[2]) * frac),
  ];
}
