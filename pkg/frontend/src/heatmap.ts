/** Heatmap panel: parameter-plane grid on log axes with a labeled colorbar. */

import { MISSING_COLOR, viridis } from "./colormap.js";
import { BLACK, GREY, Raster, textWidth } from "./raster.js";
import { formatTick, linearScale, logScale } from "./scale.js";
import { SweepGrid, finiteExtent } from "./table.js";

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface PanelInfo {
  title: string;
  dataMin: number;
  dataMax: number;
}

export interface HeatmapOptions {
  title: string;
  logX: boolean;
  logY: boolean;
  xLabel: string;
  yLabel: string;
}

/** Cell edges midway between sample positions (in scale space). */
function edges(values: number[], log: boolean): number[] {
  const pos = log ? values.map(Math.log10) : values.slice();
  const out: number[] = [pos[0] - (pos.length > 1 ? (pos[1] - pos[0]) / 2 : 0.5)];
  for (let i = 0; i + 1 < pos.length; i++) {
    out.push((pos[i] + pos[i + 1]) / 2);
  }
  const n = pos.length;
  out.push(pos[n - 1] + (n > 1 ? (pos[n - 1] - pos[n - 2]) / 2 : 0.5));
  return log ? out.map((p) => 10 ** p) : out;
}

export function drawHeatmap(
  raster: Raster,
  rect: Rect,
  grid: SweepGrid,
  opts: HeatmapOptions,
): PanelInfo {
  const margin = { left: 62, right: 74, top: 22, bottom: 46 };
  const plot: Rect = {
    x: rect.x + margin.left,
    y: rect.y + margin.top,
    w: rect.w - margin.left - margin.right,
    h: rect.h - margin.top - margin.bottom,
  };
  const [lo, hi] = finiteExtent(grid.values.flat());
  const span = hi > lo ? hi - lo : 1.0;

  const sx = (opts.logX ? logScale : linearScale)(
    Math.min(...grid.gammas), Math.max(...grid.gammas), plot.x, plot.x + plot.w);
  const sy = (opts.logY ? logScale : linearScale)(
    Math.min(...grid.deltas), Math.max(...grid.deltas), plot.y + plot.h, plot.y);

  const xEdges = edges(grid.gammas, opts.logX).map((v) => Math.round(sx.toPixel(v)));
  const yEdges = edges(grid.deltas, opts.logY).map((v) => Math.round(sy.toPixel(v)));
  for (let j = 0; j < grid.deltas.length; j++) {
    for (let i = 0; i < grid.gammas.length; i++) {
      const v = grid.values[j][i];
      const color = Number.isFinite(v) ? viridis((v - lo) / span) : MISSING_COLOR;
      const x0 = Math.max(plot.x, Math.min(xEdges[i], xEdges[i + 1]));
      const x1 = Math.min(plot.x + plot.w, Math.max(xEdges[i], xEdges[i + 1]));
      const yTop = Math.max(plot.y, Math.min(yEdges[j], yEdges[j + 1]));
      const yBot = Math.min(plot.y + plot.h, Math.max(yEdges[j], yEdges[j + 1]));
      raster.fillRect(x0, yTop, Math.max(1, x1 - x0), Math.max(1, yBot - yTop), color);
    }
  }
  raster.frame(plot.x, plot.y, plot.w, plot.h, BLACK);

  for (const tick of sx.ticks(5)) {
    const px = Math.round(sx.toPixel(tick.value));
    raster.fillRect(px, plot.y + plot.h, 1, 4, BLACK);
    raster.text(px - textWidth(tick.label) / 2, plot.y + plot.h + 7, tick.label, BLACK);
  }
  for (const tick of sy.ticks(5)) {
    const py = Math.round(sy.toPixel(tick.value));
    raster.fillRect(plot.x - 4, py, 4, 1, BLACK);
    raster.text(plot.x - 7 - textWidth(tick.label), py - 3, tick.label, BLACK);
  }
  raster.text(
    plot.x + (plot.w - textWidth(opts.xLabel)) / 2,
    plot.y + plot.h + 24, opts.xLabel, BLACK);
  raster.textVertical(
    rect.x + 6, plot.y + (plot.h + textWidth(opts.yLabel)) / 2, opts.yLabel, BLACK);
  raster.text(
    plot.x + (plot.w - textWidth(opts.title)) / 2, rect.y + 6, opts.title, BLACK);

  // colorbar
  const bar: Rect = { x: plot.x + plot.w + 14, y: plot.y, w: 14, h: plot.h };
  for (let y = 0; y < bar.h; y++) {
    const t = 1 - y / Math.max(1, bar.h - 1);
    const color = viridis(t);
    raster.fillRect(bar.x, bar.y + y, bar.w, 1, color);
  }
  raster.frame(bar.x, bar.y, bar.w, bar.h, BLACK);
  raster.text(bar.x + bar.w + 4, bar.y - 3, formatTick(hi), GREY);
  raster.text(bar.x + bar.w + 4, bar.y + bar.h - 4, formatTick(lo), GREY);

  return { title: opts.title, dataMin: lo, dataMax: hi };
}
