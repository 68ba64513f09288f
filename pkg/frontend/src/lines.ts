/** Line chart panel: one or more curves over a shared x axis, with legend. */

import { Rect, PanelInfo } from "./heatmap.js";
import { BLACK, LIGHT_GREY, Raster, SERIES_COLORS, textWidth } from "./raster.js";
import { linearScale, logScale } from "./scale.js";
import { finiteExtent } from "./table.js";

export interface Curve {
  name: string;
  x: number[];
  y: number[];
}

export interface LineChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logX?: boolean;
  logY?: boolean;
}

export function drawLineChart(
  raster: Raster,
  rect: Rect,
  curves: Curve[],
  opts: LineChartOptions,
): PanelInfo {
  const margin = { left: 68, right: 16, top: 22, bottom: 46 };
  const plot: Rect = {
    x: rect.x + margin.left,
    y: rect.y + margin.top,
    w: rect.w - margin.left - margin.right,
    h: rect.h - margin.top - margin.bottom,
  };
  const [xLo, xHi] = finiteExtent(curves.flatMap((c) => c.x));
  const allY = curves.flatMap((c) => c.y);
  const [yLo, yHi] = finiteExtent(allY);
  const pad = yHi > yLo ? 0.04 * (yHi - yLo) : Math.max(1e-12, 0.1 * Math.abs(yHi));

  const sx = (opts.logX ? logScale : linearScale)(xLo, xHi, plot.x, plot.x + plot.w);
  const sy = opts.logY
    ? logScale(yLo, yHi, plot.y + plot.h, plot.y)
    : linearScale(yLo - pad, yHi + pad, plot.y + plot.h, plot.y);

  for (const tick of sx.ticks(6)) {
    const px = Math.round(sx.toPixel(tick.value));
    raster.fillRect(px, plot.y, 1, plot.h, LIGHT_GREY);
    raster.fillRect(px, plot.y + plot.h, 1, 4, BLACK);
    raster.text(px - textWidth(tick.label) / 2, plot.y + plot.h + 7, tick.label, BLACK);
  }
  for (const tick of sy.ticks(6)) {
    const py = Math.round(sy.toPixel(tick.value));
    raster.fillRect(plot.x, py, plot.w, 1, LIGHT_GREY);
    raster.fillRect(plot.x - 4, py, 4, 1, BLACK);
    raster.text(plot.x - 7 - textWidth(tick.label), py - 3, tick.label, BLACK);
  }

  curves.forEach((curve, index) => {
    const color = SERIES_COLORS[index % SERIES_COLORS.length];
    let prev: [number, number] | null = null;
    for (let i = 0; i < curve.x.length; i++) {
      const yv = curve.y[i];
      const xv = curve.x[i];
      if (!Number.isFinite(yv) || !Number.isFinite(xv) ||
          (opts.logY && yv <= 0) || (opts.logX && xv <= 0)) {
        prev = null;
        continue;
      }
      const px = sx.toPixel(xv);
      const py = sy.toPixel(yv);
      if (prev !== null) {
        raster.line(prev[0], prev[1], px, py, color, 2);
      }
      prev = [px, py];
    }
  });

  raster.frame(plot.x, plot.y, plot.w, plot.h, BLACK);
  raster.text(plot.x + (plot.w - textWidth(opts.title)) / 2, rect.y + 6, opts.title, BLACK);
  raster.text(plot.x + (plot.w - textWidth(opts.xLabel)) / 2,
              plot.y + plot.h + 24, opts.xLabel, BLACK);
  raster.textVertical(rect.x + 6, plot.y + (plot.h + textWidth(opts.yLabel)) / 2,
                      opts.yLabel, BLACK);

  // legend, top-right inside the plot
  const entryH = 12;
  const legendW = Math.max(...curves.map((c) => textWidth(c.name))) + 26;
  const legendH = curves.length * entryH + 8;
  const lx = plot.x + plot.w - legendW - 6;
  const ly = plot.y + 6;
  raster.fillRect(lx, ly, legendW, legendH, [255, 255, 255]);
  raster.frame(lx, ly, legendW, legendH, BLACK);
  curves.forEach((curve, index) => {
    const color = SERIES_COLORS[index % SERIES_COLORS.length];
    const ey = ly + 5 + index * entryH;
    raster.fillRect(lx + 5, ey + 2, 12, 3, color);
    raster.text(lx + 21, ey, curve.name, BLACK);
  });

  return { title: opts.title, dataMin: yLo, dataMax: yHi };
}
