/**
 * Figure assembly: map input CSV files plus a figure kind to a PNG on disk.
 *
 * Rendering is read-only over the inputs: the reported per-panel dataMin and
 * dataMax are taken from the parsed values before any axis transform, so
 * they must equal the min/max of the CSV contents exactly.
 */

import { basename } from "node:path";
import { readFileSync, writeFileSync } from "node:fs";

import { CsvFormatError, CsvTable, parseCsv } from "./csv.js";
import { PanelInfo, Rect, drawHeatmap } from "./heatmap.js";
import { Curve, drawLineChart } from "./lines.js";
import { encodePng } from "./png.js";
import { Raster } from "./raster.js";
import { numericColumn, stringColumn } from "./csv.js";
import { sweepGrid } from "./table.js";

export const FIGURE_KINDS = [
  "heatmap", "lines", "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7",
] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  /** columns to plot for line kinds; default depends on the kind */
  columns?: string[];
  logX?: boolean;
  logY?: boolean;
  title?: string;
}

export interface RenderResult {
  output: string;
  width: number;
  height: number;
  panels: PanelInfo[];
}

const GAMMA_LABEL = "gamma0/lambda";
const DELTA_LABEL = "delta/lambda";
const TIME_LABEL = "lambda t";

function load(path: string): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvFormatError(`cannot read ${path}: ${(err as Error).message}`);
  }
  try {
    return parseCsv(text);
  } catch (err) {
    if (err instanceof CsvFormatError) {
      err.message = `${path}: ${err.message}`;
    }
    throw err;
  }
}

function fileLabel(path: string): string {
  return basename(path).replace(/\.[^.]*$/, "");
}

function requireInputs(spec: FigureSpec, count: number): void {
  if (spec.inputs.length !== count) {
    throw new CsvFormatError(
      `${spec.kind} needs exactly ${count} input file(s), got ${spec.inputs.length}`,
    );
  }
}

function heatmapPanel(
  raster: Raster,
  rect: Rect,
  path: string,
  spec: FigureSpec,
): PanelInfo {
  const table = load(path);
  const grid = sweepGrid(table);
  const title = spec.title ?? `${grid.quantity} (${TIME_LABEL} = ${grid.lambdaT})`;
  return drawHeatmap(raster, rect, grid, {
    title,
    logX: spec.logX ?? true,
    logY: spec.logY ?? true,
    xLabel: GAMMA_LABEL,
    yLabel: DELTA_LABEL,
  });
}

function seriesCurves(path: string, columns: string[], suffix: boolean): Curve[] {
  const table = load(path);
  const x = numericColumn(table, "lambda_t");
  return columns.map((name) => ({
    name: suffix ? `${name}: ${fileLabel(path)}` : name,
    x,
    y: numericColumn(table, name),
  }));
}

export function renderFigure(spec: FigureSpec): RenderResult {
  if (spec.inputs.length === 0) {
    throw new CsvFormatError("no input files given");
  }
  const panels: PanelInfo[] = [];
  let raster: Raster;

  switch (spec.kind) {
    case "heatmap":
    case "fig1":
    case "fig5": {
      requireInputs(spec, 1);
      raster = new Raster(640, 520);
      panels.push(heatmapPanel(raster, { x: 0, y: 0, w: 640, h: 520 }, spec.inputs[0], spec));
      break;
    }
    case "fig6":
    case "fig7": {
      requireInputs(spec, 4);
      const w = 590;
      const h = 480;
      raster = new Raster(2 * w, 2 * h);
      spec.inputs.forEach((path, i) => {
        const rect = { x: (i % 2) * w, y: Math.floor(i / 2) * h, w, h };
        panels.push(heatmapPanel(raster, rect, path, { ...spec, title: undefined }));
      });
      break;
    }
    case "fig2": {
      requireInputs(spec, 2);
      raster = new Raster(760, 520);
      const curves = spec.inputs.flatMap((path) =>
        seriesCurves(path, ["trace_dist_to_stationary"], false).map((c) => ({
          ...c,
          name: fileLabel(path).replace(/^fig2_/, ""),
        })),
      );
      panels.push(drawLineChart(raster, { x: 0, y: 0, w: 760, h: 520 }, curves, {
        title: spec.title ?? "distance to the stationary state",
        xLabel: TIME_LABEL,
        yLabel: "trace distance",
        logX: spec.logX ?? false,
        logY: spec.logY ?? false,
      }));
      break;
    }
    case "fig3":
    case "fig4": {
      requireInputs(spec, 2);
      const columns = spec.columns ??
        (spec.kind === "fig3"
          ? ["tau_quant", "tau_op", "tau_av", "tau_min"]
          : ["v_quant", "v_op", "v_av", "v_min"]);
      const h = 500;
      raster = new Raster(760, 2 * h);
      spec.inputs.forEach((path, i) => {
        const curves = seriesCurves(path, columns, false);
        panels.push(drawLineChart(raster, { x: 0, y: i * h, w: 760, h }, curves, {
          title: fileLabel(path),
          xLabel: TIME_LABEL,
          yLabel: spec.kind === "fig3" ? "bound time" : "average velocity",
          logX: spec.logX ?? false,
          logY: spec.logY ?? false,
        }));
      });
      break;
    }
    case "lines": {
      const first = load(spec.inputs[0]);
      const defaultColumns = first.columns.filter(
        (c) => c !== "lambda_t" && c !== "status" && c !== "quantity" && c !== "gamma_valid",
      );
      const columns = spec.columns ?? defaultColumns;
      raster = new Raster(760, 520);
      const multi = spec.inputs.length > 1;
      const curves = spec.inputs.flatMap((path) => seriesCurves(path, columns, multi));
      panels.push(drawLineChart(raster, { x: 0, y: 0, w: 760, h: 520 }, curves, {
        title: spec.title ?? "",
        xLabel: TIME_LABEL,
        yLabel: "",
        logX: spec.logX ?? false,
        logY: spec.logY ?? false,
      }));
      break;
    }
    default: {
      throw new CsvFormatError(`unknown figure kind '${spec.kind}'`);
    }
  }

  writeFileSync(spec.output, encodePng(raster.width, raster.height, raster.data));
  return { output: spec.output, width: raster.width, height: raster.height, panels };
}

/** Independent min/max over a sweep file's ok-valued cells (for checks). */
export function sweepValueExtent(path: string): [number, number] {
  const table = load(path);
  const values = numericColumn(table, "value");
  const status = stringColumn(table, "status");
  const ok = values.filter((_, i) => status[i] === "ok" && Number.isFinite(values[i]));
  return [Math.min(...ok), Math.max(...ok)];
}
