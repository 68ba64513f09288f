/**
 * Render djcqsl CSV data files to PNG figures.
 *
 * Usage:
 *   node dist/cli.js <kind> --in data.csv [--in more.csv ...] --out fig.png
 *                    [--columns a,b] [--title text] [--log-x] [--log-y]
 *
 * Kinds: heatmap, lines, fig1, fig2, fig3, fig4, fig5, fig6, fig7.
 * Exit codes: 0 success, 1 usage error, 2 render failure.
 */

import { CsvFormatError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, FigureSpec, renderFigure } from "./figures.js";

class UsageError extends Error {}

export function parseArgs(argv: string[]): FigureSpec {
  if (argv.length === 0) {
    throw new UsageError(`missing figure kind; expected one of: ${FIGURE_KINDS.join(", ")}`);
  }
  const kind = argv[0] as FigureKind;
  if (!FIGURE_KINDS.includes(kind)) {
    throw new UsageError(
      `unknown figure kind '${argv[0]}'; expected one of: ${FIGURE_KINDS.join(", ")}`,
    );
  }
  const spec: FigureSpec = { kind, inputs: [], output: "" };
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) {
        throw new UsageError(`${arg} needs a value`);
      }
      return argv[i];
    };
    switch (arg) {
      case "--in":
        spec.inputs.push(next());
        break;
      case "--out":
        spec.output = next();
        break;
      case "--columns":
        spec.columns = next().split(",").map((c) => c.trim()).filter(Boolean);
        break;
      case "--title":
        spec.title = next();
        break;
      case "--log-x":
        spec.logX = true;
        break;
      case "--log-y":
        spec.logY = true;
        break;
      default:
        throw new UsageError(`unknown flag '${arg}'`);
    }
  }
  if (spec.inputs.length === 0) {
    throw new UsageError("at least one --in file is required");
  }
  if (!spec.output) {
    throw new UsageError("--out is required");
  }
  return spec;
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`djcqsl-plots: ${err.message}`);
      return 1;
    }
    throw err;
  }
  try {
    const result = renderFigure(spec);
    console.log(`${result.output} (${result.width}x${result.height})`);
    for (const panel of result.panels) {
      console.log(`  ${panel.title || "(panel)"}: data range [${panel.dataMin}, ${panel.dataMax}]`);
    }
    return 0;
  } catch (err) {
    if (err instanceof CsvFormatError) {
      console.error(`djcqsl-plots: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
