"""Command-line front end: evolve, bounds, sweep, figure.

Output dialect: comma-separated CSV, '.' decimal, LF line endings, one
header row, floats at 17 significant digits (lossless round-trip); metadata
rides in '#'-prefixed comment lines above the header. JSON output mirrors the
same columns. Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__ as _version
from ._kernels import propagator_table
from .bounds import bounds_report, bounds_series
from .errors import DjcqslError, InvalidInputError
from .model import G_SINGULAR_FLOOR, ModelParams
from .path import TimeGrid, sample_path
from .sweep import (
    MARKOVIAN_PARAMS,
    NON_MARKOVIAN_PARAMS,
    SWEEP_QUANTITIES,
    GridSpec,
    SweepTable,
    parse_grid_spec,
    parse_initial,
    run_sweep,
)

USAGE_EXIT = 1
NUMERICAL_EXIT = 2
MAX_SERIES_ROWS = 20_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def _write_csv(path_or_none, metadata: dict, columns: list[str], rows) -> None:
    lines = [f"# {k}: {v}" for k, v in metadata.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path_or_none is None:
        sys.stdout.write(text)
    else:
        with open(path_or_none, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _write_json(path_or_none, metadata: dict, columns: list[str], rows) -> None:
    payload = {
        "metadata": metadata,
        "columns": columns,
        "data": [[None if isinstance(v, float) and math.isnan(v) else v for v in row]
                 for row in rows],
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path_or_none is None:
        sys.stdout.write(text)
    else:
        with open(path_or_none, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _emit(fmt, out, metadata, columns, rows):
    if fmt == "json":
        _write_json(out, metadata, columns, rows)
    else:
        _write_csv(out, metadata, columns, rows)


def _thin_indices(n: int, cap: int) -> np.ndarray:
    if n <= cap:
        return np.arange(n)
    stride = int(math.ceil(n / cap))
    idx = np.arange(0, n, stride)
    if idx[-1] != n - 1:
        idx = np.append(idx, n - 1)
    return idx


def _base_metadata(command: str, p: ModelParams | None = None, **extra) -> dict:
    md = {"tool": f"djcqsl {command}", "version": _version}
    if p is not None:
        md["gamma0_over_lambda"] = f"{p.gamma0_over_lambda:.17g}"
        md["delta_over_lambda"] = f"{p.delta_over_lambda:.17g}"
    md.update({k: str(v) for k, v in extra.items()})
    return md


def cmd_evolve(args) -> int:
    p = ModelParams(args.gamma0, args.delta)
    rho0 = parse_initial(args.initial)
    if args.steps is not None:
        if args.steps < 1:
            raise InvalidInputError("--steps must be >= 1")
        grid = TimeGrid.uniform(args.tmax, args.tmax / args.steps)
    else:
        grid = TimeGrid.for_params(p, args.tmax)
    samples = sample_path(p, rho0, grid)
    G, G_dot = propagator_table(p.gamma0_over_lambda, p.delta_over_lambda, grid.times)
    abs_G = np.abs(G)
    valid = abs_G > G_SINGULAR_FLOOR
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(valid, -2.0 * np.real(G_dot / np.where(valid, G, 1.0)), math.nan)
    dist = samples.trace_dist_to_stationary
    if np.any((dist < -1e-12) | (dist > 1.0 + 1e-9)) or np.any(abs_G > 1.0 + 1e-9):
        raise DjcqslError("output violates state-distance invariants")
    idx = _thin_indices(len(grid), MAX_SERIES_ROWS if args.steps is None else len(grid))
    rows = [
        (float(grid.times[k]), float(dist[k]), float(abs_G[k]),
         float(gamma[k]), int(valid[k]))
        for k in idx
    ]
    md = _base_metadata("evolve", p, initial=args.initial, tmax=args.tmax,
                        rows=len(rows), grid_points=len(grid))
    _emit(args.format, args.out, md,
          ["lambda_t", "trace_dist_to_stationary", "abs_G",
           "gamma_t_over_lambda", "gamma_valid"], rows)
    return 0


_BOUNDS_COLS = ["lambda_t", "bures_angle_L", "sin2_L", "quantumness_target",
                "tau_min", "tau_av", "tau_op", "tau_hs", "tau_tr", "tau_quant",
                "v_min", "v_av", "v_op", "v_hs", "v_tr", "v_quant"]


def cmd_bounds(args) -> int:
    p = ModelParams(args.gamma0, args.delta)
    rho0 = parse_initial(args.initial)
    grid = TimeGrid.for_params(p, args.tmax)
    md = _base_metadata("bounds", p, initial=args.initial, tmax=args.tmax)
    if args.series:
        samples = sample_path(p, rho0, grid)
        series = bounds_series(samples)
        idx = _thin_indices(len(samples), args.series_points)
        rows = [tuple(float(series[c][k]) for c in _BOUNDS_COLS) for k in idx]
        md["rows"] = str(len(rows))
        _emit(args.format, args.out, md, _BOUNDS_COLS, rows)
        return 0
    report = bounds_report(p, rho0, args.tmax, grid)
    values = {
        "lambda_t": report.lambda_t_final,
        "bures_angle_L": report.bures_angle_L,
        "sin2_L": report.sin2_L,
        "quantumness_target": report.quantumness_target,
        "tau_min": report.tau_min, "tau_av": report.tau_av, "tau_op": report.tau_op,
        "tau_hs": report.tau_hs, "tau_tr": report.tau_tr, "tau_quant": report.tau_quant,
        "v_min": report.v_min, "v_av": report.v_av, "v_op": report.v_op,
        "v_hs": report.v_hs, "v_tr": report.v_tr, "v_quant": report.v_quant,
    }
    if args.format == "json":
        _write_json(args.out, md, _BOUNDS_COLS, [[values[c] for c in _BOUNDS_COLS]])
    else:
        _write_csv(args.out, md, _BOUNDS_COLS, [tuple(values[c] for c in _BOUNDS_COLS)])
    return 0


_SWEEP_COLS = ["gamma0_over_lambda", "delta_over_lambda", "lambda_t",
               "quantity", "value", "status"]


def _emit_sweep(table: SweepTable, fmt: str, out) -> None:
    _emit(fmt, out, table.metadata, _SWEEP_COLS, table.rows)


def cmd_sweep(args) -> int:
    spec = parse_grid_spec(args.grid) if args.grid else GridSpec()
    quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip()) \
        if args.quantities else SWEEP_QUANTITIES
    table = run_sweep(spec, quantities, jobs=args.jobs)
    _emit_sweep(table, args.format, args.out)
    return 0


FIGURE_PRESETS = {
    "fig1": "channel measure over the default parameter grid, lambda_t = 1000",
    "fig2": "distance to the stationary state vs time, both regimes",
    "fig3": "bound times vs final time, both regimes",
    "fig4": "bound velocities vs final time, both regimes",
    "fig5a": "path measure grid at lambda_t = 1",
    "fig5b": "path measure grid at lambda_t = 100",
    "fig6": "four bound-time grids at lambda_t = 1",
    "fig7": "four bound-time grids at lambda_t = 100",
}

_SERIES_PARAMS = (("markovian", MARKOVIAN_PARAMS), ("non_markovian", NON_MARKOVIAN_PARAMS))


def _figure_series(kind: str, out_dir: str, columns: list[str], tmax: float) -> list[str]:
    paths = []
    for label, p in _SERIES_PARAMS:
        grid = TimeGrid.for_params(p, tmax)
        samples = sample_path(p, parse_initial("x+"), grid)
        series = bounds_series(samples)
        idx = _thin_indices(len(samples), 2000)
        rows = [tuple(float(series[c][k]) for c in columns) for k in idx]
        md = _base_metadata(f"figure {kind}", p, initial="x+", tmax=tmax, regime=label)
        path = os.path.join(out_dir, f"{kind}_{label}.csv")
        _write_csv(path, md, columns, rows)
        paths.append(path)
    return paths


def _figure_grid(kind: str, out_dir: str, quantity: str, tmax: float,
                 jobs, panel: str = "", axes: GridSpec | None = None) -> list[str]:
    if axes is None:
        spec = GridSpec(lambda_t_final=tmax)
    else:
        spec = GridSpec(axes.gamma0_axis, axes.delta_axis, tmax, "x+")
    table = run_sweep(spec, (quantity,), jobs=jobs)
    table.metadata["tool"] = f"djcqsl figure {kind}"
    path = os.path.join(out_dir, f"{kind}{panel}_{quantity}.csv")
    _write_csv(path, table.metadata, _SWEEP_COLS, table.rows)
    return [path]


def cmd_figure(args) -> int:
    kind = args.preset
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    jobs = args.jobs
    axes = parse_grid_spec(args.grid) if args.grid else None
    written: list[str] = []
    if kind == "fig1":
        written += _figure_grid(kind, out_dir, "blp_N", 1000.0, jobs, axes=axes)
    elif kind == "fig2":
        for label, p in _SERIES_PARAMS:
            ns = argparse.Namespace(
                gamma0=p.gamma0_over_lambda, delta=p.delta_over_lambda,
                initial="x+", tmax=200.0, steps=None, format="csv",
                out=os.path.join(out_dir, f"fig2_{label}.csv"),
            )
            cmd_evolve(ns)
            written.append(ns.out)
    elif kind == "fig3":
        cols = ["lambda_t", "bures_angle_L", "sin2_L", "quantumness_target",
                "tau_min", "tau_av", "tau_op", "tau_hs", "tau_tr", "tau_quant"]
        written += _figure_series(kind, out_dir, cols, 1000.0)
    elif kind == "fig4":
        cols = ["lambda_t", "v_min", "v_av", "v_op", "v_hs", "v_tr", "v_quant"]
        written += _figure_series(kind, out_dir, cols, 1000.0)
    elif kind in ("fig5a", "fig5b"):
        written += _figure_grid(kind, out_dir, "path_N_tilde",
                                1.0 if kind == "fig5a" else 100.0, jobs, axes=axes)
    elif kind in ("fig6", "fig7"):
        tmax = 1.0 if kind == "fig6" else 100.0
        for panel, quantity in zip("abcd", ("tau_quant", "tau_op", "tau_av", "tau_min")):
            written += _figure_grid(kind, out_dir, quantity, tmax, jobs, panel, axes=axes)
    else:  # argparse choices make this unreachable
        raise InvalidInputError(f"unknown preset {kind!r}")
    for path in written:
        print(path)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="djcqsl", description=__doc__)
    parser.add_argument("--version", action="version", version=f"djcqsl {_version}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, tmax_required=True):
        sp.add_argument("--gamma0", type=float, required=True,
                        help="effective coupling gamma0/lambda")
        sp.add_argument("--delta", type=float, required=True,
                        help="detuning delta/lambda")
        sp.add_argument("--initial", default="x+",
                        help="x+|x-|y+|y-|z+|z- or bloch:x,y,z")
        sp.add_argument("--tmax", type=float, required=tmax_required,
                        help="final time lambda*t")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("evolve", help="time series of the distance to the "
                        "stationary state, |G| and the decay rate")
    add_common(sp)
    sp.add_argument("--steps", type=int, default=None,
                    help="use a uniform grid with this many steps instead of "
                    "the oscillation-resolving policy grid")
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("bounds", help="speed-limit bound report at the final time")
    add_common(sp)
    sp.add_argument("--series", action="store_true",
                    help="emit the bounds at every grid time")
    sp.add_argument("--series-points", type=int, default=2000,
                    help="maximum rows in --series output")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("sweep", help="evaluate quantities over a parameter grid")
    sp.add_argument("--grid", default=None,
                    help="inline spec gamma0=a:b:n:log,delta=...,tmax=...,initial=... "
                    "or a key=value config file (default: standard figure grid)")
    sp.add_argument("--quantities", default=None,
                    help="comma list from: " + ",".join(SWEEP_QUANTITIES))
    sp.add_argument("--jobs", type=int, default=None,
                    help="worker processes (default: available parallelism)")
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("figure", help="emit the data files for a figure preset")
    sp.add_argument("preset", choices=sorted(FIGURE_PRESETS),
                    help="; ".join(f"{k}: {v}" for k, v in sorted(FIGURE_PRESETS.items())))
    sp.add_argument("--out-dir", default="figures")
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--grid", default=None,
                    help="override the default 40x40 axes (final time and "
                    "initial state stay fixed by the preset)")
    sp.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"djcqsl: usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except DjcqslError as exc:
        print(f"djcqsl: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
