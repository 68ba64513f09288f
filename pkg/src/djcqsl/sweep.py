"""Parameter-plane sweeps and figure-preset data sets.

A sweep evaluates selected quantities on a (gamma0/lambda, delta/lambda)
grid, one independent work item per grid point, dispatched to a process pool
and collected in deterministic row-major order. Per-point failures become
flagged rows; the sweep continues.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__ as _version
from .bounds import report_from_samples
from .errors import DjcqslError, InvalidInputError
from .model import ModelParams
from .nonmarkov import blp_measure, positive_variation
from .path import (
    DEFAULT_COARSE_STEP,
    DEFAULT_FINE_STEP,
    OSCILLATION_STEP_FRACTION,
    TimeGrid,
    sample_path,
)
from .qubit import BlochVector, DensityMatrix, basis_state

TAU_QUANTITIES = ("tau_min", "tau_av", "tau_op", "tau_hs", "tau_tr", "tau_quant")
SWEEP_QUANTITIES = TAU_QUANTITIES + ("blp_N", "path_N_tilde")

MARKOVIAN_PARAMS = ModelParams(0.1, 0.1)
NON_MARKOVIAN_PARAMS = ModelParams(1e4, 0.1)


def parse_initial(spec: str) -> DensityMatrix:
    """Initial-state flag: x+|x-|y+|y-|z+|z- or bloch:x,y,z."""
    spec = spec.strip()
    if spec.startswith("bloch:"):
        parts = spec[len("bloch:"):].split(",")
        if len(parts) != 3:
            raise InvalidInputError(f"bloch spec needs three components, got {spec!r}")
        try:
            x, y, z = (float(v) for v in parts)
        except ValueError as exc:
            raise InvalidInputError(f"bad bloch component in {spec!r}") from exc
        return BlochVector(x, y, z).to_density()
    return basis_state(spec)


@dataclass(frozen=True)
class AxisSpec:
    minimum: float
    maximum: float
    count: int
    scale: str = "log"  # or "linear"

    def __post_init__(self):
        if self.count < 1:
            raise InvalidInputError("axis count must be >= 1")
        if self.minimum > self.maximum:
            raise InvalidInputError("axis minimum exceeds maximum")
        if self.scale not in ("log", "linear"):
            raise InvalidInputError(f"axis scale {self.scale!r} not log|linear")
        if self.scale == "log" and self.minimum <= 0.0:
            raise InvalidInputError("log axis requires minimum > 0")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.minimum])
        if self.scale == "log":
            return np.geomspace(self.minimum, self.maximum, self.count)
        return np.linspace(self.minimum, self.maximum, self.count)

    def describe(self) -> str:
        return f"{self.minimum:g}:{self.maximum:g}:{self.count}:{self.scale}"


# Axis ranges contain every parameter pair quoted for the figures
# (gamma0/lambda from 0.1 to 1e4, delta/lambda from 0.1 to 1e2).
DEFAULT_GAMMA_AXIS = AxisSpec(0.1, 1e4, 40, "log")
DEFAULT_DELTA_AXIS = AxisSpec(0.1, 1e2, 40, "log")


@dataclass(frozen=True)
class GridSpec:
    gamma0_axis: AxisSpec = DEFAULT_GAMMA_AXIS
    delta_axis: AxisSpec = DEFAULT_DELTA_AXIS
    lambda_t_final: float = 1.0
    initial: str = "x+"

    def __post_init__(self):
        if self.lambda_t_final <= 0.0:
            raise InvalidInputError("lambda_t_final must be > 0")
        parse_initial(self.initial)

    def describe(self) -> str:
        return (f"gamma0={self.gamma0_axis.describe()} delta={self.delta_axis.describe()} "
                f"tmax={self.lambda_t_final:g} initial={self.initial}")


def _parse_axis(text: str) -> AxisSpec:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise InvalidInputError(f"axis spec {text!r} is not min:max:count[:scale]")
    scale = parts[3] if len(parts) == 4 else "log"
    try:
        return AxisSpec(float(parts[0]), float(parts[1]), int(parts[2]), scale)
    except ValueError as exc:
        raise InvalidInputError(f"bad axis spec {text!r}") from exc


def parse_grid_spec(text: str) -> GridSpec:
    """Inline grammar ``gamma0=a:b:n:log,delta=...,tmax=...,initial=x+`` or a
    path to a file holding the same key=value pairs one per line."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            entries = [ln.strip() for ln in fh
                       if ln.strip() and not ln.lstrip().startswith("#")]
    else:
        entries = [e.strip() for e in text.split(",") if e.strip()]
    fields = {"gamma0": DEFAULT_GAMMA_AXIS, "delta": DEFAULT_DELTA_AXIS}
    tmax, initial = 1.0, "x+"
    for entry in entries:
        if "=" not in entry:
            raise InvalidInputError(f"grid entry {entry!r} is not key=value")
        key, _, value = entry.partition("=")
        key = key.strip()
        value = value.strip()
        if key in ("gamma0", "delta"):
            fields[key] = _parse_axis(value)
        elif key == "tmax":
            tmax = float(value)
        elif key == "initial":
            initial = value
        else:
            raise InvalidInputError(f"unknown grid key {key!r}")
    return GridSpec(fields["gamma0"], fields["delta"], tmax, initial)


@dataclass(frozen=True)
class SweepTable:
    """Rows of (gamma0/lambda, delta/lambda, lambda_t, quantity, value, status)."""

    metadata: dict
    rows: list = field(default_factory=list)

    def column(self, quantity: str) -> np.ndarray:
        return np.array([r[4] for r in self.rows if r[3] == quantity])

    def grid_points(self, quantity: str) -> np.ndarray:
        return np.array([(r[0], r[1]) for r in self.rows if r[3] == quantity])


def _evaluate_point(task) -> list:
    g, d, t_final, initial, quantities = task
    p = ModelParams(g, d)
    rows = []
    needs_path = any(q in quantities for q in TAU_QUANTITIES) or "path_N_tilde" in quantities
    values: dict[str, float] = {}
    try:
        grid = TimeGrid.for_params(p, t_final)
        if needs_path:
            samples = sample_path(p, parse_initial(initial), grid)
            if any(q in quantities for q in TAU_QUANTITIES):
                report = report_from_samples(samples)
                for q in TAU_QUANTITIES:
                    values[q] = getattr(report, q)
            if "path_N_tilde" in quantities:
                values["path_N_tilde"] = positive_variation(samples.trace_dist_from_init)
        if "blp_N" in quantities:
            values["blp_N"] = blp_measure(p, t_final, grid)
        for q in quantities:
            rows.append((g, d, t_final, q, values[q], "ok"))
    except DjcqslError as exc:
        for q in quantities:
            rows.append((g, d, t_final, q, math.nan, f"error:{type(exc).__name__}"))
    return rows


def run_sweep(spec: GridSpec, quantities=SWEEP_QUANTITIES, jobs: int | None = None) -> SweepTable:
    quantities = tuple(quantities)
    unknown = set(quantities) - set(SWEEP_QUANTITIES)
    if unknown:
        raise InvalidInputError(
            f"unknown quantities {sorted(unknown)}; choose from {SWEEP_QUANTITIES}"
        )
    tasks = [
        (float(g), float(d), spec.lambda_t_final, spec.initial, quantities)
        for g in spec.gamma0_axis.values()
        for d in spec.delta_axis.values()
    ]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(tasks) == 1:
        results = [_evaluate_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, len(tasks) // (jobs * 8))
            results = list(pool.map(_evaluate_point, tasks, chunksize=chunk))
    rows = [row for point_rows in results for row in point_rows]
    metadata = {
        "tool": "djcqsl sweep",
        "version": _version,
        "grid": spec.describe(),
        "quantities": ",".join(quantities),
        "lambda_t_final": f"{spec.lambda_t_final:g}",
        "initial": spec.initial,
        "step_policy": (f"fine={DEFAULT_FINE_STEP:g} coarse={DEFAULT_COARSE_STEP:g} "
                        f"oscillation_fraction={OSCILLATION_STEP_FRACTION:g}"),
    }
    return SweepTable(metadata, rows)
