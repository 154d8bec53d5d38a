"""Parameter sweeps (1D/2D) and 1D maximization of the figure-of-merit.

Grid cells are independent; failures are isolated per cell so a stiff
corner cannot kill a whole run. Rate-like axes default to log scale since
the interesting structure spans decades.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import meanfield, rate
from .core import DetectorParams, DriveKind, DriveSpec

PARAM_NAMES = frozenset(
    {
        "gamma_tl",
        "gamma_1",
        "gamma_0",
        "gamma_rel",
        "gamma_res",
        "alpha_sq",
        "kappa",
        "sigma",
        "t_m",
    }
)

OBJECTIVES = frozenset({"pm_at_tm", "eta", "eta_finite_n", "steady_pm"})


@dataclass(frozen=True)
class SweepAxis:
    name: str
    min: float
    max: float
    points: int
    scale: str = "log"

    def __post_init__(self):
        if self.name not in PARAM_NAMES:
            raise ValueError(f"unknown parameter {self.name!r}; allowed: {sorted(PARAM_NAMES)}")
        if self.points < 1:
            raise ValueError("points must be >= 1")
        if self.points >= 2 and not self.min < self.max:
            raise ValueError("need min < max")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be linear or log, got {self.scale!r}")
        if self.scale == "log" and self.min <= 0:
            raise ValueError("log axis needs min > 0")

    def grid(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.min])
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class SweepSpec:
    """Declarative sweep: axes, objective, and the fixed baseline."""

    axis1: SweepAxis
    params: DetectorParams
    drive: DriveSpec
    objective: str = "pm_at_tm"
    axis2: SweepAxis | None = None
    t_m: float | None = None  # pm_at_tm only
    n_in: float | None = None  # eta_finite_n / steady_pm only

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.objective == "pm_at_tm" and self.t_m is None:
            raise ValueError("pm_at_tm needs t_m")
        if self.objective in ("eta_finite_n", "steady_pm") and self.n_in is None:
            raise ValueError(f"{self.objective} needs n_in")


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    axis1_values: np.ndarray
    axis2_values: np.ndarray | None
    values: np.ndarray  # shape (n1,) or (n1, n2); failed cells are NaN
    errors: tuple[tuple[int, ...], ...]  # cell indices that failed

    def to_csv(self, path) -> None:
        """Long format: axis1[,axis2],objective."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            if self.axis2_values is None:
                w.writerow([self.spec.axis1.name, self.spec.objective])
                for x, val in zip(self.axis1_values, self.values):
                    w.writerow([f"{x:.9g}", f"{val:.12g}"])
            else:
                w.writerow(
                    [self.spec.axis1.name, self.spec.axis2.name, self.spec.objective]
                )
                for i, x in enumerate(self.axis1_values):
                    for j, y in enumerate(self.axis2_values):
                        w.writerow([f"{x:.9g}", f"{y:.9g}", f"{self.values[i, j]:.12g}"])

    def to_json(self, indent: int = 2) -> str:
        data = {
            "objective": self.spec.objective,
            "axis1": {"name": self.spec.axis1.name, "values": self.axis1_values.tolist()},
            "values": self.values.tolist(),
            "failed_cells": [list(c) for c in self.errors],
        }
        if self.axis2_values is not None:
            data["axis2"] = {
                "name": self.spec.axis2.name,
                "values": self.axis2_values.tolist(),
            }
        return json.dumps(data, indent=indent)


def _apply(params, drive, t_m, name: str, value: float):
    """Replace one swept parameter in (params, drive, t_m)."""
    if name in ("gamma_tl", "gamma_1", "gamma_0", "gamma_rel", "gamma_res"):
        params = replace(params, **{name: value})
    elif name == "alpha_sq":
        drive = replace(drive, alpha_sq=value)
    elif name in ("kappa", "sigma"):
        drive = replace(drive, **{name: value})
    elif name == "t_m":
        t_m = value
    return params, drive, t_m


def _evaluate_cell(spec: SweepSpec, assignments) -> float:
    params, drive, t_m = spec.params, spec.drive, spec.t_m
    for name, value in assignments:
        params, drive, t_m = _apply(params, drive, t_m, name, value)
    if spec.objective == "pm_at_tm":
        cfg = meanfield.IntegratorConfig(t_end=t_m, n_samples=2)
        traj = meanfield.integrate(params, drive, cfg)
        return float(traj.pm[-1])
    if spec.objective == "steady_pm":
        _, _, pm = rate.steady_state(params, spec.n_in)
        return float(pm)
    if spec.objective == "eta":
        return rate.efficiency(params)
    if spec.objective == "eta_finite_n":
        return rate.efficiency_finite_flux(params, spec.n_in)
    raise AssertionError(spec.objective)


def run_sweep(spec: SweepSpec, n_workers: int = 1) -> SweepResult:
    """Evaluate the objective on the dense grid.

    Deterministic for a given spec; per-cell failures become NaN and are
    listed in the result. Parallel and serial execution fill the same
    preallocated slots and therefore produce identical grids.
    """
    g1 = spec.axis1.grid()
    if spec.axis2 is None:
        cells = [((i,), [(spec.axis1.name, g1[i])]) for i in range(g1.size)]
        values = np.full(g1.size, np.nan)
        g2 = None
    else:
        g2 = spec.axis2.grid()
        cells = [
            ((i, j), [(spec.axis1.name, g1[i]), (spec.axis2.name, g2[j])])
            for i in range(g1.size)
            for j in range(g2.size)
        ]
        values = np.full((g1.size, g2.size), np.nan)

    errors = []

    def work(cell):
        idx, assignments = cell
        try:
            return idx, _evaluate_cell(spec, assignments), None
        except Exception as exc:  # per-cell isolation
            return idx, math.nan, exc

    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(work, cells))
    else:
        results = [work(c) for c in cells]

    for idx, val, exc in results:
        values[idx] = val
        if exc is not None:
            errors.append(idx)

    return SweepResult(
        spec=spec,
        axis1_values=g1,
        axis2_values=g2,
        values=values,
        errors=tuple(sorted(errors)),
    )


@dataclass(frozen=True)
class OptimizeResult:
    gamma_tl: float
    pm: float
    at_boundary: bool


def _pm_at(params: DetectorParams, drive: DriveSpec, gamma_tl: float, t_m: float) -> float:
    p = replace(params, gamma_tl=gamma_tl)
    cfg = meanfield.IntegratorConfig(t_end=t_m, n_samples=2)
    return float(meanfield.integrate(p, drive, cfg).pm[-1])


def optimize_gamma_tl(
    drive: DriveSpec,
    params: DetectorParams,
    t_m: float,
    bracket: tuple[float, float] = (1e-2, 1e2),
    rel_tol: float = 1e-3,
    coarse_points: int = 25,
) -> OptimizeResult:
    """Maximize pm(t_m) over gamma_tl by golden-section search on log scale.

    A coarse log grid first brackets the maximum; if the best coarse point
    sits on the range boundary the boundary value is returned with
    ``at_boundary=True`` instead of pretending convergence.
    """
    lo, hi = math.log10(bracket[0]), math.log10(bracket[1])
    coarse = np.linspace(lo, hi, coarse_points)
    vals = [_pm_at(params, drive, 10.0**x, t_m) for x in coarse]
    k = int(np.argmax(vals))
    if k == 0 or k == coarse_points - 1:
        g = 10.0 ** coarse[k]
        return OptimizeResult(gamma_tl=g, pm=vals[k], at_boundary=True)

    a, b = coarse[k - 1], coarse[k + 1]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc = _pm_at(params, drive, 10.0**c, t_m)
    fd = _pm_at(params, drive, 10.0**d, t_m)
    # tolerance on gamma_tl itself: |log10 interval| < log10(1 + rel_tol)
    tol = math.log10(1.0 + rel_tol)
    while d - c > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = _pm_at(params, drive, 10.0**d, t_m)
        else:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = _pm_at(params, drive, 10.0**c, t_m)
    x = 0.5 * (a + b)
    g = 10.0**x
    return OptimizeResult(gamma_tl=g, pm=_pm_at(params, drive, g, t_m), at_boundary=False)


def grid_argmax_gamma_tl(
    drive: DriveSpec,
    params: DetectorParams,
    t_m: float,
    bracket: tuple[float, float] = (1e-2, 1e2),
    points: int = 400,
) -> float:
    """Brute-force log-grid maximizer; independent oracle for the optimizer."""
    grid = np.geomspace(bracket[0], bracket[1], points)
    vals = [_pm_at(params, drive, g, t_m) for g in grid]
    return float(grid[int(np.argmax(vals))])


def saturation_curve(
    params: DetectorParams,
    drive: DriveSpec,
    t_m: float,
    alpha_grid,
    matched: bool = False,
) -> np.ndarray:
    """pm(t_m) versus drive amplitude.

    With ``matched=True`` the coupling rate is re-optimized at every
    amplitude; otherwise the baseline gamma_tl is held fixed.
    """
    out = np.empty(len(alpha_grid))
    for i, a2 in enumerate(alpha_grid):
        d = replace(drive, alpha_sq=float(a2))
        if a2 == 0.0:
            out[i] = 0.0
            continue
        if matched:
            res = optimize_gamma_tl(d, params, t_m)
            out[i] = res.pm
        else:
            out[i] = _pm_at(params, d, params.gamma_tl, t_m)
    return out
