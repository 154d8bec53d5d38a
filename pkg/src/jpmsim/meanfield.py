"""Time integration of the mean-field equations of motion.

The resonant mean-field closure reduces to a real 4-vector
(v, p0, p1, pm) with

    dv/dt  = -(gamma_tilde/2) v + omega_R(t) (p0 - p1)
    dp0/dt =  gamma_tl p1 - omega_R(t) v / 2
    dp1/dt = -gamma_tilde p1 + omega_R(t) v / 2
    dpm/dt =  gamma_1 p1

where omega_R is constant for a continuous drive and carries the pulse
envelope f(t) otherwise. This module assumes a single measurement event
and no dark counts: gamma_res and gamma_0 must be zero.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import SIMPLEX_EPS, DetectorParams, DriveKind, DriveSpec, MeanFieldState
from .pulses import Envelope, envelope_for

#: Post-pulse integration tail, in units of 1/gamma_1, to capture tunneling
#: that continues after the envelope has passed.
PULSE_TAIL_FACTOR = 10.0


class IntegrationError(RuntimeError):
    """Integration failed; ``t_fail`` holds the time of failure."""

    def __init__(self, message: str, t_fail: float):
        super().__init__(f"{message} (t = {t_fail:.6g} ns)")
        self.t_fail = t_fail


class InvariantViolation(RuntimeError):
    """A state invariant was breached beyond tolerance at an accepted sample."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Integrator selection and tolerances.

    method: "rk45" (adaptive, default) or "rk4" (fixed step; set ``step``).
    """

    method: str = "rk45"
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = np.inf
    t_end: float | None = None
    n_samples: int = 400
    step: float | None = None  # rk4 only

    def __post_init__(self):
        if self.method not in ("rk45", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.t_end is not None and self.t_end <= 0:
            raise ValueError("t_end must be > 0")
        if self.method == "rk4" and (self.step is None or self.step <= 0):
            raise ValueError("rk4 requires a positive fixed step")


@dataclass(frozen=True)
class Trajectory:
    """Sampled mean-field trajectory plus the inputs that produced it."""

    times: np.ndarray
    v: np.ndarray
    p0: np.ndarray
    p1: np.ndarray
    pm: np.ndarray
    drive: DriveSpec
    params: DetectorParams

    def state_at(self, i: int) -> MeanFieldState:
        return MeanFieldState(self.v[i], self.p0[i], self.p1[i], self.pm[i])

    def reflection(self) -> np.ndarray:
        return reflection_series(self)

    def to_csv(self, path) -> None:
        """Write t,v,p0,p1,pm,R columns (ns and dimensionless)."""
        refl = self.reflection()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "v", "p0", "p1", "pm", "R"])
            for i in range(len(self.times)):
                w.writerow(
                    [
                        f"{self.times[i]:.9g}",
                        f"{self.v[i]:.12g}",
                        f"{self.p0[i]:.12g}",
                        f"{self.p1[i]:.12g}",
                        f"{self.pm[i]:.12g}",
                        f"{refl[i]:.12g}",
                    ]
                )


def rabi_frequency(params: DetectorParams, drive: DriveSpec) -> float:
    """Constant Rabi rate of a continuous drive:
    omega_R = sqrt(2 alpha_sq gamma_tl omega_0 / pi).

    For pulse drives this returns the prefactor sqrt(2 alpha_sq gamma_tl / pi)
    that multiplies the envelope f(t); use :func:`rabi_frequency_t` for the
    instantaneous value.
    """
    if drive.kind is DriveKind.CONTINUOUS:
        return np.sqrt(2.0 * drive.alpha_sq * params.gamma_tl * drive.omega_s / np.pi)
    return np.sqrt(2.0 * drive.alpha_sq * params.gamma_tl / np.pi)


def rabi_frequency_t(
    params: DetectorParams, drive: DriveSpec, t, envelope: Envelope | None = None
):
    """Instantaneous Rabi rate omega_R(t)."""
    if drive.kind is DriveKind.CONTINUOUS:
        return rabi_frequency(params, drive) * np.ones_like(np.asarray(t, dtype=float))
    if envelope is None:
        envelope = envelope_for(drive)
    return envelope(t) * rabi_frequency(params, drive)


def _check_preconditions(params: DetectorParams, drive: DriveSpec) -> None:
    if params.gamma_0 != 0.0:
        raise ValueError(
            "mean-field closure assumes gamma_0 = 0 (no dark counts); "
            f"got gamma_0 = {params.gamma_0}"
        )
    if params.gamma_res != 0.0:
        raise ValueError(
            "mean-field closure assumes gamma_res = 0 (single measurement); "
            f"got gamma_res = {params.gamma_res}"
        )
    if not np.isclose(drive.omega_s, params.omega_0, rtol=1e-12, atol=0.0):
        raise ValueError(
            f"only resonant drive supported: omega_s = {drive.omega_s} "
            f"!= omega_0 = {params.omega_0}"
        )


def default_t_end(params: DetectorParams, drive: DriveSpec) -> float:
    """Envelope support plus a tunneling tail for pulses; 20/gamma_tilde else."""
    if drive.is_pulse:
        env = envelope_for(drive)
        tail = PULSE_TAIL_FACTOR / params.gamma_1 if params.gamma_1 > 0 else 0.0
        return env.t_end + tail
    return 20.0 / params.gamma_tilde


def integrate(
    params: DetectorParams,
    drive: DriveSpec,
    cfg: IntegratorConfig | None = None,
    initial_state: MeanFieldState | None = None,
) -> Trajectory:
    """Integrate the mean-field system and sample it on a uniform grid.

    The initial condition is the ground state unless overridden. Occupation
    bounds and (for the lossless configuration) probability conservation are
    asserted at every sample; a breach raises InvariantViolation rather than
    being clipped.
    """
    _check_preconditions(params, drive)
    if cfg is None:
        cfg = IntegratorConfig()
    if initial_state is None:
        initial_state = MeanFieldState.ground()
    t_end = cfg.t_end if cfg.t_end is not None else default_t_end(params, drive)

    gt = params.gamma_tilde
    gtl = params.gamma_tl
    g1 = params.gamma_1

    if drive.kind is DriveKind.CONTINUOUS:
        wr_const = rabi_frequency(params, drive)

        def omega_r(t):
            return wr_const

    else:
        env = envelope_for(drive)
        pref = rabi_frequency(params, drive)

        def omega_r(t):
            return pref * env(t)

    def rhs(t, y):
        v, p0, p1, pm = y
        wr = omega_r(t)
        return [
            -0.5 * gt * v + wr * (p0 - p1),
            gtl * p1 - 0.5 * wr * v,
            -gt * p1 + 0.5 * wr * v,
            g1 * p1,
        ]

    t_eval = np.linspace(0.0, t_end, cfg.n_samples)
    y0 = initial_state.as_array()

    if cfg.method == "rk45":
        sol = solve_ivp(
            rhs,
            (0.0, t_end),
            y0,
            method="RK45",
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            max_step=cfg.max_step,
            t_eval=t_eval,
        )
        if not sol.success:
            t_fail = sol.t[-1] if sol.t.size else 0.0
            raise IntegrationError(f"adaptive step failed: {sol.message}", t_fail)
        ys = sol.y
    else:
        ys = _rk4_fixed(rhs, y0, t_eval, cfg.step)

    traj = Trajectory(
        times=t_eval,
        v=ys[0],
        p0=ys[1],
        p1=ys[2],
        pm=ys[3],
        drive=drive,
        params=params,
    )
    _check_invariants(traj)
    return traj


def _rk4_fixed(rhs, y0: np.ndarray, t_eval: np.ndarray, step: float) -> np.ndarray:
    """Classic RK4 with a fixed step, sampled exactly at t_eval points."""
    out = np.empty((y0.size, t_eval.size))
    out[:, 0] = y0
    y = np.array(y0, dtype=float)
    t = t_eval[0]
    for i in range(1, t_eval.size):
        target = t_eval[i]
        while t < target - 1e-12:
            h = min(step, target - t)
            k1 = np.asarray(rhs(t, y))
            k2 = np.asarray(rhs(t + 0.5 * h, y + 0.5 * h * k1))
            k3 = np.asarray(rhs(t + 0.5 * h, y + 0.5 * h * k2))
            k4 = np.asarray(rhs(t + h, y + h * k3))
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        out[:, i] = y
    return out


def _check_invariants(traj: Trajectory, eps: float = SIMPLEX_EPS) -> None:
    for arr, name in ((traj.p0, "p0"), (traj.p1, "p1"), (traj.pm, "pm")):
        if np.any(arr < -eps) or np.any(arr > 1.0 + eps):
            i = int(np.argmax((arr < -eps) | (arr > 1.0 + eps)))
            raise InvariantViolation(
                f"{name} = {arr[i]} outside [-{eps}, 1+{eps}] at t = {traj.times[i]}"
            )
    p = traj.params
    if p.gamma_0 == 0 and p.gamma_rel == 0 and p.gamma_res == 0:
        total = traj.p0 + traj.p1 + traj.pm
        if np.any(np.abs(total - 1.0) > eps):
            i = int(np.argmax(np.abs(total - 1.0)))
            raise InvariantViolation(
                f"probability sum {total[i]} deviates from 1 at t = {traj.times[i]}"
            )


def reflection_series(traj: Trajectory) -> np.ndarray:
    """Pointwise reflection coefficient
    R(t) = -1 + (2 gamma_tl / gamma_tilde) (p0 - p1).

    |R| > 1 is possible when p1 > p0 (amplification by emission).
    """
    p = traj.params
    return -1.0 + (2.0 * p.gamma_tl / p.gamma_tilde) * (traj.p0 - traj.p1)


def reflection_coefficient(params: DetectorParams, p0, p1):
    """Reflection coefficient for given occupations (scalar or array)."""
    return -1.0 + (2.0 * params.gamma_tl / params.gamma_tilde) * (
        np.asarray(p0) - np.asarray(p1)
    )
