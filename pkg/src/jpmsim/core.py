"""Shared types, unit conventions, and flux/photon-number conversions.

Internal units throughout the package: rates in 1/ns, angular frequencies
in rad/ns, times in ns. A rate quoted as "1 GHz" corresponds to 1/ns; a
transition frequency quoted as "5 GHz" corresponds to omega_0 = 2*pi*5 rad/ns.
Keeping everything O(1)-O(10) in these units avoids artificial stiffness.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

#: Tolerance for the probability-simplex invariants of MeanFieldState.
SIMPLEX_EPS = 1e-6


def rate_from_ghz(value_ghz: float) -> float:
    """Convert a rate in GHz to internal units (1/ns). Numerically identity."""
    return float(value_ghz)


def omega_from_ghz(freq_ghz: float) -> float:
    """Convert an ordinary frequency in GHz to an angular frequency in rad/ns."""
    return TWO_PI * float(freq_ghz)


@dataclass(frozen=True)
class DetectorParams:
    """Rates and transition frequency of the two-level counter.

    Attributes
    ----------
    gamma_tl : float
        Coupling rate to the transmission line [1/ns].
    gamma_0 : float
        Ground-state tunneling (dark count) rate [1/ns].
    gamma_1 : float
        Excited-state tunneling (measurement) rate [1/ns].
    gamma_rel : float
        Intrinsic relaxation rate from excited to ground state [1/ns].
    gamma_res : float
        Reset rate from the measurement state back to the ground state [1/ns].
    omega_0 : float
        Transition angular frequency [rad/ns].
    """

    gamma_tl: float
    gamma_0: float
    gamma_1: float
    gamma_rel: float
    gamma_res: float
    omega_0: float

    def __post_init__(self):
        for name in ("gamma_tl", "gamma_0", "gamma_1", "gamma_rel", "gamma_res"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.omega_0 <= 0:
            raise ValueError(f"omega_0 must be > 0, got {self.omega_0}")

    @property
    def gamma_tilde(self) -> float:
        """Total linewidth: gamma_tl + gamma_0 + gamma_1 + gamma_rel [1/ns]."""
        return self.gamma_tl + self.gamma_0 + self.gamma_1 + self.gamma_rel


def gamma_tilde(params: DetectorParams) -> float:
    """Total linewidth of the counter (sum of the four decay rates)."""
    return params.gamma_tilde


class DriveKind(enum.Enum):
    CONTINUOUS = "continuous"
    EXPONENTIAL = "exponential"
    GAUSSIAN = "gaussian"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class DriveSpec:
    """Input field description: kind, amplitude, carrier, shape parameters.

    For the continuous drive ``alpha_sq`` is a (dimensionless) photon flux
    amplitude; the physical flux is ``alpha_sq * omega_s / (2 pi)`` photons/ns.
    For pulse kinds ``alpha_sq`` is the mean photon number carried by the
    normalized pulse.

    Only resonant drive (omega_s == detector omega_0) is supported.
    """

    kind: DriveKind
    alpha_sq: float
    omega_s: float
    kappa: float | None = None
    sigma: float | None = None
    t0: float | None = None
    #: Gaussian only: keep the literal (8 pi sigma^2)^(1/4) prefactor, whose
    #: squared envelope integrates to 2 pi instead of 1 (comparison runs).
    paper_literal: bool = False
    table_t: tuple[float, ...] | None = field(default=None, repr=False)
    table_f: tuple[float, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.alpha_sq < 0:
            raise ValueError(f"alpha_sq must be >= 0, got {self.alpha_sq}")
        if self.omega_s <= 0:
            raise ValueError(f"omega_s must be > 0, got {self.omega_s}")
        if self.kind is DriveKind.EXPONENTIAL:
            if self.kappa is None or self.kappa <= 0:
                raise ValueError("exponential drive requires kappa > 0")
        elif self.kind is DriveKind.GAUSSIAN:
            if self.sigma is None or self.sigma <= 0:
                raise ValueError("gaussian drive requires sigma > 0")
        elif self.kind is DriveKind.TABULATED:
            if self.table_t is None or self.table_f is None:
                raise ValueError("tabulated drive requires sample arrays")

    @classmethod
    def continuous(cls, alpha_sq: float, omega_s: float) -> "DriveSpec":
        return cls(DriveKind.CONTINUOUS, alpha_sq, omega_s)

    @classmethod
    def exponential(cls, alpha_sq: float, omega_s: float, kappa: float) -> "DriveSpec":
        return cls(DriveKind.EXPONENTIAL, alpha_sq, omega_s, kappa=kappa)

    @classmethod
    def gaussian(
        cls,
        alpha_sq: float,
        omega_s: float,
        sigma: float,
        t0: float | None = None,
        paper_literal: bool = False,
    ) -> "DriveSpec":
        if t0 is None:
            t0 = 6.0 / (sigma * np.sqrt(2.0))
        return cls(
            DriveKind.GAUSSIAN, alpha_sq, omega_s,
            sigma=sigma, t0=t0, paper_literal=paper_literal,
        )

    @classmethod
    def tabulated(cls, alpha_sq: float, omega_s: float, times, values) -> "DriveSpec":
        return cls(
            DriveKind.TABULATED,
            alpha_sq,
            omega_s,
            table_t=tuple(float(t) for t in times),
            table_f=tuple(float(f) for f in values),
        )

    @property
    def is_pulse(self) -> bool:
        return self.kind is not DriveKind.CONTINUOUS


@dataclass(frozen=True)
class MeanFieldState:
    """Reduced real state of the mean-field closure.

    ``v = i(<sigma^-> - <sigma^+>)`` is the single real coherence variable
    surviving the resonant reduction (the real part of <sigma^-> decouples
    and stays zero for a ground-state start). ``p0, p1, pm`` are the
    occupation probabilities of ground, excited, and measurement states.
    """

    v: float
    p0: float
    p1: float
    pm: float

    @classmethod
    def ground(cls) -> "MeanFieldState":
        return cls(0.0, 1.0, 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.p0, self.p1, self.pm])

    def check_bounds(self, eps: float = SIMPLEX_EPS) -> None:
        """Raise if any occupation leaves [-eps, 1+eps]."""
        for name in ("p0", "p1", "pm"):
            p = getattr(self, name)
            if not (-eps <= p <= 1.0 + eps):
                raise ValueError(f"{name} = {p} outside [{-eps}, {1 + eps}]")


def photon_flux(alpha_sq: float, omega_0: float) -> float:
    """Photon flux [photons/ns] of a continuous drive of amplitude alpha_sq.

    flux = alpha_sq * omega_0 / (2 pi). The 2 pi stems from the Fourier
    prefactor in the definition of the input field operator.
    """
    return alpha_sq * omega_0 / TWO_PI


def photon_number(drive: DriveSpec, t_m: float) -> float:
    """Mean photon number arriving at the detector within measurement time t_m.

    Continuous drive: flux * t_m. Pulse kinds: alpha_sq, the photon content
    of the normalized wave packet, independent of t_m.
    """
    if t_m < 0:
        raise ValueError(f"t_m must be >= 0, got {t_m}")
    if drive.kind is DriveKind.CONTINUOUS:
        return photon_flux(drive.alpha_sq, drive.omega_s) * t_m
    return drive.alpha_sq
