"""Model parameters and the material formulas for g, chi and Omega.

All solver-facing quantities live in :class:`SystemParams`, expressed in the
rotating frame of the magnon drive with hbar = 1 and rates in units of the
magnon damping kappa_m.  Lab-frame frequencies and material constants are only
converted at the boundary (:func:`normalize`, ``derive_*``).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from fractions import Fraction

from scipy import constants as _sc

from .errors import ParameterError

__all__ = [
    "SystemParams",
    "LabFrameParams",
    "PhysicalConstants",
    "derive_coupling",
    "derive_kerr",
    "derive_drive",
    "normalize",
]


def _check_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise ParameterError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class SystemParams:
    """Rotating-frame parameters of the driven cavity-magnon model.

    ``kappa_a < 0`` encodes cavity gain.  ``omega_d_amp`` is the magnon drive
    strength (written both Omega and Omega_d in the literature).
    """

    delta_a: float = 0.0
    delta_m: float = 0.0
    kappa_a: float = 1.0
    kappa_m: float = 1.0
    g: float = 1.0
    chi: float = 0.0
    omega_d_amp: float = 0.01

    def __post_init__(self):
        _check_finite(**asdict(self))
        if self.kappa_m <= 0:
            raise ParameterError(f"kappa_m must be > 0, got {self.kappa_m}")
        for name in ("g", "chi", "omega_d_amp"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def is_pt_configured(self) -> bool:
        """Balanced gain/loss at degenerate detunings."""
        return self.delta_a == self.delta_m and self.kappa_a == -self.kappa_m

    def with_delta(self, delta: float) -> "SystemParams":
        """Common detuning Delta_a = Delta_m = delta."""
        return replace(self, delta_a=delta, delta_m=delta)

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    def normalized(self) -> "SystemParams":
        """Rescale every field by kappa_m so that kappa_m == 1."""
        u = self.kappa_m
        return SystemParams(
            delta_a=self.delta_a / u,
            delta_m=self.delta_m / u,
            kappa_a=self.kappa_a / u,
            kappa_m=1.0,
            g=self.g / u,
            chi=self.chi / u,
            omega_d_amp=self.omega_d_amp / u,
        )


@dataclass(frozen=True)
class LabFrameParams:
    """Lab-frame angular frequencies of cavity, magnon and drive."""

    omega_a: float
    omega_m: float
    omega_d: float

    def __post_init__(self):
        _check_finite(**asdict(self))
        for name, v in asdict(self).items():
            if v <= 0:
                raise ParameterError(f"{name} must be > 0, got {v}")

    @property
    def delta_a(self) -> float:
        return self.omega_a - self.omega_d

    @property
    def delta_m(self) -> float:
        return self.omega_m - self.omega_d


@dataclass(frozen=True)
class PhysicalConstants:
    """Material and field inputs for the coupling, Kerr and drive formulas.

    SI units throughout.  ``gamma`` defaults to g_e * mu_B / hbar, the
    gyromagnetic ratio in rad s^-1 T^-1.  ``omega_ai`` (anisotropy offset of
    the Kittel frequency) is carried for bookkeeping only; no formula uses it.
    """

    g_e: float = 2.0
    mu_B: float = _sc.physical_constants["Bohr magneton"][0]
    mu_0: float = _sc.mu_0
    chi_an: float = 1.0
    M: float = 1.0
    V_m: float = 1.0
    N: int = 1
    s: Fraction = Fraction(5, 2)
    B_0: float = 0.0
    B_d: float = 0.0
    omega_ai: float = 0.0
    gamma: float | None = None

    def __post_init__(self):
        if self.gamma is None:
            object.__setattr__(self, "gamma", self.g_e * self.mu_B / _sc.hbar)
        _check_finite(
            g_e=self.g_e, mu_B=self.mu_B, mu_0=self.mu_0, chi_an=self.chi_an,
            M=self.M, V_m=self.V_m, B_0=self.B_0, B_d=self.B_d,
            omega_ai=self.omega_ai, gamma=self.gamma, s=float(self.s),
        )
        if not isinstance(self.N, int) or self.N <= 0:
            raise ParameterError(f"N must be a positive integer, got {self.N!r}")
        for name in ("g_e", "mu_B", "mu_0", "gamma", "s"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0")
        for name in ("chi_an", "B_0", "B_d"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0")
        # M and V_m are checked by derive_kerr, where zero is a domain error.
        if self.M < 0 or self.V_m < 0:
            raise ParameterError("M and V_m must be positive")


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise ParameterError(f"{what} evaluated to a non-finite value ({value})")
    return value


def derive_coupling(pc: PhysicalConstants) -> float:
    """Magnon-photon coupling g = (gamma B_0 / 2) sqrt(2 s N)."""
    return _finite(pc.gamma * pc.B_0 / 2.0 * math.sqrt(2.0 * float(pc.s) * pc.N), "g")


def derive_kerr(pc: PhysicalConstants) -> float:
    """Magnon Kerr coefficient chi = mu_0 chi_an gamma^2 / (M^2 V_m)."""
    if pc.M == 0 or pc.V_m == 0:
        raise ParameterError("Kerr coefficient needs M > 0 and V_m > 0")
    return _finite(pc.mu_0 * pc.chi_an * pc.gamma**2 / (pc.M**2 * pc.V_m), "chi")


def derive_drive(pc: PhysicalConstants) -> float:
    """Drive strength Omega = (eta / 2) B_d with eta = (gamma / 2) sqrt(5 N)."""
    eta = pc.gamma / 2.0 * math.sqrt(5.0 * pc.N)
    return _finite(eta / 2.0 * pc.B_d, "Omega")


def normalize(
    lab: LabFrameParams,
    *,
    kappa_a: float,
    kappa_m: float,
    g: float,
    chi: float = 0.0,
    omega_d_amp: float = 0.0,
    unit: float | None = None,
) -> SystemParams:
    """Convert lab-frame quantities to rotating-frame, kappa_m-scaled params.

    ``unit`` is the value of kappa_m in lab units and defaults to ``kappa_m``.
    """
    if unit is None:
        unit = kappa_m
    if not math.isfinite(unit) or unit <= 0:
        raise ParameterError(f"unit must be > 0, got {unit}")
    return SystemParams(
        delta_a=lab.delta_a / unit,
        delta_m=lab.delta_m / unit,
        kappa_a=kappa_a / unit,
        kappa_m=kappa_m / unit,
        g=g / unit,
        chi=chi / unit,
        omega_d_amp=omega_d_amp / unit,
    )
