"""Two-mode non-Hermitian coupled-mode analysis.

The linear part of the model is the 2x2 matrix

    P = [[w_a - i k_a, g],
         [g,           w_m - i k_m]]

whose eigenvalues are the complex supermode frequencies.  With balanced gain
and loss (k_a = -k_m, w_a = w_m) the spectrum is real for 2g > |k_a - k_m|
and the two eigenvalues coalesce at 2g = |k_a - k_m|, the exceptional point.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace
from typing import Literal, Sequence

import numpy as np
from scipy import optimize

from .errors import NotFoundError
from .params import SystemParams

__all__ = [
    "CoupledModeMatrix",
    "SpectrumResult",
    "PhaseLabel",
    "SpectrumTable",
    "eigenvalues",
    "classify_phase",
    "find_ep",
    "spectrum_sweep",
    "apply_free_var",
    "DEGENERACY_TOL",
]

DEGENERACY_TOL = 1e-9

FreeVar = Literal["g", "kappa_a", "delta"]


@dataclass(frozen=True)
class CoupledModeMatrix:
    p11: complex
    p12: complex
    p21: complex
    p22: complex

    def __post_init__(self):
        if self.p12 != self.p21:
            raise ValueError("coupling must be symmetric (p12 == p21)")

    @classmethod
    def from_rates(cls, omega_a, kappa_a, omega_m, kappa_m, g) -> "CoupledModeMatrix":
        return cls(complex(omega_a, -kappa_a), complex(g), complex(g), complex(omega_m, -kappa_m))

    @classmethod
    def from_params(cls, p: SystemParams) -> "CoupledModeMatrix":
        """Rotating-frame matrix: detunings stand in for the mode frequencies."""
        return cls.from_rates(p.delta_a, p.kappa_a, p.delta_m, p.kappa_m, p.g)

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.p11, self.p12], [self.p21, self.p22]], dtype=complex)

    @property
    def discriminant(self) -> complex:
        # 4g^2 - [i(w_a - w_m) + (k_a - k_m)]^2 written in matrix entries
        d = self.p11 - self.p22
        return d * d + 4.0 * self.p12 * self.p21


@dataclass(frozen=True)
class SpectrumResult:
    omega1: complex
    omega2: complex
    q: np.ndarray
    d: np.ndarray
    discriminant: complex
    defective: bool

    @property
    def splitting(self) -> float:
        return abs(self.omega1 - self.omega2)

    @property
    def condition_number(self) -> float:
        if self.defective:
            return math.inf
        return float(np.linalg.cond(self.q))


class PhaseLabel(enum.Enum):
    UNBROKEN = "unbroken"
    EXCEPTIONAL = "exceptional"
    BROKEN = "broken"


def _sqrt_branch(z: complex) -> complex:
    s = cmath.sqrt(complex(z))
    if s.real < 0 or (s.real == 0 and s.imag < 0):
        s = -s
    return s


def _eigvec(m: CoupledModeMatrix, w: complex, fallback: int) -> np.ndarray:
    v1 = np.array([m.p12, w - m.p11])
    v2 = np.array([w - m.p22, m.p21])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    n = np.linalg.norm(v)
    if n == 0.0:
        # P is a multiple of the identity; any basis works
        v = np.zeros(2, complex)
        v[fallback] = 1.0
        return v
    v = v / n
    k = 0 if v[0] != 0 else 1
    v = v * np.exp(-1j * np.angle(v[k]))
    v[k] = abs(v[k])  # drop rounding residue in the imaginary part
    return v


def eigenvalues(m: CoupledModeMatrix, tol: float = DEGENERACY_TOL) -> SpectrumResult:
    """Closed-form eigen-decomposition of the coupled-mode matrix.

    omega_{1,2} = (p11 + p22)/2 +- sqrt(disc)/2, with the square root taken on
    the branch with non-negative real part (ties: non-negative imaginary).
    Columns of ``q`` are unit-norm eigenvectors, leading component real > 0.
    """
    disc = m.discriminant
    s = _sqrt_branch(disc)
    mean = 0.5 * (m.p11 + m.p22)
    w1 = mean + 0.5 * s
    w2 = mean - 0.5 * s
    q = np.column_stack([_eigvec(m, w1, 0), _eigvec(m, w2, 1)])
    defective = bool(abs(np.linalg.det(q)) <= tol)
    return SpectrumResult(w1, w2, q, np.diag([w1, w2]), disc, defective)


def classify_phase(m: CoupledModeMatrix, tol: float = DEGENERACY_TOL) -> PhaseLabel:
    if tol <= 0:
        raise ValueError("tol must be > 0")
    r = eigenvalues(m)
    if r.splitting < tol:
        return PhaseLabel.EXCEPTIONAL
    if abs(r.omega1.imag) < tol and abs(r.omega2.imag) < tol:
        return PhaseLabel.UNBROKEN
    return PhaseLabel.BROKEN


def apply_free_var(params: SystemParams, free_var: FreeVar, x: float) -> SystemParams:
    """Set one spectral control variable.

    ``delta`` is the cavity-magnon frequency mismatch w_a - w_m, applied
    symmetrically about the mean detuning so the spectrum centre is fixed.
    """
    if free_var == "g":
        return replace(params, g=x)
    if free_var == "kappa_a":
        return replace(params, kappa_a=x)
    if free_var == "delta":
        c = 0.5 * (params.delta_a + params.delta_m)
        return replace(params, delta_a=c + 0.5 * x, delta_m=c - 0.5 * x)
    raise ValueError(f"unknown free variable {free_var!r}")


def _disc_at(params, free_var, x) -> complex:
    return CoupledModeMatrix.from_params(apply_free_var(params, free_var, x)).discriminant


def _polish(params, free_var, x):
    # step through neighbouring floats; the splitting is sqrt(|disc|) so the
    # last ulp matters
    best, best_val = x, abs(_disc_at(params, free_var, x))
    for direction in (-math.inf, math.inf):
        y = x
        for _ in range(4):
            y = math.nextafter(y, direction)
            val = abs(_disc_at(params, free_var, y))
            if val < best_val:
                best, best_val = y, val
    return best


def find_ep(
    params: SystemParams,
    free_var: FreeVar,
    bracket: tuple[float, float],
    tol: float = 1e-8,
    samples: int = 401,
) -> float:
    """Locate the exceptional point along ``free_var`` inside ``bracket``.

    Scans |disc| on a grid, then refines either by bisection on a real sign
    change of the discriminant or by bounded minimisation of |disc|.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    xs = np.linspace(lo, hi, samples)
    ds = np.array([_disc_at(params, free_var, x) for x in xs])
    scale = max(1.0, float(np.max(np.abs(ds))))
    k = int(np.argmin(np.abs(ds)))

    def f_real(x):
        return _disc_at(params, free_var, x).real

    x_ep = None
    real_path = np.all(np.abs(ds.imag) <= 1e-12 * scale)
    if real_path:
        for j in (k - 1, k):
            if 0 <= j < samples - 1 and np.sign(ds[j].real) != np.sign(ds[j + 1].real):
                x_ep = optimize.brentq(f_real, xs[j], xs[j + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
                break
        if x_ep is None and ds[k].real == 0.0:
            x_ep = float(xs[k])
    if x_ep is None:
        a, b = xs[max(k - 1, 0)], xs[min(k + 1, samples - 1)]
        res = optimize.minimize_scalar(
            lambda x: abs(_disc_at(params, free_var, x)) ** 2,
            bounds=(a, b), method="bounded", options={"xatol": 1e-14},
        )
        x_ep = float(res.x)
    x_ep = _polish(params, free_var, float(x_ep))
    residual = abs(_disc_at(params, free_var, x_ep))
    if residual > tol * scale:
        raise NotFoundError(
            f"no exceptional point for {free_var} in [{lo}, {hi}]: "
            f"minimum |discriminant| {residual:.3e} at {x_ep:.6g}"
        )
    return x_ep


@dataclass(frozen=True)
class SpectrumTable:
    free_var: str
    values: np.ndarray
    omega1: np.ndarray
    omega2: np.ndarray

    columns = ("value", "re_w1", "im_w1", "re_w2", "im_w2")

    def rows(self):
        for x, a, b in zip(self.values, self.omega1, self.omega2):
            yield (float(x), a.real, a.imag, b.real, b.imag)

    def as_array(self) -> np.ndarray:
        return np.column_stack(
            [self.values, self.omega1.real, self.omega1.imag, self.omega2.real, self.omega2.imag]
        )


def spectrum_sweep(params: SystemParams, free_var: FreeVar, grid: Sequence[float]) -> SpectrumTable:
    """Eigenvalues along ``grid``, paired by nearest-neighbour continuation."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be non-empty")
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted")
    w1 = np.empty(grid.size, complex)
    w2 = np.empty(grid.size, complex)
    for i, x in enumerate(grid):
        r = eigenvalues(CoupledModeMatrix.from_params(apply_free_var(params, free_var, x)))
        a, b = r.omega1, r.omega2
        if i > 0 and abs(a - w1[i - 1]) + abs(b - w2[i - 1]) > abs(a - w2[i - 1]) + abs(b - w1[i - 1]):
            a, b = b, a
        w1[i], w2[i] = a, b
    return SpectrumTable(free_var, grid, w1, w2)
