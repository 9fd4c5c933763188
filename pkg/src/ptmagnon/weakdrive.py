"""Weak-drive steady state on the <= 2 excitation-per-mode subspace.

With the drive much weaker than every other rate, the state is expanded as
|psi> = sum_{m,n<=2} C_mn |m n> with C_00 = 1, and the stationarity condition
H_eff |psi> = 0 (non-Hermitian H_eff, vacuum row dropped) becomes an 8x8
complex linear system.  The system is generated from the Hamiltonian matrix
elements rather than written out by hand.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import SingularSystemError, UndefinedStatisticsError
from .fock import FockSpace, build_hamiltonian
from .params import SystemParams

__all__ = [
    "AmplitudeVector",
    "G2Result",
    "WeakDriveWarning",
    "WEAK_SPACE",
    "linear_system",
    "steady_amplitudes",
    "g2_analytic",
]

WEAK_SPACE = FockSpace(2, 2)

Variant = Literal["amplitude_sum", "probability"]


class WeakDriveWarning(UserWarning):
    """The weak-drive expansion is being used outside its validity range."""


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    """Amplitudes C[m, n] for 0 <= m, n <= 2 (m magnons, n photons)."""

    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=complex)
        if c.shape != (3, 3):
            raise ValueError("amplitude array must be 3x3")
        if c[0, 0] != 1:
            raise ValueError("C00 must be exactly 1")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_dict(cls, amps: dict[tuple[int, int], complex]) -> "AmplitudeVector":
        c = np.zeros((3, 3), complex)
        c[0, 0] = 1.0
        for (m, n), v in amps.items():
            c[m, n] = v
        return cls(c)

    def __getitem__(self, mn: tuple[int, int]) -> complex:
        return complex(self.c[mn])

    @property
    def amplitudes(self) -> dict[tuple[int, int], complex]:
        return {(m, n): complex(self.c[m, n]) for m in range(3) for n in range(3)}

    def state_vector(self, space: FockSpace | None = None, normalize: bool = True) -> np.ndarray:
        """Embed into ``space`` (default the 3x3 space) in magnon-major order."""
        space = space or WEAK_SPACE
        if space.n_max_m < 2 or space.n_max_a < 2:
            raise ValueError("target space must hold two excitations per mode")
        psi = np.zeros(space.dim, complex)
        for m in range(3):
            for n in range(3):
                psi[space.index(m, n)] = self.c[m, n]
        if normalize:
            psi /= np.linalg.norm(psi)
        return psi

    def populations(self, mode: str) -> np.ndarray:
        """Normalised occupation probabilities P_0, P_1, P_2 of ``mode``."""
        p = np.abs(self.c) ** 2
        p = p / p.sum()
        return p.sum(axis=1) if mode == "magnon" else p.sum(axis=0)

    def mean_number(self, mode: str) -> float:
        return float(np.dot(np.arange(3), self.populations(mode)))


@dataclass(frozen=True)
class G2Result:
    value: float
    variant: str
    mode: str


def linear_system(params: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Return (M, b) with M c = -b for c = (C_mn), (m,n) != (0,0)."""
    h = build_hamiltonian(params, WEAK_SPACE, dissipative=True).entries
    return np.array(h[1:, 1:]), np.array(h[1:, 0])


RESONANCE_FACTOR = 10.0


def _check_validity(params: SystemParams):
    scale = max(params.chi, params.g, abs(params.delta_a), abs(params.delta_m), params.kappa_m)
    if params.omega_d_amp > 0.1 * scale:
        warnings.warn(
            f"Omega_d={params.omega_d_amp} is not small against the system scale {scale}",
            WeakDriveWarning,
            stacklevel=3,
        )
    # With gain the one- and two-excitation levels of the undriven system can
    # sit at zero complex energy; the perturbative hierarchy then fails even
    # though the amplitudes stay small.
    m0, _ = linear_system(params.replace(omega_d_amp=0.0))
    gap = float(np.min(np.abs(np.linalg.eigvals(m0))))
    if gap < RESONANCE_FACTOR * params.omega_d_amp:
        warnings.warn(
            f"drive is near-resonant with an undamped level (|E| = {gap:.3g} < "
            f"{RESONANCE_FACTOR:g} Omega_d); weak-drive expansion unreliable",
            WeakDriveWarning,
            stacklevel=3,
        )


def steady_amplitudes(params: SystemParams) -> AmplitudeVector:
    if params.omega_d_amp <= 0:
        raise ValueError("weak-drive steady state needs omega_d_amp > 0")
    _check_validity(params)
    M, b = linear_system(params)
    try:
        # condition check first: exact resonances give numerically singular M
        if np.linalg.cond(M) > 1e13:
            raise np.linalg.LinAlgError("ill-conditioned")
        c = np.linalg.solve(M, -b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"weak-drive system is singular for {params}") from exc
    resid = np.linalg.norm(M @ c + b)
    if resid >= 1e-10 * np.linalg.norm(b):
        raise SingularSystemError(f"weak-drive residual {resid:.3e} too large for {params}")
    amps = np.concatenate([[1.0 + 0j], c]).reshape(3, 3)
    big = np.max(np.abs(c))
    if big > 0.3:
        warnings.warn(f"largest amplitude {big:.3g} exceeds 0.3; weak-drive truncation unreliable",
                      WeakDriveWarning, stacklevel=2)
    return AmplitudeVector(amps)


def g2_analytic(amps: AmplitudeVector, mode: str = "magnon", variant: Variant = "amplitude_sum") -> G2Result:
    """Equal-time g2(0) of the truncated weak-drive state.

    ``amplitude_sum``: 2|S2|^2 / (|S1|^2 + 2|S2|^2)^2 with the amplitudes
    summed coherently, S1 = C10 + C11 and S2 = C20 + C21 + C22 for magnons
    (indices transposed for photons).
    ``probability``: 2 P2 / (P1 + 2 P2)^2 with normalised populations P_k,
    i.e. the exact <o'o'oo>/<o'o>^2 of the truncated state.
    """
    if mode not in ("magnon", "photon"):
        raise ValueError(f"unknown mode {mode!r}")
    c = amps.c if mode == "magnon" else amps.c.T
    if not np.all(np.isfinite(c)):
        raise ValueError("amplitudes must be finite")
    if variant == "amplitude_sum":
        s1 = abs(c[1, 0] + c[1, 1]) ** 2
        s2 = abs(c[2, 0] + c[2, 1] + c[2, 2]) ** 2
    elif variant == "probability":
        p = np.abs(c) ** 2
        p = p.sum(axis=1) / p.sum()
        s1, s2 = p[1], p[2]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    den = (s1 + 2.0 * s2) ** 2
    if den == 0.0:
        raise UndefinedStatisticsError(f"{mode} population vanishes; g2 undefined")
    return G2Result(float(2.0 * s2 / den), variant, mode)
