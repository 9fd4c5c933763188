"""Truncated two-mode Fock space and dense operators on it.

Basis contract (magnon-major): the ket |m magnons, n photons> sits at index
``m * (n_max_a + 1) + n``.  Amplitude vectors, density matrices and operator
dumps all follow this ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .params import SystemParams

__all__ = [
    "FockSpace",
    "OperatorMatrix",
    "annihilator",
    "creator",
    "number",
    "identity",
    "build_hamiltonian",
    "matrix_element",
]

Mode = Literal["magnon", "photon"]


@dataclass(frozen=True)
class FockSpace:
    n_max_m: int
    n_max_a: int

    def __post_init__(self):
        for name in ("n_max_m", "n_max_a"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {v!r}")

    @property
    def dim(self) -> int:
        return (self.n_max_m + 1) * (self.n_max_a + 1)

    def index(self, m: int, n: int) -> int:
        if not (0 <= m <= self.n_max_m and 0 <= n <= self.n_max_a):
            raise IndexError(f"state |{m},{n}> outside cutoffs ({self.n_max_m},{self.n_max_a})")
        return m * (self.n_max_a + 1) + n

    def state(self, k: int) -> tuple[int, int]:
        return divmod(k, self.n_max_a + 1)

    def basis(self):
        return [self.state(k) for k in range(self.dim)]

    def ket(self, m: int, n: int) -> np.ndarray:
        v = np.zeros(self.dim, complex)
        v[self.index(m, n)] = 1.0
        return v


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    space: FockSpace
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.shape != (self.space.dim, self.space.dim):
            raise ValueError(f"operator shape {e.shape} does not match dim {self.space.dim}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.entries.conj().T)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.space, self.entries @ other.entries)
        return self.entries @ other

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.entries - other.entries)

    def __mul__(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.space, c * self.entries)

    __rmul__ = __mul__

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def is_hermitian(self, atol: float = 1e-14) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0, atol=atol))


def _lowering(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1)


def annihilator(space: FockSpace, mode: Mode) -> OperatorMatrix:
    if mode == "magnon":
        e = np.kron(_lowering(space.n_max_m), np.eye(space.n_max_a + 1))
    elif mode == "photon":
        e = np.kron(np.eye(space.n_max_m + 1), _lowering(space.n_max_a))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return OperatorMatrix(space, e)


def creator(space: FockSpace, mode: Mode) -> OperatorMatrix:
    return annihilator(space, mode).dag()


def number(space: FockSpace, mode: Mode) -> OperatorMatrix:
    if mode not in ("magnon", "photon"):
        raise ValueError(f"unknown mode {mode!r}")
    idx = 0 if mode == "magnon" else 1
    return OperatorMatrix(space, np.diag([float(s[idx]) for s in space.basis()]))


def identity(space: FockSpace) -> OperatorMatrix:
    return OperatorMatrix(space, np.eye(space.dim))


def build_hamiltonian(
    params: SystemParams,
    space: FockSpace,
    frame: Literal["rotating"] = "rotating",
    dissipative: bool = True,
) -> OperatorMatrix:
    """Rotating-frame Hamiltonian of the driven Kerr cavity-magnon model.

    H = (D_a - i k_a) a'a + (D_m - i k_m) m'm + chi (m'm)^2
        + g (a'm + a m') + Omega_d (m' + m)

    With ``dissipative=False`` the -i k terms are dropped and H is Hermitian.
    """
    if frame != "rotating":
        raise ValueError("only the rotating frame is supported")
    a = annihilator(space, "photon").entries
    m = annihilator(space, "magnon").entries
    na = number(space, "photon").entries
    nm = number(space, "magnon").entries
    w_a = complex(params.delta_a, -params.kappa_a if dissipative else 0.0)
    w_m = complex(params.delta_m, -params.kappa_m if dissipative else 0.0)
    h = (
        w_a * na
        + w_m * nm
        + params.chi * (nm @ nm)
        + params.g * (a.conj().T @ m + a @ m.conj().T)
        + params.omega_d_amp * (m.conj().T + m)
    )
    return OperatorMatrix(space, h)


def matrix_element(op: OperatorMatrix, bra: tuple[int, int], ket: tuple[int, int]) -> complex:
    """<bra| op |ket> with bra/ket given as (magnons, photons)."""
    i = op.space.index(*bra)
    j = op.space.index(*ket)
    return complex(op.entries[i, j])
