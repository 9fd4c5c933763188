"""Master-equation solver on the truncated two-mode Fock space.

    d rho/dt = -i [H, rho] + k_a D[a] rho + k_m D[m] rho,
    D[o] rho = 2 o rho o^dag - o^dag o rho - rho o^dag o

H is the Hermitian rotating-frame Hamiltonian.  Cavity gain (k_a < 0) is
either plugged into the loss dissipator as a negative rate (``negative_rate``)
or modelled by |k_a| D[a^dag] (``gain_dissipator``).  Superoperators act on
column-stacked vec(rho), element rho_ij at index i + j*d.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg as sla

from . import kernels
from .errors import (
    DivergenceError,
    NoSteadyStateError,
    PositivityError,
    UndefinedStatisticsError,
)
from .fock import FockSpace, annihilator, build_hamiltonian
from .params import SystemParams

__all__ = [
    "LindbladConfig",
    "DensityMatrix",
    "Liouvillian",
    "SteadyStateReport",
    "build_liouvillian",
    "steady_state",
    "zero_mode",
    "analyze_steady_state",
    "evolve",
    "g2_numeric",
    "mean_number",
    "coherent_state",
    "fock_state",
    "dump_density_matrix",
    "load_density_matrix",
]

GainModel = Literal["negative_rate", "gain_dissipator"]

ZERO_TOL = 1e-8
POSITIVITY_TOL = 1e-6


@dataclass(frozen=True)
class LindbladConfig:
    gain_model: GainModel = "negative_rate"
    n_th_a: float = 0.0
    n_th_m: float = 0.0

    def __post_init__(self):
        if self.gain_model not in ("negative_rate", "gain_dissipator"):
            raise ValueError(f"unknown gain model {self.gain_model!r}")
        if self.n_th_a != 0 or self.n_th_m != 0:
            raise ValueError("only zero thermal occupation is supported")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    space: FockSpace
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.shape != (self.space.dim, self.space.dim):
            raise ValueError("density matrix shape does not match the Fock space")
        if not np.allclose(e, e.conj().T, rtol=0, atol=1e-10):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(e) - 1) > 1e-10:
            raise ValueError(f"density matrix trace {np.trace(e)} != 1")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_state(cls, space: FockSpace, psi: np.ndarray) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(space, np.outer(psi, psi.conj()))

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])

    def expect(self, op) -> complex:
        return complex(np.trace(self.entries @ np.asarray(op)))

    def trace_distance(self, other: "DensityMatrix") -> float:
        return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(self.entries - other.entries))))


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """Generator of the master equation plus the pieces it was built from."""

    space: FockSpace
    matrix: np.ndarray
    hamiltonian: np.ndarray
    jumps: tuple = field(default_factory=tuple)  # ((rate, op), ...)

    @classmethod
    def from_parts(cls, space: FockSpace, hamiltonian, jumps=()) -> "Liouvillian":
        h = np.asarray(hamiltonian, dtype=complex)
        jumps = tuple((float(r), np.asarray(o, dtype=complex)) for r, o in jumps if r != 0)
        heff, ops, rates = _effective(h, jumps)
        return cls(space, kernels.assemble_liouvillian(heff, ops, rates), h, jumps)

    @property
    def heff(self) -> np.ndarray:
        return _effective(self.hamiltonian, self.jumps)[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = self.space.dim
        v = self.matrix @ np.asarray(rho).reshape(-1, order="F")
        return v.reshape(d, d, order="F")

    def norm_bound(self) -> float:
        """Cheap upper bound on the operator 2-norm of the generator."""
        b = 2.0 * np.linalg.norm(self.heff, 2)
        for r, o in self.jumps:
            b += 2.0 * abs(r) * np.linalg.norm(o, 2) ** 2
        return float(b)

    def spectrum(self) -> np.ndarray:
        return sla.eigvals(self.matrix)


def _effective(h, jumps):
    heff = np.array(h, dtype=complex)
    d = heff.shape[0]
    ops = np.zeros((len(jumps), d, d), complex)
    rates = np.zeros(len(jumps))
    for k, (r, o) in enumerate(jumps):
        heff = heff - 1j * r * (o.conj().T @ o)
        ops[k] = o
        rates[k] = r
    return heff, ops, rates


def build_liouvillian(
    params: SystemParams, space: FockSpace, cfg: LindbladConfig | None = None
) -> Liouvillian:
    cfg = cfg or LindbladConfig()
    h = build_hamiltonian(params, space, dissipative=False).entries
    a = annihilator(space, "photon").entries
    m = annihilator(space, "magnon").entries
    if params.kappa_a < 0 and cfg.gain_model == "gain_dissipator":
        photon = (abs(params.kappa_a), a.conj().T)
    else:
        photon = (params.kappa_a, a)
    return Liouvillian.from_parts(space, h, [photon, (params.kappa_m, m)])


@dataclass(frozen=True)
class SteadyStateReport:
    """Zero mode of the Liouvillian together with its stability diagnostics."""

    rho: np.ndarray
    residual: float
    rightmost: complex  # largest-real-part eigenvalue other than the zero mode
    min_eigenvalue: float

    @property
    def stable(self) -> bool:
        return self.rightmost.real <= ZERO_TOL

    @property
    def positive(self) -> bool:
        return self.min_eigenvalue >= -POSITIVITY_TOL

    def diagnostic(self) -> str:
        notes = []
        if not self.stable:
            notes.append(f"unstable: eigenvalue {self.rightmost.real:.6g}{self.rightmost.imag:+.6g}j")
        if not self.positive:
            notes.append(f"non-positive: min eig {self.min_eigenvalue:.3e}")
        return "; ".join(notes)


def _null_vector(L: Liouvillian) -> np.ndarray:
    d = L.space.dim
    A = np.array(L.matrix)
    # trace functional replaces the (redundant) equation for rho_00
    A[0, :] = np.eye(d).reshape(-1, order="F")
    b = np.zeros(d * d, complex)
    b[0] = 1.0
    try:
        lu = sla.lu_factor(A, check_finite=False)
    except (ValueError, sla.LinAlgError) as exc:
        raise NoSteadyStateError(f"Liouvillian zero mode not unique: {exc}") from exc
    if np.min(np.abs(np.diag(lu[0]))) < 1e-13 * np.max(np.abs(np.diag(lu[0]))):
        raise NoSteadyStateError("Liouvillian zero mode is degenerate (no unique steady state)")
    x = sla.lu_solve(lu, b, check_finite=False)
    rho = x.reshape(d, d, order="F")
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def _zero_and_rightmost(L: Liouvillian) -> tuple[complex, complex]:
    # full dense spectrum: Krylov 'LR' iterations miss or invent rightmost
    # eigenvalues of these strongly non-normal generators
    w = sla.eigvals(L.matrix, check_finite=False)
    k = int(np.argmin(np.abs(w)))
    zero = complex(w[k])
    w = np.delete(w, k)
    return zero, complex(w[np.argmax(w.real)])


def analyze_steady_state(L: Liouvillian) -> SteadyStateReport:
    """Zero mode and diagnostics; never raises for instability or positivity."""
    zero, rightmost = _zero_and_rightmost(L)
    if abs(zero) >= ZERO_TOL:
        raise NoSteadyStateError(f"no Liouvillian eigenvalue within {ZERO_TOL} of zero (closest {zero:.3e})",
                                 eigenvalue=zero)
    rho = _null_vector(L)
    resid = float(np.linalg.norm(L.apply(rho)))
    if resid >= ZERO_TOL:
        raise NoSteadyStateError(f"steady-state residual {resid:.3e} exceeds {ZERO_TOL}")
    return SteadyStateReport(
        rho=rho,
        residual=resid,
        rightmost=rightmost,
        min_eigenvalue=float(np.linalg.eigvalsh(rho)[0]),
    )


def zero_mode(L: Liouvillian) -> DensityMatrix:
    """Trace-one null vector of L by a constrained linear solve.

    No stability or positivity analysis; much cheaper than
    :func:`analyze_steady_state` when only the state is needed.
    """
    rho = _null_vector(L)
    resid = float(np.linalg.norm(L.apply(rho)))
    if resid >= ZERO_TOL:
        raise NoSteadyStateError(f"steady-state residual {resid:.3e} exceeds {ZERO_TOL}")
    return DensityMatrix(L.space, rho)


def steady_state(L: Liouvillian, *, strict: bool = True) -> DensityMatrix:
    """Stationary state rho_ss with L(rho_ss) = 0, Hermitised and trace one.

    In strict mode a growing Liouvillian mode raises NoSteadyStateError and a
    negative density-matrix eigenvalue raises PositivityError.  With
    ``strict=False`` the zero mode is returned regardless; use
    :func:`analyze_steady_state` to see what was waived.
    """
    rep = analyze_steady_state(L)
    if strict:
        if not rep.stable:
            raise NoSteadyStateError(
                f"Liouvillian eigenvalue {rep.rightmost:.6g} has positive real part; "
                "the zero mode is not an attractor",
                eigenvalue=rep.rightmost,
            )
        if not rep.positive:
            raise PositivityError(
                f"steady state has eigenvalue {rep.min_eigenvalue:.3e} < -{POSITIVITY_TOL}",
                min_eigenvalue=rep.min_eigenvalue,
            )
    return DensityMatrix(L.space, rep.rho)


def evolve(rho0: DensityMatrix, L: Liouvillian, t_final: float, dt: float) -> DensityMatrix:
    """Propagate rho0 to ``t_final`` with classical RK4 (step <= dt)."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    if t_final == 0:
        return rho0
    if dt * L.norm_bound() >= 1.0:
        raise ValueError(f"dt={dt} too large: dt * ||L|| = {dt * L.norm_bound():.3g} >= 1")
    nsteps = max(1, math.ceil(t_final / dt - 1e-12))
    h = t_final / nsteps
    heff, ops, rates = _effective(L.hamiltonian, L.jumps)
    rho, done, status = kernels.rk4_propagate(heff, ops, rates, rho0.entries, h, nsteps)
    if status != 0:
        raise DivergenceError(f"propagation diverged after {done} steps (t = {done * h:.4g})")
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(L.space, rho / np.trace(rho).real)


def _occupations(space: FockSpace, mode: str) -> np.ndarray:
    if mode not in ("magnon", "photon"):
        raise ValueError(f"unknown mode {mode!r}")
    k = 0 if mode == "magnon" else 1
    return np.array([s[k] for s in space.basis()], dtype=float)


def mean_number(rho: DensityMatrix, mode: str) -> float:
    n = _occupations(rho.space, mode)
    return float(np.dot(np.diag(rho.entries).real, n))


def g2_numeric(rho: DensityMatrix, mode: str = "magnon") -> float:
    """<o'o'oo> / <o'o>^2 for the magnon or photon mode.

    Both operators are diagonal in the Fock basis (o'o'oo = n(n-1)), so only
    the populations enter; Fock states then give exact rationals.
    """
    n = _occupations(rho.space, mode)
    p = np.diag(rho.entries).real
    mean = float(np.dot(p, n))
    if abs(mean) <= 1e-12:
        raise UndefinedStatisticsError(f"{mode} population {abs(mean):.3e} too small for g2")
    return float(np.dot(p, n * (n - 1))) / mean**2


def fock_state(space: FockSpace, m: int, n: int) -> DensityMatrix:
    return DensityMatrix.from_state(space, space.ket(m, n))


def coherent_state(space: FockSpace, alpha_m: complex = 0.0, alpha_a: complex = 0.0) -> DensityMatrix:
    """Product of truncated, renormalised coherent states."""
    def single(alpha, n_max):
        k = np.arange(n_max + 1)
        fact = np.array([math.factorial(int(j)) for j in k], dtype=float)
        return np.exp(-abs(alpha) ** 2 / 2) * alpha**k / np.sqrt(fact)

    psi = np.kron(single(alpha_m, space.n_max_m), single(alpha_a, space.n_max_a))
    return DensityMatrix.from_state(space, psi)


def dump_density_matrix(rho: DensityMatrix) -> str:
    """Row-major text dump, one matrix row per line, entries ``re,im``."""
    buf = io.StringIO()
    buf.write(f"# fock n_max_m={rho.space.n_max_m} n_max_a={rho.space.n_max_a} order=magnon-major\n")
    for row in rho.entries:
        buf.write(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
        buf.write("\n")
    return buf.getvalue()


def load_density_matrix(text: str) -> DensityMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0]
    if not header.startswith("# fock"):
        raise ValueError("missing '# fock' header")
    fields = dict(tok.split("=") for tok in header.split()[2:])
    space = FockSpace(int(fields["n_max_m"]), int(fields["n_max_a"]))
    rows = []
    for ln in lines[1:]:
        rows.append([complex(float(p.split(",")[0]), float(p.split(",")[1])) for p in ln.split()])
    return DensityMatrix(space, np.array(rows))
