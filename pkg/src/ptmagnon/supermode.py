"""Effective Kerr coefficients of the linear supermodes.

Writing m = Q21 A + Q22 M, with (A, M) the supermodes that diagonalise the
coupled-mode matrix P, turns chi (m'm)^2 into chi1 (A'A)^2 + chi2 (M'M)^2 +
chi3 A'A M'M plus terms that do not conserve supermode number, with

    chi1 = chi |Q21|^4,  chi2 = chi |Q22|^4,  chi3 = 4 chi |Q21|^2 |Q22|^2.

The supermode operators are normalised to be bosonic, [A, A'] = [M, M'] = 1,
i.e. the rows of Q^-1 (left eigenvectors) have unit norm.  For a non-Hermitian
P those rows become parallel at the exceptional point, so |Q_2j| and with it
chi1..chi3 grow as chi g^4 / (g^2 - k^2)^2 when g approaches the EP.
Only ratios and trends are physically meaningful: the absolute values depend
on this normalisation choice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTransformError, ParameterError
from .params import SystemParams
from .spectrum import CoupledModeMatrix, eigenvalues

__all__ = ["EffectiveKerr", "ScalingPrediction", "supermode_transform", "effective_kerr", "kerr_scaling"]

ILL_CONDITIONED = 1e8


@dataclass(frozen=True)
class EffectiveKerr:
    chi1: float
    chi2: float
    chi3: float
    q21_abs: float
    q22_abs: float
    condition_number: float = 1.0

    @property
    def ill_conditioned(self) -> bool:
        return self.condition_number > ILL_CONDITIONED


@dataclass(frozen=True)
class ScalingPrediction:
    epsilon: float
    value: float


def supermode_transform(params: SystemParams) -> tuple[np.ndarray, float]:
    """Bosonic-normalised Q (columns: photon-like supermode first) and cond(Q).

    Raises DegenerateTransformError when the eigenvectors coalesce.
    """
    res = eigenvalues(CoupledModeMatrix.from_params(params))
    if res.defective:
        raise DegenerateTransformError(
            f"eigenvectors coalesce (exceptional point) for {params}; supermodes undefined"
        )
    q = res.q
    # A is the supermode with the larger photon weight; ties keep eigenvalue order
    if abs(q[0, 1]) > abs(q[0, 0]) + 1e-12:
        q = q[:, ::-1]
    rows = np.linalg.inv(q)
    norms = np.linalg.norm(rows, axis=1)
    qs = q * norms[np.newaxis, :]
    return qs, float(np.linalg.cond(qs))


def effective_kerr(params: SystemParams) -> EffectiveKerr:
    qs, cond = supermode_transform(params)
    q21, q22 = abs(qs[1, 0]), abs(qs[1, 1])
    chi = params.chi
    return EffectiveKerr(
        chi1=chi * q21**4,
        chi2=chi * q22**4,
        chi3=4.0 * chi * q21**2 * q22**2,
        q21_abs=q21,
        q22_abs=q22,
        condition_number=cond,
    )


def kerr_scaling(params: SystemParams, epsilon: float) -> ScalingPrediction:
    """chi g^4 / (g^2 - kappa_a^2 + epsilon^2)^2, up to an unknown constant."""
    if epsilon < 0:
        raise ParameterError("epsilon must be >= 0")
    den = (params.g**2 - params.kappa_a**2 + epsilon**2) ** 2
    num = params.chi * params.g**4
    if den == 0.0:
        if num == 0.0:
            return ScalingPrediction(epsilon, 0.0)
        raise ParameterError(f"scaling law diverges at g = |kappa_a| = {params.g} with epsilon = 0")
    return ScalingPrediction(epsilon, num / den)
