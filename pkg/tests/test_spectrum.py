import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptmagnon import NotFoundError, SystemParams
from ptmagnon.spectrum import (
    CoupledModeMatrix,
    PhaseLabel,
    classify_phase,
    eigenvalues,
    find_ep,
    spectrum_sweep,
)

real = st.floats(-5, 5)


def pt(g, w=0.0, kappa_a=-1.0):
    return CoupledModeMatrix.from_rates(w, kappa_a, w, 1.0, g)


def test_symmetric_coupling_required():
    with pytest.raises(ValueError):
        CoupledModeMatrix(0, 1, 2, 0)


def test_decoupled_modes():
    r = eigenvalues(CoupledModeMatrix.from_rates(1.0, 0.1, 2.0, 0.2, 0.0))
    assert sorted([r.omega1, r.omega2], key=lambda z: z.real) == pytest.approx([1 - 0.1j, 2 - 0.2j], abs=1e-15)


def test_exceptional_point_coalescence():
    r = eigenvalues(pt(1.0, w=0.7))
    assert r.omega1 == r.omega2 == 0.7
    assert r.defective


def test_unbroken_eigenvalues():
    r = eigenvalues(pt(2.0, w=0.3))
    assert {round(r.omega1.real, 12), round(r.omega2.real, 12)} == {round(0.3 + 3**0.5, 12), round(0.3 - 3**0.5, 12)}
    assert r.omega1.imag == r.omega2.imag == 0.0
    # oracle: generic eigensolver
    assert sorted(np.linalg.eigvals(pt(2.0, w=0.3).array).real) == pytest.approx(sorted([r.omega1.real, r.omega2.real]))


def test_branch_convention():
    # omega1 takes the root with non-negative real part
    r = eigenvalues(pt(2.0))
    assert r.omega1.real > 0
    r = eigenvalues(pt(0.5))  # broken phase: sqrt is purely imaginary
    assert r.omega1.imag > 0 and r.omega2.imag < 0


@given(real, real, real, real, st.floats(0, 5))
def test_vieta_and_diagonalisation(wa, ka, wm, km, g):
    m = CoupledModeMatrix.from_rates(wa, ka, wm, km, g)
    r = eigenvalues(m)
    P = m.array
    assert abs(r.omega1 + r.omega2 - np.trace(P)) <= 1e-12 * max(1, np.abs(P).max())
    det = P[0, 0] * P[1, 1] - P[0, 1] * P[1, 0]
    assert abs(r.omega1 * r.omega2 - det) <= 1e-12 * max(1, np.abs(P).max() ** 2)
    if r.condition_number < 1e6:
        assert np.allclose(P @ r.q, r.q @ r.d, atol=1e-10)
    for k in range(2):
        col = r.q[:, k]
        assert abs(np.linalg.norm(col) - 1) < 1e-12
        lead = col[np.flatnonzero(np.abs(col) > 0)[0]]
        assert lead.real > 0 and lead.imag == 0


def test_discriminant_formula():
    m = CoupledModeMatrix.from_rates(1.3, -0.4, 0.2, 1.0, 0.8)
    expected = 4 * 0.8**2 - (1j * (1.3 - 0.2) + (-0.4 - 1.0)) ** 2
    assert cmath.isclose(m.discriminant, expected, rel_tol=1e-14)


@pytest.mark.parametrize(
    "g,label",
    [(2.0, PhaseLabel.UNBROKEN), (1.0, PhaseLabel.EXCEPTIONAL), (0.5, PhaseLabel.BROKEN)],
)
def test_classify_phase(g, label):
    assert classify_phase(pt(g)) is label


@given(st.floats(0, 4), st.floats(-3, 3))
def test_phase_invariant_under_common_shift(g, shift):
    assert classify_phase(pt(g)) is classify_phase(pt(g, w=shift))


def test_purely_real_spectrum_unbroken():
    for g in np.linspace(1.01, 3, 50):
        r = eigenvalues(pt(g))
        assert abs(r.omega1.imag) < 1e-10 and abs(r.omega2.imag) < 1e-10


@pytest.mark.parametrize(
    "params,free_var,bracket,expected",
    [
        (SystemParams(kappa_a=-1.0), "g", (0.1, 3.0), 1.0),
        (SystemParams(kappa_a=-3.0), "g", (0.1, 5.0), 2.0),
        (SystemParams(kappa_a=-1.0, g=1.0), "kappa_a", (-3.0, 0.0), -1.0),
        (SystemParams(kappa_a=-1.0, g=1.0), "delta", (-1.0, 0.7), 0.0),
    ],
)
def test_find_ep(params, free_var, bracket, expected):
    x = find_ep(params, free_var, bracket)
    assert x == pytest.approx(expected, abs=1e-8)
    from ptmagnon.spectrum import apply_free_var

    r = eigenvalues(CoupledModeMatrix.from_params(apply_free_var(params, free_var, x)))
    assert abs(r.omega1 - r.omega2) < 1e-8


def test_find_ep_not_found():
    with pytest.raises(NotFoundError):
        find_ep(SystemParams(kappa_a=-1.0), "g", (1.5, 3.0))
    with pytest.raises(ValueError):
        find_ep(SystemParams(kappa_a=-1.0), "g", (3.0, 1.0))


def test_sweep_single_point_matches_eigenvalues():
    p = SystemParams(kappa_a=-1.0, g=2.0)
    t = spectrum_sweep(p, "g", [2.0])
    r = eigenvalues(CoupledModeMatrix.from_params(p))
    assert (t.omega1[0], t.omega2[0]) == (r.omega1, r.omega2)
    assert t.columns == ("value", "re_w1", "im_w1", "re_w2", "im_w2")
    assert list(t.rows())[0] == (2.0, r.omega1.real, r.omega1.imag, r.omega2.real, r.omega2.imag)


def test_sweep_validation():
    with pytest.raises(ValueError):
        spectrum_sweep(SystemParams(), "g", [])
    with pytest.raises(ValueError):
        spectrum_sweep(SystemParams(), "g", [2.0, 1.0])


def test_fig2_and_fig3_shapes():
    t = spectrum_sweep(SystemParams(kappa_a=-1.0, g=1.0), "delta", np.linspace(-5, 5, 201))
    mid = 100
    assert abs(t.omega1[mid] - t.omega2[mid]) < 1e-12
    t = spectrum_sweep(SystemParams(kappa_a=-1.0), "g", np.linspace(0, 3, 301))
    split = np.abs(t.omega1.real - t.omega2.real)
    assert np.all(split[t.values < 0.999] < 1e-12)
    assert np.all(split[t.values > 1.001] > 0)


def test_sweep_continuity():
    # nearest-neighbour pairing keeps each branch smooth
    t = spectrum_sweep(SystemParams(kappa_a=-1.0, g=1.0), "delta", np.linspace(-5, 5, 401))
    for w in (t.omega1, t.omega2):
        assert np.max(np.abs(np.diff(w))) < 0.2
