import math
import warnings

import numpy as np
import pytest

from ptmagnon import SingularSystemError, SystemParams, UndefinedStatisticsError
from ptmagnon.fock import FockSpace
from ptmagnon.lindblad import DensityMatrix, g2_numeric
from ptmagnon.weakdrive import (
    WEAK_SPACE,
    AmplitudeVector,
    WeakDriveWarning,
    g2_analytic,
    linear_system,
    steady_amplitudes,
)

R2 = math.sqrt(2)


def reference_equations(p):
    """Hand-written table of the eight stationarity equations.

    Row (m, n) lists the coefficient of every C_m'n' appearing in dC_mn/dt,
    with (0, 0) the drive source term.
    """
    wa = p.delta_a - 1j * p.kappa_a
    wm = p.delta_m - 1j * p.kappa_m
    g, chi, om = p.g, p.chi, p.omega_d_amp
    return {
        (1, 0): {(1, 0): wm + chi, (0, 1): g, (2, 0): om * R2, (0, 0): om},
        (0, 1): {(0, 1): wa, (1, 0): g, (1, 1): om},
        (1, 1): {(1, 1): wa + wm + chi, (2, 0): R2 * g, (0, 2): R2 * g, (2, 1): om * R2, (0, 1): om},
        (2, 0): {(2, 0): 2 * wm + 4 * chi, (1, 1): R2 * g, (1, 0): R2 * om},
        (0, 2): {(0, 2): 2 * wa, (1, 1): g * R2, (1, 2): om},
        (1, 2): {(1, 2): wm + 2 * wa + chi, (2, 1): 2 * g, (2, 2): om, (0, 2): om},
        (2, 1): {(2, 1): 2 * wm + wa + 4 * chi, (1, 2): 2 * g, (1, 1): R2 * om},
        (2, 2): {(2, 2): 2 * wa + 2 * wm + 4 * chi, (1, 2): om * R2},
    }


# Known slip in the hand-written table: m|2,2> = sqrt(2)|1,2>, so the drive
# term on C22 in dC12/dt carries sqrt(2).  The generated system is authoritative.
WHITELIST = {((1, 2), (2, 2)): lambda p: R2 * p.omega_d_amp}


@pytest.mark.parametrize(
    "p",
    [
        SystemParams(delta_a=0.3, delta_m=-0.7, kappa_a=-1.3, kappa_m=0.8, g=1.1, chi=0.17, omega_d_amp=0.02),
        SystemParams(kappa_a=-1.0, g=1.0, chi=0.1, omega_d_amp=0.01),
    ],
)
def test_generated_system_matches_reference_equations(p):
    M, b = linear_system(p)
    states = [WEAK_SPACE.state(k) for k in range(1, 9)]
    table = reference_equations(p)
    for r, row_state in enumerate(states):
        eq = table[row_state]
        assert b[r] == pytest.approx(eq.get((0, 0), 0.0), abs=1e-15), row_state
        for c, col_state in enumerate(states):
            key = (row_state, col_state)
            expected = WHITELIST[key](p) if key in WHITELIST else eq.get(col_state, 0.0)
            assert M[r, c] == pytest.approx(expected, abs=1e-15), key
    # the whitelisted entry really differs from the table
    (row, col), = WHITELIST
    assert table[row][col] != pytest.approx(M[states.index(row), states.index(col)])


def test_amplitude_vector_invariants():
    with pytest.raises(ValueError):
        AmplitudeVector(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        AmplitudeVector(np.ones((2, 2)))
    a = AmplitudeVector.from_dict({(1, 0): 0.01})
    assert a[0, 0] == 1 and a[1, 0] == 0.01 and a[2, 2] == 0
    with pytest.raises(ValueError):
        a.c[0, 1] = 1.0


def test_single_mode_driven_damped():
    p = SystemParams(g=0.0, chi=0.0, omega_d_amp=0.01)
    a = steady_amplitudes(p)
    assert a[1, 0] == pytest.approx(-0.01 / (0.0 - 1j), rel=1e-4)
    assert abs(a[1, 0]) == pytest.approx(0.01, rel=1e-4)
    assert abs(a[2, 0]) == pytest.approx(0.01**2 / R2, rel=1e-3)


def test_decoupled_photon_never_excited():
    a = steady_amplitudes(SystemParams(g=0.0, chi=0.1, delta_m=0.5))
    assert np.all(a.c[:, 1:] == 0)


def test_residual_and_scaling_with_drive():
    p = SystemParams(kappa_a=1.0, g=1.0, chi=0.1, omega_d_amp=0.01).with_delta(1.5)
    a1, a2 = steady_amplitudes(p), steady_amplitudes(p.replace(omega_d_amp=0.005))
    for mn in ((1, 0), (0, 1)):
        assert a2[mn] / a1[mn] == pytest.approx(0.5, rel=1e-3)
    for mn in ((2, 0), (1, 1), (0, 2)):
        assert a2[mn] / a1[mn] == pytest.approx(0.25, rel=1e-3)
    M, b = linear_system(p)
    c = a1.c.reshape(-1)[1:]
    assert np.linalg.norm(M @ c + b) < 1e-10 * np.linalg.norm(b)


def test_singular_system():
    # balanced gain and loss at the exceptional point put a level at exactly
    # zero energy; a vanishing drive leaves nothing to regularise it
    p = SystemParams(kappa_a=-1.0, g=1.0, chi=0.0, omega_d_amp=1e-9)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WeakDriveWarning)
        with pytest.raises(SingularSystemError):
            steady_amplitudes(p)


def test_zero_drive_rejected():
    with pytest.raises(ValueError):
        steady_amplitudes(SystemParams(omega_d_amp=0.0))


@pytest.mark.filterwarnings("ignore:drive is near-resonant")
def test_strong_drive_warns():
    with pytest.warns(WeakDriveWarning, match="not small"):
        steady_amplitudes(SystemParams(omega_d_amp=0.5))


@pytest.mark.filterwarnings("ignore:largest amplitude")
def test_resonant_gain_point_warns():
    # balanced gain/loss at the exceptional point: the drive hits an
    # undamped zero-energy level
    with pytest.warns(WeakDriveWarning, match="near-resonant"):
        steady_amplitudes(SystemParams(kappa_a=-1.0, g=1.0, chi=0.0))


def test_perfect_blockade_limit():
    a = AmplitudeVector.from_dict({(1, 0): 0.01})
    for variant in ("amplitude_sum", "probability"):
        assert g2_analytic(a, "magnon", variant).value == 0.0


def test_undefined_statistics():
    a = AmplitudeVector.from_dict({(1, 0): 0.01})
    with pytest.raises(UndefinedStatisticsError):
        g2_analytic(a, "photon")
    with pytest.raises(ValueError):
        g2_analytic(a, "phonon")
    with pytest.raises(ValueError):
        g2_analytic(a, "magnon", "bogus")


def test_amplitude_sum_formula_by_hand():
    a = AmplitudeVector.from_dict({(1, 0): 0.1, (1, 1): 0.02j, (2, 0): 0.005, (2, 1): 1e-3, (0, 1): 0.03})
    s1 = abs(0.1 + 0.02j) ** 2
    s2 = abs(0.005 + 1e-3) ** 2
    assert g2_analytic(a, "magnon").value == pytest.approx(2 * s2 / (s1 + 2 * s2) ** 2, rel=1e-14)
    # photon: indices transposed, no two-photon amplitude
    assert g2_analytic(a, "photon").value == 0.0


@pytest.mark.parametrize("kappa_a", [1.0, 0.5])
def test_poissonian_limit_loss_side(kappa_a):
    a = steady_amplitudes(SystemParams(kappa_a=kappa_a, g=1.0, chi=0.0))
    for mode in ("magnon", "photon"):
        assert g2_analytic(a, mode, "probability").value == pytest.approx(1.0, abs=1e-3)


def test_poissonian_limit_pt_detuned():
    a = steady_amplitudes(SystemParams(kappa_a=-1.0, g=2.0, chi=0.0).with_delta(0.5))
    for mode in ("magnon", "photon"):
        assert g2_analytic(a, mode, "probability").value == pytest.approx(1.0, abs=1e-3)


def test_amplitude_sum_bias_is_first_order_in_drive():
    # C10 + C11 mixes orders Omega and Omega^2, so the coherent-sum formula
    # misses 1 by O(Omega) at chi = 0
    devs = []
    for om in (1e-2, 5e-3, 2.5e-3):
        a = steady_amplitudes(SystemParams(kappa_a=1.0, g=1.0, chi=0.0, omega_d_amp=om))
        devs.append(g2_analytic(a, "magnon").value - 1.0)
    assert devs[0] / devs[1] == pytest.approx(2.0, rel=0.05)
    assert devs[1] / devs[2] == pytest.approx(2.0, rel=0.05)


@pytest.mark.parametrize("variant", ["amplitude_sum", "probability"])
@pytest.mark.parametrize("kappa_a", [1.0, 2.0])
def test_chi_zero_converges_as_drive_decreases(variant, kappa_a):
    dev = []
    for om in (1e-2, 1e-3):
        a = steady_amplitudes(SystemParams(kappa_a=kappa_a, g=1.0, chi=0.0, omega_d_amp=om).with_delta(0.3))
        dev.append(abs(g2_analytic(a, "magnon", variant).value - 1))
    assert dev[1] < dev[0]


def test_fig5_blue_minimum():
    grid = np.linspace(-5, 5, 201)
    base = SystemParams(kappa_a=1.0, g=1.0, chi=0.1, omega_d_amp=0.01)
    vals = np.array([g2_analytic(steady_amplitudes(base.with_delta(x))).value for x in grid])
    k = int(np.argmin(vals))
    assert vals[k] == pytest.approx(0.9195, abs=1e-3)
    assert grid[k] == pytest.approx(1.6, abs=1e-9)


def test_fig5_red_pt_point_antibunched():
    a = steady_amplitudes(SystemParams(kappa_a=-1.0, g=1.0, chi=0.1, omega_d_amp=0.01))
    assert g2_analytic(a, "magnon").value == pytest.approx(0.0104, abs=1e-4)
    assert g2_analytic(a, "photon").value == pytest.approx(0.0391, abs=1e-4)


@pytest.mark.parametrize(
    "p",
    [
        SystemParams(kappa_a=1.0, g=1.0, chi=0.1).with_delta(1.5),
        SystemParams(kappa_a=-1.0, g=1.0, chi=0.1),
        SystemParams(kappa_a=-3.0, g=2.0, chi=0.3, delta_a=0.2, delta_m=-0.4),
    ],
)
def test_probability_variant_equals_exact_g2_of_embedded_state(p):
    a = steady_amplitudes(p)
    for space in (WEAK_SPACE, FockSpace(4, 3)):
        rho = DensityMatrix.from_state(space, a.state_vector(space))
        for mode in ("magnon", "photon"):
            assert g2_numeric(rho, mode) == pytest.approx(g2_analytic(a, mode, "probability").value, rel=1e-12)


def test_populations_and_mean_number():
    a = AmplitudeVector.from_dict({(1, 0): 0.1, (2, 1): 0.05})
    pm = a.populations("magnon")
    assert pm.sum() == pytest.approx(1.0)
    assert a.mean_number("magnon") == pytest.approx((0.01 + 2 * 0.0025) / (1 + 0.01 + 0.0025))
    assert a.mean_number("photon") == pytest.approx(0.0025 / 1.0125)
    with pytest.raises(ValueError):
        a.state_vector(FockSpace(1, 2))
