import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.integrate import quad

from chainsurvival import (Classification, DomainError, ResonanceError, build_chain,
                           classify_resonance, gamma_of_eps, green_00, ldos_0,
                           ldos_1_unperturbed, ldos_curve, resonance_params,
                           surface_self_energy, truncate)
from chainsurvival.spectral import bound_states, ldos_from_green, numeric_prefactor


def test_gamma_of_eps():
    assert gamma_of_eps(2, 1) == pytest.approx(1.0, abs=1e-15)
    assert gamma_of_eps(0, 1) == 0.0
    assert gamma_of_eps(4, 1) == 0.0
    assert gamma_of_eps(1, 1) == pytest.approx(math.sqrt(3) / 2, rel=1e-15)
    with pytest.raises(DomainError):
        gamma_of_eps(4.5, 1)
    with pytest.raises(DomainError):
        gamma_of_eps(-0.1, 1)


def test_self_energy_band_centre():
    sigma = surface_self_energy(2.0, 0.4, 1.0)
    assert sigma.real == pytest.approx(0.0, abs=1e-15)
    assert sigma.imag == pytest.approx(-0.16, rel=1e-14)
    # Golden-Rule width -pi v0^2 N1(2V)
    assert sigma.imag == pytest.approx(-math.pi * 0.16 * ldos_1_unperturbed(2.0), rel=1e-14)


def test_self_energy_inside_band_closed_form():
    e = np.linspace(0.01, 3.99, 101)
    sigma = surface_self_energy(e, 0.4, 1.0)
    expected = 0.16 * ((e - 2) / 2 - 1j * np.sqrt(e) * np.sqrt(4 - e) / 2)
    np.testing.assert_allclose(sigma, expected, rtol=1e-13, atol=1e-15)


def test_self_energy_decays_outside_band():
    for e in (1e3, 1e6, -1e3, -1e6):
        assert abs(surface_self_energy(e, 0.4, 1.0)) < 1.0 / abs(e)
    for e in (4.5, 10.0, -0.5, -10.0):
        assert surface_self_energy(e, 0.4, 1.0).imag == 0.0


def test_self_energy_retarded_everywhere():
    e = np.linspace(-20, 20, 4001)
    assert np.all(surface_self_energy(e, 0.7, 1.0).imag <= 0)


def test_decoupled_limit():
    m = build_chain(1.3, 1e-6, 1.0)
    e = np.array([0.2, 2.5, 3.9])
    np.testing.assert_allclose(green_00(e, m), 1 / (e - 1.3), rtol=1e-9)


def test_green_peak_near_resonance(weak):
    e = np.linspace(0.001, 3.999, 40001)
    peak = e[np.argmax(-np.imag(green_00(e, weak)))]
    assert peak == pytest.approx(0.9, abs=0.02)


def test_ldos_dual_route(weak, strong):
    e = np.linspace(0, 4, 1002)[1:-1]
    for m in (weak, strong, build_chain(2.0, 0.4), build_chain(3.1, 0.2)):
        a = ldos_0(e, m)
        b = ldos_from_green(e, m)
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=0)


def test_ldos_vanishes_at_edges(weak):
    assert ldos_0(0.0, weak) == 0.0
    assert ldos_0(4.0, weak) == 0.0
    assert ldos_0(-1.0, weak) == 0.0


def test_ldos_argmax(weak):
    from scipy.optimize import minimize_scalar

    # the sqrt band factor pulls the maximum slightly above eps_r = 0.9048
    peak = minimize_scalar(lambda e: -ldos_from_green(e, weak), bounds=(0.5, 1.5),
                           method="bounded", options={"xatol": 1e-12}).x
    curve = ldos_curve(weak)
    k = np.argmax(curve.values)
    step = np.max(np.diff(curve.energies))
    assert abs(curve.energies[k] - peak) < 2 * step
    assert abs(curve.energies[k] - 0.9) <= 0.01


def test_ldos_1_unperturbed():
    assert ldos_1_unperturbed(2, 1) == pytest.approx(1 / math.pi, rel=1e-15)
    assert ldos_1_unperturbed(1, 1) == pytest.approx(math.sqrt(3) / 2 / math.pi, rel=1e-15)
    total, _ = quad(ldos_1_unperturbed, 0, 4, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("eps0, v0", [(1.0, 0.4), (1.8, 0.77), (2.0, 0.4), (0.5, 0.2)])
def test_sum_rule_independent_quadrature(eps0, v0):
    m = build_chain(eps0, v0)
    res = resonance_params(m)
    total, _ = quad(ldos_0, 0, 4, args=(m,), points=[res.eps_r], limit=400,
                    epsabs=1e-12, epsrel=1e-12)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_ldos_curve_trapezoid_sum_rule(weak, strong):
    for m in (weak, strong):
        assert ldos_curve(m).integral() == pytest.approx(1.0, abs=1e-6)


def test_band_centre_symmetry():
    m = build_chain(2.0, 0.5)
    x = np.linspace(0, 2, 501)[1:-1]
    np.testing.assert_allclose(ldos_0(2 + x, m), ldos_0(2 - x, m), rtol=0, atol=1e-12)


def test_resonance_weak_coupling(weak_res):
    assert weak_res.eps_r == pytest.approx(0.9048, abs=5e-5)
    assert weak_res.gamma0 == pytest.approx(0.1463, abs=5e-5)
    assert weak_res.eps_r == 1.0 + weak_res.delta0


@pytest.mark.parametrize("v0", [0.1, 0.4, 0.9])
def test_band_centre_resonance(v0):
    res = resonance_params(build_chain(2.0, v0))
    assert res.delta0 == 0.0
    assert res.eps_r == 2.0
    assert res.beta == 1.0


def test_pole_is_a_root_of_the_continued_denominator(weak, strong):
    for m in (weak, strong):
        z = resonance_params(m).pole
        assert abs(z - m.eps0 - surface_self_energy(z, m.v0, m.v)) < 1e-13


@pytest.mark.parametrize("eps0, v0, v", [(1.0, 0.4, 1.0), (1.8, 0.77, 1.0), (2.0, 0.4, 1.0),
                                         (3.0, 0.6, 1.5)])
def test_prefactor_matches_residue(eps0, v0, v):
    m = build_chain(eps0, v0, v)
    assert resonance_params(m).prefactor_a == pytest.approx(numeric_prefactor(m), rel=1e-9)


def test_resonance_limit_v0_to_zero():
    widths, shifts = [], []
    for v0 in (0.2, 0.1, 0.05, 0.025):
        res = resonance_params(build_chain(1.0, v0))
        widths.append(res.gamma0)
        shifts.append(abs(res.eps_r - 1.0))
    assert all(a > b for a, b in zip(widths, widths[1:]))
    assert all(a > b for a, b in zip(shifts, shifts[1:]))
    assert widths[-1] < 1e-3 and shifts[-1] < 1e-3


def test_classification(weak):
    assert classify_resonance(weak) is Classification.WELL_DEFINED
    assert classify_resonance(build_chain(-3, 0.4)) is Classification.OUT_OF_BAND
    assert classify_resonance(build_chain(2, 1.5)) is Classification.LOCALIZED_STATE
    assert classify_resonance(build_chain(2, 1.2)) is Classification.VIRTUAL_STATE


def test_localized_state_in_finite_chain():
    m = build_chain(2.0, 1.5)
    roots = bound_states(m)
    assert len(roots) == 2
    ev = np.linalg.eigvalsh(truncate(m, 2000).matrix())
    outside = ev[(ev < -1e-9) | (ev > 4 + 1e-9)]
    assert outside.size == 2
    np.testing.assert_allclose(np.sort(outside), np.sort(roots), atol=1e-9)


def test_no_localized_state_for_virtual_case():
    ev = np.linalg.eigvalsh(truncate(build_chain(2.0, 1.2), 2000).matrix())
    assert np.all((ev > -1e-9) & (ev < 4 + 1e-9))


def test_resonance_error_carries_classification():
    with pytest.raises(ResonanceError) as info:
        resonance_params(build_chain(-3, 0.4))
    assert info.value.classification is Classification.OUT_OF_BAND


def test_ldos_csv(tmp_path, weak):
    from chainsurvival.io import read_csv

    path = tmp_path / "ldos.csv"
    ldos_curve(weak).to_csv(path)
    header, names, cols = read_csv(path)
    assert names == ["energy", "ldos"]
    assert header[0] == "model: eps0=1.0,v0=0.4,v=1.0"
    assert cols[0].size == 4096


@settings(max_examples=60, deadline=None)
@given(st.floats(0.3, 3.7), st.floats(0.02, 0.9))
def test_resonance_properties(eps0, v0):
    m = build_chain(eps0, v0)
    assume(classify_resonance(m) is Classification.WELL_DEFINED)
    res = resonance_params(m)
    assert res.gamma0 > 0 and res.gamma_c > 0
    assert res.eps_r == eps0 + res.delta0
    assert res.prefactor_a >= 1 - 1e-9
    e = np.linspace(-2, 6, 801)
    assert np.all(np.imag(green_00(e, m)) <= 0)
