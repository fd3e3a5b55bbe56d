"""Acceptance criteria, one test each.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per criterion
in the ``acceptance criteria`` section of the terminal summary.
"""

import math

import numpy as np
import pytest

from chainsurvival import (MeasurementSchedule, StarModel, TridiagonalHamiltonian, analyze,
                           build_chain, evolve_chain, evolve_eigen, fit_power_law, ldos_0,
                           ldos_curve, measured_rate, resonance_params, survival_from_ldos,
                           survival_under_measurement, t_return, t_short, tridiagonalize,
                           truncate, unfold)
from chainsurvival.propagate import evolve_state
from chainsurvival.regimes import A1, A2
from chainsurvival.spectral import ldos_from_green

acceptance = pytest.mark.acceptance


@acceptance("1", "resonance closed forms (eps_r, gamma0) vs 0.9 / 0.14")
def test_resonance_closed_forms(weak):
    res = resonance_params(weak)
    assert res.eps_r == pytest.approx(0.9048, abs=5e-5)
    assert res.gamma0 == pytest.approx(0.1463, abs=5e-5)
    assert abs(res.eps_r - 0.9) <= 0.01
    assert abs(res.gamma0 - 0.14) <= 0.01


@acceptance("2", "short crossover t_S ~ 0.8 within 0.1")
def test_short_crossover(weak, weak_res):
    ts = t_short(weak_res, weak).t_s_fgr
    assert ts == pytest.approx(0.866, abs=1e-3)
    assert abs(ts - 0.8) <= 0.1


@acceptance("3", "return crossover chain 41 / 67 / numeric 62")
def test_return_crossover_chain(weak, weak_res, weak_analysis):
    assert A1 == 2.5 and A2 == (4 * math.pi) ** 0.2
    tr = t_return(weak_res, weak, iterations=2)
    assert tr.closed_form == pytest.approx(41, abs=1)
    assert tr.iterates[0] == pytest.approx(41, abs=1)
    assert tr.iterates[1] == pytest.approx(67, abs=2)
    report, _ = weak_analysis
    assert report.t_r_numeric == pytest.approx(62, rel=0.15)


@acceptance("4", "strong-coupling collapse near 6.8, depth >= 2 decades")
def test_strong_coupling_collapse(strong_analysis):
    report, _ = strong_analysis
    assert report.collapse_time == pytest.approx(6.8, rel=0.2)
    assert report.collapse_depth >= 2


@acceptance("5", "regime shapes: quadratic, exponential window, t^-3 tail with B beating")
def test_regime_shapes(weak, weak_res):
    h = truncate(weak, 600)
    # (a) short-time law
    t = np.array([1e-3])
    p = evolve_eigen(h, t).probabilities
    assert (1 - p[0]) / t[0] ** 2 == pytest.approx(weak.v0 ** 2, rel=1e-3)
    # (b) exponential window [2 t_S, 0.5 t_R], t_R from the closed form
    ts = t_short(weak_res, weak).t_s
    t_r = t_return(weak_res, weak).closed_form
    t = np.linspace(2 * ts, 0.5 * t_r, 400)
    p = evolve_eigen(h, t).probabilities
    assert np.max(np.abs(weak_res.exponential(t) / p - 1)) < 0.05
    # (c) long-time envelope, inside the reflection-free range of 600 sites
    t = np.arange(100, 230, 0.02)
    fit = fit_power_law(evolve_eigen(h, t), 100)
    assert fit.exponent == pytest.approx(-3.0, abs=0.1)
    assert fit.frequency == pytest.approx(weak.bandwidth, rel=0.02)


@acceptance("6", "dual oracle: eigen vs LDoS quadrature to 1e-6 on [0, 100]")
def test_dual_oracle(weak):
    t = np.linspace(0, 100, 2001)
    eig = evolve_chain(weak, t)
    quad = survival_from_ldos(weak, t)
    assert np.max(np.abs(eig.amplitudes - quad.amplitudes)) < 1e-6


@acceptance("7", "conservation: unitarity, LDoS sum rule, factorization")
def test_conservation(weak, strong):
    psi = evolve_state(truncate(weak, 300), np.linspace(0, 100, 21))
    np.testing.assert_allclose(np.sum(np.abs(psi) ** 2, axis=1), 1.0, atol=1e-10)
    for m in (weak, strong):
        assert ldos_curve(m).integral() == pytest.approx(1.0, abs=1e-6)
        e = np.linspace(0, 4, 2002)[1:-1]
        np.testing.assert_allclose(ldos_0(e, m), ldos_from_green(e, m), rtol=1e-10, atol=0)


@acceptance("8", "Zeno slope, anti-Zeno at the collapse, exponential invariance")
def test_zeno_anti_zeno(weak, strong, strong_res, strong_analysis):
    tau = 1e-3
    assert measured_rate(weak, tau) / tau == pytest.approx(weak.v0 ** 2 / 2, rel=0.05)
    report, _ = strong_analysis
    assert measured_rate(strong, report.collapse_time) > strong_res.gamma0
    g = 0.14
    expo = lambda t: np.exp(-2 * g * np.asarray(t))
    for tau in (0.01, 0.5, 3.0, 40.0):
        assert measured_rate(weak, tau, expo) == pytest.approx(g, rel=1e-10)
        sched = MeasurementSchedule(tau, 10)
        assert survival_under_measurement(weak, sched, expo) == pytest.approx(
            math.exp(-2 * g * sched.duration), rel=1e-10)


@acceptance("9", "recursion round trip chain -> star -> chain, spectrum preserved")
def test_recursion_round_trip():
    # moderate disorder keeps the inverse spectral problem well posed in
    # double precision; strongly localised chains are ill-conditioned for any
    # orthogonal reduction (Householder included), see test_model
    rng = np.random.default_rng(7)
    for length in range(2, 51):
        for chain in (TridiagonalHamiltonian(2 + rng.uniform(-0.5, 0.5, length),
                                             rng.uniform(0.7, 1.3, length - 1)),
                      truncate(build_chain(1.0, 0.4), length)):
            back = tridiagonalize(unfold(chain))
            np.testing.assert_allclose(back.diag, chain.diag, rtol=0, atol=1e-10)
            np.testing.assert_allclose(back.offdiag, chain.offdiag, rtol=0, atol=1e-10)
    star = StarModel(0.3, rng.normal(size=50), rng.uniform(0, 4, size=50))
    np.testing.assert_allclose(np.linalg.eigvalsh(tridiagonalize(star).matrix()),
                               np.linalg.eigvalsh(star.matrix()), rtol=0, atol=1e-10)
