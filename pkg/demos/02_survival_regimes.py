"""
Three decay regimes and their crossovers
========================================

Starting on the level at t = 0, the survival probability P00(t) drops
quadratically before settling into exponential decay with the pole width.
At long times it turns into a t^-3 power law beating at the band-width
frequency.

The script computes P00 with two independent exact oracles, compares them
with the piecewise asymptotic law, and extracts the crossover times.
"""

import numpy as np

from chainsurvival import (build_chain, evolve_chain, fit_power_law, piecewise_p00,
                           resonance_params, survival_from_ldos, t_return, t_short)
from chainsurvival.regimes import crossover_time, numeric_return_time, period_average

from _common import pyplot, save

model = build_chain(eps0=1.0, v0=0.4)
res = resonance_params(model)

###############################################################################
# Two exact oracles
# -----------------
# ``evolve_chain`` diagonalizes a truncated chain long enough that nothing
# reflected from its far end returns before t_max. ``survival_from_ldos``
# Fourier-transforms the closed-form LDoS with Gauss-Legendre panels.

t = np.linspace(0, 100, 1001)
eig = evolve_chain(model, t)
quad = survival_from_ldos(model, t)
print(f"max |amplitude difference| on [0, 100]: {np.max(np.abs(eig.amplitudes - quad.amplitudes)):.2e}")

###############################################################################
# Short-time crossover
# --------------------
# The quadratic regime ends at t_S = gamma0 / v0^2. Its Golden-Rule estimate
# pi N1(eps0) depends on the chain alone.

ts = t_short(res, model)
print(f"t_S = {ts.t_s:.4f}   Golden-Rule form = {ts.t_s_fgr:.4f}")

###############################################################################
# Return crossover
# ----------------
# The exponential and the period-averaged tail meet at t_R. With mid-band
# weak-coupling constants the first iterate is the closed form and the
# second is its refinement. Exact constants converge to the true meeting
# point. The numeric value is read off the oracle: the first time the
# averaged P00 exceeds the exponential by a factor e.

tr = t_return(res, model)
print(f"t_R iterates (weak constants) {tr.iterates[0]:.2f}, {tr.iterates[1]:.2f}")
print(f"closed form                   {tr.closed_form:.2f}")
print(f"converged exact crossover     {crossover_time(res, model):.2f}")

t_long = np.arange(0, 300, 0.02)
series = evolve_chain(model, t_long)
print(f"numeric crossover from oracle {numeric_return_time(series, res):.2f}")

###############################################################################
# Long-time tail
# --------------
# Past the crossover P00 follows t^-3, modulated at the band width B = 4V.

fit = fit_power_law(series, t_min=120)
print(f"tail exponent {fit.exponent:.3f}, beating frequency {fit.frequency:.4f}, "
      f"relative amplitude {fit.modulation:.4f} (2 beta/(1+beta^2) = {res.modulation_ratio:.4f})")

###############################################################################
# Figure
# ------

plt = pyplot()
if plt is not None:
    law, _ = piecewise_p00(t_long, res, model)
    fig, ax = plt.subplots(figsize=(6.5, 4))
    ax.semilogy(t_long, series.probabilities, lw=0.6, label="exact (eigen oracle)")
    ax.semilogy(t_long, law, "--", lw=1, label="piecewise law")
    avg = period_average(t_long, series.probabilities, 2 * np.pi / model.bandwidth)
    ax.semilogy(t_long, avg, lw=1, label="period average")
    ax.set_ylim(1e-9, 1.5)
    ax.set_xlabel("t  (hbar / V)")
    ax.set_ylabel("P00(t)")
    ax.legend()
    save(fig, "02_regimes.png")
