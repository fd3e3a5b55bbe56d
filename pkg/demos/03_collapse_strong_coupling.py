"""
Survival collapse at strong coupling
====================================

Near the crossover the pole amplitude and the band-edge return amplitude
have comparable size. When their phases oppose, P00 nearly vanishes for a
moment. With eps0 = 1.8 V and v0 = 0.77 V the dip is more than two orders of
magnitude deep and shows as a sharp spike in the effective decay rate
Gamma_eff(t) = -ln P00 / (2t).
"""

import numpy as np

from chainsurvival import analyze, build_chain, effective_rate

from _common import pyplot, save

model = build_chain(eps0=1.8, v0=0.77)

###############################################################################
# Run the full analysis
# ---------------------
# ``analyze`` evolves the chain on a fine grid up to three crossover times,
# then locates the dip and refines it between grid points.

report, series = analyze(model)
print(f"pole width gamma0        {report.resonance['gamma0']:.4f}")
print(f"exact crossover          {report.t_r_crossover:.3f}")
print(f"collapse time            {report.collapse_time:.4f}")
print(f"collapse depth (decades) {report.collapse_depth:.3f}")

gamma_eff = effective_rate(series)
sel = series.times > 1
k = np.nanargmax(gamma_eff[sel])
print(f"Gamma_eff peaks at t = {series.times[sel][k]:.2f} with value {gamma_eff[sel][k]:.3f}")

###############################################################################
# Compare with weak coupling
# --------------------------
# At v0 = 0.4 V the dip is just as deep but sits ten times later, when the
# survival has already fallen by about eight decades. Strong coupling moves
# the collapse to where P00 is still large enough to matter.

weak, _ = analyze(build_chain(1.0, 0.4))
print(f"weak coupling: collapse at {weak.collapse_time:.2f}, depth {weak.collapse_depth:.2f} decades")

###############################################################################
# Figure
# ------

plt = pyplot()
if plt is not None:
    fig, (a1, a2) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    a1.semilogy(series.times, series.probabilities, lw=0.8)
    a1.axvline(report.collapse_time, color="grey", ls="--", lw=0.8)
    a1.set_ylabel("P00(t)")
    a2.plot(series.times, gamma_eff, lw=0.8)
    a2.axhline(report.resonance["gamma0"], color="grey", ls=":", lw=0.8)
    a2.set_xlim(0, 20)
    a2.set_xlabel("t  (hbar / V)")
    a2.set_ylabel("Gamma_eff(t)")
    save(fig, "03_collapse.png")
