"""
Zeno and anti-Zeno effects under repeated measurement
=====================================================

Projecting the system onto the level every tau resets the evolution, so
after n projections the survival is P00(tau)^n and the decay runs at
Gamma_meas(tau) = -ln P00(tau) / (2 tau). Short periods freeze the decay.
Periods matching the survival collapse speed it up.
"""

import numpy as np

from chainsurvival import (MeasurementSchedule, build_chain, classify, evolve_chain,
                           measured_rate, resonance_params, survival_under_measurement,
                           sweep_tau, t_short)
from chainsurvival.regimes import crossover_time

from _common import pyplot, save

###############################################################################
# Zeno freezing at weak coupling
# ------------------------------

weak = build_chain(1.0, 0.4)
res = resonance_params(weak)
ts = t_short(res, weak).t_s
schedule = MeasurementSchedule(period=0.1 * ts, count=1000)
print(f"measured every {schedule.period:.4f} for {schedule.duration:.1f}: "
      f"P = {survival_under_measurement(weak, schedule):.4f}")
print(f"left alone for {schedule.duration:.1f}:           "
      f"P = {evolve_chain(weak, [schedule.duration]).probabilities[0]:.3e}")
for tau in (1e-3, 2e-3):
    print(f"tau = {tau:g}: Gamma_meas / tau = {measured_rate(weak, tau) / tau:.5f} "
          f"(v0^2/2 = {weak.v0 ** 2 / 2:.5f})")

###############################################################################
# Long periods settle near the pole width
# ---------------------------------------
# On the exponential branch Gamma_meas / gamma0 = 1 - ln A / (2 tau gamma0),
# so the ratio approaches 1 only slowly.

for tau in (5.0, 10.0, 20.0, 40.0):
    ratio = measured_rate(weak, tau) / res.gamma0
    print(f"tau = {tau:4.0f}: Gamma_meas / gamma0 = {ratio:.4f}  {classify(weak, tau).value}")

###############################################################################
# Anti-Zeno at the strong-coupling collapse
# -----------------------------------------

strong = build_chain(1.8, 0.77)
sres = resonance_params(strong)
taus = np.geomspace(0.01, 3 * crossover_time(sres, strong), 800)
sweep = sweep_tau(strong, taus)
best = sweep.argmax
print(f"strongest anti-Zeno period tau = {sweep.taus[best]:.3f}: "
      f"Gamma_meas = {sweep.rates[best]:.3f} vs gamma0 = {sres.gamma0:.3f}")
counts = {c.value: sum(1 for x in sweep.classes if x is c) for c in set(sweep.classes)}
print("classes over the sweep:", counts)

###############################################################################
# Figure
# ------

plt = pyplot()
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.loglog(sweep.taus, sweep.rates / sres.gamma0)
    ax.axhline(1.0, color="grey", ls=":", lw=0.8)
    ax.set_xlabel("measurement period tau  (hbar / V)")
    ax.set_ylabel("Gamma_meas / gamma0")
    save(fig, "04_zeno.png")
