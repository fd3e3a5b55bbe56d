"""
Resonance of a level coupled to a tight-binding chain
=====================================================

A single level at energy eps0 hangs off the end of a semi-infinite chain
whose sites sit at 2V and are linked by hoppings V, so the chain band is
[0, 4V]. The level talks to the chain through one hopping v0.

This script computes the closed-form resonance (position, width and the
prefactors of the long-time laws), checks the local density of states of
the level against its sum rule, and shows what happens when the coupling is
too strong or the level sits outside the band.
"""

import numpy as np

from chainsurvival import (Classification, build_chain, classify_resonance, green_00,
                           ldos_curve, resonance_params)
from chainsurvival.spectral import bound_states

from _common import pyplot, save

###############################################################################
# The weak-coupling model: eps0 = V, v0 = 0.4 V
# ---------------------------------------------
# All energies are in units of V and hbar = 1.

model = build_chain(eps0=1.0, v0=0.4)
res = resonance_params(model)
print(f"model             {model.describe()}")
print(f"band              [{model.band_lower}, {model.band_upper}]")
print(f"resonance energy  eps_r  = {res.eps_r:.4f}")
print(f"pole width        gamma0 = {res.gamma0:.4f}")
print(f"exponential prefactor  A = {res.prefactor_a:.4f}")
print(f"tail prefactor         C = {res.prefactor_c:.3e}")
print(f"edge asymmetry      beta = {res.beta:.4f}")

###############################################################################
# The pole is a root of the continued denominator
# -----------------------------------------------
# eps - eps0 - Sigma(eps) vanishes at the complex pole eps_r - i gamma0 on the
# second sheet. ``numeric_prefactor`` recovers A from the residue by finite
# differences, an independent check on the closed form.

from chainsurvival.spectral import numeric_prefactor

print(f"A from the residue      {numeric_prefactor(model):.10f}")
print(f"A from the closed form  {res.prefactor_a:.10f}")

###############################################################################
# Local density of states and its sum rule
# ----------------------------------------
# The level's LDoS is a Lorentzian-like peak near eps_r, squeezed to zero at
# both band edges by the square-root density of the chain.

curve = ldos_curve(model)
print(f"integral of N0 over the band = {curve.integral():.8f}")
peak = curve.energies[np.argmax(curve.values)]
print(f"LDoS maximum at {peak:.4f} (the band factor pulls it above eps_r)")

###############################################################################
# Other coupling regimes
# ----------------------
# A level outside the band, or a surface hopping comparable to V, does not
# yield a well-defined resonance. Strong coupling can split off localized
# states below and above the band.

for eps0, v0 in [(1.0, 0.4), (-3.0, 0.4), (2.0, 1.2), (2.0, 1.5)]:
    m = build_chain(eps0, v0)
    kind = classify_resonance(m)
    extra = ""
    if kind is Classification.LOCALIZED_STATE:
        extra = "  bound states at " + ", ".join(f"{e:.4f}" for e in bound_states(m))
    print(f"eps0={eps0:+.1f} v0={v0:.1f}: {kind.value}{extra}")

###############################################################################
# Figure
# ------

plt = pyplot()
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(curve.energies, curve.values, label="N0 (closed form)")
    e = np.linspace(0.02, 3.98, 60)
    ax.plot(e, -np.imag(green_00(e, model)) / np.pi, ".", label="-Im G00 / pi")
    ax.axvline(res.eps_r, color="grey", lw=0.8, ls="--")
    ax.set_xlabel("energy / V")
    ax.set_ylabel("LDoS")
    ax.legend()
    save(fig, "01_ldos.png")
