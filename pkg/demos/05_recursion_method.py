"""
From an arbitrary environment to an equivalent chain
====================================================

A level coupled to any set of discrete modes (a star) can be mapped by the
recursion method onto a level at the end of a chain. The survival amplitude
only depends on site 0, so both forms give the same dynamics.
"""

import warnings

import numpy as np

from chainsurvival import (StarModel, build_chain, evolve_eigen, second_moment,
                           tridiagonalize, truncate, unfold)

###############################################################################
# A random star
# -------------

rng = np.random.default_rng(3)
star = StarModel(eps0=1.0, couplings=0.1 * rng.normal(size=200),
                 level_energies=rng.uniform(0, 4, size=200))
chain = tridiagonalize(star)
print(f"chain length {len(chain)}; first hopping^2 = {chain.offdiag[0] ** 2:.6f}, "
      f"second moment = {second_moment(star):.6f}")
print("first chain energies ", np.round(chain.diag[:5], 4))
print("first chain hoppings ", np.round(chain.offdiag[:5], 4))

###############################################################################
# Same survival in both forms
# ---------------------------
# The star is small enough to diagonalize densely.

t = np.linspace(0, 40, 9)
ev, vecs = np.linalg.eigh(star.matrix())
amp_star = (np.abs(vecs[0]) ** 2 * np.exp(-1j * np.outer(t, ev))).sum(axis=1)
amp_chain = evolve_eigen(chain, t).amplitudes
print(f"max amplitude difference star vs chain: {np.max(np.abs(amp_star - amp_chain)):.2e}")

###############################################################################
# Round trip on the physical chain
# --------------------------------

physical = truncate(build_chain(1.0, 0.4), 50)
back = tridiagonalize(unfold(physical))
print(f"chain -> star -> chain error: "
      f"{max(np.max(np.abs(back.diag - physical.diag)), np.max(np.abs(back.offdiag - physical.offdiag))):.2e}")

###############################################################################
# Degenerate environments
# -----------------------
# Modes at equal energy with equal couplings act as one mode; the recursion
# stops early and says so.

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    short = tridiagonalize(StarModel(0.0, [0.5, 0.5, 0.5], [1.0, 1.0, 2.0]))
print(f"three modes, two distinct: chain of {len(short)} sites; warning: {caught[0].message}")
