"""Survival of a local excitation coupled to a semi-infinite tight-binding chain.

The resonance is evaluated in closed form and the survival amplitude is
computed by two independent exact oracles. On top of these the package
locates the crossovers between decay regimes and simulates repeated
projective measurements (Zeno and anti-Zeno effects).
"""

from .errors import DomainError, NumericError, ParameterError, ResonanceError
from .model import (ChainModel, StarModel, TridiagonalHamiltonian, build_chain,
                    second_moment, tridiagonalize, truncate, unfold)
from .spectral import (Classification, LdosCurve, Resonance, classify_resonance,
                       gamma_of_eps, green_00, ldos_0, ldos_1_unperturbed, ldos_curve,
                       resonance_params, surface_self_energy)
from .propagate import (Route, SurvivalSeries, choose_chain_length, evolve_chain,
                        evolve_eigen, survival_from_ldos)
from .regimes import (RegimeReport, analyze, detect_collapse, effective_rate,
                      fit_power_law, interpolation_p00, piecewise_p00, t_return, t_short)
from .measurement import (MeasurementRegime, MeasurementSchedule, classify, measured_rate,
                          survival_under_measurement, sweep_tau)

__version__ = "0.1.0"
