"""
Repeated ideal projective measurements of the initial state.

Each projection onto |0> keeps the surviving weight and restarts the
evolution from |0>, discarding the environment's memory. After ``n``
projections separated by ``tau`` the survival is therefore P00(tau)^n, and
the decay proceeds at the rate

    Gamma_meas(tau) = -ln P00(tau) / (2 tau).

Measuring inside the quadratic regime (tau < t_S) makes Gamma_meas much
smaller than the pole width gamma0 (Zeno effect). Measuring at a survival
collapse makes it larger (anti-Zeno effect).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError
from .model import ChainModel
from .propagate import Route, evolve_chain, survival_from_ldos
from .regimes import interpolation_series, piecewise_series
from .spectral import resonance_params

__all__ = [
    "MeasurementRegime",
    "MeasurementSchedule",
    "TauSweep",
    "survival_probability",
    "survival_under_measurement",
    "measured_rate",
    "classify",
    "sweep_tau",
]

DELTA = 0.05


class MeasurementRegime(str, enum.Enum):
    ZENO = "Zeno"
    ANTI_ZENO = "AntiZeno"
    NEUTRAL = "Neutral"


@dataclass(frozen=True)
class MeasurementSchedule:
    period: float
    count: int = 1

    def __post_init__(self):
        if not self.period > 0:
            raise ParameterError(f"measurement period must be positive, got {self.period!r}")
        if int(self.count) != self.count or self.count < 1:
            raise ParameterError(f"need at least one projection, got {self.count!r}")

    @property
    def duration(self):
        return self.period * self.count


Oracle = Route | str | Callable[[np.ndarray], np.ndarray]


def survival_probability(model: ChainModel, taus, oracle: Oracle = Route.EIGEN_ORACLE):
    """Unmeasured P00 at ``taus`` from the chosen route or a callable ``p00(t)``."""
    taus = np.asarray(taus, dtype=float)
    if callable(oracle):
        return np.asarray(oracle(taus), dtype=float)
    route = Route(oracle)
    order = np.argsort(taus)
    sorted_t = taus[order]
    if route is Route.EIGEN_ORACLE:
        series = evolve_chain(model, sorted_t)
    elif route is Route.LDOS_QUADRATURE:
        series = survival_from_ldos(model, sorted_t)
    elif route is Route.PIECEWISE_LAW:
        series = piecewise_series(model, sorted_t)
    else:
        series = interpolation_series(model, sorted_t)
    out = np.empty_like(taus)
    out[order] = series.probabilities
    return out


def survival_under_measurement(model: ChainModel, schedule: MeasurementSchedule,
                               oracle: Oracle = Route.EIGEN_ORACLE) -> float:
    """Survival P00(tau)^n after ``schedule.count`` projections.

    An exact zero of P00(tau) (the excitation has left site 0 with
    certainty) returns 0.0 and emits a ``RuntimeWarning``.
    """
    p = float(survival_probability(model, [schedule.period], oracle)[0])
    if p == 0.0:
        warnings.warn(f"P00(tau={schedule.period}) vanishes exactly", RuntimeWarning,
                      stacklevel=2)
        return 0.0
    return p ** schedule.count


def _rate(p, tau):
    with np.errstate(divide="ignore"):
        return -np.log(p) / (2.0 * tau)


def measured_rate(model: ChainModel, tau, oracle: Oracle = Route.EIGEN_ORACLE) -> float:
    """Decay rate -ln P00(tau) / (2 tau) under period-``tau`` projections.

    Returns ``math.inf`` with a ``RuntimeWarning`` when P00(tau) = 0.
    """
    if not tau > 0:
        raise ParameterError(f"tau must be positive, got {tau!r}")
    p = float(survival_probability(model, [tau], oracle)[0])
    if p == 0.0:
        warnings.warn(f"P00(tau={tau}) vanishes exactly: infinite rate", RuntimeWarning,
                      stacklevel=2)
        return math.inf
    return float(_rate(p, tau))


def _classify_rate(rate, gamma0, delta):
    if rate < (1.0 - delta) * gamma0:
        return MeasurementRegime.ZENO
    if rate > (1.0 + delta) * gamma0:
        return MeasurementRegime.ANTI_ZENO
    return MeasurementRegime.NEUTRAL


def classify(model: ChainModel, tau, delta=DELTA, oracle: Oracle = Route.EIGEN_ORACLE,
             gamma0=None) -> MeasurementRegime:
    """Zeno / anti-Zeno / neutral by comparing Gamma_meas(tau) with gamma0 +- delta."""
    if gamma0 is None:
        gamma0 = resonance_params(model).gamma0
    return _classify_rate(measured_rate(model, tau, oracle), gamma0, delta)


@dataclass(frozen=True, eq=False)
class TauSweep:
    taus: np.ndarray
    rates: np.ndarray
    gamma0: float
    classes: list

    @property
    def argmax(self):
        """Index of the largest measured rate (strongest anti-Zeno point)."""
        return int(np.argmax(np.where(np.isfinite(self.rates), self.rates, np.inf)))

    def to_csv(self, path, header_lines=()):
        from .io import write_csv

        best = self.argmax
        write_csv(path, ["tau", "gamma_meas", "gamma0", "class"],
                  [self.taus, self.rates, np.full(self.taus.size, self.gamma0),
                   [c.value for c in self.classes]],
                  [f"argmax_tau: {float(self.taus[best])!r}", *header_lines])


def sweep_tau(model: ChainModel, tau_grid, oracle: Oracle = Route.EIGEN_ORACLE,
              delta=DELTA, gamma0=None) -> TauSweep:
    """Measured rate and regime for every period in ``tau_grid``.

    The eigen route diagonalises a single chain long enough for the largest
    period, so long sweeps cost one eigendecomposition.
    """
    taus = np.asarray(tau_grid, dtype=float)
    if taus.size == 0 or np.any(taus <= 0) or np.any(np.diff(taus) <= 0):
        raise ParameterError("tau grid must be positive and strictly increasing")
    if gamma0 is None:
        gamma0 = resonance_params(model).gamma0
    p = survival_probability(model, taus, oracle)
    if np.any(p == 0.0):
        warnings.warn("P00 vanishes exactly at some periods: infinite rates",
                      RuntimeWarning, stacklevel=2)
    rates = _rate(p, taus)
    classes = [_classify_rate(r, gamma0, delta) for r in rates]
    return TauSweep(taus, rates, float(gamma0), classes)
