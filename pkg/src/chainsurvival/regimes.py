"""
Decay regimes of the survival probability and the times separating them.

The survival first falls quadratically until ``t_S``. It then decays
exponentially with the exact pole width and prefactor until ``t_R``, where a
t^-3 tail beating at the bandwidth frequency takes over. Where the pole and the tail
amplitudes have similar size they can cancel, producing a deep dip of the
survival probability (the survival collapse) near ``t_R``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NumericError
from .model import ChainModel, truncate
from .propagate import Route, SurvivalSeries, amplitude_function, choose_chain_length
from .spectral import Resonance, classify_resonance, ldos_1_unperturbed, resonance_params

__all__ = [
    "NU",
    "A1",
    "A2",
    "Branch",
    "ShortTimes",
    "ReturnTimes",
    "Collapse",
    "PowerLawFit",
    "RegimeReport",
    "piecewise_p00",
    "piecewise_series",
    "interpolation_p00",
    "interpolation_series",
    "t_short",
    "t_return",
    "crossover_time",
    "effective_rate",
    "period_average",
    "numeric_return_time",
    "detect_collapse",
    "fit_power_law",
    "analyze",
]

# Van Hove exponent of the chain LDoS at the band edges, N0 ~ (eps - eps_L)^nu
NU = 0.5
A1 = NU + 2.0
A2 = (4.0 * math.pi) ** 0.2

# probabilities below this are treated as underflow when taking logs
UNDERFLOW = 1e-300


class Branch(str, enum.Enum):
    QUADRATIC = "quadratic"
    EXPONENTIAL = "exponential"
    POWER_LAW = "power_law"


@dataclass(frozen=True)
class ShortTimes:
    t_s: float  # gamma0 / v0^2
    t_s_fgr: float  # pi N1(eps0), FGR estimate


def t_short(res: Resonance, model: ChainModel) -> ShortTimes:
    """End of the quadratic regime, exact and in its Golden-Rule form."""
    return ShortTimes(t_s=res.gamma0 / model.v0 ** 2,
                      t_s_fgr=math.pi * ldos_1_unperturbed(model.eps0, model.v))


@dataclass(frozen=True)
class ReturnTimes:
    iterates: tuple
    closed_form: float
    converged: bool
    constants: str

    @property
    def last(self):
        return self.iterates[-1]


def _fixed_point_map(res, model, constants):
    g0 = res.gamma0
    if constants == "weak":
        # weak-coupling estimates near mid-band: A/C ~ 32 pi V^2 / gamma0^2,
        # Gamma(eps_r) ~ V
        v = model.v
        ratio, rate = 32.0 * math.pi * v * v / (g0 * g0), v
    elif constants == "exact":
        ratio, rate = res.prefactor_a / res.prefactor_c, res.gamma_r
    else:
        raise ValueError(f"constants must be 'weak' or 'exact', got {constants!r}")

    def step(t):
        arg = ratio * (rate * t) ** 3
        return math.log(arg) / (2.0 * g0) if arg > 0 else -math.inf

    return step


def t_return(res: Resonance, model: ChainModel, iterations=2, constants="weak",
             rtol=1e-6) -> ReturnTimes:
    """Iterates of the crossover between exponential decay and the t^-3 tail.

    Solves A exp(-2 gamma0 t) = C / (Gamma(eps_r) t)^3 (the tail averaged
    over one beating period) by fixed-point iteration seeded at
    1 / (2 gamma0). With ``constants="weak"`` the prefactors take their
    mid-band weak-coupling values; the first iterate is then the closed form
    ``A1 / gamma0 * ln(A2 B / (4 gamma0))``. ``constants="exact"`` uses the
    exact A, C and Gamma(eps_r) and converges to the true crossover.

    ``converged`` tells whether the last two iterates agree to ``rtol``.
    """
    if iterations < 1:
        raise ValueError("need at least one iteration")
    step = _fixed_point_map(res, model, constants)
    t = 1.0 / (2.0 * res.gamma0)
    out = []
    converged = False
    for _ in range(iterations):
        t_new = step(t)
        if not t_new > 0:
            break
        out.append(t_new)
        converged = abs(t_new - t) <= rtol * t_new
        t = t_new
    closed = A1 / res.gamma0 * math.log(A2 * model.bandwidth / (4.0 * res.gamma0))
    if not out:
        raise NumericError("crossover iteration left the domain of the logarithm")
    return ReturnTimes(tuple(out), closed, converged, constants)


def crossover_time(res: Resonance, model: ChainModel, rtol=1e-10, max_iter=500) -> float:
    """Converged crossover of the exact exponential and averaged tail laws."""
    step = _fixed_point_map(res, model, "exact")
    t = 1.0 / (2.0 * res.gamma0)
    for _ in range(max_iter):
        t_new = step(t)
        if not t_new > 0:
            break
        if abs(t_new - t) <= rtol * t_new:
            return t_new
        t = t_new
    raise NumericError(f"crossover iteration did not converge (last {t:.6g})")


def piecewise_p00(t, res: Resonance, model: ChainModel, t_s=None, t_r=None):
    """Three-branch asymptotic survival law.

    Returns ``(value, branch)``; arrays of each for array input. Branches
    switch at ``t_s`` (default gamma0/v0^2) and ``t_r`` (default the exact
    crossover). The quadratic branch is clipped at zero.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise DomainError("the survival law is defined for t >= 0 only")
    if t_s is None:
        t_s = t_short(res, model).t_s
    if t_r is None:
        t_r = crossover_time(res, model)
    quad = np.clip(1.0 - (model.v0 * t) ** 2, 0.0, None)
    expo = res.exponential(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = res.power_law(t, modulated=True)
    value = np.where(t < t_s, quad, np.where(t < t_r, expo, tail))
    branch = np.where(t < t_s, Branch.QUADRATIC.value,
                      np.where(t < t_r, Branch.EXPONENTIAL.value, Branch.POWER_LAW.value))
    if scalar:
        return float(value[0]), Branch(branch[0])
    return value, np.array([Branch(b) for b in branch], dtype=object)


def piecewise_series(model: ChainModel, times) -> SurvivalSeries:
    res = resonance_params(model)
    value, _ = piecewise_p00(np.asarray(times, dtype=float), res, model)
    return SurvivalSeries.from_probabilities(times, value, Route.PIECEWISE_LAW)


def interpolation_p00(t, t_s, gamma0):
    """exp[(1 - sqrt(1 + (t/t_s)^2)) 2 gamma0 t_s], quadratic to exponential bridge."""
    t = np.asarray(t, dtype=float)
    out = np.exp((1.0 - np.sqrt(1.0 + (t / t_s) ** 2)) * 2.0 * gamma0 * t_s)
    return float(out) if out.ndim == 0 else out


def interpolation_series(model: ChainModel, times) -> SurvivalSeries:
    res = resonance_params(model)
    p = interpolation_p00(np.asarray(times, dtype=float), t_short(res, model).t_s, res.gamma0)
    return SurvivalSeries.from_probabilities(times, p, Route.INTERPOLATION)


def effective_rate(series: SurvivalSeries):
    """Gamma_eff(t) = -ln P00(t) / (2t).

    Points at t = 0 or with P00 below :data:`UNDERFLOW` are masked as NaN.
    """
    t = series.times
    p = series.probabilities
    ok = (t > 0) & (p > UNDERFLOW)
    out = np.full(t.shape, np.nan)
    out[ok] = -np.log(p[ok]) / (2.0 * t[ok])
    return out


def period_average(times, values, period):
    """Sliding mean of ``values`` over a window of length ``period``.

    Uses the trapezoidal running integral, so non-uniform grids are fine as
    long as they resolve the window. NaN where the window leaves the grid.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))])
    half = 0.5 * period
    inside = (t - half >= t[0]) & (t + half <= t[-1])
    out = np.full(t.shape, np.nan)
    hi = np.interp(t[inside] + half, t, cum)
    lo = np.interp(t[inside] - half, t, cum)
    out[inside] = (hi - lo) / period
    return out


def numeric_return_time(series: SurvivalSeries, res: Resonance, t_min=None,
                        factor=math.e):
    """First time the period-averaged P00 exceeds ``factor`` times A exp(-2 gamma0 t).

    The search starts at ``t_min`` (default 1/(2 gamma0)). Returns None when
    the series never crosses.
    """
    period = 2.0 * math.pi / res.bandwidth
    avg = period_average(series.times, series.probabilities, period)
    if t_min is None:
        t_min = 1.0 / (2.0 * res.gamma0)
    with np.errstate(invalid="ignore"):
        hit = (series.times >= t_min) & (avg > factor * res.exponential(series.times))
    idx = np.flatnonzero(hit)
    return float(series.times[idx[0]]) if idx.size else None


@dataclass(frozen=True)
class Collapse:
    time: float
    depth: float  # decades below min(exponential, averaged tail)
    probability: float


def _refine_minimum(series, i, refine):
    t = series.times
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, t.size - 1)]
    if refine is not None:
        fun = lambda s: abs(refine(s)) ** 2
    else:
        # quadratic model of the complex amplitude through the three samples
        j = np.arange(max(i - 1, 0), min(i + 2, t.size))
        if j.size < 3:
            return t[i], series.probabilities[i]
        cr = np.polyfit(t[j], series.amplitudes[j].real, 2)
        ci = np.polyfit(t[j], series.amplitudes[j].imag, 2)
        fun = lambda s: np.polyval(cr, s) ** 2 + np.polyval(ci, s) ** 2
    r = minimize_scalar(fun, bounds=(lo, hi), method="bounded",
                        options={"xatol": 1e-10 * max(1.0, hi)})
    if r.fun < series.probabilities[i]:
        return float(r.x), float(max(r.fun, UNDERFLOW))
    return float(t[i]), float(series.probabilities[i])


def detect_collapse(series: SurvivalSeries, res: Resonance, model: ChainModel | None = None,
                    t_r_estimate=None, min_depth=0.5, max_imbalance=2.0, refine=None):
    """Deepest interference dip of P00 around the exponential/tail crossover.

    Local minima are searched in ``[t_r_estimate/2, 2 t_r_estimate]`` (the
    default estimate is the exact crossover). A dip counts only where the
    pole and tail probabilities are within ``max_imbalance`` decades of each
    other, so that both amplitudes can interfere. Its depth is
    ``log10(min(A exp(-2 gamma0 t), C/(Gamma_r t)^3) / P_min)``, with the
    minimum refined between grid points (by ``refine(t) -> amplitude`` if
    given, otherwise by a local quadratic model of the amplitude).

    Returns a :class:`Collapse` or None when no dip reaches ``min_depth``.
    """
    if t_r_estimate is None:
        if model is None:
            raise ValueError("need model or t_r_estimate")
        t_r_estimate = crossover_time(res, model)
    t = series.times
    p = series.probabilities
    if t.size < 3:
        return None
    interior = np.arange(1, t.size - 1)
    is_min = (p[interior] <= p[interior - 1]) & (p[interior] <= p[interior + 1])
    cand = interior[is_min]
    cand = cand[(t[cand] >= 0.5 * t_r_estimate) & (t[cand] <= 2.0 * t_r_estimate)]
    best = None
    for i in cand:
        pole, tail = res.exponential(t[i]), res.power_law(t[i])
        if not (pole > 0 and tail > 0):
            continue
        if abs(math.log10(pole / tail)) > max_imbalance:
            continue
        t_min, p_min = _refine_minimum(series, i, refine)
        envelope = min(res.exponential(t_min), res.power_law(t_min))
        depth = math.log10(envelope / p_min)
        if best is None or depth > best.depth:
            best = Collapse(t_min, depth, p_min)
    if best is None or best.depth < min_depth:
        return None
    return best


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float  # P ~ prefactor * t**exponent on the averaged envelope
    frequency: float  # angular frequency of the beating
    modulation: float  # relative amplitude of the beating


def _dominant_frequency(t, r, w_lo, w_hi):
    weights = np.gradient(t)

    def power(w):
        return abs(np.sum(weights * r * np.exp(-1j * w * t))) ** 2

    # coarse peak from a zero-padded FFT of r resampled on a uniform grid,
    # then polished on the exact (non-uniform) Fourier sum
    n = t.size
    dt = (t[-1] - t[0]) / (n - 1)
    uniform = np.interp(t[0] + dt * np.arange(n), t, r)
    pad = 8 * n
    periodogram = np.abs(np.fft.rfft(uniform, pad)) ** 2
    freq = 2.0 * math.pi * np.fft.rfftfreq(pad, dt)
    band = (freq >= w_lo) & (freq <= w_hi)
    if not np.any(band):
        raise NumericError("no frequency resolved in the requested band")
    k = np.flatnonzero(band)[np.argmax(periodogram[band])]
    step = freq[1] - freq[0]
    lo, hi = max(w_lo, freq[k] - step), min(w_hi, freq[k] + step)
    res = minimize_scalar(lambda w: -power(w), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.x)


def _modulation_amplitude(t, r, w):
    design = np.column_stack([np.cos(w * t), np.sin(w * t), np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(design, r, rcond=None)
    return float(math.hypot(coef[0], coef[1]))


def fit_power_law(series: SurvivalSeries, t_min, min_periods=3) -> PowerLawFit:
    """Exponent and beating of the long-time tail.

    A first log-log line through the raw data exposes the beating, whose
    frequency is read from the peak of the residual's periodogram. P00 is
    then averaged over one beating period and refitted log-log, which gives
    the exponent; the residual against that envelope gives the final
    frequency and relative amplitude.

    Raises
    ------
    NumericError
        Fewer than ``min_periods`` beating periods in ``[t_min, t_end]``.
    """
    sel = series.times >= t_min
    t = series.times[sel]
    p = series.probabilities[sel]
    if t.size < 16 or np.any(p <= UNDERFLOW):
        raise NumericError("not enough usable points beyond t_min for a tail fit")
    span = t[-1] - t[0]
    nyquist = math.pi / float(np.median(np.diff(t)))

    slope, icpt = np.polyfit(np.log(t), np.log(p), 1)
    resid = p / np.exp(icpt + slope * np.log(t)) - 1.0
    w = _dominant_frequency(t, resid - resid.mean(), 2.0 * math.pi / span, nyquist)
    period = 2.0 * math.pi / w
    if span < min_periods * period:
        raise NumericError(f"only {span / period:.2f} beating periods beyond t_min "
                           f"(need {min_periods})")

    avg = period_average(t, p, period)
    ok = np.isfinite(avg) & (avg > 0)
    slope, icpt = np.polyfit(np.log(t[ok]), np.log(avg[ok]), 1)
    r = p[ok] / avg[ok] - 1.0
    w = _dominant_frequency(t[ok], r - r.mean(), 0.5 * w, min(1.5 * w, nyquist))
    return PowerLawFit(exponent=float(slope), prefactor=float(math.exp(icpt)),
                       frequency=w, modulation=_modulation_amplitude(t[ok], r, w))


@dataclass
class RegimeReport:
    """Everything the regime analysis extracts for one model."""

    eps0: float
    v0: float
    v: float
    classification: str
    resonance: dict
    t_s: float
    t_s_fgr: float
    t_r_closed_form: float
    t_r_iterates: list
    t_r_crossover: float
    t_r_numeric: float | None
    collapse_time: float | None
    collapse_depth: float | None
    a1: float = A1
    a2: float = A2
    nu: float = NU
    oracle: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def analyze(model: ChainModel, dt=0.01, t_max=None, iterations=2, margin=1.25):
    """Run the eigen oracle and extract every crossover and the collapse.

    The oracle grid is uniform with step ``dt`` up to ``t_max`` (default three
    times the exact crossover). Returns ``(report, series)``.
    """
    res = resonance_params(model)
    ts = t_short(res, model)
    tr = t_return(res, model, iterations=iterations, constants="weak")
    t_cross = crossover_time(res, model)
    if t_max is None:
        t_max = 3.0 * t_cross
    times = np.arange(0.0, t_max + 0.5 * dt, dt)
    n_sites = choose_chain_length(t_max, model.v, margin)
    amp = amplitude_function(truncate(model, n_sites))
    series = SurvivalSeries(times, amp(times), Route.EIGEN_ORACLE)
    collapse = detect_collapse(series, res, t_r_estimate=t_cross, refine=amp)
    report = RegimeReport(
        eps0=model.eps0, v0=model.v0, v=model.v,
        classification=classify_resonance(model).value,
        resonance=asdict(res),
        t_s=ts.t_s, t_s_fgr=ts.t_s_fgr,
        t_r_closed_form=tr.closed_form,
        t_r_iterates=list(tr.iterates),
        t_r_crossover=t_cross,
        t_r_numeric=numeric_return_time(series, res),
        collapse_time=collapse.time if collapse else None,
        collapse_depth=collapse.depth if collapse else None,
        oracle={"route": Route.EIGEN_ORACLE.value, "dt": dt, "t_max": float(times[-1]),
                "n_sites": n_sites},
    )
    return report, series
