"""
Exact survival amplitudes by two independent routes.

``evolve_eigen`` diagonalises a finite chain and sums the spectral weights of
site 0; ``survival_from_ldos`` Fourier transforms the closed-form LDoS of the
semi-infinite chain by quadrature. Neither route uses the other's machinery,
so their agreement tests the closed forms in :mod:`chainsurvival.spectral`.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError
from .model import ChainModel, TridiagonalHamiltonian, truncate
from .spectral import ldos_0, resonance_params

__all__ = [
    "Route",
    "SurvivalSeries",
    "evolve_eigen",
    "evolve_state",
    "evolve_chain",
    "amplitude_function",
    "choose_chain_length",
    "survival_from_ldos",
]

# bounds the (times x modes) work arrays to ~64 MB of complex128
_CHUNK_ELEMENTS = 4_000_000


class Route(str, enum.Enum):
    EIGEN_ORACLE = "EigenOracle"
    LDOS_QUADRATURE = "LdosQuadrature"
    PIECEWISE_LAW = "PiecewiseLaw"
    INTERPOLATION = "Interpolation"


@dataclass(frozen=True, eq=False)
class SurvivalSeries:
    """Survival amplitude of site 0 sampled on a time grid.

    Laws that only give a probability (piecewise, interpolation) store the
    real square root as amplitude.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    route: Route

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).ravel()
        a = np.asarray(self.amplitudes, dtype=complex).ravel()
        if t.size != a.size:
            raise ParameterError("times and amplitudes differ in length")
        if t.size and (t[0] < 0 or np.any(np.diff(t) <= 0)):
            raise ParameterError("times must be non-negative and strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "route", Route(self.route))

    @property
    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def __len__(self):
        return self.times.size

    @classmethod
    def from_probabilities(cls, times, probabilities, route):
        return cls(times, np.sqrt(np.asarray(probabilities, dtype=float)), route)

    def to_csv(self, path, header_lines=()):
        from .io import write_csv

        write_csv(path, ["t", "re_amp", "im_amp", "p00"],
                  [self.times, self.amplitudes.real, self.amplitudes.imag,
                   self.probabilities],
                  [f"route: {self.route.value}", *header_lines])


def choose_chain_length(t_max, v=1.0, margin=1.25):
    """Sites needed so that reflections from the chain end stay out of [0, t_max].

    The fastest excitation travels at 2V sites per unit time.
    """
    if not t_max > 0:
        raise ParameterError(f"t_max must be positive, got {t_max!r}")
    if margin < 1:
        raise ParameterError(f"margin must be >= 1, got {margin!r}")
    return int(math.ceil(margin * 2.0 * v * t_max)) + 16


def _time_chunks(times, width):
    step = max(1, _CHUNK_ELEMENTS // max(width, 1))
    for start in range(0, times.size, step):
        yield slice(start, start + step)


def evolve_eigen(h: TridiagonalHamiltonian, times) -> SurvivalSeries:
    """Survival amplitude sum_k |<0|k>|^2 exp(-i e_k t) of a finite chain."""
    times = np.asarray(times, dtype=float)
    try:
        energies, vecs = h.eigh()
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"tridiagonal eigensolver failed for L={len(h)}: {exc}") from exc
    weights = vecs[0] ** 2
    amp = np.empty(times.size, dtype=complex)
    for sl in _time_chunks(times, energies.size):
        amp[sl] = np.exp(-1j * np.outer(times[sl], energies)) @ weights
    return SurvivalSeries(times, amp, Route.EIGEN_ORACLE)


def amplitude_function(h: TridiagonalHamiltonian):
    """Diagonalise ``h`` once and return ``amp(t)`` evaluating the survival amplitude."""
    energies, vecs = h.eigh()
    weights = vecs[0] ** 2

    def amp(t):
        t = np.asarray(t, dtype=float)
        out = np.exp(-1j * np.multiply.outer(t, energies)) @ weights
        return complex(out) if out.ndim == 0 else out

    return amp


def evolve_state(h: TridiagonalHamiltonian, times):
    """Full wavefunction psi_n(t) started on site 0, shape (len(times), L)."""
    times = np.asarray(times, dtype=float)
    energies, vecs = h.eigh()
    phases = np.exp(-1j * np.outer(times, energies)) * vecs[0]
    return phases @ vecs.T


def evolve_chain(model: ChainModel, times, n_sites=None, margin=1.25) -> SurvivalSeries:
    """Eigen-oracle survival of ``model``, truncated long enough for ``times``.

    An explicit ``n_sites`` shorter than :func:`choose_chain_length` would
    let end reflections reach site 0 and triggers a ``RuntimeWarning``.
    """
    times = np.asarray(times, dtype=float)
    t_max = float(times.max()) if times.size else 0.0
    needed = choose_chain_length(t_max, model.v, margin) if t_max > 0 else 16
    if n_sites is None:
        n_sites = needed
    elif n_sites < choose_chain_length(max(t_max, 1e-12), model.v, 1.0):
        warnings.warn(f"chain of {n_sites} sites is too short for t_max={t_max}; "
                      f"reflections expected (use >= {needed})", RuntimeWarning,
                      stacklevel=2)
    return evolve_eigen(truncate(model, max(n_sites, 2)), times)


def _panel_nodes(n_panels, order):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, np.pi, n_panels + 1)
    h = np.diff(edges)
    theta = (edges[:-1, None] + 0.5 * (x[None, :] + 1.0) * h[:, None]).ravel()
    weight = (0.5 * w[None, :] * h[:, None]).ravel()
    return theta, weight


def _ldos_transform(model, times, n_panels, order):
    # eps = 2V (1 - cos theta) maps the band onto [0, pi] and absorbs the
    # square-root edges of the LDoS into a smooth integrand
    theta, weight = _panel_nodes(n_panels, order)
    v = model.v
    eps = 2.0 * v * (1.0 - np.cos(theta))
    f = ldos_0(eps, model) * (2.0 * v * np.sin(theta)) * weight
    amp = np.empty(times.size, dtype=complex)
    for sl in _time_chunks(times, eps.size):
        amp[sl] = np.exp(-1j * np.outer(times[sl], eps)) @ f
    return amp


def survival_from_ldos(model: ChainModel, times, tol=1e-10, order=16,
                       max_refinements=6) -> SurvivalSeries:
    """Survival amplitude as the Fourier transform of the closed-form LDoS.

    Gauss-Legendre panels are laid on the angle variable of the band. Panels
    are narrow enough that the phase exp(-i eps t) turns by at most pi/4 per
    panel at the largest time and the resonance Lorentzian spans several
    panels. The error is estimated by comparing orders ``order`` and
    ``order + 8`` on the same panels; the panel count is doubled until the
    estimate drops below ``tol``.

    Raises
    ------
    ResonanceError
        Model without a well-defined resonance.
    NumericError
        ``tol`` not reached after ``max_refinements`` doublings.
    """
    res = resonance_params(model)
    times = np.asarray(times, dtype=float)
    t_max = float(np.max(np.abs(times))) if times.size else 0.0
    v = model.v
    # d eps / d theta <= 2V, so an energy width pi/(4 t) needs theta width pi/(8 V t)
    by_phase = 8.0 * v * t_max
    by_lorentz = 8.0 * np.pi * v / res.gamma0
    n_panels = max(16, int(math.ceil(max(by_phase, by_lorentz))))

    err = np.inf
    for _ in range(max_refinements + 1):
        low = _ldos_transform(model, times, n_panels, order)
        high = _ldos_transform(model, times, n_panels, order + 8)
        err = float(np.max(np.abs(high - low))) if times.size else 0.0
        if err < tol:
            return SurvivalSeries(times, high, Route.LDOS_QUADRATURE)
        n_panels *= 2
    raise NumericError(f"LDoS quadrature reached only {err:.3g} (target {tol:.3g})")
