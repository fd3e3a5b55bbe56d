"""
Closed-form spectral quantities of the semi-infinite chain.

The end site of a homogeneous chain (site energies 2V, hopping V) has the
Green's function

    G11(z) = [(z - 2V) - sqrt(z - 4V) sqrt(z)] / (2 V^2),

and attaching the level ``eps0`` through ``v0`` gives the surface self-energy
``Sigma = v0^2 G11`` and ``G00 = 1 / (z - eps0 - Sigma)``.

For ``v0 < V`` and a level well inside the band, ``G00`` continued through
the band into the lower half plane has a single pole at ``eps_r - i gamma0``.
All pole quantities (shift, width, prefactors of the exponential and of the
power-law tail) are available in closed form and are gathered in
:class:`Resonance`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from .errors import DomainError, ResonanceError
from .model import ChainModel

__all__ = [
    "Classification",
    "Resonance",
    "LdosCurve",
    "gamma_of_eps",
    "surface_green",
    "surface_self_energy",
    "green_00",
    "ldos_0",
    "ldos_from_green",
    "ldos_1_unperturbed",
    "ldos_curve",
    "resonance_params",
    "numeric_prefactor",
    "bound_states",
    "classify_resonance",
]


class Classification(str, enum.Enum):
    WELL_DEFINED = "WellDefined"
    OUT_OF_BAND = "OutOfBand"
    LOCALIZED_STATE = "LocalizedState"
    VIRTUAL_STATE = "VirtualState"


def gamma_of_eps(eps, v=1.0):
    """Band half-width function sqrt(eps) sqrt(B - eps) / 2 on [0, B], B = 4v."""
    e = np.asarray(eps, dtype=float)
    b = 4.0 * v
    if np.any((e < 0) | (e > b)):
        raise DomainError(f"energy outside the band [0, {b}]")
    out = np.sqrt(e) * np.sqrt(b - e) / 2.0
    return float(out) if out.ndim == 0 else out


def _in_band_gamma(e, v):
    b = 4.0 * v
    return np.sqrt(np.clip(e, 0.0, b)) * np.sqrt(np.clip(b - e, 0.0, b)) / 2.0


def surface_green(z, v=1.0):
    """End-site Green's function of the bare semi-infinite chain.

    Real arguments are taken as ``z + i0`` (retarded). Arguments with
    ``Im z > 0`` are on the physical sheet; ``Im z < 0`` uses the
    continuation through the band from above, where resonance poles live.
    """
    z = np.asarray(z, dtype=complex)
    w = z - 2.0 * v
    # force +0.0 imaginary part on the real axis so the principal roots
    # pick the retarded branch
    w = np.where(w.imag == 0, w.real + 0j, w)
    physical = (w - np.sqrt(w - 2.0 * v) * np.sqrt(w + 2.0 * v)) / (2.0 * v * v)
    continued = (w - 1j * np.sqrt(4.0 * v * v - w * w)) / (2.0 * v * v)
    out = np.where(z.imag < 0, continued, physical)
    return complex(out) if out.ndim == 0 else out


def surface_self_energy(eps, v0, v=1.0):
    """Self-energy v0^2 G11(eps) felt by the level; Im <= 0 on the real axis."""
    return v0 * v0 * surface_green(eps, v)


def green_00(eps, model: ChainModel):
    """Retarded Green's function of the level, 1 / (eps - eps0 - Sigma(eps))."""
    sigma = surface_self_energy(eps, model.v0, model.v)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 1.0 / (np.asarray(eps) - model.eps0 - sigma)


def ldos_from_green(eps, model: ChainModel):
    """-Im G00 / pi inside the open band, zero elsewhere."""
    e = np.asarray(eps, dtype=float)
    inside = (e > model.band_lower) & (e < model.band_upper)
    g = green_00(np.where(inside, e, model.site_energy), model)
    out = np.where(inside, -np.imag(g) / np.pi, 0.0)
    return float(out) if out.ndim == 0 else out


def ldos_1_unperturbed(eps, v=1.0):
    """LDoS 16 Gamma(eps) / (pi B^2) at the end of the bare chain."""
    e = np.asarray(eps, dtype=float)
    b = 4.0 * v
    inside = (e > 0) & (e < b)
    out = np.where(inside, 16.0 * _in_band_gamma(e, v) / (np.pi * b * b), 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Resonance:
    """Pole data of a well-defined resonance.

    ``prefactor_a`` multiplies the exponential decay, ``prefactor_c`` the
    t^-3 tail, and ``beta`` weighs the two band edges in the tail.
    ``gamma_r`` is Gamma(eps_r) and sets the time scale of the tail.
    """

    eps_r: float
    delta0: float
    gamma0: float
    gamma_c: float
    prefactor_a: float
    beta: float
    prefactor_c: float
    gamma_r: float
    bandwidth: float

    @property
    def pole(self):
        return complex(self.eps_r, -self.gamma0)

    @property
    def modulation_ratio(self):
        """Relative amplitude 2 beta / (1 + beta^2) of the band-edge beating."""
        return 2.0 * self.beta / (1.0 + self.beta ** 2)

    def exponential(self, t):
        """Pole-only survival A exp(-2 gamma0 t)."""
        return self.prefactor_a * np.exp(-2.0 * self.gamma0 * np.asarray(t, dtype=float))

    def power_law(self, t, modulated=False):
        """Return-only survival C (Gamma(eps_r) t)^-3, optionally with the beating."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            p = self.prefactor_c / (self.gamma_r * t) ** 3
        if modulated:
            p = p * (1.0 - self.modulation_ratio * np.sin(self.bandwidth * t))
        return p


def _gamma_c_squared(model):
    x0 = (model.eps0 - model.site_energy) / 2.0
    return model.v ** 2 - model.v0 ** 2 - x0 * x0


def bound_states(model: ChainModel):
    """Real eigenvalues of the semi-infinite system lying outside the band.

    ``eps - eps0 - Sigma(eps)`` is strictly increasing outside the band, so
    there is at most one root on each side; its presence follows from the
    sign at the nearest band edge (Sigma(0) = -v0^2/V, Sigma(4V) = v0^2/V).
    """
    v, v0, e0 = model.v, model.v0, model.eps0
    f = lambda e: e - e0 - surface_self_energy(e, v0, v).real
    roots = []
    edge_shift = v0 * v0 / v
    span = abs(e0) + 4.0 * v + 2.0 * edge_shift + 1.0
    if edge_shift > e0:
        roots.append(brentq(f, model.band_lower - span, model.band_lower,
                            xtol=1e-14, rtol=1e-15))
    if e0 + edge_shift > model.band_upper:
        roots.append(brentq(f, model.band_upper, model.band_upper + span,
                            xtol=1e-14, rtol=1e-15))
    return roots


def classify_resonance(model: ChainModel) -> Classification:
    """Which kind of spectral feature the level produces."""
    if model.v0 < model.v:
        if _gamma_c_squared(model) > 0:
            return Classification.WELL_DEFINED
        return Classification.OUT_OF_BAND
    if bound_states(model):
        return Classification.LOCALIZED_STATE
    return Classification.VIRTUAL_STATE


def resonance_params(model: ChainModel) -> Resonance:
    """Closed-form resonance parameters of a well-defined resonance.

    Raises
    ------
    ResonanceError
        If the model is not classified as well defined; the classification
        is attached to the exception.
    """
    cls = classify_resonance(model)
    if cls is not Classification.WELL_DEFINED:
        raise ResonanceError(f"no well-defined in-band resonance ({cls.value})", cls)
    v, v0 = model.v, model.v0
    b = model.bandwidth
    lo, hi = model.band_lower, model.band_upper
    x0 = (model.eps0 - model.site_energy) / 2.0
    ratio = v0 * v0 / (v * v - v0 * v0)
    delta0 = ratio * x0
    gamma_c = math.sqrt(_gamma_c_squared(model))
    gamma0 = ratio * gamma_c
    eps_r = model.eps0 + delta0
    beta = ((eps_r - lo) ** 2 + gamma0 ** 2) / ((hi - eps_r) ** 2 + gamma0 ** 2)
    pref_a = (math.sqrt(eps_r ** 2 + gamma0 ** 2) * math.sqrt((b - eps_r) ** 2 + gamma0 ** 2)
              / (4.0 * gamma_c ** 2))
    gamma_r = float(_in_band_gamma(eps_r, v))
    pref_c = (v0 ** 4 * v * gamma_r ** 3 * (1.0 + beta ** 2)
              / (4.0 * math.pi * (v * v - v0 * v0) ** 2 * (gamma0 ** 2 + eps_r ** 2) ** 2))
    return Resonance(eps_r=eps_r, delta0=delta0, gamma0=gamma0, gamma_c=gamma_c,
                     prefactor_a=pref_a, beta=beta, prefactor_c=pref_c,
                     gamma_r=gamma_r, bandwidth=b)


def numeric_prefactor(model: ChainModel) -> float:
    """|a|^2 from the residue of the continued G00 at the pole.

    Debug cross-check of ``Resonance.prefactor_a``: the residue of G00 is
    1 / (1 - Sigma'(z_p)), with the derivative taken on the continued sheet.
    """
    res = resonance_params(model)
    z = res.pole
    v = model.v
    x = (z - 2.0 * v) / 2.0
    dsigma = (model.v0 / v) ** 2 * 0.5 * (1.0 + 1j * x / np.sqrt(v * v - x * x))
    return float(abs(1.0 / (1.0 - dsigma)) ** 2)


def ldos_0(eps, model: ChainModel):
    """LDoS of the level in factorised form: Lorentzian times bare-chain LDoS.

    Equal to :func:`ldos_from_green` inside the band; zero outside it.
    """
    res = resonance_params(model)
    e = np.asarray(eps, dtype=float)
    lorentz = res.gamma0 / ((res.eps_r - e) ** 2 + res.gamma0 ** 2)
    out = (model.v ** 2 / res.gamma_c) * lorentz * ldos_1_unperturbed(e, model.v)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class LdosCurve:
    energies: np.ndarray
    values: np.ndarray
    label: str = ""

    def integral(self):
        return float(trapezoid(self.values, self.energies))

    def to_csv(self, path, header_lines=()):
        from .io import write_csv

        lines = [f"model: {self.label}"] if self.label else []
        write_csv(path, ["energy", "ldos"], [self.energies, self.values],
                  [*lines, *header_lines])


def band_grid(v=1.0, points=4096):
    """Energies 2V(1 - cos theta) on a uniform theta grid; edges included."""
    theta = np.linspace(0.0, np.pi, points)
    return 2.0 * v * (1.0 - np.cos(theta))


def ldos_curve(model: ChainModel, points=4096, which="site0") -> LdosCurve:
    """Tabulate N0 (``which="site0"``) or the bare N1 (``which="bare"``) on the band."""
    e = band_grid(model.v, points)
    if which == "site0":
        values = ldos_0(e, model)
    elif which == "bare":
        values = ldos_1_unperturbed(e, model.v)
    else:
        raise ValueError(f"unknown curve {which!r}")
    return LdosCurve(e, np.asarray(values, dtype=float), model.describe())
