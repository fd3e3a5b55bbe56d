"""
Hamiltonians for a local level coupled to an environment.

Representations used throughout the package:

* ``ChainModel``: site 0 with energy ``eps0`` attached through ``v0`` to a
  semi-infinite homogeneous chain (site energies 2V, hopping V), whose
  continuum is the band [0, 4V].
* ``StarModel``: the same level coupled directly to N discrete levels.
* ``TridiagonalHamiltonian``: a finite chain, either a truncation of a
  ``ChainModel`` or the output of the recursion method applied to a star.

Units: hbar = 1, energies in units of V and times in units of hbar/V.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from os import PathLike

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ParameterError

__all__ = [
    "ChainModel",
    "StarModel",
    "TridiagonalHamiltonian",
    "build_chain",
    "truncate",
    "tridiagonalize",
    "unfold",
    "second_moment",
]

# relative residual at which the Lanczos recursion is considered exhausted
LANCZOS_BREAKDOWN = 1e-12


@dataclass(frozen=True)
class ChainModel:
    """Level ``eps0`` coupled by ``v0`` to a semi-infinite chain of hopping ``v``."""

    eps0: float
    v0: float
    v: float = 1.0

    hbar = 1.0

    def __post_init__(self):
        if not (self.v > 0):
            raise ParameterError(f"bulk hopping v must be positive, got {self.v!r}")
        if not (self.v0 > 0):
            raise ParameterError(
                f"surface hopping v0 must be positive, got {self.v0!r} "
                "(v0 = 0 decouples the level)")
        if not math.isfinite(self.eps0):
            raise ParameterError(f"eps0 must be finite, got {self.eps0!r}")

    @property
    def site_energy(self):
        return 2.0 * self.v

    @property
    def band_lower(self):
        return 0.0

    @property
    def band_upper(self):
        return 4.0 * self.v

    @property
    def bandwidth(self):
        return self.band_upper - self.band_lower

    @property
    def classification(self):
        from .spectral import classify_resonance

        return classify_resonance(self)

    @property
    def well_defined(self):
        """True when the level produces a resonance pole inside the band."""
        from .spectral import Classification

        return self.classification is Classification.WELL_DEFINED

    def describe(self):
        return f"eps0={self.eps0!r},v0={self.v0!r},v={self.v!r}"


def build_chain(eps0, v0, v=1.0):
    """Validated constructor for :class:`ChainModel`."""
    return ChainModel(float(eps0), float(v0), float(v))


@dataclass(frozen=True, eq=False)
class StarModel:
    """Central level ``eps0`` coupled to discrete levels ``level_energies``."""

    eps0: float
    couplings: np.ndarray
    level_energies: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.couplings, dtype=float).ravel()
        e = np.asarray(self.level_energies, dtype=float).ravel()
        if c.size != e.size:
            raise ParameterError(
                f"{c.size} couplings but {e.size} level energies")
        if c.size < 1:
            raise ParameterError("a star needs at least one environment level")
        if not np.any(c != 0):
            raise ParameterError("all couplings vanish: the level is decoupled")
        object.__setattr__(self, "couplings", c)
        object.__setattr__(self, "level_energies", e)

    @property
    def n_levels(self):
        return self.couplings.size

    def matrix(self):
        """Dense (N+1)x(N+1) Hamiltonian, site 0 first."""
        n = self.n_levels
        h = np.zeros((n + 1, n + 1))
        h[0, 0] = self.eps0
        h[0, 1:] = self.couplings
        h[1:, 0] = self.couplings
        h[np.arange(1, n + 1), np.arange(1, n + 1)] = self.level_energies
        return h

    def matvec(self, x):
        y = np.empty_like(x)
        y[0] = self.eps0 * x[0] + self.couplings @ x[1:]
        y[1:] = self.couplings * x[0] + self.level_energies * x[1:]
        return y

    @classmethod
    def from_dict(cls, doc):
        try:
            levels = doc["levels"]
            return cls(float(doc["eps0"]),
                       [float(lv["coupling"]) for lv in levels],
                       [float(lv["energy"]) for lv in levels])
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed star document: {exc!r}") from exc

    @classmethod
    def from_json(cls, source: str | PathLike):
        with open(source) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return {
            "eps0": float(self.eps0),
            "levels": [{"energy": float(e), "coupling": float(c)}
                       for e, c in zip(self.level_energies, self.couplings)],
        }


@dataclass(frozen=True, eq=False)
class TridiagonalHamiltonian:
    """Finite chain with site energies ``diag`` and positive hoppings ``offdiag``."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float).ravel()
        o = np.asarray(self.offdiag, dtype=float).ravel()
        if d.size < 1:
            raise ParameterError("a chain needs at least one site")
        if o.size != d.size - 1:
            raise ParameterError(
                f"expected {d.size - 1} hoppings for {d.size} sites, got {o.size}")
        if np.any(o <= 0):
            raise ParameterError("hoppings must be strictly positive magnitudes")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", o)

    def __len__(self):
        return self.diag.size

    def matrix(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def eigh(self, driver="stemr"):
        """Eigenvalues and eigenvectors (columns), ascending.

        ``driver`` is passed to :func:`scipy.linalg.eigh_tridiagonal`. The
        default MRRR driver is fast but flushes eigenvector components far
        below machine epsilon to exactly zero; ``"stebz"`` (bisection and
        inverse iteration) keeps them.
        """
        if len(self) == 1:
            return self.diag.copy(), np.ones((1, 1))
        return eigh_tridiagonal(self.diag, self.offdiag, lapack_driver=driver)


def truncate(model: ChainModel, n_sites: int) -> TridiagonalHamiltonian:
    """First ``n_sites`` sites of the semi-infinite chain, site 0 included."""
    if n_sites < 2:
        raise ParameterError(f"need at least 2 sites to keep an environment, got {n_sites}")
    diag = np.full(n_sites, model.site_energy)
    diag[0] = model.eps0
    offdiag = np.full(n_sites - 1, model.v)
    offdiag[0] = model.v0
    return TridiagonalHamiltonian(diag, offdiag)


def second_moment(star: StarModel) -> float:
    """Local second moment sum_j |V_0j|^2 of the star around its centre."""
    return float(np.sum(star.couplings ** 2))


def tridiagonalize(star: StarModel, depth: int | None = None) -> TridiagonalHamiltonian:
    """Map a star environment onto an equivalent chain by Lanczos recursion.

    The recursion starts from the central level, so the first chain site is
    the level itself, the second is the normalised combination of environment
    states it couples to, and so on. Full reorthogonalisation is applied at
    every step.

    Parameters
    ----------
    star : StarModel
    depth : int, optional
        Number of chain sites to produce, at most ``N + 1``. Defaults to
        ``N + 1``.

    Returns
    -------
    TridiagonalHamiltonian
        Possibly shorter than ``depth`` when the Krylov space closes early
        (degenerate levels); a ``RuntimeWarning`` reports the effective depth.
    """
    n = star.n_levels
    if depth is None:
        depth = n + 1
    if depth < 1 or depth > n + 1:
        raise ParameterError(f"depth must lie in [1, {n + 1}], got {depth}")

    scale = max(1.0, abs(star.eps0), float(np.max(np.abs(star.level_energies))),
                math.sqrt(second_moment(star)))
    basis = np.zeros((depth, n + 1))
    basis[0, 0] = 1.0
    diag = [float(star.eps0)]
    offdiag = []

    # first step in closed form
    if depth > 1:
        v0 = math.sqrt(second_moment(star))
        q = np.zeros(n + 1)
        q[1:] = star.couplings / v0
        basis[1] = q
        offdiag.append(v0)
        diag.append(float(np.sum(star.couplings ** 2 * star.level_energies)) / v0 ** 2)

    for k in range(1, depth - 1):
        r = star.matvec(basis[k]) - diag[k] * basis[k] - offdiag[k - 1] * basis[k - 1]
        for _ in range(2):
            r -= basis[: k + 1].T @ (basis[: k + 1] @ r)
        b = float(np.linalg.norm(r))
        if b < LANCZOS_BREAKDOWN * scale:
            warnings.warn(
                f"Krylov space exhausted: effective depth {k + 1} < requested {depth}",
                RuntimeWarning, stacklevel=2)
            break
        basis[k + 1] = r / b
        offdiag.append(b)
        diag.append(float(basis[k + 1] @ star.matvec(basis[k + 1])))

    return TridiagonalHamiltonian(np.array(diag), np.array(offdiag))


def unfold(h: TridiagonalHamiltonian) -> StarModel:
    """Star form of a chain: site 0 coupled to the eigenmodes of sites 1..L-1.

    Inverse of :func:`tridiagonalize` up to the sign gauge of the hoppings.
    """
    if len(h) < 2:
        raise ParameterError("a single site has no environment to unfold")
    rest = TridiagonalHamiltonian(h.diag[1:], h.offdiag[1:])
    # modes localised far from site 1 carry couplings far below epsilon; an
    # exact zero would decouple them and lose the end of the chain
    energies, vecs = rest.eigh(driver="stebz")
    couplings = h.offdiag[0] * vecs[0]
    return StarModel(float(h.diag[0]), couplings, energies)
