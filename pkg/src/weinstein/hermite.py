"""Hermite-Laguerre basis, its generating function and the Mehler-type operator.

The basis is ``H_m(x) = prod_k H_{m_k}(x_k) * ell_{m_r}(x_r)`` with probabilists'
Hermite factors, orthogonal under ``mu`` with squared norms

    ``prod_k m_k! * 4**m_r m_r! Gamma(m_r + alpha + 1) / Gamma(alpha + 1)``.

The generating function ``exp(-|t|**2/2) Psi(i x, t)`` expands with coefficient
``(-1)**m_r / norm2(m)`` in front of ``H_m(x) t'**m' t_r**(2 m_r)``; the sign
comes from ``exp(-t**2/2) j_alpha(i x t)`` being a series in ``-t**2/2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .core import kernel_psi
from .errors import ConfigurationError, DomainError, IntegrityError
from .quadrature import MeasureTag, QuadratureGrid, WeinsteinParams, build_mu_grid, dilate_mu_grid
from .special import ell_alpha, hermite_1d

__all__ = [
    "MultiIndex",
    "multi_indices",
    "hermite_multi",
    "closed_form_norm",
    "NormalizationTable",
    "norm_table",
    "generating_coefficient",
    "generating_lhs",
    "generating_partial_sum",
    "mehler_kernel",
    "mehler_eigenvalue",
    "mehler_grid",
    "mehler_apply",
]


@dataclass(frozen=True, order=True)
class MultiIndex:
    m: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.m)
        if not m or any(v < 0 for v in m):
            raise DomainError(f"multi-index entries must be non-negative integers, got {self.m}")
        object.__setattr__(self, "m", m)

    @property
    def degree(self) -> int:
        """``|m|``."""
        return sum(self.m)

    @property
    def radial(self) -> int:
        return self.m[-1]

    @property
    def euclid(self) -> tuple:
        return self.m[:-1]

    def __iter__(self):
        return iter(self.m)

    def __len__(self):
        return len(self.m)


def _as_index(params, m) -> MultiIndex:
    m = m if isinstance(m, MultiIndex) else MultiIndex(tuple(m))
    if len(m) != params.dim:
        raise DomainError(f"multi-index needs {params.dim} entries, got {len(m)}")
    return m


def multi_indices(dim: int, degree_cap: int) -> Iterator[MultiIndex]:
    """All multi-indices of length ``dim`` with ``|m| <= degree_cap``, by degree then lexicographic."""
    for total in range(degree_cap + 1):
        for m in sorted(itertools.product(range(total + 1), repeat=dim), reverse=True):
            if sum(m) == total:
                yield MultiIndex(m)


def hermite_multi(params: WeinsteinParams, m, x) -> np.ndarray:
    """``H_m^{alpha,d}`` at the rows of ``x``."""
    m = _as_index(params, m)
    x = np.asarray(x, dtype=float)
    out = ell_alpha(m.radial, params.alpha, x[..., -1])
    for k, mk in enumerate(m.euclid):
        out = out * hermite_1d(mk, x[..., k])
    return out


def closed_form_norm(params: WeinsteinParams, m) -> float:
    """Squared ``mu``-norm of ``H_m``."""
    m = _as_index(params, m)
    e = math.prod(math.factorial(k) for k in m.euclid)
    r = m.radial
    radial = 4.0**r * math.factorial(r) * math.exp(
        math.lgamma(r + params.alpha + 1) - math.lgamma(params.alpha + 1)
    )
    return e * radial


class NormalizationTable(Mapping):
    """Read-only map ``MultiIndex -> squared norm`` built by quadrature."""

    def __init__(self, entries):
        self._entries = dict(entries)

    def __getitem__(self, m):
        return self._entries[m if isinstance(m, MultiIndex) else MultiIndex(tuple(m))]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)


def norm_table(
    params: WeinsteinParams, degree_cap: int, mu_grid: QuadratureGrid | None = None, rtol: float = 1e-10
) -> NormalizationTable:
    """Squared norms for ``|m| <= degree_cap``, by quadrature, cross-checked in closed form.

    Raises
    ------
    IntegrityError
        If quadrature and closed form disagree by more than ``rtol`` relative.
    """
    if mu_grid is None:
        n = max(4, degree_cap + 2)
        mu_grid = build_mu_grid(params, n, n)
    if mu_grid.measure_tag is not MeasureTag.MU:
        raise ConfigurationError("norm_table needs a MU grid")
    entries = {}
    for m in multi_indices(params.dim, degree_cap):
        h = hermite_multi(params, m, mu_grid.nodes)
        quad = float(np.sum(mu_grid.weights * h * h))
        exact = closed_form_norm(params, m)
        if abs(quad - exact) > rtol * exact:
            raise IntegrityError(f"norm of {m.m}: quadrature {quad!r} vs closed form {exact!r}")
        entries[m] = quad
    return NormalizationTable(entries)


def generating_coefficient(params: WeinsteinParams, m) -> float:
    m = _as_index(params, m)
    return (-1.0) ** m.radial / closed_form_norm(params, m)


def generating_lhs(params: WeinsteinParams, x, t):
    """``exp(-|t|**2/2) Psi(i x, t)``; real for real arguments."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    val = np.exp(-np.sum(t * t, axis=-1) / 2) * kernel_psi(params, 1j * x, t)
    return val.real


def generating_partial_sum(params: WeinsteinParams, x, t, degree_cap: int):
    """Truncation of the generating series to ``|m| <= degree_cap``."""
    if degree_cap < 0:
        raise DomainError(f"degree cap must be non-negative, got {degree_cap}")
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    total = np.zeros(np.broadcast_shapes(x.shape[:-1], t.shape[:-1]))
    for m in multi_indices(params.dim, degree_cap):
        mono = t[..., -1] ** (2 * m.radial)
        for k, mk in enumerate(m.euclid):
            mono = mono * t[..., k] ** mk
        total = total + generating_coefficient(params, m) * hermite_multi(params, m, x) * mono
    return total


def _check_w(w):
    if not abs(w) < 1:
        raise DomainError(f"Mehler parameter needs |w| < 1, got {w}")


def mehler_kernel(params: WeinsteinParams, w: complex, x, y):
    """Mehler-type kernel ``K_w(x, y)`` with eigenfunctions ``H_n`` and eigenvalues ``w**(|n| + n_r)``.

    ``(1 - w**2)**-(alpha + 1 + d/2) exp(-w**2 (|x|**2 + |y|**2) / (2 (1 - w**2)))
    Psi(i w x / (1 - w**2), y)``, principal branch for the power.
    """
    _check_w(w)
    w = complex(w)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    one = 1 - w * w
    sq = np.sum(x * x, axis=-1) + np.sum(y * y, axis=-1)
    pref = one ** (-params.exponent) * np.exp(-w * w * sq / (2 * one))
    return pref * kernel_psi(params, (1j * w / one) * x.astype(complex), y.astype(complex))


def mehler_eigenvalue(params: WeinsteinParams, w: complex, n) -> complex:
    n = _as_index(params, n)
    return complex(w) ** (n.degree + n.radial)


def mehler_grid(
    params: WeinsteinParams, w: complex, order_euclid: int = 48, order_radial: int = 48
) -> QuadratureGrid:
    """MU grid dilated by ``sqrt(|1 - w**2|)``, the width of the Mehler integrand."""
    _check_w(w)
    base = build_mu_grid(params, order_euclid, order_radial)
    return dilate_mu_grid(base, math.sqrt(abs(1 - complex(w) ** 2)))


def mehler_apply(params: WeinsteinParams, w: complex, f, y, grid: QuadratureGrid) -> np.ndarray:
    """``K_w(f)(y) = integral K_w(x, y) f(x) dmu(x)`` at each row of ``y``."""
    _check_w(w)
    if grid.measure_tag is not MeasureTag.MU:
        raise ConfigurationError("mehler_apply integrates against mu; pass a MU grid")
    y = np.atleast_2d(np.asarray(y, dtype=float))
    x = grid.nodes
    fw = grid.weights * np.asarray(f(x))
    out = np.empty(y.shape[0], dtype=complex)
    for i, yi in enumerate(y):
        out[i] = np.sum(mehler_kernel(params, w, x, yi) * fw)
    return out
