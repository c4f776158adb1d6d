"""Scalar special functions: Gamma, normalized Bessel, Hermite, Laguerre.

All functions accept numpy arrays and broadcast.  The Hermite polynomials use
the probabilists' convention ``exp(x t - t**2 / 2) = sum H_m(x) t**m / m!``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import ConvergenceError, DomainError

__all__ = [
    "SeriesConfig",
    "DEFAULT_SERIES",
    "gamma_fn",
    "bessel_j_norm",
    "hermite_1d",
    "laguerre",
    "ell_alpha",
]


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation control for the power series of the normalized Bessel function.

    ``series_radius`` bounds ``|z|`` for which the series is used at all; beyond it
    the alternating terms lose too many digits to cancellation and evaluation is
    delegated to the AMOS routines behind :func:`scipy.special.jv`.
    """

    max_terms: int = 200
    tail_tolerance: float = 1e-18
    series_radius: float = 8.0

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 8:
            raise DomainError(f"max_terms must be an integer >= 8, got {self.max_terms}")
        if not self.tail_tolerance > 0:
            raise DomainError(f"tail_tolerance must be positive, got {self.tail_tolerance}")
        if not self.series_radius >= 0:
            raise DomainError(f"series_radius must be non-negative, got {self.series_radius}")


DEFAULT_SERIES = SeriesConfig()


def gamma_fn(x):
    """Gamma function on the positive reals."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError(f"gamma_fn is only defined here for x > 0, got {x!r}")
    out = sp.gamma(xa)
    return float(out) if out.ndim == 0 else out


def _check_alpha(alpha):
    if not alpha > -0.5:
        raise DomainError(f"Bessel index must satisfy alpha > -1/2, got {alpha}")


def _series(alpha, z, cfg):
    # j_a(z) = sum_n (-z^2/4)^n Gamma(a+1) / (n! Gamma(n+a+1)), Kahan-compensated
    q = -(z * z) / 4.0
    term = np.ones_like(z)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    for n in range(1, cfg.max_terms + 1):
        term = term * q / (n * (n + alpha))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        last = float(np.max(np.abs(term))) if term.size else 0.0
        if last <= cfg.tail_tolerance:
            return total
    raise ConvergenceError(
        f"Bessel series for alpha={alpha} did not converge in {cfg.max_terms} terms", last
    )


def _scipy_branch(alpha, z):
    # j_a is even: map z to the half plane Re z > 0 (or the positive imaginary axis)
    flip = (z.real < 0) | ((z.real == 0) & (z.imag < 0))
    zc = np.where(flip, -z, z)
    return sp.gamma(alpha + 1.0) * (zc / 2.0) ** (-alpha) * sp.jv(alpha, zc)


def bessel_j_norm(alpha, z, cfg: SeriesConfig = DEFAULT_SERIES):
    """Normalized Bessel function ``j_alpha(z) = Gamma(alpha+1) (z/2)**-alpha J_alpha(z)``.

    Entire and even in ``z`` with ``j_alpha(0) = 1``.  Real input gives real
    output; complex input gives complex output.

    Parameters
    ----------
    alpha : float
        Index, ``alpha > -1/2``.
    z : array_like
        Real or complex argument.
    cfg : SeriesConfig
        Series truncation settings.

    Raises
    ------
    ConvergenceError
        If the series misses ``cfg.tail_tolerance`` within ``cfg.max_terms``.
    """
    _check_alpha(alpha)
    za = np.asarray(z)
    is_complex = np.iscomplexobj(za)
    zc = za.astype(complex)
    out = np.empty(zc.shape, dtype=complex)
    small = np.abs(zc) <= cfg.series_radius
    if np.any(small):
        out[small] = _series(alpha, zc[small], cfg)
    if np.any(~small):
        out[~small] = _scipy_branch(alpha, zc[~small])
    if not is_complex:
        out = out.real
    return out[()] if out.ndim == 0 else out


def hermite_1d(m: int, x):
    """Probabilists' Hermite polynomial by the three-term recurrence."""
    if m < 0:
        raise DomainError(f"degree must be non-negative, got {m}")
    x = np.asarray(x, dtype=float)
    h_prev = np.zeros_like(x)
    h = np.ones_like(x)
    for k in range(m):
        h_prev, h = h, x * h - k * h_prev
    return h[()] if h.ndim == 0 else h


def laguerre(m: int, alpha, s):
    """Generalized Laguerre polynomial ``L_m^alpha(s)``."""
    if m < 0:
        raise DomainError(f"degree must be non-negative, got {m}")
    s = np.asarray(s, dtype=float)
    l_prev = np.zeros_like(s)
    l_cur = np.ones_like(s)
    for k in range(m):
        l_prev, l_cur = l_cur, ((2 * k + alpha + 1 - s) * l_cur - (k + alpha) * l_prev) / (k + 1)
    return l_cur[()] if l_cur.ndim == 0 else l_cur


def ell_alpha(m: int, alpha, x):
    """Radial basis polynomial ``2**m m! L_m^alpha(x**2 / 2)``; even, degree 2m in x."""
    x = np.asarray(x, dtype=float)
    return 2.0**m * float(sp.factorial(m, exact=True)) * laguerre(m, alpha, x * x / 2.0)
