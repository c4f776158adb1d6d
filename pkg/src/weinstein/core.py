"""Weinstein kernel, transform pair, generalized translation and convolution.

Sign conventions
----------------
The kernel is ``Psi(x, z) = exp(-i <x', z'>) j_alpha(x_r z_r)`` and the
translation shifts the Euclidean block by ``x' + y'``.  With these two
choices the product formula ``T_x[Psi(., l)](y) = Psi(x, l) Psi(y, l)`` holds
literally, and consequently

* ``F(T_x f)(l) = Psi(-x, l) F(f)(l)`` (conjugated Euclidean phase), and
* ``F(f * g)(l) = F(f)(l) F(g)(-l', l_r)``, which reduces to the plain product
  when ``g`` is even in the Euclidean variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special as sp

from .errors import ConfigurationError
from .quadrature import (
    GridFunction,
    MeasureTag,
    QuadratureGrid,
    WeinsteinParams,
    _values,
)
from .special import DEFAULT_SERIES, SeriesConfig, bessel_j_norm

__all__ = [
    "ThetaRule",
    "theta_rule",
    "kernel_psi",
    "kernel_psi_integral",
    "forward_transform",
    "inverse_transform",
    "translate",
    "translate_on_grid",
    "convolve",
    "ProductFunction",
]

_CHUNK = 512


@dataclass(frozen=True, eq=False)
class ThetaRule:
    """Gauss-Jacobi rule in ``u = cos(theta)`` for ``(1 - u**2)**(alpha - 1/2)``, unit mass."""

    alpha: float
    order: int
    nodes: np.ndarray
    weights: np.ndarray


def theta_rule(alpha: float, order: int = 64) -> ThetaRule:
    if int(order) != order or order < 1:
        raise ConfigurationError(f"theta order must be a positive integer, got {order}")
    u, w = sp.roots_jacobi(int(order), alpha - 0.5, alpha - 0.5)
    # a_alpha = Gamma(a+1) / (sqrt(pi) Gamma(a+1/2)) is the reciprocal of the total mass
    a_alpha = math.exp(sp.gammaln(alpha + 1) - sp.gammaln(alpha + 0.5)) / math.sqrt(math.pi)
    w = w * a_alpha
    if abs(w.sum() - 1.0) > 1e-12:
        raise ConfigurationError(f"theta rule mass {w.sum()!r} differs from 1")
    u.setflags(write=False)
    w.setflags(write=False)
    return ThetaRule(float(alpha), int(order), u, w)


def _split(params, pts):
    pts = np.asarray(pts)
    if pts.shape[-1] != params.dim:
        raise ConfigurationError(f"points must have {params.dim} coordinates, got {pts.shape[-1]}")
    return pts[..., :-1], pts[..., -1]


def kernel_psi(params: WeinsteinParams, x, z, cfg: SeriesConfig = DEFAULT_SERIES):
    """``Psi(x, z)`` for broadcastable point arrays; ``z`` may be complex."""
    xe, xr = _split(params, x)
    ze, zr = _split(params, z)
    phase = np.exp(-1j * np.sum(xe * ze, axis=-1))
    return phase * bessel_j_norm(params.alpha, xr * zr, cfg)


def kernel_psi_integral(params: WeinsteinParams, x, z, rule: ThetaRule):
    """``Psi`` from its Laplace-type integral over ``u in [-1, 1]``; an independent check."""
    xe, xr = _split(params, x)
    ze, zr = _split(params, z)
    phase = np.exp(-1j * np.sum(xe * ze, axis=-1))
    arg = np.asarray(xr * zr)[..., None] * rule.nodes
    return phase * (np.exp(-1j * arg) @ rule.weights)


def _axis_matrix(params, k, lam, nodes, weights, sign):
    if k == params.d:
        return weights * bessel_j_norm(params.alpha, np.multiply.outer(lam, nodes))
    return weights * np.exp(sign * 1j * np.multiply.outer(lam, nodes))


def _apply_on_grid(params, grid, vals, out, sign):
    # separable path: one matrix per axis
    t = vals.reshape(grid.shape).astype(complex)
    for k, ((xn, xw), (ln, _)) in enumerate(zip(grid.axes, out.axes)):
        mat = _axis_matrix(params, k, ln, xn, xw, sign)
        t = np.moveaxis(np.tensordot(mat, t, axes=([1], [k])), 0, k)
    return t.ravel()


def _apply_at_points(params, grid, vals, pts, sign):
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if pts.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    _split(params, pts)
    t = vals.reshape(grid.shape).astype(complex)
    d = params.d
    out = np.empty(pts.shape[0], dtype=complex)
    for lo in range(0, pts.shape[0], _CHUNK):
        chunk = pts[lo : lo + _CHUNK]
        xn, xw = grid.axes[d]
        acc = np.tensordot(t, _axis_matrix(params, d, chunk[:, d], xn, xw, sign), axes=([d], [1]))
        for k in range(d - 1, -1, -1):
            xn, xw = grid.axes[k]
            mat = _axis_matrix(params, k, chunk[:, k], xn, xw, sign)
            acc = np.einsum("...jm,mj->...m", acc, mat)
        out[lo : lo + len(chunk)] = acc
    return out


def _transform(params, grid, f, where, sign):
    if grid.measure_tag is not MeasureTag.NU:
        raise ConfigurationError("transforms integrate against nu; pass a NU grid")
    if grid.params != params:
        raise ConfigurationError("grid was built for different parameters")
    vals = _values(grid, f)
    if isinstance(where, QuadratureGrid):
        return _apply_on_grid(params, grid, vals, where, sign)
    return _apply_at_points(params, grid, vals, where, sign)


def forward_transform(params: WeinsteinParams, grid: QuadratureGrid, f, lambdas) -> np.ndarray:
    """``F(f)(l) = integral f(x) Psi(x, l) dnu(x)`` by quadrature on ``grid``.

    ``lambdas`` is an ``(m, d + 1)`` point array or another grid; in the latter
    case the result is ordered like that grid's nodes and is computed axis by
    axis.
    """
    return _transform(params, grid, f, lambdas, -1)


def inverse_transform(params: WeinsteinParams, grid: QuadratureGrid, F, xs) -> np.ndarray:
    """``f(x) = integral F(y) Psi(-x, y) dnu(y)``; the Bessel factor is even."""
    return _transform(params, grid, F, xs, +1)


def _shifted(params, x, y, rule):
    # points (..., T, d+1) at which T_x f(y) samples f
    xe, xr = _split(params, x)
    ye, yr = _split(params, y)
    e = xe + ye
    xr = np.asarray(xr)[..., None]
    yr = np.asarray(yr)[..., None]
    rad = np.sqrt(np.maximum(xr * xr + yr * yr + 2 * xr * yr * rule.nodes, 0.0))
    shape = np.broadcast_shapes(e.shape[:-1], rad.shape[:-1]) + (rule.order,)
    pts = np.empty(shape + (params.dim,))
    pts[..., :-1] = np.broadcast_to(e[..., None, :], shape + (params.d,))
    pts[..., -1] = np.broadcast_to(rad, shape)
    return pts


def translate(params: WeinsteinParams, x, f: Callable, y, rule: ThetaRule):
    """Generalized translation ``T_x f(y)``; ``x`` and ``y`` broadcast as point arrays."""
    pts = _shifted(params, x, y, rule)
    vals = np.asarray(f(pts.reshape(-1, params.dim))).reshape(pts.shape[:-1])
    return vals @ rule.weights


class ProductFunction:
    """``c * prod_k f_k(x_k) * f_r(x_r)``; each factor is a 1-D vectorized callable.

    Convolving two product functions factors into one-dimensional quadratures,
    which :func:`convolve` exploits.
    """

    def __init__(self, euclid: Sequence[Callable], radial: Callable, coeff: complex = 1.0):
        self.euclid = tuple(euclid)
        self.radial = radial
        self.coeff = coeff

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        out = self.coeff * self.radial(pts[..., -1])
        for k, fk in enumerate(self.euclid):
            out = out * fk(pts[..., k])
        return out


def _convolve_product(params, grid, f, g, x, rule):
    # each factor depends on one coordinate, so evaluate it on that coordinate's distinct values
    x = np.atleast_2d(np.asarray(x, dtype=float))
    out = np.full(x.shape[0], f.coeff * g.coeff, dtype=complex)
    for k in range(params.d):
        yn, yw = grid.axes[k]
        u, inv = np.unique(x[:, k], return_inverse=True)
        out *= (f.euclid[k](np.add.outer(u, yn)) @ (yw * g.euclid[k](yn)))[inv]
    yn, yw = grid.axes[params.d]
    gy = yw * g.radial(yn)
    u, inv = np.unique(x[:, -1], return_inverse=True)
    radial = np.empty(u.size, dtype=complex)
    step = max(1, 2_000_000 // (yn.size * rule.order))
    for lo in range(0, u.size, step):
        xr = u[lo : lo + step, None, None]
        yr = yn[None, :, None]
        rad = np.sqrt(np.maximum(xr * xr + yr * yr + 2 * xr * yr * rule.nodes, 0.0))
        radial[lo : lo + step] = (f.radial(rad) @ rule.weights) @ gy
    return out * radial[inv]


def translate_on_grid(params: WeinsteinParams, x, f: Callable, grid: QuadratureGrid, rule: ThetaRule):
    """``T_x f`` at every node of ``grid``; separable when ``f`` is a :class:`ProductFunction`."""
    if not isinstance(f, ProductFunction):
        return translate(params, x, f, grid.nodes, rule)
    x = np.asarray(x, dtype=float)
    _split(params, x)
    factors = []
    for k in range(params.d):
        factors.append(f.euclid[k](x[k] + grid.axes[k][0]))
    yr = grid.axes[params.d][0][:, None]
    rad = np.sqrt(np.maximum(x[-1] ** 2 + yr * yr + 2 * x[-1] * yr * rule.nodes, 0.0))
    factors.append(f.radial(rad) @ rule.weights)
    out = np.asarray(f.coeff * factors[0])
    for fac in factors[1:]:
        out = np.multiply.outer(out, fac)
    return out.ravel()


def convolve(
    params: WeinsteinParams,
    grid: QuadratureGrid,
    f: Callable,
    g: Callable,
    x,
    rule: ThetaRule,
    chunk: Optional[int] = None,
) -> np.ndarray:
    """``f *_w g (x) = integral T_x f(y) g(y) dnu(y)`` at each row of ``x``.

    Nested quadrature: ``grid`` for the outer integral, ``rule`` inside the
    translation.  ``f`` and ``g`` must be negligible outside the grid box.
    Pairs of :class:`ProductFunction` take a factored route of the same
    quadrature.
    """
    if grid.measure_tag is not MeasureTag.NU:
        raise ConfigurationError("convolution integrates against nu; pass a NU grid")
    if isinstance(f, ProductFunction) and isinstance(g, ProductFunction):
        return _convolve_product(params, grid, f, g, x, rule)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = grid.nodes
    gw = grid.weights * np.asarray(g(y))
    step = chunk or max(1, 2_000_000 // (grid.size * rule.order))
    out = np.empty(x.shape[0], dtype=complex)
    for lo in range(0, x.shape[0], step):
        xs = x[lo : lo + step]
        tf = translate(params, xs[:, None, :], f, y[None, :, :], rule)
        out[lo : lo + len(xs)] = tf @ gw
    return out
