"""Tensor-product quadrature for the two reference measures.

``NU`` grids discretize ``dnu(x) = x_r**(2a+1) dx / ((2 pi)**(d/2) 2**a Gamma(a+1))`` on a
truncated box; ``MU`` grids discretize the Gaussian-type probability measure
``dmu = exp(-|x|**2 / 2) dnu`` with untruncated Gauss rules.  Every normalization
constant is folded into the weights, so an integral is a plain weighted sum.

Points are arrays of shape ``(n, d + 1)``; the last column is the radial
coordinate ``x_r >= 0``.  Nodes are stored in C order of the per-axis rules, so
``values.reshape(grid.shape)`` recovers the tensor layout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np
from scipy import special as sp

from .errors import ConfigurationError, DomainError

__all__ = [
    "WeinsteinParams",
    "MeasureTag",
    "QuadratureGrid",
    "GridFunction",
    "build_nu_grid",
    "build_mu_grid",
    "dilate_mu_grid",
    "integrate",
    "lp_norm",
    "sample",
]


@dataclass(frozen=True)
class WeinsteinParams:
    """Index ``alpha > -1/2`` and number ``d >= 1`` of Euclidean coordinates."""

    alpha: float
    d: int

    def __post_init__(self):
        if not self.alpha > -0.5:
            raise DomainError(f"alpha must satisfy alpha > -1/2, got {self.alpha}")
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "d", int(self.d))

    @property
    def dim(self) -> int:
        """Number of coordinates, ``d + 1``."""
        return self.d + 1

    @property
    def exponent(self) -> float:
        """``alpha + d/2 + 1``: the power carried by the sharp constants."""
        return self.alpha + self.d / 2 + 1

    @property
    def radial_norm(self) -> float:
        """``2**alpha Gamma(alpha + 1)``."""
        return 2.0**self.alpha * math.gamma(self.alpha + 1)


class MeasureTag(enum.Enum):
    NU = "nu"
    MU = "mu"


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Immutable tensor rule; ``axes[k]`` is the ``(nodes, weights)`` pair of axis k."""

    params: WeinsteinParams
    measure_tag: MeasureTag
    axes: tuple
    truncation_radius: float
    orders: tuple
    scale: float = 1.0

    @property
    def shape(self) -> tuple:
        return tuple(len(n) for n, _ in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @cached_property
    def nodes(self) -> np.ndarray:
        mesh = np.meshgrid(*[n for n, _ in self.axes], indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        pts.setflags(write=False)
        return pts

    @cached_property
    def weights(self) -> np.ndarray:
        w = self.axes[0][1]
        for _, wk in self.axes[1:]:
            w = np.multiply.outer(w, wk)
        w = np.ascontiguousarray(w).ravel()
        w.setflags(write=False)
        return w


PointFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples of a function on the nodes of ``grid``."""

    grid: QuadratureGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.size,):
            raise ConfigurationError(
                f"values of shape {vals.shape} do not match grid with {self.grid.size} nodes"
            )
        object.__setattr__(self, "values", vals)

    def __mul__(self, c):
        return GridFunction(self.grid, self.values * c)

    __rmul__ = __mul__


def sample(grid: QuadratureGrid, f: PointFunction) -> GridFunction:
    """Evaluate a pointwise function on the grid nodes."""
    return GridFunction(grid, np.asarray(f(grid.nodes)))


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


def _check_orders(*orders, minimum):
    for n in orders:
        if int(n) != n or n < minimum:
            raise ConfigurationError(f"quadrature orders must be integers >= {minimum}, got {n}")


def build_nu_grid(
    params: WeinsteinParams, radius: float = 8.0, order_euclid: int = 64, order_radial: int = 48
) -> QuadratureGrid:
    """Gauss-Legendre on ``[-R, R]`` per Euclidean axis times Gauss-Jacobi on ``[0, R]``.

    The Jacobi rule carries the weight ``x**(2 alpha + 1)`` exactly, which keeps
    spectral accuracy for ``alpha < 0`` where that factor is not smooth.
    """
    if not radius > 0:
        raise ConfigurationError(f"radius must be positive, got {radius}")
    _check_orders(order_euclid, order_radial, minimum=4)
    a = params.alpha
    t, w = sp.roots_legendre(order_euclid)
    euclid = _freeze(radius * t, radius * w / math.sqrt(2 * math.pi))
    t, w = sp.roots_jacobi(order_radial, 0.0, 2 * a + 1)
    radial = _freeze(
        radius * (1 + t) / 2, w * (radius / 2) ** (2 * a + 2) / params.radial_norm
    )
    return QuadratureGrid(
        params,
        MeasureTag.NU,
        tuple([euclid] * params.d + [radial]),
        float(radius),
        (int(order_euclid),) * params.d + (int(order_radial),),
    )


def build_mu_grid(
    params: WeinsteinParams, order_euclid: int = 48, order_radial: int = 48
) -> QuadratureGrid:
    """Gauss-Hermite per Euclidean axis times generalized Gauss-Laguerre in ``s = x_r**2/2``.

    Exact for polynomials of degree ``2 n - 1`` per Euclidean axis and for even
    polynomials of degree ``2 (2 n_r - 1)`` in the radial coordinate.
    """
    _check_orders(order_euclid, order_radial, minimum=2)
    t, w = sp.roots_hermitenorm(order_euclid)
    euclid = _freeze(t, w / math.sqrt(2 * math.pi))
    s, w = sp.roots_genlaguerre(order_radial, params.alpha)
    radial = _freeze(np.sqrt(2 * s), w / math.gamma(params.alpha + 1))
    return QuadratureGrid(
        params,
        MeasureTag.MU,
        tuple([euclid] * params.d + [radial]),
        math.inf,
        (int(order_euclid),) * params.d + (int(order_radial),),
    )


def dilate_mu_grid(grid: QuadratureGrid, scale: float) -> QuadratureGrid:
    """Rule for ``mu`` whose nodes sit at ``scale`` times those of ``grid``.

    Integrands concentrated like ``exp(-|x|**2 / (2 scale**2))`` against ``mu`` are
    then integrated with the accuracy the base rule has for polynomials.  Uses
    ``dmu(s u) = s**(2a+2+d) exp(-(s**2 - 1) |u|**2 / 2) dmu(u)`` per axis.
    """
    if grid.measure_tag is not MeasureTag.MU or grid.scale != 1.0:
        raise ConfigurationError("only undilated MU grids can be dilated")
    if not scale > 0:
        raise ConfigurationError(f"scale must be positive, got {scale}")
    s = float(scale)
    shrink = (s * s - 1) / 2
    axes = []
    for k, (n, w) in enumerate(grid.axes):
        power = 2 * grid.params.alpha + 2 if k == grid.params.d else 1.0
        axes.append(_freeze(s * n, w * s**power * np.exp(-shrink * n * n)))
    return QuadratureGrid(
        grid.params, MeasureTag.MU, tuple(axes), math.inf, grid.orders, scale=s
    )


def _values(grid, f) -> np.ndarray:
    if isinstance(f, GridFunction):
        if f.values.shape != (grid.size,):
            raise ConfigurationError(
                f"GridFunction has {f.values.shape[0]} values, grid has {grid.size} nodes"
            )
        return f.values
    if callable(f):
        return np.asarray(f(grid.nodes))
    vals = np.asarray(f)
    if vals.ndim == 0:
        return np.full(grid.size, vals)
    if vals.shape != (grid.size,):
        raise ConfigurationError(f"{vals.shape[0]} values for a grid of {grid.size} nodes")
    return vals


def integrate(grid: QuadratureGrid, f: Union[PointFunction, GridFunction, np.ndarray, float]):
    """Weighted sum of ``f`` over the grid; returns a Python complex or float."""
    vals = _values(grid, f)
    total = np.sum(grid.weights * vals)
    return complex(total) if np.iscomplexobj(total) else float(total)


def lp_norm(grid: QuadratureGrid, f, p: float) -> float:
    """``(sum w |f|**p)**(1/p)``, or ``max |f|`` for ``p = inf``."""
    if not p >= 1:
        raise DomainError(f"p must satisfy p >= 1, got {p}")
    mag = np.abs(_values(grid, f))
    if math.isinf(p):
        return float(mag.max(initial=0.0))
    if not np.any(mag):
        return 0.0
    # factor out the maximum so large q does not underflow
    top = mag.max()
    return float(top * np.sum(grid.weights * (mag / top) ** p) ** (1.0 / p))
