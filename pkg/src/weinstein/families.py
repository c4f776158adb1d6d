"""Named test functions: Gaussians, Gaussian-times-basis products, bumps, random combinations."""

from __future__ import annotations

import numpy as np

from .core import ProductFunction
from .errors import ConfigurationError
from .hermite import MultiIndex, closed_form_norm, hermite_multi, multi_indices
from .quadrature import WeinsteinParams
from .special import ell_alpha, hermite_1d

__all__ = [
    "gaussian",
    "gaussian_hermite",
    "bump",
    "HermiteCombination",
    "random_combination",
    "polynomial_family",
    "gaussian_widths",
    "hermite_indices",
    "from_name",
]


def gaussian(params: WeinsteinParams, width: float = 1.0) -> ProductFunction:
    """``exp(-width |x|**2 / 2)``; ``width = 1`` is self-reciprocal under the transform."""

    def g(t):
        return np.exp(-width * np.asarray(t) ** 2 / 2)

    return ProductFunction([g] * params.d, g)


def gaussian_hermite(params: WeinsteinParams, m) -> ProductFunction:
    """``H_m(x) exp(-|x|**2 / 2)``."""
    m = m if isinstance(m, MultiIndex) else MultiIndex(tuple(m))
    if len(m) != params.dim:
        raise ConfigurationError(f"multi-index needs {params.dim} entries, got {len(m)}")
    euclid = [
        (lambda t, k=k: hermite_1d(k, t) * np.exp(-np.asarray(t) ** 2 / 2)) for k in m.euclid
    ]

    def radial(t):
        return ell_alpha(m.radial, params.alpha, t) * np.exp(-np.asarray(t) ** 2 / 2)

    return ProductFunction(euclid, radial)


def bump(params: WeinsteinParams, radius: float = 2.0):
    """Smooth compactly supported ``exp(1 - 1 / (1 - |x|**2 / radius**2))``."""

    def f(pts):
        pts = np.asarray(pts, dtype=float)
        r2 = np.sum(pts * pts, axis=-1) / radius**2
        out = np.zeros(r2.shape)
        inside = r2 < 1
        out[inside] = np.exp(1 - 1 / (1 - r2[inside]))
        return out

    return f


class HermiteCombination:
    """``sum_m c_m H_m(x) exp(-|x|**2 / 2)`` over a finite set of multi-indices."""

    def __init__(self, params: WeinsteinParams, coeffs: dict):
        self.params = params
        self.coeffs = dict(coeffs)

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        poly = np.zeros(pts.shape[:-1])
        for m, c in self.coeffs.items():
            poly = poly + c * hermite_multi(self.params, m, pts)
        return poly * np.exp(-np.sum(pts * pts, axis=-1) / 2)


def random_combination(
    params: WeinsteinParams, rng: np.random.Generator, degree_cap: int = 3
) -> HermiteCombination:
    """Coefficients drawn standard normal, scaled by the inverse basis norm."""
    coeffs = {}
    for m in multi_indices(params.dim, degree_cap):
        coeffs[m] = rng.standard_normal() / np.sqrt(closed_form_norm(params, m))
    return HermiteCombination(params, coeffs)


def polynomial_family(params: WeinsteinParams) -> list:
    """Ten Gaussian-times-polynomial functions, even in the radial coordinate."""
    x1 = lambda p: p[..., 0]
    xr2 = lambda p: p[..., -1] ** 2
    sq = lambda p: np.sum(p * p, axis=-1)
    polys = [
        lambda p: np.ones(p.shape[:-1]),
        x1,
        lambda p: x1(p) ** 2,
        xr2,
        lambda p: 1 + xr2(p),
        lambda p: x1(p) * xr2(p),
        lambda p: xr2(p) ** 2 - 3 * x1(p),
        lambda p: 1 - sq(p) / 4 + x1(p) ** 3 / 6,
        lambda p: (x1(p) - 0.5) ** 2 * (1 + 0.25 * xr2(p)),
        lambda p: p[..., -2] * xr2(p) + 0.1 * sq(p) ** 2,
    ]
    return [
        (lambda pts, P=P: P(np.asarray(pts, dtype=float)) * np.exp(-sq(np.asarray(pts, dtype=float)) / 2))
        for P in polys
    ]


def gaussian_widths(n: int) -> np.ndarray:
    """``n`` widths spread geometrically over ``[0.75, 1.5]``."""
    return np.geomspace(0.75, 1.5, n) if n > 1 else np.ones(1)


def hermite_indices(params: WeinsteinParams, n: int) -> list:
    """First ``n`` non-constant multi-indices in degree order."""
    out = []
    cap = 1
    while len(out) < n:
        out = [m for m in multi_indices(params.dim, cap) if m.degree > 0]
        cap += 1
    return out[:n]


def from_name(params: WeinsteinParams, name: str):
    """Resolve ``gaussian``, ``gaussian_hermite:<m1,...,m_{d+1}>`` or ``bump``."""
    if name == "gaussian":
        return gaussian(params)
    if name == "bump":
        return bump(params)
    if name.startswith("gaussian_hermite:"):
        spec = name.split(":", 1)[1]
        try:
            m = tuple(int(v) for v in spec.replace(";", ",").split(","))
        except ValueError:
            raise ConfigurationError(f"bad multi-index in {name!r}") from None
        return gaussian_hermite(params, m)
    raise ConfigurationError(
        f"unknown function {name!r}; expected gaussian, gaussian_hermite:<m>, or bump"
    )
