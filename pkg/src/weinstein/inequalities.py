"""Numerical checks of the sharp Hausdorff-Young (Babenko-Beckner) bound and Young-type bounds.

Each check returns the raw left and right sides alongside their ratio so that
drift below the assertion threshold stays visible.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import families
from .core import ThetaRule, convolve, forward_transform, theta_rule
from .errors import DegenerateInputError, DomainError
from .quadrature import GridFunction, QuadratureGrid, WeinsteinParams, _values, build_nu_grid, lp_norm

__all__ = [
    "HolderTriple",
    "beckner_constant",
    "young_constant",
    "young_gaussian_constant",
    "BoundRecord",
    "YoungRecord",
    "babenko_check",
    "young_check",
    "SweepRow",
    "FAMILIES",
    "sweep",
    "worker_count",
]

_EXACT = 1e-12


def _conjugate(m: float) -> float:
    return math.inf if m == 1 else m / (m - 1)


def _b(m: float) -> float:
    """``m**(1/m) / m'**(1/m')`` with the ``m = 1`` limit equal to 1."""
    if m == 1:
        return 1.0
    mc = _conjugate(m)
    return m ** (1 / m) / mc ** (1 / mc)


@dataclass(frozen=True)
class HolderTriple:
    """Exponents for the Babenko (``r is None``, ``q = p'``) or Young (``1/r = 1/p + 1/q - 1``) checks."""

    p: float
    q: float
    r: Optional[float] = None

    def __post_init__(self):
        p, q, r = self.p, self.q, self.r
        if r is None:
            if not 1 < p <= 2:
                raise DomainError(f"Hausdorff-Young exponent needs 1 < p <= 2, got {p}")
            if abs(1 / p + 1 / q - 1) > _EXACT:
                raise DomainError(f"q={q} is not the conjugate of p={p}")
        else:
            if not (1 <= p <= 2 and 1 <= q <= 2 and 1 <= r <= 2):
                raise DomainError(f"Young exponents need 1 <= p, q, r <= 2, got {(p, q, r)}")
            if abs(1 / r - (1 / p + 1 / q - 1)) > _EXACT:
                raise DomainError(f"(p, q, r) = {(p, q, r)} violates 1/r = 1/p + 1/q - 1")

    @classmethod
    def conjugate(cls, p: float) -> "HolderTriple":
        if not 1 < p <= 2:
            raise DomainError(f"Hausdorff-Young exponent needs 1 < p <= 2, got {p}")
        return cls(p, p / (p - 1))

    @classmethod
    def young(cls, p: float, q: float) -> "HolderTriple":
        s = 1 / p + 1 / q - 1
        if not s > 0:
            raise DomainError(f"1/p + 1/q - 1 must be positive, got {s}")
        return cls(p, q, 1 / s)

    @property
    def p1(self) -> float:
        return _conjugate(self.p)

    @property
    def q1(self) -> float:
        return _conjugate(self.q)

    @property
    def r1(self) -> float:
        return _conjugate(self.r)


def beckner_constant(p: float) -> float:
    """``A_p = p**(1/p) / q**(1/q)`` with ``q = p / (p - 1)``."""
    if not 1 < p <= 2:
        raise DomainError(f"beckner_constant needs 1 < p <= 2, got {p}")
    return _b(p)


def young_constant(triple: HolderTriple, exponent: float) -> float:
    """``(r**(1/r) p**(1/p) q**(1/q) / (r1**(1/r1) p1**(1/p1) q1**(1/q1)))**exponent``.

    This is the constant as stated with the Young-type inequality.  For
    ``r < 2`` it is strictly below what equal-width Gaussians attain; see
    :func:`young_gaussian_constant`.
    """
    return (_b(triple.p) * _b(triple.q) * _b(triple.r)) ** exponent


def young_gaussian_constant(triple: HolderTriple, exponent: float) -> float:
    """``(A_p A_q / A_r)**exponent``, the value the Euclidean sharp Young constant takes here.

    Obtained by chaining the Babenko bound for ``p`` and ``q`` with its dual for
    ``r``; Gaussian pairs attain it, so it is the smallest constant a Gaussian
    test can certify.
    """
    return (_b(triple.p) * _b(triple.q) / _b(triple.r)) ** exponent


@dataclass(frozen=True)
class BoundRecord:
    lhs: float
    rhs: float
    ratio: float


@dataclass(frozen=True)
class YoungRecord(BoundRecord):
    """Young-type record; also carries the basic bound (constant 1) and the Gaussian-attained bound."""

    basic_rhs: float
    basic_ratio: float
    gaussian_rhs: float
    gaussian_ratio: float


def _ratio(lhs, rhs):
    if lhs == 0:
        return 0.0
    return lhs / rhs if rhs > 0 else math.inf


def _babenko_record(params, grid, fvals, Fvals, p) -> BoundRecord:
    triple = HolderTriple.conjugate(p)
    norm_f = lp_norm(grid, fvals, p)
    if norm_f == 0:
        raise DegenerateInputError("the Babenko ratio is undefined for the zero function")
    lhs = lp_norm(grid, Fvals, triple.q)
    rhs = beckner_constant(p) ** params.exponent * norm_f
    return BoundRecord(lhs, rhs, lhs / rhs)


def babenko_check(
    params: WeinsteinParams, grid: QuadratureGrid, f, p: float, transform=None
) -> BoundRecord:
    """``|F f|_q`` against ``A_p**(alpha + d/2 + 1) |f|_p``, both on the NU ``grid``.

    ``transform`` may carry precomputed values of ``F f`` on the grid nodes.
    """
    HolderTriple.conjugate(p)
    fvals = _values(grid, f)
    if transform is None:
        transform = forward_transform(params, grid, fvals, grid)
    return _babenko_record(params, grid, fvals, _values(grid, transform), p)


def young_check(
    params: WeinsteinParams,
    grid: QuadratureGrid,
    f,
    g,
    triple: HolderTriple,
    rule: Optional[ThetaRule] = None,
    conv=None,
) -> YoungRecord:
    """``|f *_w g|_r`` against the Young-type bound; ``conv`` may hold ``f *_w g`` on the grid nodes."""
    if triple.r is None:
        raise DomainError("young_check needs a triple with r set")
    if conv is None:
        rule = rule or theta_rule(params.alpha)
        conv = convolve(params, grid, f, g, grid.nodes, rule)
    lhs = lp_norm(grid, _values(grid, conv), triple.r)
    basic = lp_norm(grid, _values(grid, f), triple.p) * lp_norm(grid, _values(grid, g), triple.q)
    rhs = young_constant(triple, params.exponent) * basic
    grhs = young_gaussian_constant(triple, params.exponent) * basic
    return YoungRecord(lhs, rhs, _ratio(lhs, rhs), basic, _ratio(lhs, basic), grhs, _ratio(lhs, grhs))


FAMILIES = ("GAUSSIAN", "HERMITE", "RANDOM")


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    d: int
    p: float
    q: float
    family: str
    seed: int
    lhs: float
    rhs: float
    ratio: float
    bound_constant: float


def worker_count() -> int:
    """Thread cap from ``WEINSTEIN_THREADS``; defaults to 1."""
    raw = os.environ.get("WEINSTEIN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _family_members(params, family, seed, n_functions):
    if family == "GAUSSIAN":
        return [(seed + k, families.gaussian(params, w)) for k, w in enumerate(families.gaussian_widths(n_functions))]
    if family == "HERMITE":
        return [(seed + k, families.gaussian_hermite(params, m)) for k, m in enumerate(families.hermite_indices(params, n_functions))]
    if family == "RANDOM":
        return [
            (seed + k, families.random_combination(params, np.random.default_rng([seed, k])))
            for k in range(n_functions)
        ]
    raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")


def sweep(
    params: WeinsteinParams,
    p_values: Sequence[float],
    family: str,
    seed: int = 42,
    grid: Optional[QuadratureGrid] = None,
    n_functions: int = 20,
) -> list:
    """Babenko records for every (p, function) pair, ordered by (p, seed).

    ``RANDOM`` draws combinations ``sum c_m H_m exp(-|x|**2/2)`` from
    ``numpy.random.default_rng([seed, k])``; the ``seed`` column carries
    ``seed + k`` for member ``k`` of every family.
    """
    for p in p_values:
        HolderTriple.conjugate(p)
    family = family.upper()
    grid = grid or build_nu_grid(params)
    members = _family_members(params, family, seed, n_functions)

    def evaluate(member):
        tag, f = member
        fvals = np.asarray(f(grid.nodes))
        Fvals = forward_transform(params, grid, fvals, grid)
        return tag, fvals, Fvals

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        transformed = list(pool.map(evaluate, members))

    rows = []
    for p in sorted(p_values):
        q = HolderTriple.conjugate(p).q
        bound = beckner_constant(p) ** params.exponent
        for tag, fvals, Fvals in transformed:
            rec = _babenko_record(params, grid, fvals, Fvals, p)
            rows.append(SweepRow(params.alpha, params.d, p, q, family, tag, rec.lhs, rec.rhs, rec.ratio, bound))
    return rows
