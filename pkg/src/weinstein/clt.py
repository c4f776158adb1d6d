"""Weinstein convolution of atomic measures and the central-limit moment demo.

The scaled two-point measures ``beta_n`` (atoms ``+-1/sqrt(n_j)`` per Euclidean
axis, ``0`` and ``sqrt((4 alpha + 4) / n_r)`` radially) are convolved ``n``
times.  Euclidean folds stay on a lattice and merge exactly.  A radial fold
spreads mass over ``sqrt(a**2 + b**2 + 2 a b u)`` for all ``u`` in ``[-1, 1]``,
so it is discretized with the theta rule and then compressed to a Gauss rule
in ``s = x_r**2``; both steps are exact for even radial moments up to the
rule degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import ThetaRule, theta_rule, translate
from .errors import ConfigurationError, ResourceError
from .quadrature import WeinsteinParams

__all__ = [
    "AtomicMeasure",
    "bernoulli_measure",
    "measure_convolve",
    "radial_fold",
    "euclid_fold",
    "mu_moment",
    "CltRow",
    "clt_moment_check",
]

MERGE_TOL = 1e-12
DROP_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finite probability measure on ``R^d x [0, inf)``."""

    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        m = np.asarray(self.masses, dtype=float)
        if pts.shape[0] != m.shape[0]:
            raise ConfigurationError("need one mass per atom")
        if np.any(m <= 0):
            raise ConfigurationError("atom masses must be positive")
        if abs(m.sum() - 1) > 1e-12:
            raise ConfigurationError(f"masses sum to {m.sum()!r}, not 1")
        if np.any(pts[:, -1] < 0):
            raise ConfigurationError("radial coordinates of atoms must be non-negative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", m)

    def integrate(self, f: Callable) -> complex:
        return np.asarray(f(self.points)) @ self.masses


def _fold_counts(params, n):
    n = np.broadcast_to(np.asarray(n, dtype=int), (params.dim,))
    if np.any(n < 1):
        raise ConfigurationError(f"fold counts must be >= 1, got {n.tolist()}")
    return tuple(int(v) for v in n)


def _step_marginals(params, n):
    n = _fold_counts(params, n)
    euclid = [(np.array([-1.0, 1.0]) / math.sqrt(nj), np.array([0.5, 0.5])) for nj in n[:-1]]
    radial = (np.array([0.0, math.sqrt((4 * params.alpha + 4) / n[-1])]), np.array([0.5, 0.5]))
    return euclid, radial


def bernoulli_measure(params: WeinsteinParams, n=1) -> AtomicMeasure:
    """``beta_n``: product of the scaled two-point marginals, ``2**(d+1)`` atoms."""
    euclid, radial = _step_marginals(params, n)
    axes = [a for a, _ in euclid] + [radial[0]]
    wts = [w for _, w in euclid] + [radial[1]]
    mesh = np.meshgrid(*axes, indexing="ij")
    mass = np.ones(mesh[0].shape)
    for k, w in enumerate(wts):
        shape = [1] * len(wts)
        shape[k] = -1
        mass = mass * w.reshape(shape)
    return AtomicMeasure(np.stack([m.ravel() for m in mesh], -1), mass.ravel())


def measure_convolve(
    params: WeinsteinParams, m1: AtomicMeasure, m2: AtomicMeasure, f: Callable, rule: ThetaRule
) -> complex:
    """``(m1 *_w m2)(f) = sum_ij m1_i m2_j T_{x_i} f(y_j)``."""
    vals = translate(params, m1.points[:, None, :], f, m2.points[None, :, :], rule)
    return m1.masses @ vals @ m2.masses


def _merge(atoms, masses, drop=DROP_TOL):
    keep = masses > 0
    atoms, masses = atoms[keep], masses[keep]
    order = np.argsort(atoms, kind="stable")
    atoms, masses = atoms[order], masses[order]
    new_group = np.concatenate([[True], np.diff(atoms) > MERGE_TOL])
    idx = np.cumsum(new_group) - 1
    merged_m = np.bincount(idx, weights=masses)
    # mass-weighted position keeps first moments of each cluster
    merged_a = np.bincount(idx, weights=masses * atoms) / merged_m
    keep = merged_m >= drop
    merged_a, merged_m = merged_a[keep], merged_m[keep]
    return merged_a, merged_m / merged_m.sum()


def euclid_fold(step, count: int, cap: int):
    """``count``-fold ordinary convolution of a 1-D atomic measure."""
    atoms, masses = step
    cur_a, cur_m = atoms.copy(), masses.copy()
    for _ in range(count - 1):
        cur_a = np.add.outer(cur_a, atoms).ravel()
        cur_m = np.multiply.outer(cur_m, masses).ravel()
        cur_a, cur_m = _merge(cur_a, cur_m)
        if cur_a.size > cap:
            raise ResourceError(f"Euclidean marginal grew to {cur_a.size} atoms (cap {cap})")
    return cur_a, cur_m


def _gauss_compress(s, w, size):
    """Gauss rule with ``size`` nodes for the discrete measure ``sum w_i delta_{s_i}`` (Lanczos)."""
    scale = max(float(s.max()), 1.0)
    x = s / scale
    q = np.sqrt(w)
    basis = [q]
    diag, off = [], []
    prev = np.zeros_like(q)
    beta = 0.0
    for j in range(size):
        v = x * basis[-1] - beta * prev
        a = basis[-1] @ v
        v = v - a * basis[-1]
        Q = np.array(basis)
        for _ in range(2):
            v = v - Q.T @ (Q @ v)
        diag.append(a)
        beta = float(np.linalg.norm(v))
        if j == size - 1 or beta < 1e-13:
            break
        off.append(beta)
        prev = basis[-1]
        basis.append(v / beta)
    nodes, vecs = eigh_tridiagonal(np.array(diag), np.array(off))
    weights = vecs[0] ** 2
    return np.clip(nodes, 0.0, None) * scale, weights / weights.sum()


def radial_fold(step, count: int, rule: ThetaRule, atoms_kept: int = 48, cap: int = 1024):
    """``count``-fold Weinstein convolution of a radial atomic measure."""
    atoms, masses = step
    cur_a, cur_m = atoms.copy(), masses.copy()
    for _ in range(count - 1):
        a = cur_a[:, None, None]
        b = atoms[None, :, None]
        new_a = np.sqrt(np.maximum(a * a + b * b + 2 * a * b * rule.nodes, 0.0)).ravel()
        new_m = (cur_m[:, None, None] * masses[None, :, None] * rule.weights).ravel()
        # no mass pruning here: compression bounds the atom count without moving moments
        cur_a, cur_m = _merge(new_a, new_m, drop=0.0)
        if cur_a.size > atoms_kept:
            s, w = _gauss_compress(cur_a**2, cur_m, atoms_kept)
            cur_a, cur_m = _merge(np.sqrt(s), w, drop=0.0)
        if cur_a.size > cap:
            raise ResourceError(f"radial marginal grew to {cur_a.size} atoms (cap {cap})")
    return cur_a, cur_m


def mu_moment(params: WeinsteinParams, coord: int, k: int) -> float:
    """``integral x_coord**k dmu``; ``coord`` is 0-based, ``coord == d`` is radial."""
    if coord == params.d:
        a = params.alpha
        return 2.0 ** (k / 2) * math.exp(math.lgamma(a + 1 + k / 2) - math.lgamma(a + 1))
    if k % 2:
        return 0.0
    return float(math.prod(range(k - 1, 0, -2)))


@dataclass(frozen=True)
class CltRow:
    n: str
    moment_spec: str
    gamma_n_value: float
    mu_value: float
    gap: float


def _label(n):
    return str(n[0]) if len(set(n)) == 1 else ":".join(str(v) for v in n)


def clt_moment_check(
    params: WeinsteinParams,
    n_values: Sequence,
    moment_orders: Sequence[int],
    rule: Optional[ThetaRule] = None,
    cap: int = 1024,
    atoms_kept: int = 48,
) -> list:
    """Moments of ``gamma_n = beta_n *_w ... *_w beta_n`` against those of ``mu``.

    Each entry of ``n_values`` is a fold count, either one integer for every
    coordinate or a vector of ``d + 1`` counts.  Order 0 yields a single
    ``mass`` row; order ``k > 0`` yields one ``x{j}^{k}`` row per coordinate.

    Raises
    ------
    ResourceError
        If a marginal exceeds ``cap`` atoms after pruning.
    """
    if not len(n_values):
        raise ConfigurationError("need at least one fold count")
    rule = rule or theta_rule(params.alpha)
    rows = []
    for n in n_values:
        counts = _fold_counts(params, n)
        euclid, radial = _step_marginals(params, counts)
        marg = [euclid_fold(st, c, cap) for st, c in zip(euclid, counts[:-1])]
        marg.append(radial_fold(radial, counts[-1], rule, atoms_kept, cap))
        label = _label(counts)
        for k in moment_orders:
            if k < 0:
                raise ConfigurationError(f"moment orders must be non-negative, got {k}")
            if k == 0:
                total = float(np.prod([m.sum() for _, m in marg]))
                rows.append(CltRow(label, "mass", total, 1.0, abs(total - 1.0)))
                continue
            for j, (a, m) in enumerate(marg):
                val = float(m @ a**k)
                ref = mu_moment(params, j, k)
                rows.append(CltRow(label, f"x{j + 1}^{k}", val, ref, abs(val - ref)))
    return rows
