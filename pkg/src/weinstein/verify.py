"""The invariant suite behind ``weinstein verify``.

Every check reports a measured value and the threshold it was held to.
Residual checks are held to ``min(stated tolerance, config.tolerance)`` so a
tighter ``--tol`` can only make the suite stricter; structural checks
(orderings, convergence rates, exact identities) keep their fixed thresholds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterator, List

import numpy as np

from . import families
from .clt import bernoulli_measure, clt_moment_check, measure_convolve
from .config import RunConfig
from .core import (
    convolve,
    forward_transform,
    inverse_transform,
    kernel_psi,
    kernel_psi_integral,
    translate,
    translate_on_grid,
)
from .hermite import (
    closed_form_norm,
    generating_coefficient,
    generating_lhs,
    generating_partial_sum,
    hermite_multi,
    mehler_eigenvalue,
    mehler_grid,
    mehler_kernel,
    multi_indices,
)
from .inequalities import HolderTriple, beckner_constant, babenko_check, sweep, young_check
from .quadrature import WeinsteinParams, build_mu_grid, build_nu_grid, integrate, lp_norm
from .special import bessel_j_norm, ell_alpha, gamma_fn, hermite_1d

__all__ = [
    "Check",
    "run_suite",
    "SWEEP_ALPHAS",
    "SWEEP_DIMS",
    "SWEEP_PS",
    "YOUNG_PAIRS",
    "BASIC_YOUNG",
    "CLT_NS",
]

SWEEP_ALPHAS = (-0.25, 0.5, 1.0, 2.5)
SWEEP_DIMS = (1, 2)
SWEEP_PS = (1.1, 1.25, 1.5, 1.75, 2.0)
# (p, q); r follows from 1/r = 1/p + 1/q - 1
YOUNG_PAIRS = (
    (1.0, 1.5),
    (1.0, 2.0),
    (1.8, 1.0),
    (4 / 3, 4 / 3),
    (1.2, 1.5),
    (1.1, 1.1),
    (1.2, 1.2),
    (1.25, 1.25),
    (1.1, 1.5),
    (1.05, 1.3),
)
BASIC_YOUNG = ((1.0, 1.0), (1.0, 2.0), (2.0, 1.0))
CLT_NS = (4, 8, 16, 32)


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    measured: float
    threshold: float
    detail: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.measured)) and self.measured <= self.threshold

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.module:<12} {self.name:<34} measured={self.measured:.3e}  threshold={self.threshold:.1e}{extra}"


class _Suite:
    def __init__(self, config: RunConfig):
        self.config = config
        self.params = config.params
        self.grid = config.nu_grid()
        self.rule = config.rule()
        self.rng = np.random.default_rng(config.seed)

    def residual(self, tol):
        return min(tol, self.config.tolerance)

    def points(self, n, scale=3.0):
        p = self.rng.uniform(-scale, scale, size=(n, self.params.dim))
        p[:, -1] = np.abs(p[:, -1])
        return p


_REGISTRY: List = []


def _check(module: str, name: str, tol: float, residual: bool = True):
    def deco(fn):
        _REGISTRY.append((module, name, tol, residual, fn))
        return fn

    return deco


# special functions


@_check("special", "bessel_half_order_sine", 1e-10)
def _bessel_sine(s):
    r = s.rng.uniform(0, 20, 1000)
    z = r * np.exp(1j * s.rng.uniform(0, 2 * np.pi, 1000))
    err = np.abs(bessel_j_norm(0.5, z) * z - np.sin(z)) / np.maximum(1, np.abs(np.sin(z)))
    return float(err.max()), "|z| <= 20, 1000 complex points"


@_check("special", "bessel_even", 0.0, residual=False)
def _bessel_even(s):
    z = s.rng.uniform(-25, 25, 500) + 1j * s.rng.uniform(-5, 5, 500)
    a = s.params.alpha
    return float(np.max(np.abs(bessel_j_norm(a, z) - bessel_j_norm(a, -z)))), "exact"


@_check("special", "gamma_reference", 1e-13)
def _gamma(s):
    x = s.rng.uniform(0.05, 30, 200)
    ref = np.array([math.gamma(v) for v in x])
    return float(np.max(np.abs(gamma_fn(x) - ref) / ref)), "against math.gamma"


@_check("special", "hermite_recurrence", 1e-12)
def _hermite_rec(s):
    x = np.linspace(-10, 10, 201)
    worst = 0.0
    for m in range(1, 30):
        h0, h1, h2 = hermite_1d(m - 1, x), hermite_1d(m, x), hermite_1d(m + 1, x)
        scale = np.abs(h2) + np.abs(x * h1) + m * np.abs(h0)
        worst = max(worst, float(np.max(np.abs(h2 - x * h1 + m * h0) / np.maximum(scale, 1e-300))))
    return worst, "m <= 30, |x| <= 10"


@_check("special", "laguerre_radial_even", 0.0, residual=False)
def _ell_even(s):
    x = s.rng.uniform(0, 6, 100)
    a = s.params.alpha
    return max(float(np.max(np.abs(ell_alpha(m, a, x) - ell_alpha(m, a, -x)))) for m in range(8)), "exact"


# quadrature


def _mu_moment_error(s, axis):
    params = s.params
    n = 48
    grid = build_mu_grid(params, n, n)
    worst = 0.0
    for k in range(n):
        if axis == "euclid":
            ref = math.prod(range(2 * k - 1, 0, -2))
            got = integrate(grid, grid.nodes[:, 0] ** (2 * k))
        else:
            ref = 2.0**k * math.prod(params.alpha + j for j in range(1, k + 1))
            got = integrate(grid, grid.nodes[:, -1] ** (2 * k))
        worst = max(worst, abs(got - ref) / ref)
    return worst, f"k <= {n - 1}"


@_check("quadrature", "mu_moments_euclidean", 1e-12)
def _mu_euclid(s):
    return _mu_moment_error(s, "euclid")


@_check("quadrature", "mu_moments_radial", 1e-12)
def _mu_radial(s):
    return _mu_moment_error(s, "radial")


@_check("quadrature", "refinement_rate", 0.1, residual=False)
def _refine(s):
    params = s.params
    f = lambda x: np.exp(-np.sum(x * x, -1) / 2) * np.cos(x[:, 0]) * (1 + x[:, -1] ** 2)
    vals = [integrate(build_nu_grid(params, s.config.radius, n, n), f) for n in (12, 24, 48, 96)]
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    rates = [b / a for a, b in zip(diffs, diffs[1:]) if a > 1e-12]
    return (max(rates) if rates else 0.0), "successive-doubling difference ratio"


@_check("quadrature", "holder", 1e-12, residual=False)
def _holder(s):
    worst = -1.0
    for p in (1.1, 1.5, 2.0, 3.0):
        q = p / (p - 1)
        f = s.rng.standard_normal(s.grid.size) + 1j * s.rng.standard_normal(s.grid.size)
        g = s.rng.standard_normal(s.grid.size)
        lhs = abs(integrate(s.grid, f * np.conj(g)))
        worst = max(worst, lhs / (lp_norm(s.grid, f, p) * lp_norm(s.grid, g, q)) - 1)
    return worst, "ratio - 1"


# transform, translation, convolution


def _poly_pairs(s):
    fam = families.polynomial_family(s.params)
    out = []
    for f in fam:
        fv = f(s.grid.nodes)
        out.append((fv, forward_transform(s.params, s.grid, fv, s.grid)))
    return out


@_check("core", "plancherel", 1e-6)
def _plancherel(s):
    worst = max(abs(lp_norm(s.grid, F, 2) / lp_norm(s.grid, f, 2) - 1) for f, F in s.transformed)
    return worst, "10 Gaussian-times-polynomial functions"


@_check("core", "parseval", 1e-6)
def _parseval(s):
    worst = 0.0
    tr = s.transformed
    for (f, F), (g, G) in zip(tr, tr[1:] + tr[:1]):
        lhs = integrate(s.grid, f * np.conj(g))
        rhs = integrate(s.grid, F * np.conj(G))
        worst = max(worst, abs(lhs - rhs) / (lp_norm(s.grid, f, 2) * lp_norm(s.grid, g, 2)))
    return worst, "adjacent pairs of the family"


@_check("core", "inversion", 1e-6)
def _inversion(s):
    tol_note = "d = 1 threshold"
    worst = 0.0
    for f, F in s.transformed:
        back = inverse_transform(s.params, s.grid, F, s.grid)
        worst = max(worst, lp_norm(s.grid, back - f, 2) / lp_norm(s.grid, f, 2))
    return worst, tol_note


@_check("core", "gaussian_self_reciprocal", 1e-8)
def _self_recip(s):
    lam = s.points(200)
    got = forward_transform(s.params, s.grid, families.gaussian(s.params), lam)
    return float(np.max(np.abs(got - np.exp(-np.sum(lam * lam, -1) / 2)))), "200 random points"


@_check("core", "kernel_bound", 1e-12)
def _kernel_bound(s):
    x, z = s.points(10_000, 6), s.points(10_000, 6)
    return float(np.max(np.abs(kernel_psi(s.params, x, z))) - 1), "max |Psi| - 1 over 1e4 pairs"


@_check("core", "kernel_series_vs_integral", 1e-10)
def _kernel_integral(s):
    x, z = s.points(100), s.points(100)
    return float(np.max(np.abs(kernel_psi(s.params, x, z) - kernel_psi_integral(s.params, x, z, s.rule)))), ""


@_check("core", "kernel_homogeneity", 1e-12)
def _homog(s):
    x, z = s.points(200), s.points(200)
    lam = s.rng.uniform(-3, 3, (200, 1))
    lx, lz = lam * x, lam * z
    # negative scalings send the radial coordinate through j_alpha's evenness
    lx[:, -1], lz[:, -1] = np.abs(lx[:, -1]), np.abs(lz[:, -1])
    return float(np.max(np.abs(kernel_psi(s.params, lx, z) - kernel_psi(s.params, x, lz)))), ""


@_check("core", "product_formula", 1e-8)
def _product(s):
    x, y, lam = s.points(100), s.points(100), s.points(100)
    f = lambda pts: kernel_psi(s.params, pts, np.broadcast_to(lam[:, None, :], (100, s.rule.order, s.params.dim)).reshape(-1, s.params.dim))
    lhs = translate(s.params, x, f, y, s.rule)
    rhs = kernel_psi(s.params, x, lam) * kernel_psi(s.params, y, lam)
    return float(np.max(np.abs(lhs - rhs))), "100 triples, coordinates <= 3"


@_check("core", "multiplier_formula", 1e-6)
def _multiplier(s):
    f = families.gaussian(s.params, 1.3)
    worst = 0.0
    lam = s.points(20, 2.5)
    Ff = forward_transform(s.params, s.grid, f, lam)
    for x in s.points(100, 3.0 if s.params.d == 1 else 2.0):
        tf = translate_on_grid(s.params, x, f, s.grid, s.rule)
        lhs = forward_transform(s.params, s.grid, tf, lam)
        worst = max(worst, float(np.max(np.abs(lhs - kernel_psi(s.params, -x, lam) * Ff))))
    return worst, "F(T_x f) = Psi(-x, .) F(f), 100 shifts"


@_check("core", "convolution_theorem", 1e-6)
def _conv_thm(s):
    p = s.params
    f = families.gaussian_hermite(p, (1,) + (0,) * p.d)
    g = families.gaussian(p, 1.4)
    conv = convolve(p, s.grid, f, g, s.grid.nodes, s.rule)
    lam = s.points(50, 2.5)
    lhs = forward_transform(p, s.grid, conv, lam)
    mirrored = lam.copy()
    mirrored[:, :-1] *= -1
    rhs = forward_transform(p, s.grid, f, lam) * forward_transform(p, s.grid, g, mirrored)
    return float(np.max(np.abs(lhs - rhs))), "F(f*g)(l) = F f(l) F g(-l', l_r)"


@_check("core", "basic_young", 1e-6)
def _basic_young(s):
    f = families.gaussian(s.params, 1.0)
    g = families.gaussian(s.params, 1.7)
    conv = convolve(s.params, s.grid, f, g, s.grid.nodes, s.rule)
    worst = -1.0
    for p, q in BASIC_YOUNG:
        rec = young_check(s.params, s.grid, f, g, HolderTriple.young(p, q), conv=conv)
        worst = max(worst, rec.basic_ratio - 1)
    return worst, "(1,1,1) (1,2,2) (2,1,2); ratio - 1"


# Hermite system


def _gram(s):
    params = s.params
    grid = build_mu_grid(params, 16, 16)
    idx = list(multi_indices(params.dim, 4))
    H = np.array([hermite_multi(params, m, grid.nodes) for m in idx])
    G = (H * grid.weights) @ H.T
    return idx, G


@_check("hermite", "gram_off_diagonal", 1e-10)
def _gram_off(s):
    _, G = _gram(s)
    scale = np.sqrt(np.outer(np.diag(G), np.diag(G)))
    off = np.abs(G - np.diag(np.diag(G))) / scale
    return float(off.max()), "|m| <= 4"


@_check("hermite", "gram_diagonal_closed_form", 1e-10)
def _gram_diag(s):
    idx, G = _gram(s)
    ref = np.array([closed_form_norm(s.params, m) for m in idx])
    return float(np.max(np.abs(np.diag(G) - ref) / ref)), "|m| <= 4"


@_check("hermite", "generating_partial_sum", 1e-6)
def _gen_sum(s):
    params = s.params
    x = s.points(40, 2.0)
    t = s.rng.standard_normal((40, params.dim))
    t *= s.rng.uniform(0, 0.5, (40, 1)) / np.linalg.norm(t, axis=1, keepdims=True)
    t[:, -1] = np.abs(t[:, -1])
    lhs = generating_lhs(params, x, t)
    rhs = generating_partial_sum(params, x, t, 12)
    return float(np.max(np.abs(lhs - rhs))), "|t| <= 0.5, degree 12"


@_check("hermite", "generating_projection", 1e-8)
def _gen_proj(s):
    params = s.params
    grid = build_mu_grid(params, 40, 40)
    t = np.full(params.dim, 0.4)
    G = generating_lhs(params, grid.nodes, t)
    worst = 0.0
    for m in multi_indices(params.dim, 3):
        proj = np.sum(grid.weights * G * hermite_multi(params, m, grid.nodes)) / closed_form_norm(params, m)
        mono = t[-1] ** (2 * m.radial) * np.prod(t[:-1] ** np.array(m.euclid))
        ref = generating_coefficient(params, m) * mono
        worst = max(worst, abs(proj - ref) / abs(ref))
    return worst, "|m| <= 3, t = 0.4"


def _mehler_error(params, w, degree, y, order=40):
    grid = mehler_grid(params, w, order, order)
    K = mehler_kernel(params, w, grid.nodes[:, None, :], y[None, :, :])
    worst = 0.0
    for n in multi_indices(params.dim, degree):
        h = hermite_multi(params, n, grid.nodes)
        got = (grid.weights * h) @ K
        ref = mehler_eigenvalue(params, w, n) * hermite_multi(params, n, y)
        worst = max(worst, float(np.max(np.abs(got - ref)) / np.max(np.abs(ref))))
    return worst


def _mehler_points(s):
    y = s.points(8, 1.5)
    y[0, :] = 0.3
    return y


@_check("hermite", "mehler_real_w", 1e-8)
def _mehler_real(s):
    y = _mehler_points(s)
    return max(_mehler_error(s.params, w, 6, y) for w in (0.3, 0.7)), "w in {0.3, 0.7}, |n| <= 6"


@_check("hermite", "mehler_babenko_w", 1e-6)
def _mehler_complex(s):
    y = _mehler_points(s)
    return _mehler_error(s.params, 1j * math.sqrt(0.5), 4, y), "w = i sqrt(p - 1), p = 1.5, |n| <= 4"


@_check("hermite", "mehler_semigroup", 1e-7)
def _semigroup(s):
    params = s.params
    w1, w2 = 0.5, 0.6
    order = 32 if params.d == 1 else 16
    y = _mehler_points(s)
    inner = mehler_grid(params, w1, order, order)
    outer = mehler_grid(params, w2, order, order)
    g12 = mehler_grid(params, w1 * w2, order, order)
    basis = list(multi_indices(params.dim, 3))
    H = np.array([inner.weights * hermite_multi(params, n, inner.nodes) for n in basis])
    # K_w1 applied to every basis element at the outer nodes, in row blocks
    step = np.empty((len(basis), outer.size), dtype=complex)
    rows = max(1, 4_000_000 // inner.size)
    for lo in range(0, outer.size, rows):
        K1 = mehler_kernel(params, w1, inner.nodes[:, None, :], outer.nodes[None, lo : lo + rows, :])
        step[:, lo : lo + rows] = H @ K1
    twice = (step * outer.weights) @ mehler_kernel(params, w2, outer.nodes[:, None, :], y[None, :, :])
    H12 = np.array([g12.weights * hermite_multi(params, n, g12.nodes) for n in basis])
    once = H12 @ mehler_kernel(params, w1 * w2, g12.nodes[:, None, :], y[None, :, :])
    err = np.max(np.abs(twice - once), axis=1) / np.max(np.abs(once), axis=1)
    return float(err.max()), "K_0.6 K_0.5 = K_0.3, |n| <= 3"


# inequalities


@_check("inequality", "beckner_constant_4_3", 1e-5, residual=False)
def _beckner(s):
    return abs(beckner_constant(4 / 3) - 0.87738), "A_4/3 vs 0.87738"


@_check("inequality", "sharp_constant_below_one", 0.0, residual=False)
def _below_one(s):
    ps = np.linspace(1.001, 2, 400)
    worst = max(beckner_constant(p) ** (a + d / 2 + 1) - 1 for p in ps for a in SWEEP_ALPHAS for d in SWEEP_DIMS)
    return worst, "max A_p^(alpha+d/2+1) - 1"


@_check("inequality", "babenko_sweep", 1e-5)
def _babenko_sweep(s):
    worst, count = -1.0, 0
    for a in SWEEP_ALPHAS:
        for d in SWEEP_DIMS:
            params = WeinsteinParams(a, d)
            grid = build_nu_grid(params, s.config.radius, s.config.order_euclid, s.config.order_radial)
            for fam in ("GAUSSIAN", "HERMITE", "RANDOM"):
                rows = sweep(params, SWEEP_PS, fam, s.config.seed, grid=grid)
                count += len(rows)
                worst = max(worst, max(r.ratio for r in rows) - 1)
    return worst, f"{count} cases; max ratio - 1"


@_check("inequality", "babenko_p2_equality", 2e-6)
def _babenko_p2(s):
    worst = 0.0
    for f, F in s.transformed:
        worst = max(worst, abs(babenko_check(s.params, s.grid, f, 2.0, transform=F).ratio - 1))
    return worst, "|ratio - 1| at p = 2"


def _young_records(s):
    if not hasattr(s, "_young"):
        f = families.gaussian(s.params)
        conv = convolve(s.params, s.grid, f, f, s.grid.nodes, s.rule)
        s._young = [young_check(s.params, s.grid, f, f, HolderTriple.young(p, q), conv=conv) for p, q in YOUNG_PAIRS]
    return s._young


@_check("inequality", "young_stated_constant", 1e-5)
def _young_stated(s):
    recs = _young_records(s)
    bad = sum(r.ratio > 1 + 1e-5 for r in recs)
    return max(r.ratio for r in recs) - 1, f"{bad} of {len(recs)} triples above the bound"


@_check("inequality", "young_gaussian_constant", 1e-5)
def _young_gauss(s):
    return max(r.gaussian_ratio for r in _young_records(s)) - 1, "(A_p A_q / A_r)^(alpha+d/2+1)"


@_check("inequality", "young_basic_same_cases", 1e-5)
def _young_basic(s):
    return max(r.basic_ratio for r in _young_records(s)) - 1, "constant 1"


# measure convolution and central limit demo


@_check("clt", "measure_convolve_mass", 1e-12)
def _mc_mass(s):
    b1, b2 = bernoulli_measure(s.params, 1), bernoulli_measure(s.params, 3)
    one = lambda pts: np.ones(len(pts))
    return abs(measure_convolve(s.params, b1, b2, one, s.rule) - 1), ""


@_check("clt", "measure_convolve_symmetry", 1e-10)
def _mc_sym(s):
    b1, b2 = bernoulli_measure(s.params, 1), bernoulli_measure(s.params, 2)
    f = families.gaussian_hermite(s.params, (1,) * s.params.dim)
    return abs(measure_convolve(s.params, b1, b2, f, s.rule) - measure_convolve(s.params, b2, b1, f, s.rule)), ""


def _clt_rows(s):
    if not hasattr(s, "_clt"):
        s._clt = clt_moment_check(s.params, CLT_NS, [0, 1, 2, 3, 4], s.rule)
    return s._clt


@_check("clt", "second_moments", 1e-10)
def _clt_second(s):
    rows = [r for r in _clt_rows(s) if r.moment_spec.endswith("^2") or r.moment_spec == "mass"]
    return max(r.gap for r in rows), "mass and x_j^2 for all n"


@_check("clt", "gaps_non_increasing", 0.0, residual=False)
def _clt_monotone(s):
    by_spec = {}
    for r in _clt_rows(s):
        by_spec.setdefault(r.moment_spec, []).append(r.gap)
    excess = [b - (1.1 * a + 1e-12) for gaps in by_spec.values() for a, b in zip(gaps, gaps[1:])]
    return max(excess), "worst excess over 1.1 x previous gap, n = 4, 8, 16, 32"


def run_suite(config: RunConfig, progress: Callable[[Check], None] = None) -> List[Check]:
    """Run every registered check in order; ``progress`` sees each result as it lands."""
    s = _Suite(config)
    s.transformed = _poly_pairs(s)
    results = []
    for module, name, tol, residual, fn in _REGISTRY:
        t0 = time.perf_counter()
        measured, detail = fn(s)
        thr = s.residual(tol) if residual else tol
        if name == "inversion" and config.d > 1:
            thr = s.residual(1e-5)
        chk = Check(name, module, float(measured), thr, detail, time.perf_counter() - t0)
        results.append(chk)
        if progress:
            progress(chk)
    return results


def iter_names() -> Iterator[str]:
    return (name for _, name, *_ in _REGISTRY)
