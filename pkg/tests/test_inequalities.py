import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weinstein import families
from weinstein.core import convolve, theta_rule
from weinstein.errors import DegenerateInputError, DomainError
from weinstein.inequalities import (
    HolderTriple,
    babenko_check,
    beckner_constant,
    sweep,
    young_check,
    young_constant,
    young_gaussian_constant,
)
from weinstein.quadrature import WeinsteinParams, build_nu_grid


def test_beckner_constant_values():
    assert beckner_constant(2) == 1.0
    want = mpmath.mpf(4) / 3
    want = want ** (1 / want) / mpmath.mpf(4) ** mpmath.mpf(0.25)
    assert beckner_constant(4 / 3) == pytest.approx(float(want), rel=1e-14)
    assert beckner_constant(4 / 3) == pytest.approx(0.87738, abs=1e-5)


@pytest.mark.parametrize("p", [1.0, 0.5, 2.01, 3.0])
def test_beckner_constant_domain(p):
    with pytest.raises(DomainError):
        beckner_constant(p)


@given(p=st.floats(1.0001, 2.0))
def test_beckner_constant_below_one(p):
    assert beckner_constant(p) <= 1.0


def test_beckner_constant_tends_to_one_at_endpoint():
    ps = 1 + np.logspace(-1, -7, 7)
    vals = [beckner_constant(p) for p in ps]
    assert np.all(np.diff(vals) > 0)
    assert vals[-1] == pytest.approx(1.0, abs=1e-5)


def test_holder_triple_construction():
    t = HolderTriple.conjugate(1.5)
    assert t.q == pytest.approx(3.0) and t.p1 == pytest.approx(3.0)
    y = HolderTriple.young(1.2, 1.5)
    assert 1 / y.r == pytest.approx(1 / 1.2 + 1 / 1.5 - 1)
    assert y.r1 == pytest.approx(y.r / (y.r - 1))
    assert HolderTriple.young(1.0, 2.0).p1 == math.inf


@pytest.mark.parametrize(
    "args",
    [(1.5, 2.0), (2.5, 5 / 3), (1.5, 1.5, 3.0), (0.9, 1.0, 1.0), (1.2, 1.2, 1.6)],
)
def test_holder_triple_rejects(args):
    with pytest.raises(DomainError):
        HolderTriple(*args)


def test_holder_young_rejects_invalid_sum():
    with pytest.raises(DomainError):
        HolderTriple.young(2.0, 2.0)
    with pytest.raises(DomainError):
        HolderTriple.young(1.5, 1.5)


def test_young_constants_agree_at_r_two():
    t = HolderTriple.young(4 / 3, 4 / 3)
    assert young_constant(t, 2.5) == pytest.approx(young_gaussian_constant(t, 2.5))


def test_babenko_plancherel_case(params, nu_grid):
    for f in families.polynomial_family(params):
        assert babenko_check(params, nu_grid, f, 2.0).ratio == pytest.approx(1.0, abs=2e-6)


@pytest.mark.parametrize("width", [0.75, 1.0, 1.5])
@pytest.mark.parametrize("p", [1.25, 1.5, 1.75])
def test_gaussians_attain_the_bound(params, nu_grid, width, p):
    rec = babenko_check(params, nu_grid, families.gaussian(params, width), p)
    assert rec.ratio == pytest.approx(1.0, abs=1e-6)


def test_gaussian_near_endpoint_needs_resolution(params):
    # the ratio is exact for Gaussians, so deviations measure quadrature error only
    coarse = babenko_check(params, build_nu_grid(params), families.gaussian(params, 0.75), 1.1)
    fine = babenko_check(params, build_nu_grid(params, 8.0, 96, 64), families.gaussian(params, 0.75), 1.1)
    assert coarse.ratio <= 1 + 1e-5
    assert fine.ratio == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("m", [(2, 0), (1, 1), (0, 2)])
def test_hermite_functions_strictly_inside(params, nu_grid, m):
    rec = babenko_check(params, nu_grid, families.gaussian_hermite(params, m), 1.5)
    assert rec.ratio < 1 - 1e-3
    assert rec.lhs == pytest.approx(rec.ratio * rec.rhs)


def test_babenko_rejects_zero_function(params, nu_grid):
    with pytest.raises(DegenerateInputError):
        babenko_check(params, nu_grid, np.zeros(nu_grid.size), 1.5)


def test_babenko_rejects_bad_p(params, nu_grid):
    with pytest.raises(DomainError):
        babenko_check(params, nu_grid, families.gaussian(params), 2.5)


@pytest.fixture(scope="module")
def gauss_conv():
    params = WeinsteinParams(0.5, 1)
    grid = build_nu_grid(params)
    f = families.gaussian(params)
    return params, grid, f, convolve(params, grid, f, f, grid.nodes, theta_rule(0.5))


@pytest.mark.parametrize("p, q", [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (4 / 3, 4 / 3), (1.2, 1.2), (1.1, 1.5)])
def test_young_basic_and_gaussian_bounds(gauss_conv, p, q):
    params, grid, f, conv = gauss_conv
    rec = young_check(params, grid, f, f, HolderTriple.young(p, q), conv=conv)
    assert rec.basic_ratio <= 1 + 1e-6
    assert rec.gaussian_ratio <= 1 + 1e-6
    assert rec.ratio * rec.rhs == pytest.approx(rec.lhs)


def test_equal_gaussians_attain_gaussian_constant(gauss_conv):
    params, grid, f, conv = gauss_conv
    rec = young_check(params, grid, f, f, HolderTriple.young(1.2, 1.2), conv=conv)
    assert rec.gaussian_ratio == pytest.approx(1.0, abs=1e-8)
    # ratio to the stated constant is (A_p A_q / A_r)^N / (A_p A_q A_r)^N = A_r^(-2N)
    assert rec.ratio == pytest.approx(beckner_constant(1.5) ** (-2 * params.exponent), rel=1e-8)


def test_young_zero_function(gauss_conv):
    params, grid, f, _ = gauss_conv
    zero = np.zeros(grid.size)
    rec = young_check(params, grid, zero, f, HolderTriple.young(1.2, 1.5), conv=np.zeros(grid.size))
    assert rec.lhs == 0 and rec.ratio == 0


def test_young_requires_r(gauss_conv):
    params, grid, f, conv = gauss_conv
    with pytest.raises(DomainError):
        young_check(params, grid, f, f, HolderTriple.conjugate(1.5), conv=conv)


def test_young_computes_convolution_when_missing(gauss_conv):
    params, grid, f, conv = gauss_conv
    a = young_check(params, grid, f, f, HolderTriple.young(1.2, 1.5))
    b = young_check(params, grid, f, f, HolderTriple.young(1.2, 1.5), conv=conv)
    assert a.lhs == pytest.approx(b.lhs, rel=1e-12)


@pytest.mark.parametrize("family", ["GAUSSIAN", "HERMITE", "RANDOM"])
def test_sweep_bound_and_layout(params, nu_grid, family):
    ps = [1.25, 2.0, 1.5]
    rows = sweep(params, ps, family, seed=7, grid=nu_grid, n_functions=5)
    assert len(rows) == 15
    keys = [(r.p, r.seed) for r in rows]
    assert keys == sorted(keys)
    assert {r.seed for r in rows} == set(range(7, 12))
    for r in rows:
        assert r.ratio <= 1 + 1e-5
        assert r.q == pytest.approx(r.p / (r.p - 1))
        assert r.bound_constant == pytest.approx(beckner_constant(r.p) ** params.exponent)
        assert r.family == family
    assert all(abs(r.ratio - 1) <= 2e-6 for r in rows if r.p == 2.0)


def test_sweep_deterministic_and_thread_invariant(params, nu_grid, monkeypatch):
    a = sweep(params, [1.3, 1.7], "RANDOM", seed=3, grid=nu_grid, n_functions=6)
    monkeypatch.setenv("WEINSTEIN_THREADS", "4")
    b = sweep(params, [1.3, 1.7], "RANDOM", seed=3, grid=nu_grid, n_functions=6)
    assert a == b
    c = sweep(params, [1.3, 1.7], "RANDOM", seed=4, grid=nu_grid, n_functions=6)
    assert [r.lhs for r in a] != [r.lhs for r in c]


def test_sweep_bound_column_continuous_near_one(params, nu_grid):
    ps = list(1 + np.logspace(-1, -5, 5))
    rows = sweep(params, ps, "GAUSSIAN", grid=nu_grid, n_functions=1)
    bounds = [r.bound_constant for r in rows]
    assert np.all(np.diff(bounds) < 0)
    # rows are ordered by p, so bounds[0] sits closest to the endpoint
    assert 0.999 < bounds[0] < 1.0


def test_sweep_rejects_bad_input(params, nu_grid):
    with pytest.raises(DomainError):
        sweep(params, [0.9], "GAUSSIAN", grid=nu_grid)
    with pytest.raises(DomainError):
        sweep(params, [1.5], "UNIFORM", grid=nu_grid)
