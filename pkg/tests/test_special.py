import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special as sp

from weinstein.errors import ConvergenceError, DomainError
from weinstein.special import (
    SeriesConfig,
    bessel_j_norm,
    ell_alpha,
    gamma_fn,
    hermite_1d,
    laguerre,
)

mpmath.mp.dps = 40


def j_oracle(alpha, z):
    z = mpmath.mpc(z)
    if z == 0:
        return 1.0 + 0j
    val = mpmath.gamma(alpha + 1) * (z / 2) ** (-alpha) * mpmath.besselj(alpha, z)
    return complex(val)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.5, 7.3, 20.0, 33.3])
def test_gamma_matches_mpmath(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


def test_gamma_vectorized():
    x = np.array([0.5, 1.0, 4.0])
    np.testing.assert_allclose(gamma_fn(x), [math.sqrt(math.pi), 1.0, 6.0], rtol=1e-15)


@pytest.mark.parametrize("alpha", [-0.25, 0.0, 0.5, 1.0, 2.5, 7.0])
@pytest.mark.parametrize("z", [0.0, 0.3, 1.7, 4.0, 7.9, 8.1, 12.5, 19.0, 2 + 3j, -5 + 1j, 6j])
def test_bessel_against_mpmath(alpha, z):
    got = bessel_j_norm(alpha, z)
    want = j_oracle(alpha, z)
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_bessel_half_order_is_sinc():
    z = np.linspace(0.01, 20, 500)
    np.testing.assert_allclose(bessel_j_norm(0.5, z) * z, np.sin(z), atol=1e-12)


def test_bessel_minus_half_limit_is_cosine():
    # alpha -> -1/2 is excluded but alpha = -0.4999 must still be close to cos
    z = np.linspace(0, 6, 50)
    np.testing.assert_allclose(bessel_j_norm(-0.4999, z), np.cos(z), atol=1e-3)


def test_bessel_real_in_real_out():
    assert np.isrealobj(bessel_j_norm(1.0, np.linspace(0, 30, 7)))
    assert np.iscomplexobj(bessel_j_norm(1.0, np.array([1 + 0j])))
    assert isinstance(bessel_j_norm(1.0, 0.5), float)


def test_bessel_continuous_across_series_radius():
    eps = 1e-9
    for alpha in (-0.25, 0.5, 3.0):
        below = bessel_j_norm(alpha, 8.0 - eps)
        above = bessel_j_norm(alpha, 8.0 + eps)
        assert abs(below - above) < 1e-9


def test_series_and_library_branch_agree():
    z = np.linspace(0.5, 8, 40) * np.exp(0.3j)
    series = bessel_j_norm(1.5, z, SeriesConfig(series_radius=10.0))
    library = bessel_j_norm(1.5, z, SeriesConfig(series_radius=0.0))
    np.testing.assert_allclose(series, library, rtol=1e-12, atol=1e-14)


def test_bessel_convergence_error_reports_last_term():
    cfg = SeriesConfig(max_terms=8, series_radius=50.0)
    with pytest.raises(ConvergenceError) as info:
        bessel_j_norm(0.5, 30.0, cfg)
    assert info.value.last_term > 0


@pytest.mark.parametrize("kwargs", [{"max_terms": 3}, {"tail_tolerance": 0.0}, {"series_radius": -1.0}])
def test_series_config_validation(kwargs):
    with pytest.raises(DomainError):
        SeriesConfig(**kwargs)


def test_bessel_rejects_small_alpha():
    with pytest.raises(DomainError):
        bessel_j_norm(-0.5, 1.0)


@given(
    alpha=st.floats(-0.45, 6.0),
    re=st.floats(-25, 25),
    im=st.floats(-6, 6),
)
def test_bessel_even(alpha, re, im):
    z = complex(re, im)
    assert bessel_j_norm(alpha, z) == bessel_j_norm(alpha, -z)


@given(alpha=st.floats(-0.45, 6.0), x=st.floats(-40, 40))
def test_bessel_bounded_on_reals(alpha, x):
    assert abs(bessel_j_norm(alpha, x)) <= 1 + 1e-12


@pytest.mark.parametrize("m", range(0, 12))
def test_hermite_matches_scipy(m):
    x = np.linspace(-6, 6, 41)
    np.testing.assert_allclose(hermite_1d(m, x), sp.eval_hermitenorm(m, x), rtol=1e-12, atol=1e-12)


def test_hermite_low_degrees():
    x = np.array([-1.5, 0.0, 2.0])
    np.testing.assert_allclose(hermite_1d(2, x), x**2 - 1)
    np.testing.assert_allclose(hermite_1d(3, x), x**3 - 3 * x)


@given(m=st.integers(1, 30), x=st.floats(-10, 10))
def test_hermite_three_term_recurrence(m, x):
    h0, h1, h2 = hermite_1d(m - 1, x), hermite_1d(m, x), hermite_1d(m + 1, x)
    scale = abs(h2) + abs(x * h1) + m * abs(h0)
    assert abs(h2 - x * h1 + m * h0) <= 1e-12 * max(scale, 1e-300)


@pytest.mark.parametrize("m", range(0, 9))
@pytest.mark.parametrize("alpha", [-0.25, 0.5, 2.5])
def test_laguerre_matches_scipy(m, alpha):
    s = np.linspace(0, 15, 31)
    np.testing.assert_allclose(laguerre(m, alpha, s), sp.eval_genlaguerre(m, alpha, s), rtol=1e-11, atol=1e-11)


def test_ell_alpha_low_degree():
    x = np.linspace(0, 3, 7)
    np.testing.assert_allclose(ell_alpha(0, 0.5, x), 1.0)
    # 2 L_1^a(x^2/2) = 2 (a + 1) - x^2
    np.testing.assert_allclose(ell_alpha(1, 0.5, x), 3.0 - x**2)


@given(m=st.integers(0, 10), alpha=st.floats(-0.45, 4.0), x=st.floats(0, 8))
def test_ell_alpha_even(m, alpha, x):
    assert ell_alpha(m, alpha, x) == ell_alpha(m, alpha, -x)


@pytest.mark.parametrize("fn", [hermite_1d, lambda m, x: laguerre(m, 0.5, x)])
def test_negative_degree_rejected(fn):
    with pytest.raises(DomainError):
        fn(-1, 0.3)
