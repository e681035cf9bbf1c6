import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from tubebeta.errors import BranchError, DomainError, ParameterError, PoleError
from tubebeta.special import (
    BiExponent,
    aux_closed_form,
    beta_1d,
    cauchy_beta_inner,
    gamma,
    log_gamma,
    power_pair,
)

from conftest import random_away_from_poles

finite = st.floats(-5, 5, allow_nan=False)
complexes = st.builds(complex, finite, finite)
right_half = st.builds(complex, st.floats(0.05, 20), st.floats(-20, 20))


# ------------------------------------------------------------------ power_pair


@pytest.mark.parametrize(
    "a, e, expected",
    [
        (1.0, (3 + 2j, -1), 1.0),
        (2.0, (1, 2), 8.0),
        (1 + 1j, (0, 1), 1 - 1j),
    ],
)
def test_power_pair_examples(a, e, expected):
    assert power_pair(a, e) == pytest.approx(expected, rel=1e-15, abs=1e-15)


def test_power_pair_accepts_biexponent():
    assert power_pair(2.0, BiExponent(1, 2)) == pytest.approx(8.0)


def test_power_pair_rejects_zero_and_left_half_plane():
    with pytest.raises(DomainError):
        power_pair(0.0, (1, 1))
    with pytest.raises(BranchError):
        power_pair(-1 + 0.1j, (1, 1))
    with pytest.raises(BranchError):
        power_pair(0.0 + 2j, (1, 0))


@settings(max_examples=200, deadline=None)
@given(right_half, complexes, complexes, complexes, complexes)
def test_power_pair_multiplicative_in_exponent(a, l1, m1, l2, m2):
    lhs = power_pair(a, (l1, m1)) * power_pair(a, (l2, m2))
    rhs = power_pair(a, (l1 + l2, m1 + m2))
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


@settings(max_examples=200, deadline=None)
@given(right_half, complexes, complexes)
def test_power_pair_conjugation(a, lam, mu):
    lhs = power_pair(a, (lam, mu)).conjugate()
    rhs = power_pair(a, BiExponent(lam, mu).conj_swap())
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_power_pair_holomorphic_cauchy_riemann(rng):
    h = 1e-6
    for _ in range(50):
        a = complex(rng.uniform(0.2, 5), rng.uniform(-5, 5))
        lam = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        f = lambda z: power_pair(z, (lam, 0))
        d_dx = (f(a + h) - f(a - h)) / (2 * h)
        d_dy = (f(a + 1j * h) - f(a - 1j * h)) / (2 * h)
        # f holomorphic  <=>  df/dy = i df/dx
        assert abs(d_dy - 1j * d_dx) <= 1e-6 * max(1.0, abs(d_dx))


def test_power_pair_real_base_sums_exponents():
    assert power_pair(3.0, (0.5 + 1j, 1.5 - 1j)) == pytest.approx(9.0, rel=1e-14)


# ------------------------------------------------------------------- log_gamma


def test_log_gamma_integer_and_half_integer():
    assert log_gamma(5) == pytest.approx(math.log(24), rel=1e-14)
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-13)


@pytest.mark.parametrize(
    "z", [2 + 3j, 0.1 + 0.1j, -2.5 + 0.1j, -49.3 + 2j, 30 - 40j, 0.001j, 1e-8 + 0j, -7.5 - 3j, 45.0, 3 - 49j]
)
def test_log_gamma_against_mpmath(z):
    mpmath.mp.dps = 30
    expected = complex(mpmath.loggamma(mpmath.mpc(z)))
    assert abs(log_gamma(z) - expected) <= 1e-12 * max(1.0, abs(expected))


def test_log_gamma_grid_against_mpmath(rng):
    mpmath.mp.dps = 30
    pts = random_away_from_poles(rng, 200, radius=50.0)
    got = log_gamma(pts)
    for z, g in zip(pts, got):
        expected = complex(mpmath.loggamma(mpmath.mpc(z)))
        assert abs(g - expected) <= 1e-12 * max(1.0, abs(expected))


def test_log_gamma_is_real_on_positive_axis():
    vals = log_gamma(np.linspace(0.1, 40, 50))
    assert np.all(vals.imag == 0)


@pytest.mark.parametrize("pole", [0, -1, -2, -17])
def test_log_gamma_pole(pole):
    with pytest.raises(PoleError) as info:
        log_gamma(pole)
    assert info.value.location == pole


def test_gamma_recurrence(rng):
    z = random_away_from_poles(rng, 1000)
    lhs = np.exp(log_gamma(z + 1))
    rhs = z * np.exp(log_gamma(z))
    assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) <= 1e-10


def test_gamma_reflection(rng):
    z = random_away_from_poles(rng, 1000)
    val = np.exp(log_gamma(z) + log_gamma(1 - z)) * np.sin(np.pi * z) / np.pi
    assert np.max(np.abs(val - 1)) <= 1e-10


# ---------------------------------------------------------------------- beta_1d


@pytest.mark.parametrize("a, b, expected", [(1, 1, 1.0), (2, 3, 1 / 12), (0.5, 0.5, math.pi)])
def test_beta_1d_examples(a, b, expected):
    assert beta_1d(a, b) == pytest.approx(expected, rel=1e-13)


def test_beta_1d_pole():
    with pytest.raises(PoleError):
        beta_1d(-1, 0.5)


# -------------------------------------------------------------- aux closed form


def _aux_oracle(alpha, beta, gamma_):
    """Independent 2D oracle for real arguments: QUADPACK's infinite-interval rule."""

    def inner(x, part):
        def f(y):
            v = (1 + x + 1j * y) ** (-beta) * (1 + x - 1j * y) ** (-gamma_)
            return (v.real, v.imag)[part]

        return integrate.quad(f, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12)[0]

    re = integrate.quad(lambda x: x ** (alpha - 1) * inner(x, 0), 0, np.inf, epsabs=1e-12, epsrel=1e-11)[0]
    return re


@pytest.mark.parametrize(
    "args, expected",
    [
        ((2, 3, 2), math.pi / 16),
        ((1, 2, 1), math.pi / 2),
        ((1, 3, 3), 3 * math.pi / 32),
    ],
)
def test_aux_closed_form_examples(args, expected):
    val = aux_closed_form(*args)
    assert val == pytest.approx(expected, rel=1e-13)
    assert _aux_oracle(*args) == pytest.approx(expected, rel=1e-8)


def test_aux_closed_form_region():
    with pytest.raises(ParameterError) as info:
        aux_closed_form(1, 1, 1)
    assert "Re(beta+gamma-alpha-1) > 0" in info.value.violated
    with pytest.raises(ParameterError) as info:
        aux_closed_form(-0.5, 3, 3)
    assert "Re(alpha) > 0" in info.value.violated


def test_aux_closed_form_conjugation_symmetry(rng):
    for _ in range(100):
        alpha = complex(rng.uniform(0.1, 4), rng.uniform(-3, 3))
        beta = complex(rng.uniform(0.5, 5), rng.uniform(-3, 3))
        gamma_ = complex(alpha.real + 1.2 - beta.real + rng.uniform(0, 3), rng.uniform(-3, 3))
        lhs = aux_closed_form(alpha, beta, gamma_)
        rhs = aux_closed_form(alpha.conjugate(), gamma_.conjugate(), beta.conjugate()).conjugate()
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


# ------------------------------------------------------------ Cauchy beta inner


def _cauchy_oracle(a, beta, gamma_):
    f = lambda w, part: ((a + 1j * w) ** (-beta) * (a - 1j * w) ** (-gamma_)).__getattribute__(part)
    re = integrate.quad(f, -np.inf, np.inf, args=("real",), epsabs=1e-13, epsrel=1e-12)[0]
    im = integrate.quad(f, -np.inf, np.inf, args=("imag",), epsabs=1e-11, epsrel=1e-10)[0]
    return complex(re, im)


@pytest.mark.parametrize(
    "a, beta, gamma_, expected",
    [(1, 1, 1, math.pi), (2, 1, 1, math.pi / 2), (1, 2, 2, math.pi / 2)],
)
def test_cauchy_beta_inner_examples(a, beta, gamma_, expected):
    assert cauchy_beta_inner(a, beta, gamma_) == pytest.approx(expected, rel=1e-13)
    assert _cauchy_oracle(a, beta, gamma_) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("a, beta, gamma_", [(0.7, 1.3 + 0.4j, 2.1 - 0.2j), (3.0, 0.8, 0.9 + 1j)])
def test_cauchy_beta_inner_complex(a, beta, gamma_):
    assert abs(cauchy_beta_inner(a, beta, gamma_) - _cauchy_oracle(a, beta, gamma_)) < 1e-9


def test_cauchy_beta_inner_errors():
    with pytest.raises(ParameterError):
        cauchy_beta_inner(1.0, 0.5, 0.5)
    with pytest.raises(DomainError):
        cauchy_beta_inner(-1.0, 2, 2)
