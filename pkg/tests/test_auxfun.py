import math

import mpmath
import numpy as np
import pytest

from pascucert import auxfun
from pascucert.auxfun import AuxContext
from pascucert.errors import (ConvergenceFailure, DivergentSeries,
                              DomainError, PoleError)


def test_context_validation():
    with pytest.raises(DomainError):
        AuxContext(1.0, 2.0, sigma=1.0)
    with pytest.raises(DomainError):
        AuxContext(1.0, 2.0, xi=-0.1)
    with pytest.raises(DomainError):
        AuxContext(1.0, 2.0, epsilon=2.0 + 0j)
    AuxContext(1.0, 2.0, epsilon=complex(math.cos(1.0), math.sin(1.0)))


def test_g_and_q_at_zero():
    ctx = AuxContext(1.0, 2.0, 0.1, 0.5)
    assert auxfun.g_value(ctx, 0.0) == pytest.approx(1.0)
    # the n = 0 term of the q series is 1 regardless of parameters
    assert auxfun.q_value(ctx, 0.0) == pytest.approx(1.0)


@pytest.mark.parametrize("mu,nu", [(1.0, 1.0), (1.0, 2.0)])
@pytest.mark.parametrize("sigma", [0.0, 0.1])
def test_g_series_vs_integral(mu, nu, sigma):
    ctx = AuxContext(mu, nu, sigma)
    for t in np.arange(0.1, 0.95, 0.1):
        s = auxfun.g_value(ctx, t, method="series")
        i = auxfun.g_value(ctx, t, method="integral")
        assert abs(s - i) < 1e-8


@pytest.mark.parametrize("mu,nu", [(1.0, 1.0), (1.0, 2.0)])
@pytest.mark.parametrize("sigma", [0.0, 0.1])
def test_q_series_vs_integral(mu, nu, sigma):
    ctx = AuxContext(mu, nu, sigma)
    for t in np.arange(0.1, 0.95, 0.1):
        s = auxfun.q_value(ctx, t, method="series")
        i = auxfun.q_value(ctx, t, method="integral")
        assert abs(s - i) < 1e-8


def test_g_integral_mu_zero_branch():
    ctx = AuxContext(0.0, 3.0, 0.1)
    for t in (0.2, 0.6):
        s = auxfun.g_value(ctx, t, method="series")
        i = auxfun.g_value(ctx, t, method="integral")
        assert abs(s - i) < 1e-8


def test_combined_gq_mixes_profiles():
    ctx = AuxContext(1.0, 2.0, 0.1, 0.3)
    t = 0.4
    g = auxfun.g_value(ctx, t)
    q = auxfun.q_value(ctx, t)
    expect = (1.0 - 0.3) * g + 0.3 * (2.0 * q - 1.0)
    assert auxfun.combined_gq(ctx, t) == pytest.approx(expect, abs=1e-12)


def test_combined_gq_hypergeometric_identity():
    for xi in (0.25, 1.0):
        ctx = AuxContext(1.0, 2.0, 0.1, xi)
        for t in (0.1, 0.5, 0.9):
            a = auxfun.combined_gq(ctx, t)
            b = auxfun.combined_gq_hypergeometric(ctx, t)
            assert a == pytest.approx(b, abs=1e-10)


def test_h_sigma_values():
    ctx = AuxContext(1.0, 2.0, sigma=0.1, epsilon=1.0 + 0j)
    # A = (1 + 2 sigma - 1)/(2(1 - sigma)) = sigma/(1 - sigma)
    z = 0.3 + 0.2j
    a = 0.1 / 0.9
    expect = z * (1.0 + a * z) / (1.0 - z) ** 2
    assert auxfun.h_sigma(ctx, z) == pytest.approx(expect)


def test_h_sigma_prime_matches_difference_quotient():
    ctx = AuxContext(1.0, 2.0, sigma=0.2,
                     epsilon=complex(math.cos(0.7), math.sin(0.7)))
    z = 0.4 - 0.3j
    h = 1e-6
    fd = (auxfun.h_sigma(ctx, z + h) - auxfun.h_sigma(ctx, z - h)) / (2 * h)
    assert auxfun.h_sigma_prime(ctx, z) == pytest.approx(fd, rel=1e-8)


def test_h_sigma_pole():
    ctx = AuxContext(1.0, 2.0)
    with pytest.raises(PoleError):
        auxfun.h_sigma(ctx, 1.0 + 0j)
    with pytest.raises(PoleError):
        auxfun.h_sigma_prime(ctx, 1.0 + 1e-12j)


def test_l_integrand_vanishes_at_unit_epsilon_minus_one():
    ctx = AuxContext(1.0, 2.0, 0.1, 0.5, epsilon=1.0 + 0j)
    t = np.linspace(0.05, 0.95, 40)
    vals = auxfun.l_integrand(ctx, -1.0 + 1e-4, t)
    assert np.max(np.abs(vals)) <= 1e-3


def test_l_integrand_scalar_and_vector_agree():
    ctx = AuxContext(1.0, 2.0, 0.1, 0.5,
                     epsilon=complex(math.cos(0.3), math.sin(0.3)))
    z = 0.5 + 0.4j
    t = np.array([0.2, 0.5, 0.8])
    vec = auxfun.l_integrand(ctx, z, t)
    for i, ti in enumerate(t):
        assert vec[i] == pytest.approx(auxfun.l_integrand(ctx, z, float(ti)))


# ---------------------------------------------------------------------------
# generalized hypergeometric evaluator

def test_pfq_log_series():
    # 2F1(1, 1; 2; x) = -log(1 - x)/x
    for x in (0.3, -0.7, 0.9):
        expect = -math.log1p(-x) / x
        assert auxfun.pfq([1.0, 1.0], [2.0], x) == pytest.approx(
            expect, rel=1e-12)


def test_pfq_polynomial_termination():
    # negative integer numerator truncates: 2F1(-2, b; c; x) is quadratic
    b, c, x = 1.5, 2.5, 3.7
    expect = 1.0 + (-2.0) * b / c * x \
        + ((-2.0) * (-1.0) / 2.0) * (b * (b + 1.0)) / (c * (c + 1.0)) * x**2
    assert auxfun.pfq([-2.0, b], [c], x) == pytest.approx(expect, rel=1e-12)


def test_pfq_matches_mpmath():
    cases = [
        ([0.5, 1.2], [2.3], 0.6),
        ([0.5, 1.2, 0.7], [2.3, 1.1], -0.95),
        ([1.0, 0.5, 2.0, 1.9, 3.0], [2.0, 1.5, 0.9, 4.0], -1.0),
    ]
    for num, den, x in cases:
        expect = float(mpmath.hyper(num, den, x))
        assert auxfun.pfq(num, den, x) == pytest.approx(expect, rel=1e-9)


def test_pfq_gauss_value_at_one():
    a, b, c = 0.3, 0.4, 2.0
    expect = (math.gamma(c) * math.gamma(c - a - b)
              / (math.gamma(c - a) * math.gamma(c - b)))
    assert auxfun.pfq([a, b], [c], 1.0) == pytest.approx(expect, rel=1e-9)


def test_pfq_domain_errors():
    with pytest.raises(DomainError):
        auxfun.pfq([1.0], [-2.0], 0.5)
    with pytest.raises(DivergentSeries):
        auxfun.pfq([1.0, 1.0], [2.0], 1.5)
    with pytest.raises(DivergentSeries):
        auxfun.pfq([1.0, 1.0, 1.0], [2.0], 0.5)  # p > q + 1
    with pytest.raises(DivergentSeries):
        auxfun.pfq([1.0, 1.5], [2.0], 1.0)  # excess = -0.5 at x = 1
