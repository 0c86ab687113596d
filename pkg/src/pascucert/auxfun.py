"""Analytic machinery for the duality criterion.

The two auxiliary profiles g and q solve first-order initial value
problems on (0, 1); both have an alternating power series and an
equivalent smooth double-integral form.  The series is the fast primary
route (with binomial tail averaging near t = 1) and the integral is the
independent oracle and fallback.  h_sigma is the rational test kernel of
starlikeness of order sigma, carrying a free unimodular parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import (ConvergenceFailure, DivergentSeries, DomainError,
                     PoleError)
from .quadrature import averaged_partial_sum

_SERIES_T_MAX = 0.99
_SERIES_TERMS = 3000


@dataclass(frozen=True)
class AuxContext:
    """Scalar configuration shared by all auxiliary evaluations."""

    mu: float
    nu: float
    sigma: float = 0.0
    xi: float = 0.0
    epsilon: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.mu < 0 or self.nu < 0:
            raise DomainError("mu, nu must be nonnegative")
        if not 0.0 <= self.sigma < 1.0:
            raise DomainError("sigma must lie in [0, 1)")
        if not 0.0 <= self.xi <= 1.0:
            raise DomainError("xi must lie in [0, 1]")
        if abs(abs(complex(self.epsilon)) - 1.0) > 1e-12:
            raise DomainError("epsilon must be unimodular")


def _series_sum(ctx: AuxContext, t: float, weight) -> float:
    """sum_n weight(n) * (-t)**n / ((1-sigma)(1+n mu)(1+n nu))."""
    n = np.arange(_SERIES_TERMS, dtype=float)
    coef = weight(n) / ((1.0 - ctx.sigma)
                        * (1.0 + n * ctx.mu) * (1.0 + n * ctx.nu))
    terms = coef * (-t) ** n
    return float(averaged_partial_sum(terms))


def g_value(ctx: AuxContext, t: float, method: str = "auto") -> float:
    """The starlike profile g(t); g(0) = 1 and g decreases through 0."""
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")
    if method == "series" or (method == "auto" and t <= _SERIES_T_MAX):
        s = _series_sum(ctx, t, lambda n: n + 1.0 - ctx.sigma)
        return 2.0 * s - 1.0
    if method in ("integral", "auto"):
        return g_integral(ctx, t)
    raise DomainError(f"unknown method {method!r}")


def q_value(ctx: AuxContext, t: float, method: str = "auto") -> float:
    """The convex profile q(t); the series gives q(0) = 1."""
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")
    if method == "series" or (method == "auto" and t <= _SERIES_T_MAX):
        return _series_sum(ctx, t, lambda n: (n + 1.0) * (n + 1.0 - ctx.sigma))
    if method in ("integral", "auto"):
        return q_integral(ctx, t)
    raise DomainError(f"unknown method {method!r}")


def _rational_g(x, sigma):
    return (1.0 - sigma * (1.0 + x)) / ((1.0 - sigma) * (1.0 + x) ** 2)


def _rational_q(x, sigma):
    return (1.0 - sigma - (1.0 + sigma) * x) / ((1.0 - sigma) * (1.0 + x) ** 3)


def _double_integral(ctx: AuxContext, t: float, rat) -> float:
    """Smooth form of the double integral after s = u**mu, w = v**nu."""
    mu, nu, sg = ctx.mu, ctx.nu, ctx.sigma
    if mu > 0 and nu > 0:
        val, err = integrate.dblquad(
            lambda v, u: rat(u**mu * v**nu * t, sg),
            0.0, 1.0, 0.0, 1.0, epsabs=1e-11, epsrel=1e-11)
    else:
        alpha = nu if nu > 0 else mu
        if alpha <= 0:
            raise DomainError("need mu > 0 or nu > 0 for the integral form")
        val, err = integrate.quad(
            lambda u: rat(t * u**alpha, sg), 0.0, 1.0,
            epsabs=1e-12, epsrel=1e-12, limit=200)
    if err > 1e-8:
        raise ConvergenceFailure(f"integral form error estimate {err:g}")
    return val


def g_integral(ctx: AuxContext, t: float) -> float:
    return 2.0 * _double_integral(ctx, t, _rational_g) - 1.0


def q_integral(ctx: AuxContext, t: float) -> float:
    return _double_integral(ctx, t, _rational_q)


def combined_gq(ctx: AuxContext, t: float) -> float:
    """(1-xi) g(t) + xi (2 q(t) - 1), summed as a single alternating series."""
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")
    xi = ctx.xi
    s = _series_sum(
        ctx, t,
        lambda n: (1.0 + xi * n) * (n + 1.0 - ctx.sigma))
    return 2.0 * s - 1.0


def combined_gq_hypergeometric(ctx: AuxContext, t: float) -> float:
    """The same combination through its 5F4 closed form; needs xi > 0."""
    if ctx.xi <= 0.0:
        raise DomainError("the 5F4 form requires xi > 0")
    if ctx.mu <= 0 or ctx.nu <= 0:
        raise DomainError("the 5F4 form requires mu, nu > 0")
    inv_xi = 1.0 / ctx.xi
    num = [1.0, 1.0 / ctx.mu, 1.0 / ctx.nu, 2.0 - ctx.sigma, 1.0 + inv_xi]
    den = [1.0 + 1.0 / ctx.mu, 1.0 + 1.0 / ctx.nu, 1.0 - ctx.sigma, inv_xi]
    return 2.0 * pfq(num, den, -t) - 1.0


def _epsilon_slope(ctx: AuxContext) -> complex:
    return (complex(ctx.epsilon) + 2.0 * ctx.sigma - 1.0) / (2.0 * (1.0 - ctx.sigma))


def h_sigma(ctx: AuxContext, z: complex) -> complex:
    """z (1 + A z) / (1 - z)^2 with A = (epsilon + 2 sigma - 1) / (2(1 - sigma))."""
    z = complex(z)
    if abs(1.0 - z) < 1e-9:
        raise PoleError("h_sigma has a second-order pole at z = 1")
    a = _epsilon_slope(ctx)
    return z * (1.0 + a * z) / (1.0 - z) ** 2


def h_sigma_prime(ctx: AuxContext, z: complex) -> complex:
    """Derivative of h_sigma: (1 + (1 + 2A) z) / (1 - z)^3."""
    z = complex(z)
    if abs(1.0 - z) < 1e-9:
        raise PoleError("h_sigma' has a third-order pole at z = 1")
    a = _epsilon_slope(ctx)
    return (1.0 + (1.0 + 2.0 * a) * z) / (1.0 - z) ** 3


def l_integrand(ctx: AuxContext, z: complex, t) -> float:
    """The real-valued duality integrand at disk point z and weight point t.

    Vanishes identically in t when epsilon = 1 and z -> -1, which is the
    direction where the sharp bound is attained.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr <= 0.0) | (t_arr >= 1.0)):
        raise DomainError("t must lie in (0, 1)")
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("|z| must be < 1")
    a = _epsilon_slope(ctx)
    w = t_arr * z
    if np.any(np.abs(1.0 - w) < 1e-9):
        raise PoleError("tz too close to the pole at 1")
    sg, xi = ctx.sigma, ctx.xi
    star = ((1.0 + a * w) / (1.0 - w) ** 2).real - _rational_g(t_arr, sg)
    conv = ((1.0 + (1.0 + 2.0 * a) * w) / (1.0 - w) ** 3).real \
        - _rational_q(t_arr, sg)
    out = (1.0 - xi) * star + xi * conv
    return float(out) if np.isscalar(t) else out


def _is_nonpositive_int(x: float) -> bool:
    return x <= 1e-9 and abs(x - round(x)) < 1e-9


def pfq(numerator, denominator, x: float, max_terms: int = 50000) -> float:
    """Generalized hypergeometric sum pFq at a real argument in [-1, 1].

    Terminating (polynomial) cases are summed exactly.  At x = -1 the
    alternating tail is averaged; convergence there requires the parameter
    excess to exceed -1.
    """
    num = [float(a) for a in numerator]
    den = [float(b) for b in denominator]
    for b in den:
        if _is_nonpositive_int(b):
            raise DomainError(f"denominator parameter {b} is a nonpositive integer")
    poly_k = None
    for a in num:
        if _is_nonpositive_int(a):
            k = int(-round(a))
            poly_k = k if poly_k is None else min(poly_k, k)
    p, q = len(num), len(den)
    if poly_k is None:
        if p > q + 1:
            raise DivergentSeries(f"{p}F{q} diverges for x != 0")
        if p == q + 1:
            if abs(x) > 1.0:
                raise DivergentSeries(f"|x| = {abs(x)} > 1 for {p}F{q}")
            if abs(x) == 1.0:
                excess = sum(den) - sum(num)
                if x > 0 and excess <= 0:
                    raise DivergentSeries(
                        f"parameter excess {excess:g} <= 0 at x = 1")
                if x < 0 and excess <= -1:
                    raise DivergentSeries(
                        f"parameter excess {excess:g} <= -1 at x = -1")

    term = 1.0
    total = 0.0
    ring = []
    k_stop = poly_k if poly_k is not None else max_terms
    for k in range(k_stop + 1):
        total += term
        ring.append(total)
        if len(ring) > 8:
            ring.pop(0)
        ratio = x / (k + 1.0)
        for a in num:
            ratio *= a + k
        for b in den:
            ratio /= b + k
        term *= ratio
        if poly_k is None and k > 10 and abs(term) < 1e-15 * max(abs(total), 1e-300):
            return total + term
    if poly_k is not None:
        return total
    if x < 0:
        sums = np.asarray(ring)
        w = np.array([math.comb(7, j) for j in range(8)], dtype=float) / 128.0
        return float(np.dot(w, sums))
    if x == 1.0 and p == q + 1:
        # terms decay like C k**(-1-excess); close with the integral tail
        excess = sum(den) - sum(num)
        tail = term * (k_stop + 1.0) / excess
        if abs(tail) < 1e-5 * max(abs(total), 1e-300):
            return total + tail
    raise ConvergenceFailure(
        f"{p}F{q} did not converge within {max_terms} terms at x = {x}")
