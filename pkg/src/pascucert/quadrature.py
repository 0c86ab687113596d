"""Quadrature and summation utilities.

Endpoint-singular integrals over (0, 1) are tamed by the power substitution
t = u**m (m picked from the known endpoint exponent, so the transformed
integrand is C^1 at the endpoint) followed by adaptive Gauss-Kronrod.
Alternating series are summed with a binomially weighted average of the
trailing partial sums, which annihilates the slow oscillatory tail.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .errors import QuadratureFailure


def _sub_power(exponent: float) -> int:
    """Substitution power making t**exponent * dt at least C^1 at t=0."""
    if exponent >= 1.0:
        return 1
    return max(1, math.ceil(2.0 / (1.0 + exponent)))


def integrate_01(f, left_exponent=0.0, right_exponent=0.0, epsabs=1e-10,
                 f_complement=None):
    """Integrate f on (0,1) where f ~ t**p at 0 and ~ (1-t)**q at 1.

    p and q must exceed -1; they only steer the substitution, so a rough
    value is fine.  When q < 0 the substitution samples distances from 1
    below machine epsilon, where 1 - d rounds to 1; pass f_complement(d)
    evaluating f(1 - d) from the distance directly to keep the singular
    factor accurate there.
    """
    if left_exponent <= -1.0 or right_exponent <= -1.0:
        raise QuadratureFailure("endpoint exponent <= -1: integral diverges")
    ml = _sub_power(left_exponent)
    mr = _sub_power(right_exponent)
    if f_complement is None:
        f_complement = lambda d: f(1.0 - d)

    def left(u):
        return f(u**ml) * ml * u ** (ml - 1)

    def right(v):
        return f_complement(v**mr) * mr * v ** (mr - 1)

    vl, el = integrate.quad(left, 0.0, 0.5 ** (1.0 / ml),
                            epsabs=0.5 * epsabs, epsrel=1e-12, limit=200)
    vr, er = integrate.quad(right, 0.0, 0.5 ** (1.0 / mr),
                            epsabs=0.5 * epsabs, epsrel=1e-12, limit=200)
    err = el + er
    if err > max(100.0 * epsabs, 1e-8 * (abs(vl) + abs(vr))):
        raise QuadratureFailure("tolerance not reached", residual=err)
    return vl + vr


def integrate_t1(f, t0, right_exponent=0.0, epsabs=1e-10,
                 f_complement=None):
    """Integrate f over (t0, 1) for t0 in (0, 1].

    Uses x = exp(-y) so that algebraic behaviour at x -> 0 becomes an
    exponential tail, then a power substitution at y = 0 for the (1-x)**q
    endpoint.  f_complement(d) = f(1 - d), as in integrate_01, keeps
    singular right endpoints accurate.
    """
    if t0 >= 1.0:
        return 0.0
    if t0 <= 0.0:
        raise QuadratureFailure("lower endpoint must be positive")
    y_max = -math.log(t0)
    mr = _sub_power(right_exponent)

    def g(v):
        y = v**mr
        x = math.exp(-y)
        if f_complement is not None:
            fx = f_complement(-math.expm1(-y))
        else:
            fx = f(x)
        return fx * x * mr * v ** (mr - 1)

    val, err = integrate.quad(g, 0.0, y_max ** (1.0 / mr),
                              epsabs=epsabs, epsrel=1e-12, limit=200)
    if err > max(100.0 * epsabs, 1e-8 * abs(val)):
        raise QuadratureFailure("tolerance not reached", residual=err)
    return val


_BINOM8 = np.array([math.comb(7, k) for k in range(8)], dtype=float) / 128.0


def averaged_partial_sum(terms):
    """Sum a (near-)alternating series.

    Plain summation when the tail is already negligible, otherwise a
    binomial average of the last eight partial sums (seven averaging
    passes), which converges even for terms decaying like 1/n.
    """
    terms = np.asarray(terms)
    s = np.cumsum(terms)
    total = s[-1]
    if len(terms) < 16 or abs(terms[-1]) <= 1e-16 * max(abs(total), 1e-300):
        return total
    return np.dot(_BINOM8, s[-8:])


def gauss_panels(edges, n):
    """Composite Gauss-Legendre nodes/weights on the given panel edges."""
    x0, w0 = np.polynomial.legendre.leggauss(n)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        h = 0.5 * (b - a)
        xs.append(0.5 * (a + b) + h * x0)
        ws.append(h * w0)
    return np.concatenate(xs), np.concatenate(ws)


def power_limit(h, values):
    """Limit as h -> 0 of values sampled at step sizes h.

    Fits the interpolating polynomial in h through all samples and returns
    its constant term (iterated Richardson extrapolation).
    """
    h = np.asarray(h, dtype=float)
    v = np.asarray(values)
    vander = np.vander(h, increasing=True)
    coeffs = np.linalg.solve(vander, v)
    return coeffs[0]


def chebyshev_grid(lo, hi, n):
    """Chebyshev-spaced points on (lo, hi), sorted increasing."""
    k = np.arange(n)
    x = np.cos((2 * k + 1) * np.pi / (2 * n))
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * x)
