"""Admissible weight densities on (0, 1) and their derived envelopes.

Each family stores its parameters plus the normalizing constant; the
density, its first two derivatives, and the moments are evaluated in
closed form wherever one exists and by substituted Gauss-Kronrod
quadrature otherwise.  The tail envelopes Lambda and Pi are the iterated
integrals driving the duality criterion; Pi is computed through the
order-swapped single integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import ConfigError, CriticalPoint, DomainError, MismatchedFamily
from .quadrature import integrate_01, integrate_t1

BERNARDI = "bernardi"
KOMATU = "komatu"
HOHLOV = "hohlov"
TWO_PARAM_LOG = "two_param_log"
ALI_SINGH = "ali_singh"
GENERALIZED_OMEGA = "generalized_omega"

FAMILIES = (BERNARDI, KOMATU, HOHLOV, TWO_PARAM_LOG, ALI_SINGH,
            GENERALIZED_OMEGA)

_MAX_OMEGA_TERMS = 32


@dataclass(frozen=True)
class KernelSpec:
    """An immutable weight density description.

    params is a sorted tuple of (name, value) pairs; omega holds the
    polynomial coefficients of the envelope factor for the generalized
    family, leading 1 included.  normalizer is the constant in front of
    the density.
    """

    family: str
    params: tuple
    normalizer: float
    omega: tuple = ()

    @property
    def p(self) -> dict:
        return dict(self.params)

    def text(self) -> str:
        """Canonical flat-text form, reparsable by parse_kernel."""
        parts = [self.family]
        parts += [f"{k}={v:.17g}" for k, v in self.params]
        for i, x in enumerate(self.omega[1:], start=1):
            if x != 0.0:
                parts.append(f"x{i}={x:.17g}")
        return " ".join(parts)


def make_kernel(family: str, **params) -> KernelSpec:
    """Validate family parameters, normalize, and verify the mass is 1."""
    family = _canonical_family(family)
    omega = ()
    if family == BERNARDI:
        c = _require(params, "c")
        if c <= -1.0:
            raise DomainError("bernardi needs c > -1")
        spec = KernelSpec(family, (("c", c),), 1.0 + c)
    elif family == KOMATU:
        c, delta = _require(params, "c"), _require(params, "delta")
        if c <= -1.0 or delta <= 0.0:
            raise DomainError("komatu needs c > -1 and delta > 0")
        norm = (1.0 + c) ** delta / math.gamma(delta)
        spec = KernelSpec(family, (("c", c), ("delta", delta)), norm)
    elif family == HOHLOV:
        a, b, c = (_require(params, k) for k in ("a", "b", "c"))
        if min(a, b, c) <= 0.0:
            raise DomainError("hohlov needs a, b, c > 0")
        if c - a - b <= -1.0:
            raise DomainError("hohlov needs c - a - b > -1")
        norm = math.gamma(c) / (math.gamma(a) * math.gamma(b)
                                * math.gamma(c - a - b + 1.0))
        spec = KernelSpec(family, (("a", a), ("b", b), ("c", c)), norm)
    elif family == TWO_PARAM_LOG:
        a, b = _require(params, "a"), _require(params, "b")
        if a <= -1.0 or b <= -1.0:
            raise DomainError("two_param_log needs a, b > -1")
        if b < a:
            a, b = b, a
        if b == a:
            norm = (a + 1.0) ** 2
        else:
            norm = (a + 1.0) * (b + 1.0) / (b - a)
        spec = KernelSpec(family, (("a", a), ("b", b)), norm)
    elif family == ALI_SINGH:
        k = _require(params, "k")
        if not 0.0 <= k < 1.0:
            raise DomainError("ali_singh needs 0 <= k < 1")
        spec = KernelSpec(family, (("k", k),),
                          0.5 * (1.0 - k) * (3.0 - k))
    elif family == GENERALIZED_OMEGA:
        aa = params.pop("A", params.pop("a", None))
        bb = params.pop("B", params.pop("b", None))
        cc = params.pop("C", params.pop("c", None))
        if aa is None or bb is None or cc is None:
            raise DomainError("generalized_omega needs A, B, C")
        if bb <= 0.0 or cc - aa - bb <= -1.0:
            raise DomainError("generalized_omega needs B > 0 and C - A - B > -1")
        xs = [1.0]
        for i in range(1, _MAX_OMEGA_TERMS + 1):
            xs.append(float(params.pop(f"x{i}", 0.0)))
        while len(xs) > 1 and xs[-1] == 0.0:
            xs.pop()
        if any(x < 0.0 for x in xs):
            raise DomainError("omega coefficients must be nonnegative")
        omega = tuple(xs)
        q = cc - aa - bb
        mass = sum(x * special.beta(bb, q + j + 1.0)
                   for j, x in enumerate(omega))
        spec = KernelSpec(family, (("A", aa), ("B", bb), ("C", cc)),
                          1.0 / mass, omega)
    else:
        raise ConfigError(f"unknown kernel family {family!r}")

    total = integrate_01(lambda t: density(spec, t), *endpoint_exponents(spec),
                         epsabs=1e-12,
                         f_complement=lambda d: density_complement(spec, d))
    if abs(total - 1.0) > 1e-9:
        raise DomainError(
            f"{family} density integrates to {total!r}, not 1")
    return spec


def _require(params: dict, key: str) -> float:
    if key not in params:
        raise DomainError(f"missing kernel parameter {key!r}")
    return float(params[key])


_ALIASES = {
    "bernardi": BERNARDI,
    "komatu": KOMATU,
    "hohlov": HOHLOV,
    "two_param_log": TWO_PARAM_LOG,
    "twoparamlog": TWO_PARAM_LOG,
    "ali_singh": ALI_SINGH,
    "alisingh": ALI_SINGH,
    "generalized_omega": GENERALIZED_OMEGA,
    "generalized": GENERALIZED_OMEGA,
    "genomega": GENERALIZED_OMEGA,
}


def _canonical_family(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in _ALIASES:
        raise ConfigError(f"unknown kernel family {name!r}")
    return _ALIASES[key]


def _omega_polys(kernel: KernelSpec):
    w = np.polynomial.Polynomial(np.asarray(kernel.omega, dtype=float))
    return w, w.deriv(1), w.deriv(2)


def _hyp2f1c(q1, q2, q3, d):
    """2F1(q1, q2; q3; 1 - d) from the distance d in (0, 1].

    Taking the distance instead of the argument keeps the singular branch
    (1-u)**(q3-q1-q2) exact when d is below machine epsilon, where the
    argument itself would round to 1.  Within 1e-8 of the endpoint the
    evaluation goes through mpmath, whose connection formulas cover the
    logarithmic cases too.
    """
    d_arr = np.asarray(d, dtype=float)
    out = np.empty_like(d_arr)
    near = d_arr < 1e-8
    out[~near] = special.hyp2f1(q1, q2, q3, 1.0 - d_arr[~near])
    if np.any(near):
        import mpmath
        for idx in np.argwhere(near):
            i = tuple(idx)
            dd = float(d_arr[i])
            # enough bits that 1 - dd is exact
            prec = 80 + max(0, int(-math.log2(dd)))
            with mpmath.workprec(prec):
                uu = mpmath.mpf(1) - mpmath.mpf(dd)
                out[i] = float(mpmath.hyp2f1(q1, q2, q3, uu))
    return out if out.ndim else float(out)


def _hyp2f1_factors(kernel: KernelSpec):
    """The hypergeometric factor and its first two argument-derivatives,
    as functions of the distance d = 1 - u of the argument from 1."""
    a, b, c = (kernel.p[k] for k in ("a", "b", "c"))
    p1, p2, p3 = c - a, 1.0 - a, c - a - b + 1.0

    def f0(d):
        return _hyp2f1c(p1, p2, p3, d)

    def f1(d):
        return p1 * p2 / p3 * _hyp2f1c(p1 + 1, p2 + 1, p3 + 1, d)

    def f2(d):
        return (p1 * (p1 + 1) * p2 * (p2 + 1) / (p3 * (p3 + 1))
                * _hyp2f1c(p1 + 2, p2 + 2, p3 + 2, d))

    return f0, f1, f2


def density(kernel: KernelSpec, t):
    """lambda(t); accepts scalars or arrays with entries in (0, 1)."""
    return _density_derivs(kernel, t, orders=1)[0]


def density_derivatives(kernel: KernelSpec, t):
    """(lambda, lambda', lambda'') at t, all analytic per family."""
    return _density_derivs(kernel, t, orders=3)


def _density_derivs(kernel: KernelSpec, t, orders: int):
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr <= 0.0) | (t_arr >= 1.0)):
        raise DomainError("t must lie in (0, 1)")
    d = kernel.normalizer
    fam = kernel.family
    p = kernel.p
    scalar = np.isscalar(t)
    if fam == BERNARDI:
        c = p["c"]
        lam = d * t_arr**c
        lam1 = d * c * t_arr ** (c - 1.0)
        lam2 = d * c * (c - 1.0) * t_arr ** (c - 2.0)
    elif fam == KOMATU:
        c, dl = p["c"], p["delta"]
        ln = -np.log(t_arr)
        lam = d * t_arr**c * ln ** (dl - 1.0)
        lam1 = d * t_arr ** (c - 1.0) * ln ** (dl - 2.0) * (c * ln - (dl - 1.0))
        lam2 = d * t_arr ** (c - 2.0) * ln ** (dl - 3.0) * (
            c * (c - 1.0) * ln**2 - (dl - 1.0) * (2.0 * c - 1.0) * ln
            + (dl - 1.0) * (dl - 2.0))
    elif fam == HOHLOV:
        a, b, c = p["a"], p["b"], p["c"]
        q = c - a - b
        f0, f1, f2 = _hyp2f1_factors(kernel)
        u = 1.0 - t_arr
        # the factors take the distance from 1, here exactly t
        g0, g1, g2 = f0(t_arr), f1(t_arr), f2(t_arr)
        tb = t_arr ** (b - 1.0)
        tb1 = (b - 1.0) * t_arr ** (b - 2.0)
        tb2 = (b - 1.0) * (b - 2.0) * t_arr ** (b - 3.0)
        uq = u**q
        uq1 = -q * u ** (q - 1.0)
        uq2 = q * (q - 1.0) * u ** (q - 2.0)
        # chain rule: d/dt g0(1-t) = -g1(1-t), etc.
        lam = d * tb * uq * g0
        lam1 = d * (tb1 * uq * g0 + tb * uq1 * g0 - tb * uq * g1)
        lam2 = d * (tb2 * uq * g0 + 2.0 * tb1 * uq1 * g0
                    - 2.0 * tb1 * uq * g1 + tb * uq2 * g0
                    - 2.0 * tb * uq1 * g1 + tb * uq * g2)
    elif fam == TWO_PARAM_LOG:
        a, b = p["a"], p["b"]
        if a == b:
            ln = -np.log(t_arr)
            lam = d * t_arr**a * ln
            lam1 = d * t_arr ** (a - 1.0) * (a * ln - 1.0)
            lam2 = d * t_arr ** (a - 2.0) * (a * (a - 1.0) * ln - (2.0 * a - 1.0))
        else:
            lam = d * (t_arr**a - t_arr**b)
            lam1 = d * (a * t_arr ** (a - 1.0) - b * t_arr ** (b - 1.0))
            lam2 = d * (a * (a - 1.0) * t_arr ** (a - 2.0)
                        - b * (b - 1.0) * t_arr ** (b - 2.0))
    elif fam == ALI_SINGH:
        k = p["k"]
        lam = d * (t_arr**-k - t_arr ** (2.0 - k))
        lam1 = d * (-k * t_arr ** (-k - 1.0)
                    - (2.0 - k) * t_arr ** (1.0 - k))
        lam2 = d * (k * (k + 1.0) * t_arr ** (-k - 2.0)
                    - (2.0 - k) * (1.0 - k) * t_arr**-k)
    elif fam == GENERALIZED_OMEGA:
        aa, bb, cc = p["A"], p["B"], p["C"]
        q = cc - aa - bb
        w0, w1, w2 = _omega_polys(kernel)
        u = 1.0 - t_arr
        o0, o1, o2 = w0(u), w1(u), w2(u)
        tb = t_arr ** (bb - 1.0)
        tb1 = (bb - 1.0) * t_arr ** (bb - 2.0)
        tb2 = (bb - 1.0) * (bb - 2.0) * t_arr ** (bb - 3.0)
        uq = u**q
        uq1 = -q * u ** (q - 1.0)
        uq2 = q * (q - 1.0) * u ** (q - 2.0)
        lam = d * tb * uq * o0
        lam1 = d * (tb1 * uq * o0 + tb * uq1 * o0 - tb * uq * o1)
        lam2 = d * (tb2 * uq * o0 + 2.0 * tb1 * uq1 * o0
                    - 2.0 * tb1 * uq * o1 + tb * uq2 * o0
                    - 2.0 * tb * uq1 * o1 + tb * uq * o2)
    else:
        raise ConfigError(f"unknown kernel family {fam!r}")

    out = (lam, lam1, lam2)[:orders]
    if scalar:
        out = tuple(float(v) for v in out)
    return out if orders > 1 else (out[0],)


def density_complement(kernel: KernelSpec, d: float) -> float:
    """lambda(1 - d) evaluated from the distance d in (0, 1).

    Needed by quadrature near t = 1, where d below machine epsilon makes
    1 - d round to 1 and a direct density call lose the singular factor.
    """
    if not 0.0 < d < 1.0:
        raise DomainError("d must lie in (0, 1)")
    t = 1.0 - d
    norm = kernel.normalizer
    fam = kernel.family
    p = kernel.p
    if fam == BERNARDI:
        return norm * t ** p["c"]
    if fam == KOMATU:
        ln = -math.log1p(-d)
        return norm * t ** p["c"] * ln ** (p["delta"] - 1.0)
    if fam == HOHLOV:
        f0, _, _ = _hyp2f1_factors(kernel)
        q = p["c"] - p["a"] - p["b"]
        # hypergeometric argument is d itself, so its distance from 1 is t
        return norm * t ** (p["b"] - 1.0) * d**q * f0(t)
    if fam == TWO_PARAM_LOG:
        a, b = p["a"], p["b"]
        if a == b:
            return norm * t**a * -math.log1p(-d)
        # t**a - t**b = -t**a expm1((b - a) log t), stable for small d
        return norm * t**a * -math.expm1((b - a) * math.log1p(-d))
    if fam == ALI_SINGH:
        # 1 - t**2 = d (2 - d)
        return norm * t ** -p["k"] * d * (2.0 - d)
    if fam == GENERALIZED_OMEGA:
        w0, _, _ = _omega_polys(kernel)
        q = p["C"] - p["A"] - p["B"]
        return norm * t ** (p["B"] - 1.0) * d**q * w0(d)
    raise ConfigError(f"unknown kernel family {fam!r}")


def endpoint_exponents(kernel: KernelSpec):
    """(p, q) with density ~ t**p at 0 and ~ (1-t)**q at 1."""
    p = kernel.p
    fam = kernel.family
    if fam == BERNARDI:
        return p["c"], 0.0
    if fam == KOMATU:
        return p["c"], p["delta"] - 1.0
    if fam == HOHLOV:
        # for a < b the hypergeometric factor contributes t**(a-b) at 0
        return min(p["a"], p["b"]) - 1.0, p["c"] - p["a"] - p["b"]
    if fam == TWO_PARAM_LOG:
        return p["a"], 1.0
    if fam == ALI_SINGH:
        return -p["k"], 1.0
    if fam == GENERALIZED_OMEGA:
        return p["B"] - 1.0, p["C"] - p["A"] - p["B"]
    raise ConfigError(f"unknown kernel family {fam!r}")


@lru_cache(maxsize=65536)
def _moment_cached(kernel: KernelSpec, n: int) -> float:
    p = kernel.p
    d = kernel.normalizer
    fam = kernel.family
    if fam == BERNARDI:
        return d / (n + p["c"] + 1.0)
    if fam == KOMATU:
        return d * math.gamma(p["delta"]) / (n + p["c"] + 1.0) ** p["delta"]
    if fam == TWO_PARAM_LOG:
        a, b = p["a"], p["b"]
        if a == b:
            return d / (n + a + 1.0) ** 2
        return d / ((n + a + 1.0) * (n + b + 1.0)) * (b - a)
    if fam == ALI_SINGH:
        k = p["k"]
        return d * (1.0 / (n + 1.0 - k) - 1.0 / (n + 3.0 - k))
    if fam == HOHLOV and p["a"] == 1.0:
        # the hypergeometric factor collapses; density is Beta(b, c-b)
        b, c = p["b"], p["c"]
        return math.exp(special.betaln(b + n, c - b) - special.betaln(b, c - b))
    if fam == GENERALIZED_OMEGA:
        bb = p["B"]
        q = p["C"] - p["A"] - p["B"]
        return d * sum(x * special.beta(bb + n, q + j + 1.0)
                       for j, x in enumerate(kernel.omega))
    # quadrature fallback (general hohlov)
    pl, pr = endpoint_exponents(kernel)
    return integrate_01(
        lambda t: density(kernel, t) * t**n, pl + n, pr, epsabs=1e-12,
        f_complement=lambda d: density_complement(kernel, d) * (1.0 - d)**n)


def moment(kernel: KernelSpec, n: int) -> float:
    """n-th moment of the density; n = 0 returns the unit mass."""
    if n < 0:
        raise DomainError("moment order must be nonnegative")
    if n == 0:
        return 1.0
    return _moment_cached(kernel, int(n))


def has_closed_moments(kernel: KernelSpec) -> bool:
    return kernel.family != HOHLOV or kernel.p["a"] == 1.0


def moment_sequence(kernel: KernelSpec, nmax: int) -> np.ndarray:
    """tau_1 .. tau_nmax as an array; vectorized for closed-form families."""
    p = kernel.p
    d = kernel.normalizer
    fam = kernel.family
    n = np.arange(1, nmax + 1, dtype=float)
    if fam == BERNARDI:
        return d / (n + p["c"] + 1.0)
    if fam == KOMATU:
        return d * math.gamma(p["delta"]) / (n + p["c"] + 1.0) ** p["delta"]
    if fam == TWO_PARAM_LOG:
        a, b = p["a"], p["b"]
        if a == b:
            return d / (n + a + 1.0) ** 2
        return d * (b - a) / ((n + a + 1.0) * (n + b + 1.0))
    if fam == ALI_SINGH:
        k = p["k"]
        return d * (1.0 / (n + 1.0 - k) - 1.0 / (n + 3.0 - k))
    if fam == HOHLOV and p["a"] == 1.0:
        b, c = p["b"], p["c"]
        return np.exp(special.betaln(b + n, c - b) - special.betaln(b, c - b))
    if fam == GENERALIZED_OMEGA:
        bb = p["B"]
        q = p["C"] - p["A"] - p["B"]
        out = np.zeros_like(n)
        for j, x in enumerate(kernel.omega):
            out += x * np.exp(special.betaln(bb + n, q + j + 1.0))
        return d * out
    return np.array([moment(kernel, k) for k in range(1, nmax + 1)])


def log_derivative_ratio(kernel: KernelSpec, t: float) -> float:
    """t lambda''(t) / lambda'(t), the growth exponent of the density slope."""
    lam, lam1, lam2 = density_derivatives(kernel, t)
    if abs(lam1) < 1e-12 * max(1.0, abs(lam2) * t, abs(lam)):
        raise CriticalPoint(f"lambda'({t}) vanishes")
    return t * lam2 / lam1


def density_slope_sign(kernel: KernelSpec, t: float) -> float:
    return math.copysign(1.0, density_derivatives(kernel, t)[1])


def lambda_envelope(kernel: KernelSpec, nu: float, t: float) -> float:
    """Lambda_nu(t) = int_t^1 lambda(x) x**(-1/nu) dx; zero at t = 1."""
    if nu <= 0.0:
        raise DomainError("nu must be positive")
    if not 0.0 < t <= 1.0:
        raise DomainError("t must lie in (0, 1]")
    if t == 1.0:
        return 0.0
    _, q = endpoint_exponents(kernel)
    inv = 1.0 / nu
    return integrate_t1(
        lambda x: density(kernel, x) * x**-inv, t, right_exponent=q,
        f_complement=lambda d: density_complement(kernel, d)
        * (1.0 - d)**-inv)


def pi_envelope(kernel: KernelSpec, mu: float, nu: float, t: float) -> float:
    """Pi_{mu,nu}(t) = int_t^1 Lambda_nu(x) x**(1/nu - 1 - 1/mu) dx.

    Computed by swapping the integration order into a single integral
    against the density; for mu = 0 the envelope degenerates to
    Lambda_nu itself.
    """
    if mu == 0.0:
        return lambda_envelope(kernel, nu, t)
    if mu < 0.0 or nu <= 0.0:
        raise DomainError("need mu >= 0 and nu > 0")
    if not 0.0 < t <= 1.0:
        raise DomainError("t must lie in (0, 1]")
    if t == 1.0:
        return 0.0
    _, q = endpoint_exponents(kernel)
    d = 1.0 / nu - 1.0 / mu
    inv_nu = 1.0 / nu
    if abs(d) < 1e-12:
        def weight(y):
            return y**-inv_nu * math.log(y / t)
    else:
        td = t**d

        def weight(y):
            return y**-inv_nu * (y**d - td) / d

    return integrate_t1(
        lambda y: density(kernel, y) * weight(y), t, right_exponent=q,
        f_complement=lambda dd: density_complement(kernel, dd)
        * weight(1.0 - dd))


class DecayCheck(NamedTuple):
    ok: bool
    t_samples: tuple
    lambda_decay: tuple
    pi_decay: tuple

    def __bool__(self):
        return self.ok


def boundary_decay_check(kernel: KernelSpec, mu: float, nu: float) -> DecayCheck:
    """Confirm t**(1/nu) Lambda_nu and t**(1/mu) Pi both fall to 0 at 0+."""
    ts = (1e-2, 1e-4, 1e-6)
    expo_pi = 1.0 / mu if mu > 0 else 1.0 / nu
    lam_seq = tuple(t ** (1.0 / nu) * lambda_envelope(kernel, nu, t)
                    for t in ts)
    pi_seq = tuple(t**expo_pi * pi_envelope(kernel, mu, nu, t) for t in ts)
    ok = all(s[i + 1] < s[i] for s in (lam_seq, pi_seq)
             for i in range(len(ts) - 1))
    ok = ok and lam_seq[-1] < 0.5 * lam_seq[0] and pi_seq[-1] < 0.5 * pi_seq[0]
    return DecayCheck(ok, ts, lam_seq, pi_seq)


def check_family(kernel: KernelSpec, family: str) -> None:
    want = _canonical_family(family)
    if kernel.family != want:
        raise MismatchedFamily(
            f"kernel family {kernel.family!r} does not match {want!r}")


def parse_kernel(text: str) -> KernelSpec:
    """Parse the flat grammar ``family key=value ...`` (decimal literals)."""
    tokens = text.split()
    if not tokens:
        raise ConfigError("empty kernel specification")
    kwargs = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise ConfigError(f"malformed kernel token {tok!r}")
        key, _, val = tok.partition("=")
        try:
            kwargs[key] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad numeric literal in {tok!r}") from exc
    try:
        return make_kernel(tokens[0], **kwargs)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
