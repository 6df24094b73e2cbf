"""Poisson structure function f(x) on abelianity lines, via two routes.

On an abelianity line the quadratic bracket is {t(z), t(w)} = f(z/w) t t,
and f is obtained by differentiating the exchange function transverse to
the line.  Two independent evaluation routes are provided for each line
type and must agree:

  * the compact route assembles -N lambda ln(q) x d/dx of a weighted sum of
    log U_a factors analytically from the theta log-derivative series;
  * the series route evaluates the explicit double sums
    f = -2 N lambda ln(q) (2 I(x) - I(qx) - I(x/q)) term by term.

Type (a) covers non-vanishing integer lambda (weights m/l, n/l* with l, l*
the reduced denominators of lambda/m, lambda*/n); type (b) covers the
cross-cancellation lines with divisor witness d and remainder mu = m mod d.
mu = 0 is admitted as the degenerate boundary where both types literally
apply and must coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .elliptic import DomainError, EllipticContext, PoleError, _half_index_range
from .lattice import LambdaPair, Surface


def _sign(v: int) -> int:
    return 1 if v > 0 else -1


@dataclass(frozen=True)
class PoissonParamsA:
    """Parameters of an integer-lambda (type a) line.

    w = gcd(lambda, m) carrying the sign of m (likewise w*), so that
    l = m/w > 0 and l* = n/w* > 0 are the reduced denominators of lambda/m
    and lambda*/n.
    """

    surface: Surface
    lam: int
    w: int
    w_star: int
    ell: int
    ell_star: int

    @classmethod
    def from_line(cls, surface: Surface, lam: int) -> "PoissonParamsA":
        if surface.m == 0 or surface.n == 0:
            raise DomainError(f"{surface} has no lambda coordinate")
        if lam in (0, 1):
            raise DomainError("type (a) requires non-vanishing integer "
                              "lambda and lambda*")
        lam_star = 1 - lam
        w = _sign(surface.m) * math.gcd(abs(lam), abs(surface.m))
        w_star = _sign(surface.n) * math.gcd(abs(lam_star), abs(surface.n))
        ell = surface.m // w
        ell_star = surface.n // w_star
        assert ell > 0 and ell_star > 0
        assert ell == (Fraction(lam, surface.m)).denominator
        assert ell_star == (Fraction(lam_star, surface.n)).denominator
        return cls(surface, lam, w, w_star, ell, ell_star)


@dataclass(frozen=True)
class PoissonParamsB:
    """Parameters of a cross-cancellation (type b) line.

    d is the reduced denominator of lambda/m and divides m+n; mu is the
    remainder of m by d.  mu = 0 only at the overlap boundary with type (a).
    """

    surface: Surface
    lam: Fraction
    d: int
    mu: int

    @classmethod
    def from_line(cls, surface: Surface, lam) -> "PoissonParamsB":
        lam = Fraction(lam)
        if surface.m == 0 or surface.n == 0:
            raise DomainError(f"{surface} has no lambda coordinate")
        lam_star = 1 - lam
        lm = lam / surface.m
        ln = lam_star / surface.n
        if (lm - ln).denominator != 1:
            raise DomainError("lambda/m - lambda*/n must be an integer "
                              "on a type (b) line")
        d = lm.denominator
        if ln.denominator != d or (surface.m + surface.n) % d != 0:
            raise DomainError("d must be the common reduced denominator "
                              "and divide m+n")
        mu = surface.m % d
        return cls(surface, lam, d, mu)


# ---------------------------------------------------------------------------
# series primitives
# ---------------------------------------------------------------------------

_MAX_TERMS = 20000


def _geom_sum(a: float, w: complex, eps: float, *, start: int = 0) -> complex:
    """sum_{s>=start} w a^s / (1 - w a^s), truncated by the geometric tail."""
    total = 0.0 + 0.0j
    an = a ** start
    scale = max(abs(w), 1.0)
    for _ in range(_MAX_TERMS):
        wa = w * an
        denom = 1.0 - wa
        if abs(denom) < 1e-9:
            raise PoleError(f"series pole: w a^s within 1e-9 of 1 (w={w})")
        total += wa / denom
        an *= a
        if abs(w) * an < eps / scale:
            break
    return total


def theta_logderiv_series(a: float, x: complex, *, eps: float = 1e-16) -> complex:
    """-x d/dx ln theta_a(x) as the Lambert-type series

        sum_{s>=0} x a^s/(1 - x a^s) - sum_{s>=1} x^-1 a^s/(1 - x^-1 a^s).

    Satisfies value(a,x) + value(a,1/x) = -1 identically.
    """
    if not 0.0 < a < 1.0:
        raise DomainError(f"nome must lie in (0,1), got {a}")
    x = complex(x)
    if x == 0:
        raise DomainError("argument must be nonzero")
    return _geom_sum(a, x, eps) - _geom_sum(a, 1.0 / x, eps, start=1)


def _u_logderiv(ctx: EllipticContext, a: float, x: complex) -> complex:
    """x d/dx ln U_a(x), assembled analytically.

    Chain rule through the squared arguments gives the factor +-2:
      x d/dx ln theta_a(c x^2)  = -2 D_a(c x^2),
      x d/dx ln theta_a(c x^-2) = +2 D_a(c x^-2),
    with D_a = theta_logderiv_series.
    """
    q2 = ctx.q * ctx.q
    x2 = x * x
    eps = ctx.eps_trunc
    D = theta_logderiv_series
    return 2.0 * (D(a, x2, eps=eps) - D(a, q2 * x2, eps=eps)
                  + D(a, q2 / x2, eps=eps) - D(a, 1.0 / x2, eps=eps))


def _second_difference(fn, ctx: EllipticContext, x: complex) -> complex:
    return 2.0 * fn(x) - fn(ctx.q * x) - fn(x / ctx.q)


# ---------------------------------------------------------------------------
# type (a)
# ---------------------------------------------------------------------------

def f_type_a(ctx: EllipticContext, params: PoissonParamsA, x: complex) -> complex:
    """Compact form, type (a):

    f(x) = -N lambda ln(q) x d/dx [ (m/l) ln U_{q^{2N/l}}(x)
                                  + (n/l*) ln U_{q^{2N/l*}}(x) ].
    """
    a1 = ctx.q ** (2.0 * ctx.N / params.ell)
    a2 = ctx.q ** (2.0 * ctx.N / params.ell_star)
    bracket = (params.surface.m / params.ell) * _u_logderiv(ctx, a1, x) \
        + (params.surface.n / params.ell_star) * _u_logderiv(ctx, a2, x)
    return -ctx.N * params.lam * math.log(ctx.q) * bracket


def f_type_a_series(ctx: EllipticContext, params: PoissonParamsA,
                    x: complex) -> complex:
    """Series form, type (a): f = -2 N lambda ln(q) (2I(x) - I(qx) - I(x/q))
    with I(x) the weighted pair of Lambert sums in x^2."""
    a1 = ctx.q ** (2.0 * ctx.N / params.ell)
    a2 = ctx.q ** (2.0 * ctx.N / params.ell_star)
    eps = ctx.eps_trunc

    def I(y: complex) -> complex:
        y2 = y * y
        part1 = _geom_sum(a1, y2, eps) - _geom_sum(a1, 1.0 / y2, eps, start=1)
        part2 = _geom_sum(a2, y2, eps) - _geom_sum(a2, 1.0 / y2, eps, start=1)
        return (params.surface.m / params.ell) * part1 \
            + (params.surface.n / params.ell_star) * part2

    return -2.0 * ctx.N * params.lam * math.log(ctx.q) \
        * _second_difference(I, ctx, x)


# ---------------------------------------------------------------------------
# type (b)
# ---------------------------------------------------------------------------

def f_type_b(ctx: EllipticContext, params: PoissonParamsB, x: complex) -> complex:
    """Compact form, type (b):

    f(x) = -N lambda ln(q) ((m+n)/d) x d/dx [
              (1 + mu^2/(mn)) ln U_{q^{2N/d}}(x)
            - (d mu/(mn)) ln U_{q^{2N}}(x)
            + (d/(mn)) sum_{k=1}^{mu-1} (k - mu)
                  ln( U_{q^{2N}}(s^k x) U_{q^{2N}}(s^-k x) ) ]

    with s = q^{-N lambda/m}; s enters only through p^k x^2 where p = s^2.
    """
    m, n = params.surface.m, params.surface.n
    d, mu = params.d, params.mu
    a_d = ctx.q ** (2.0 * ctx.N / d)
    a_full = ctx.nome
    q2 = ctx.q * ctx.q
    eps = ctx.eps_trunc
    p = ctx.q ** (-2.0 * ctx.N * float(params.lam / m))
    D = theta_logderiv_series

    bracket = (1.0 + mu * mu / (m * n)) * _u_logderiv(ctx, a_d, x)
    bracket -= (d * mu / (m * n)) * _u_logderiv(ctx, a_full, x)
    x2 = x * x
    for k in range(1, mu):
        pk = p ** k
        # x d/dx ln U_a(s^k x): squared argument p^k x^2, chain factor +-2
        term = 2.0 * (D(a_full, pk * x2, eps=eps)
                      - D(a_full, q2 * pk * x2, eps=eps)
                      + D(a_full, q2 / (pk * x2), eps=eps)
                      - D(a_full, 1.0 / (pk * x2), eps=eps))
        term += 2.0 * (D(a_full, x2 / pk, eps=eps)
                       - D(a_full, q2 * x2 / pk, eps=eps)
                       + D(a_full, q2 * pk / x2, eps=eps)
                       - D(a_full, pk / x2, eps=eps))
        bracket += (d / (m * n)) * (k - mu) * term
    pref = -ctx.N * float(params.lam) * math.log(ctx.q) * (m + n) / d
    return pref * bracket


def f_type_b_series(ctx: EllipticContext, params: PoissonParamsB,
                    x: complex) -> complex:
    """Series form, type (b): the triple Lambert sum with weights
    (1 + mu^2/mn), d mu/mn and (d/mn)(k - mu) over k = 0..mu-1, combined as
    f = -2 N lambda ln(q) ((m+n)/d) (2I(x) - I(qx) - I(x/q))."""
    m, n = params.surface.m, params.surface.n
    d, mu = params.d, params.mu
    a_d = ctx.q ** (2.0 * ctx.N / d)
    a_full = ctx.nome
    eps = ctx.eps_trunc
    p = ctx.q ** (-2.0 * ctx.N * float(params.lam / m))

    def I(y: complex) -> complex:
        y2 = y * y
        total = (1.0 + mu * mu / (m * n)) \
            * (_geom_sum(a_d, y2, eps) - _geom_sum(a_d, 1.0 / y2, eps, start=1))
        total += (d * mu / (m * n)) \
            * (_geom_sum(a_full, y2, eps)
               - _geom_sum(a_full, 1.0 / y2, eps, start=1))
        for k in range(mu):
            pk = p ** k
            ksum = (_geom_sum(a_full, pk * y2, eps)
                    + _geom_sum(a_full, y2 / pk, eps, start=1)
                    - _geom_sum(a_full, pk / y2, eps)
                    - _geom_sum(a_full, 1.0 / (pk * y2), eps, start=1))
            total += (d / (m * n)) * (k - mu) * ksum
        return total

    pref = -2.0 * ctx.N * float(params.lam) * math.log(ctx.q) * (m + n) / d
    return pref * _second_difference(I, ctx, x)


# ---------------------------------------------------------------------------
# dispatch and multi-index bracket
# ---------------------------------------------------------------------------

PoissonParams = PoissonParamsA | PoissonParamsB


def f_compact(ctx: EllipticContext, params: PoissonParams, x: complex) -> complex:
    if isinstance(params, PoissonParamsA):
        return f_type_a(ctx, params, x)
    return f_type_b(ctx, params, x)


def f_series(ctx: EllipticContext, params: PoissonParams, x: complex) -> complex:
    if isinstance(params, PoissonParamsA):
        return f_type_a_series(ctx, params, x)
    return f_type_b_series(ctx, params, x)


def f_kk(ctx: EllipticContext, params: PoissonParams, k: int, kp: int,
         x: complex) -> complex:
    """Multi-index structure function
    f^{(k,k')}(x) = sum_i sum_j f(q^{i-j} x) over the half-integer ranges."""
    if not (1 <= k <= ctx.N and 1 <= kp <= ctx.N):
        raise DomainError(f"k, k' must lie in 1..N={ctx.N}")
    total = 0.0 + 0.0j
    for i in _half_index_range(k):
        for j in _half_index_range(kp):
            total += f_compact(ctx, params, ctx.q ** float(i - j) * x)
    return total


def params_for_line(surface: Surface, lam: LambdaPair) -> PoissonParams:
    """Poisson parameters for an abelianity line, preferring type (a)."""
    if lam.lam.denominator == 1 and lam.lam not in (0, 1):
        return PoissonParamsA.from_line(surface, int(lam.lam))
    return PoissonParamsB.from_line(surface, lam.lam)
