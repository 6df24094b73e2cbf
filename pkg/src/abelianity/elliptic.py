"""Floating-point evaluation of the theta-based structure functions.

Everything is built from the short Jacobi theta function
    theta_a(z) = (z; a)_inf (a/z; a)_inf,   0 < a < 1,
via the block
    U_a(z) = q^{2/N-2} theta_a(q^2 z^2) theta_a(q^2 z^-2)
             / (theta_a(z^2) theta_a(z^-2)),
which is symmetric under z -> 1/z, depends on z^2 only, and (for the nome
a = q^{2N}) is q^N-periodic in z.  These identities are exercised by the
test suite; production evaluation relies on them only through the explicit
argument reductions implemented here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice import DegenerateParametrizationError, LambdaPair, Surface
from .oracle import _exchange_lists, _mod1


class DomainError(ValueError):
    """Argument outside the definition domain (nome not in (0,1), z=0...)."""


class PoleError(ArithmeticError):
    """Evaluation point is within tolerance of a zero or pole of the result."""


@dataclass(frozen=True)
class EllipticContext:
    """Numeric evaluation environment.

    eps_trunc bounds the dropped tail of every q-Pochhammer product; tol is
    the tolerance used both for identity checks and for declaring a point
    pole-adjacent.
    """

    N: int
    q: float
    eps_trunc: float = 1e-16
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.N < 2:
            raise DomainError(f"N must be >= 2, got {self.N}")
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"q must lie in (0,1), got {self.q}")
        if self.eps_trunc <= 0 or self.tol <= 0:
            raise DomainError("eps_trunc and tol must be positive")

    @property
    def nome(self) -> float:
        return self.q ** (2 * self.N)


def theta(a: float, z: complex, *, eps: float = 1e-16) -> complex:
    """Short Jacobi theta theta_a(z) = (z;a)_inf (a/z;a)_inf.

    The argument is first reduced into the annulus a <= |z| < 1 with the
    exact quasi-periodicity theta_a(a^k z) = (-1)^k a^{-k(k-1)/2} z^{-k}
    theta_a(z), then the products are truncated once the tail factors are
    within eps of 1.
    """
    if not 0.0 < a < 1.0:
        raise DomainError(f"nome must lie in (0,1), got {a}")
    z = complex(z)
    if z == 0:
        raise DomainError("theta argument must be nonzero")
    lna = math.log(a)
    k = math.ceil(math.log(abs(z)) / lna) - 1
    zr = z * a ** (-k)
    prefactor = (-1) ** (k & 1) * a ** (-(k * (k - 1)) // 2) * zr ** (-k)

    n_max = max(1, math.ceil(math.log(eps) / lna))
    prod = 1.0 + 0.0j
    an = 1.0
    for _ in range(n_max + 1):
        prod *= (1.0 - zr * an) * (1.0 - a * an / zr)
        an *= a
    return prefactor * prod


def _near_lattice(a: float, w: complex, tol: float) -> bool:
    """True when w is within tolerance of the zero lattice {a^k : k in Z}."""
    r = abs(w)
    if r == 0.0:
        return True
    k = round(math.log(r) / math.log(a))
    return abs(w * a ** (-k) - 1.0) < 10.0 * tol


def u_zero_pole_adjacent(ctx: EllipticContext, a: float, z: complex) -> bool:
    """True when U_a(z) has a zero or pole within tolerance of z.

    Poles: z^2 or z^-2 on the lattice a^Z; zeros: q^2 z^{+-2} on it.
    """
    w = z * z
    q2 = ctx.q * ctx.q
    return (_near_lattice(a, w, ctx.tol) or _near_lattice(a, 1.0 / w, ctx.tol)
            or _near_lattice(a, q2 * w, ctx.tol)
            or _near_lattice(a, q2 / w, ctx.tol))


def ufunc_a(ctx: EllipticContext, a: float, z: complex) -> complex:
    """U_a(z) with an arbitrary nome a in (0,1)."""
    if not 0.0 < a < 1.0:
        raise DomainError(f"nome must lie in (0,1), got {a}")
    z = complex(z)
    if z == 0:
        raise DomainError("U argument must be nonzero")
    w = z * z
    wi = 1.0 / w
    if _near_lattice(a, w, ctx.tol) or _near_lattice(a, wi, ctx.tol):
        raise PoleError(f"U_a pole within tolerance at z={z}")
    q2 = ctx.q * ctx.q
    eps = ctx.eps_trunc
    num = theta(a, q2 * w, eps=eps) * theta(a, q2 * wi, eps=eps)
    den = theta(a, w, eps=eps) * theta(a, wi, eps=eps)
    return ctx.q ** (2.0 / ctx.N - 2.0) * num / den


def ufunc(ctx: EllipticContext, z: complex) -> complex:
    """The structure-function block U(z), nome q^{2N}."""
    return ufunc_a(ctx, ctx.nome, z)


def calF(ctx: EllipticContext, s_exponent: Fraction, a: int, x: complex) -> complex:
    """Shift product F_a(x) with half-nome s = q^{N * s_exponent}:

        prod_{l=0}^{a-1} U(s^l x)        for a > 0,
        1                                 for a = 0,
        prod_{l=1}^{|a|} U(s^{-l} x)^-1   for a < 0.
    """
    if a == 0:
        return 1.0 + 0.0j
    s = ctx.q ** (ctx.N * float(s_exponent))
    val = 1.0 + 0.0j
    if a > 0:
        for ell in range(a):
            val *= ufunc(ctx, s ** ell * x)
    else:
        for ell in range(1, -a + 1):
            val /= ufunc(ctx, s ** (-ell) * x)
    return val


def _u_shift(ctx: EllipticContext, t: Fraction, x: complex,
             memo: dict[Fraction, complex]) -> complex:
    """U(q^{N t} x) with t reduced mod 1 first (q^N-periodicity), memoized.

    Fails loudly when the shifted argument sits near a zero or a pole of U,
    since factors appear inverted in the exchange products.
    """
    t = _mod1(t)
    got = memo.get(t)
    if got is not None:
        return got
    arg = ctx.q ** (ctx.N * float(t)) * x
    if u_zero_pole_adjacent(ctx, ctx.nome, arg):
        raise PoleError(f"exchange factor argument near zero/pole at x={x}, t={t}")
    val = ufunc(ctx, arg)
    memo[t] = val
    return val


def admissible_half_nome_roots(ctx: EllipticContext, n: int) -> list[complex]:
    """The |n| complex solutions of s^n = q^{-N} (free half-nome on S_{0,n})."""
    if n == 0:
        raise DomainError("n must be nonzero")
    base = ctx.q ** (-ctx.N / n)
    k = abs(n)
    return [base * cmath.exp(2j * cmath.pi * j / k) for j in range(k)]


def _yfunc_whole_surface(ctx: EllipticContext, s: Surface, x: complex,
                         half_nome: complex | None) -> complex:
    """Direct evaluation of the exchange function on S_{0,n} / S_{m,0}.

    Only the constrained half-nome enters (the other nome is free on the
    surface and drops out); any complex root of s*^n = q^{-N} may be
    supplied explicitly.
    """
    n = s.n if s.m == 0 else s.m
    if half_nome is None:
        half_nome = complex(ctx.q ** (-ctx.N / n))
    elif abs(half_nome ** n - ctx.q ** (-ctx.N)) > 1e-9:
        raise DomainError(f"half-nome {half_nome} does not satisfy s^{n} = q^-N")
    num = 1.0 + 0.0j
    den = 1.0 + 0.0j
    for ell in range(abs(n)):
        arg = half_nome ** ell * x
        if u_zero_pole_adjacent(ctx, ctx.nome, arg):
            raise PoleError(f"exchange factor argument near zero/pole at x={x}")
        num *= ufunc(ctx, arg)
    for ell in range(1, abs(n) + 1):
        arg = half_nome ** (-ell) * x
        if u_zero_pole_adjacent(ctx, ctx.nome, arg):
            raise PoleError(f"exchange factor argument near zero/pole at x={x}")
        den *= ufunc(ctx, arg)
    return num / den


def yfunc(ctx: EllipticContext, s: Surface, lam: LambdaPair | None, x: complex,
          *, half_nome: complex | None = None) -> complex:
    """Exchange function of S_{m,n} at line coordinate lam, evaluated at x.

    Every U argument is reduced by the mod-1 exponent reduction before
    evaluation.  For m=0 or n=0 surfaces lam is ignored and the direct
    product form is used (optionally at an explicit complex half-nome root).
    """
    if s.is_whole_surface_abelian():
        return _yfunc_whole_surface(ctx, s, x, half_nome)
    if lam is None:
        raise DegenerateParametrizationError(f"{s} requires a lambda coordinate")
    num, den = _exchange_lists(s, lam)
    memo: dict[Fraction, complex] = {}
    val = 1.0 + 0.0j
    for t in num:
        val *= _u_shift(ctx, t, x, memo)
    for t in den:
        val /= _u_shift(ctx, t, x, memo)
    return val


def _half_index_range(k: int) -> list[Fraction]:
    # (1-k)/2, (3-k)/2, ..., (k-1)/2 in integer steps
    return [Fraction(1 - k, 2) + r for r in range(k)]


def exchange_factor(ctx: EllipticContext, s: Surface, lam: LambdaPair | None,
                    k: int, kp: int, x: complex,
                    *, half_nome: complex | None = None) -> complex:
    """Exchange factor between rank-k and rank-k' generators:
    prod over i, j of Y(q^{i-j} x) with half-integer index ranges."""
    if not (1 <= k <= ctx.N and 1 <= kp <= ctx.N):
        raise DomainError(f"k, k' must lie in 1..N={ctx.N}")
    val = 1.0 + 0.0j
    for i in _half_index_range(k):
        for j in _half_index_range(kp):
            shift = ctx.q ** float(i - j)
            val *= yfunc(ctx, s, lam, shift * x, half_nome=half_nome)
    return val


def centrality_ratio(ctx: EllipticContext, m: int, lam: int, x: complex) -> complex:
    """Generator/Lax exchange ratio on S_{m,-m} for integer lambda:

        prod_{k=1}^{m} U(s*^{-k} x) / U(s^{-k} x)

    with s = q^{-N lambda/m}, s* = q^{-N(lambda-1)/m}.  Identically 1 on
    super-abelianity lines.
    """
    if m <= 0:
        raise DomainError("m must be positive (reduce m<0 to |m| first)")
    memo: dict[Fraction, complex] = {}
    val = 1.0 + 0.0j
    for k in range(1, m + 1):
        val *= _u_shift(ctx, Fraction((lam - 1) * k, m), x, memo)
        val /= _u_shift(ctx, Fraction(lam * k, m), x, memo)
    return val


def verification_grid(r_inner: float = 0.8, r_outer: float = 1.25,
                      count: int = 20) -> list[complex]:
    """Standard two-radius verification grid: count points r e^{i pi j/count}
    alternating between the two radii, covering |x| < 1 and |x| > 1."""
    pts = []
    for j in range(count):
        r = r_inner if j % 2 == 0 else r_outer
        pts.append(r * cmath.exp(1j * math.pi * j / count))
    return pts
