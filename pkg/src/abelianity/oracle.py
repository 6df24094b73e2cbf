"""Exact cancellation oracle for the exchange function.

The exchange function is a ratio of products of a single building block U
evaluated at arguments q^{N t} x.  Since U is q^N-periodic and depends only
on the squared argument, the ratio is identically 1 exactly when the signed
multiset of exponents t, reduced mod 1, cancels completely.  This module
decides that cancellation symbolically, independently of the integer
classification in `lattice`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .lattice import DegenerateParametrizationError, LambdaPair, Surface


def _mod1(t: Fraction) -> Fraction:
    return t % 1


@dataclass(frozen=True)
class ExponentMultiset:
    """Signed multiset of U-argument exponents, keys reduced into [0,1).

    Positive multiplicity = numerator factor, negative = denominator.  The
    represented ratio of U-functions is identically 1 iff the multiset is
    empty.
    """

    entries: tuple[tuple[Fraction, int], ...]

    @classmethod
    def build(cls, numerator: Iterable[Fraction],
              denominator: Iterable[Fraction]) -> "ExponentMultiset":
        acc: dict[Fraction, int] = {}
        for t in numerator:
            key = _mod1(t)
            acc[key] = acc.get(key, 0) + 1
        for t in denominator:
            key = _mod1(t)
            acc[key] = acc.get(key, 0) - 1
        items = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        return cls(items)

    def is_empty(self) -> bool:
        return not self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def as_dict(self) -> dict[Fraction, int]:
        return dict(self.entries)


def _exchange_lists(s: Surface,
                    lam: LambdaPair | None) -> tuple[list[Fraction], list[Fraction]]:
    """Numerator/denominator exponent lists of the exchange function on s.

    For m, n != 0 the four products contribute
      numerator:   t = lambda l/m (l=1..|m|),  t = -lambda* l/n (l=1..|n|-1)
      denominator: t = -lambda l/m (l=1..|m|-1),  t = lambda* l/n (l=1..|n|).
    On m=0 (resp. n=0) surfaces the free half-nome obeys s*^n = q^{-N}
    (resp. s^m = q^{-N}) and the un-cancelled product form is used directly.
    """
    m, n = s.m, s.n
    if m == 0:
        e = Fraction(-1, n)  # s* = q^{N e}, from s*^n = q^{-N}
        num = [ell * e for ell in range(abs(n))]
        den = [-ell * e for ell in range(1, abs(n) + 1)]
        return num, den
    if n == 0:
        e = Fraction(-1, m)
        num = [-ell * e for ell in range(1, abs(m) + 1)]
        den = [ell * e for ell in range(abs(m))]
        return num, den
    if lam is None:
        raise DegenerateParametrizationError(f"{s} requires a lambda coordinate")
    lm = lam.lam / m
    ln = lam.lam_star / n
    num = [ell * lm for ell in range(1, abs(m) + 1)]
    num += [-ell * ln for ell in range(1, abs(n))]
    den = [-ell * lm for ell in range(1, abs(m))]
    den += [ell * ln for ell in range(1, abs(n) + 1)]
    return num, den


def exchange_exponents(s: Surface, lam: LambdaPair | None = None) -> ExponentMultiset:
    """Signed exponent multiset of the exchange function on s at coordinate lam."""
    num, den = _exchange_lists(s, lam)
    return ExponentMultiset.build(num, den)


def is_abelian(mset: ExponentMultiset) -> bool:
    """True iff the exchange function is identically 1."""
    return mset.is_empty()


def reduced_form(s: Surface,
                 lam: LambdaPair) -> tuple[list[Fraction], list[Fraction]]:
    """Step-1 reduced products after stripping full q^N-cycles.

    With lambda/m = a/d, lambda*/n = b/d' in lowest terms, |m| = d s + mu,
    |n| = d' s' + mu' and mubar = min(mu, d - mu):
      numerator:   {a j/d : j=1..mubar}  u  {b j'/d' : j'=d'-mubar'+1..d'-1}
      denominator: {a j/d : j=d-mubar+1..d-1}  u  {b j'/d' : j'=1..mubar'}.
    Degenerates to empty lists for integer lambda.  Exponents are reduced
    mod 1; after cross-cancellation the lists reproduce exchange_exponents.
    """
    if s.m == 0 or s.n == 0:
        raise DegenerateParametrizationError(f"{s} has no lambda coordinate")
    if lam.lam.denominator == 1:
        return [], []  # integer-lambda shortcut: everything cancels in step 1
    lm = lam.lam / s.m
    ln = lam.lam_star / s.n
    a, d = lm.numerator, lm.denominator
    b, dp = ln.numerator, ln.denominator
    mu = abs(s.m) % d
    mup = abs(s.n) % dp
    mubar = min(mu, d - mu)
    mubarp = min(mup, dp - mup)
    num = [_mod1(Fraction(a * j, d)) for j in range(1, mubar + 1)]
    num += [_mod1(Fraction(b * j, dp)) for j in range(dp - mubarp + 1, dp)]
    den = [_mod1(Fraction(a * j, d)) for j in range(d - mubar + 1, d)]
    den += [_mod1(Fraction(b * j, dp)) for j in range(1, mubarp + 1)]
    return num, den


def cycle_collapses(mset: ExponentMultiset, N: int) -> bool:
    """True when the residual evaluates to 1 via the full-cycle identity.

    The product of U over a complete shift cycle is identically 1:
    prod_{j=0}^{N-1} U(q^{N(t+j/N)} x) = 1 (the combined theta nome q^2
    equals the internal q^2 shift of U, and the quasi-periodicity
    prefactors cancel the constants exactly).  Hence a nonempty multiset
    whose multiplicity function is constant on every 1/N-translation orbit
    still yields a ratio identically equal to 1.  This lies outside the
    cancellation framework of `is_abelian`, which matches whole U factors;
    a False here does not certify the absence of further identities.
    """
    d = mset.as_dict()
    step = Fraction(1, N)
    for t, c in d.items():
        for j in range(1, N):
            if d.get(_mod1(t + j * step), 0) != c:
                return False
    return True


def centrality_exponents(m: int, lam: int) -> ExponentMultiset:
    """Exponent multiset of the generator/Lax exchange ratio on S_{m,-m}.

    numerator t = (lambda-1) k/m, denominator t = lambda k/m for k=1..m.
    Empty iff the line is super-abelian (localized extended center).
    """
    if m <= 0:
        raise ValueError("m must be positive (reduce m<0 to |m| first)")
    num = [Fraction((lam - 1) * k, m) for k in range(1, m + 1)]
    den = [Fraction(lam * k, m) for k in range(1, m + 1)]
    return ExponentMultiset.build(num, den)
