"""Exact arithmetic for critical surfaces and their abelianity lines.

A critical surface S_{m,n} is the locus in (p, q, c) moduli space where
s^m s*^n = q^{-N}, with half-nomes s = -p^{1/2} and s* = -p*^{1/2}.  All
geometry here is carried by the exact q-exponents of s and s* (never p
itself), so every operation is pure integer/rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator


class NoIntersectionError(Exception):
    """The two surfaces do not intersect (m=m', n=n' or zero determinant)."""


class DegenerateParametrizationError(Exception):
    """lambda/m is undefined because the surface has m=0 or n=0."""


class ConstructionFailedError(Exception):
    """A realization construction produced no verifiable candidate."""


class CrossCheckError(Exception):
    """Internal disagreement between two independent classification routes."""


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, x, y) with x*a + y*b = g = gcd(a,b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_x, x = x, old_x - qt * x
        old_y, y = y, old_y - qt * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _bezout_min_second(a: int, b: int) -> tuple[int, int]:
    """Bezout pair (x, y) with x*a + y*b = 1 and 0 <= y < |a|.

    Requires gcd(a, b) = 1 and a != 0.  The representative with the smallest
    non-negative second coefficient makes golden tests deterministic.
    """
    g, x, y = _egcd(a, b)
    if g != 1:
        raise ValueError(f"arguments not coprime: gcd({a},{b})={g}")
    y0 = y % abs(a)
    k = (y - y0) // a
    x0 = x + k * b
    assert x0 * a + y0 * b == 1
    return x0, y0


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Surface:
    """Critical surface S_{m,n}; the pair (0,0) is excluded (1 = q^{-N} is
    unsatisfiable for |q| < 1)."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m == 0 and self.n == 0:
            raise ValueError("surface (0,0) does not exist")

    def is_whole_surface_abelian(self) -> bool:
        return self.m == 0 or self.n == 0

    def is_extended_center(self) -> bool:
        return (self.m, self.n) in ((1, -1), (-1, 1))

    def __str__(self) -> str:
        return f"S_{{{self.m},{self.n}}}"


@dataclass(frozen=True)
class LineParams:
    """Exact half-nome exponents of a line: s = q^{N e_p}, s* = q^{N e_pstar}."""

    e_p: Fraction
    e_pstar: Fraction
    c_over_N: Fraction

    def __post_init__(self) -> None:
        if self.c_over_N != self.e_p - self.e_pstar:
            raise ValueError("c/N must equal e_p - e_pstar")

    @property
    def algebra_valid(self) -> bool:
        """True when |s| < 1 and |s*| < 1 for q in (0,1), i.e. |p|, |p*| < 1.

        The classification itself is purely arithmetic and does not require
        this; numerics converge for |q| < 1 alone.
        """
        return self.e_p > 0 and self.e_pstar > 0


@dataclass(frozen=True)
class LambdaPair:
    """On-surface line coordinate (lambda, lambda*) with lambda + lambda* = 1."""

    lam: Fraction
    lam_star: Fraction

    def __post_init__(self) -> None:
        if self.lam + self.lam_star != 1:
            raise ValueError("lambda + lambda* must equal 1")

    @classmethod
    def from_lambda(cls, lam) -> "LambdaPair":
        lam = Fraction(lam)
        return cls(lam, 1 - lam)


class Verdict(Enum):
    NOT_ABELIAN = "NotAbelian"
    INTEGER_LAMBDA = "IntegerLambda"
    CONDITION2 = "Condition2"
    WHOLE_SURFACE = "WholeSurface"
    EXTENDED_CENTER = "ExtendedCenter"
    SUPER_ABELIAN = "SuperAbelian"


@dataclass(frozen=True)
class Witnesses:
    """Integer witnesses attached to a verdict (unused slots stay None)."""

    d: int | None = None
    gamma: int | None = None
    gamma_prime: int | None = None
    g: int | None = None
    beta0: int | None = None
    beta0_prime: int | None = None


@dataclass(frozen=True)
class AbelianityVerdict:
    tag: Verdict
    witnesses: Witnesses | None = None
    # conditions are only sufficient when N=2 ("magic" theta cancellations
    # can occur because the q^2 shift coincides with the q^N half-period)
    n_caveat: bool = False

    @property
    def is_abelian(self) -> bool:
        return self.tag is not Verdict.NOT_ABELIAN


@dataclass(frozen=True)
class SuperAbelianityVerdict:
    """Outcome of the localized-extended-center test on S_{m,-m}.

    failed_condition indexes the first violated requirement:
      1 = m even, 2 = gcd(m, lambda) != 1 (no Bezout pair),
      3 = gcd(m, beta0' + 1) != 1.
    """

    super_abelian: bool
    failed_condition: int | None = None
    beta0: int | None = None
    beta0_prime: int | None = None
    m_reduced_from: int | None = None  # set when a negative m was mapped to |m|

    @property
    def tag(self) -> Verdict:
        return Verdict.SUPER_ABELIAN if self.super_abelian else Verdict.NOT_ABELIAN


@dataclass(frozen=True)
class LambdaFamily:
    """One (d, gamma) family of cross-cancellation solutions on a surface.

    Members are lambda/m = gamma'*ell + gamma/d + k*n/g for k in Z, with the
    conjugate lambda*/n = gamma'*ell' + gamma/d - k*m/g.  When d | m every
    member has integer lambda and the family degenerates into the integer
    classification (integer_degenerate is True).
    """

    surface: Surface
    d: int
    gamma: int
    gamma_prime: int
    g: int
    ell: int
    ell_prime: int
    integer_degenerate: bool

    def lambda_over_m(self, k: int) -> Fraction:
        return (self.gamma_prime * self.ell + Fraction(self.gamma, self.d)
                + k * Fraction(self.surface.n, self.g))

    def lambda_pair(self, k: int) -> LambdaPair:
        lam = self.surface.m * self.lambda_over_m(k)
        return LambdaPair.from_lambda(lam)

    def members(self, k_values: Iterable[int]) -> list[LambdaPair]:
        return [self.lambda_pair(k) for k in k_values]


# ---------------------------------------------------------------------------
# intersections
# ---------------------------------------------------------------------------

def _det(s1: Surface, s2: Surface) -> int:
    # m'n - mn'
    return s2.m * s1.n - s1.m * s2.n


def intersect_surfaces(s1: Surface, s2: Surface) -> LineParams | None:
    """Line parameters of S_{m,n} cap S_{m',n'}, or None when empty.

    The intersection is non-empty iff m != m', n != n' and m'n - mn' != 0;
    the result is invariant under swapping the two surfaces.
    """
    det = _det(s1, s2)
    if s1.m == s2.m or s1.n == s2.n or det == 0:
        return None
    e_p = Fraction(s2.n - s1.n, det)
    e_pstar = Fraction(s1.m - s2.m, det)
    c_over_n = Fraction(s2.m + s2.n - s1.m - s1.n, det)
    return LineParams(e_p, e_pstar, c_over_n)


def lambda_of_intersection(s1: Surface, s2: Surface) -> LambdaPair:
    """Coordinate (lambda, lambda*) of the intersection line, viewed on s1.

    Not symmetric: the coordinate lives on s1.  Requires s1.m != 0 and
    s1.n != 0, otherwise lambda/m is undefined (whole-surface case).
    """
    if s1.m == 0 or s1.n == 0:
        raise DegenerateParametrizationError(
            f"{s1} has m=0 or n=0; lambda/m is undefined on it")
    det = _det(s1, s2)
    if intersect_surfaces(s1, s2) is None:
        raise NoIntersectionError(f"{s1} and {s2} do not intersect")
    lam = Fraction(s1.m * (s1.n - s2.n), det)
    lam_star = Fraction(s1.n * (s2.m - s1.m), det)
    pair = LambdaPair(lam, lam_star)  # checks lam + lam* = 1
    return pair


def surfaces_through_line(s1: Surface, s2: Surface,
                          t_range: Iterable[int]) -> list[Surface]:
    """All surfaces through the line s1 cap s2, indexed along the primitive
    integer direction: (m'',n'') = (m',n') + t*(m-m', n-n')/g0.

    Every returned surface is re-verified to reproduce the exact LineParams
    of the original pair.  (The lattice line never passes through (0,0) for
    a valid intersection, since (m,n) and (m',n') are linearly independent.)
    """
    line = intersect_surfaces(s1, s2)
    if line is None:
        raise NoIntersectionError(f"{s1} and {s2} do not intersect")
    dm, dn = s1.m - s2.m, s1.n - s2.n
    g0 = math.gcd(dm, dn)
    dm, dn = dm // g0, dn // g0
    out: list[Surface] = []
    for t in t_range:
        mpp, npp = s2.m + t * dm, s2.n + t * dn
        if mpp == 0 and npp == 0:  # unreachable for a valid pair; keep the guard
            continue
        w = Surface(mpp, npp)
        anchor = s2 if w == s1 else s1
        chk = intersect_surfaces(anchor, w)
        if chk != line:
            raise CrossCheckError(
                f"{w} fails to reproduce the line of {s1} cap {s2}")
        out.append(w)
    return out


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _condition2_d(s: Surface, lam: LambdaPair) -> int | None:
    """Witness d for the cross-cancellation condition, or None.

    Requires lambda/m - lambda*/n in Z, equal reduced denominators d, and
    d | (m + n).  Only meaningful for m, n != 0.
    """
    lam_over_m = lam.lam / s.m
    lams_over_n = lam.lam_star / s.n
    if (lam_over_m - lams_over_n).denominator != 1:
        return None
    d = lam_over_m.denominator
    if lams_over_n.denominator != d:
        return None
    if (s.m + s.n) % d != 0:
        return None
    return d


def _condition2_witnesses(s: Surface, lam: LambdaPair, d: int) -> Witnesses:
    g = math.gcd(s.m, s.n)
    a = (lam.lam / s.m).numerator
    gamma = a % d
    rhs = 1 - gamma * ((s.m + s.n) // d)
    assert rhs % g == 0, "gamma' must be integral on a condition-2 line"
    gamma_prime = rhs // g
    return Witnesses(d=d, gamma=gamma, gamma_prime=gamma_prime, g=g)


def classify_lambda(s: Surface, lam: LambdaPair, N: int = 3) -> AbelianityVerdict:
    """Abelianity verdict for the line with coordinate lam on surface s.

    Precedence: whole-surface (m=0 or n=0), extended center (m,n)=+-(1,-1),
    non-vanishing integer lambda, cross-cancellation (condition 2 with
    witness d), else not abelian.  lambda=0 or lambda*=0 is not abelian:
    those points leave the |p|<1 moduli space (p=1 resp. p*=1).
    """
    caveat = (N == 2)
    if s.is_whole_surface_abelian():
        return AbelianityVerdict(Verdict.WHOLE_SURFACE, n_caveat=caveat)
    if s.is_extended_center():
        return AbelianityVerdict(Verdict.EXTENDED_CENTER, n_caveat=caveat)
    if lam.lam == 0 or lam.lam_star == 0:
        return AbelianityVerdict(Verdict.NOT_ABELIAN, n_caveat=caveat)
    if lam.lam.denominator == 1 and lam.lam_star.denominator == 1:
        return AbelianityVerdict(Verdict.INTEGER_LAMBDA, n_caveat=caveat)
    d = _condition2_d(s, lam)
    if d is not None:
        return AbelianityVerdict(Verdict.CONDITION2,
                                 witnesses=_condition2_witnesses(s, lam, d),
                                 n_caveat=caveat)
    return AbelianityVerdict(Verdict.NOT_ABELIAN, n_caveat=caveat)


def classify_intersection(s1: Surface, s2: Surface,
                          N: int = 3) -> tuple[AbelianityVerdict, AbelianityVerdict]:
    """Verdicts for both sides of the intersection line of s1 and s2.

    Evaluates the intersection-level conditions
      (a)  m(n-n')/(m'n-mn') in Z          (per side; may hold on one only),
      (b)  (m+n-m'-n')/(m'n-mn') in Z and (m+n)(m'+n') != 0  (symmetric),
      (c)/(c')  one surface is +-(1,-1),
    and cross-checks them against classify_lambda on each side's coordinate.
    """
    det = _det(s1, s2)
    if intersect_surfaces(s1, s2) is None:
        raise NoIntersectionError(f"{s1} and {s2} do not intersect")

    cond_b = ((s1.m + s1.n - s2.m - s2.n) % det == 0
              and (s1.m + s1.n) != 0 and (s2.m + s2.n) != 0)

    def _side(sa: Surface, sb: Surface) -> AbelianityVerdict:
        if sa.is_whole_surface_abelian():
            verdict = AbelianityVerdict(Verdict.WHOLE_SURFACE, n_caveat=(N == 2))
        elif sa.is_extended_center():
            verdict = AbelianityVerdict(Verdict.EXTENDED_CENTER, n_caveat=(N == 2))
        else:
            verdict = classify_lambda(sa, lambda_of_intersection(sa, sb), N)
        # condition (a) on this side: integrality of m(n-n')/(m'n-mn')
        det_ab = _det(sa, sb)
        cond_a = (sa.m * (sa.n - sb.n)) % det_ab == 0
        thm_abelian = (cond_a or cond_b
                       or sb.is_extended_center() or sa.is_extended_center())
        if thm_abelian != verdict.is_abelian:
            raise CrossCheckError(
                f"intersection conditions disagree with the line classification "
                f"on {sa} (pair {sa} cap {sb})")
        return verdict

    return _side(s1, s2), _side(s2, s1)


def solve_condition2(s: Surface) -> list[LambdaFamily]:
    """All (d, gamma) families solving the cross-cancellation condition on s.

    For g = gcd(m,n) and Bezout (ell, ell') with ell*m + ell'*n = g, a
    divisor d > 0 of m+n is admissible when (m+n)/d is coprime with g; each
    gamma with 0 < gamma < d, gcd(gamma, d) = 1 and g | (1 - gamma (m+n)/d)
    yields one family (gamma' solving gamma' g + gamma (m+n)/d = 1).

    Returns [] when no admissible (d, gamma) exists, i.e. no
    cross-cancellation can occur on this surface.
    """
    m, n = s.m, s.n
    if m == 0 or n == 0:
        raise DegenerateParametrizationError(f"{s}: abelian on the whole surface")
    if m + n == 0:
        raise ValueError(
            f"{s}: m+n=0 admits no cross-cancellation line; "
            "only S_{1,-1} and S_{-1,1} are special (extended center)")
    g = math.gcd(m, n)
    m_bar, n_bar = m // g, n // g
    ell, ell_prime = _bezout_min_second(m_bar, n_bar)

    families: list[LambdaFamily] = []
    total = abs(m + n)
    for d in range(2, total + 1):
        if total % d != 0:
            continue
        quot = (m + n) // d
        if math.gcd(abs(quot), g) != 1:
            continue
        for gamma in range(1, d):
            if math.gcd(gamma, d) != 1:
                continue
            rhs = 1 - gamma * quot
            if rhs % g != 0:
                continue
            gamma_prime = rhs // g
            fam = LambdaFamily(surface=s, d=d, gamma=gamma,
                               gamma_prime=gamma_prime, g=g,
                               ell=ell, ell_prime=ell_prime,
                               integer_degenerate=(m % d == 0))
            _check_family(fam)
            families.append(fam)
    return families


def _check_family(fam: LambdaFamily) -> None:
    """Self-check: members satisfy the raw condition-2 predicate for k in
    [-2,2] and classify abelian (Condition2, or IntegerLambda when the
    family is integer-degenerate, i.e. d | m)."""
    s = fam.surface
    for k in range(-2, 3):
        pair = fam.lambda_pair(k)
        if _condition2_d(s, pair) != fam.d:
            raise CrossCheckError(f"family {fam} member k={k} fails condition 2")
        verdict = classify_lambda(s, pair)
        expected = (Verdict.INTEGER_LAMBDA if fam.integer_degenerate
                    else Verdict.CONDITION2)
        if verdict.tag is not expected:
            raise CrossCheckError(
                f"family {fam} member k={k}: verdict {verdict.tag} != {expected}")


def super_abelianity_check(m: int, lam: int) -> SuperAbelianityVerdict:
    """Localized-extended-center test for integer lambda on S_{m,-m}.

    Passes iff (1) m odd, (2) gcd(m, lambda) = 1, (3) gcd(m, beta0'+1) = 1,
    where beta0*m - beta0'*lambda = 1 with the canonical 1 <= beta0' <= m-1.
    Negative m is reduced to |m| (recorded on the verdict).  m=1 is the
    critical-level surface: trivially super-abelian for every lambda.
    """
    if m == 0:
        raise ValueError("m must be nonzero")
    reduced_from = m if m < 0 else None
    m = abs(m)
    if m == 1:
        return SuperAbelianityVerdict(True, beta0=1, beta0_prime=0,
                                      m_reduced_from=reduced_from)
    if m % 2 == 0:
        return SuperAbelianityVerdict(False, failed_condition=1,
                                      m_reduced_from=reduced_from)
    if math.gcd(m, lam) != 1:
        # no Bezout pair exists; reported, not raised
        return SuperAbelianityVerdict(False, failed_condition=2,
                                      m_reduced_from=reduced_from)
    beta0_prime = (-pow(lam, -1, m)) % m  # in 1..m-1
    beta0 = (1 + beta0_prime * lam) // m
    assert beta0 * m - beta0_prime * lam == 1
    if math.gcd(m, beta0_prime + 1) != 1:
        return SuperAbelianityVerdict(False, failed_condition=3,
                                      beta0=beta0, beta0_prime=beta0_prime,
                                      m_reduced_from=reduced_from)
    return SuperAbelianityVerdict(True, beta0=beta0, beta0_prime=beta0_prime,
                                  m_reduced_from=reduced_from)


# ---------------------------------------------------------------------------
# realizations of a line as intersections
# ---------------------------------------------------------------------------

def _realization_direction(s: Surface, lam: LambdaPair) -> tuple[int, int]:
    """Primitive integer direction of the family of surfaces realizing lam.

    All integer solutions of m' e_p + n' e_pstar = -1 (the surface condition
    on the fixed line) form the lattice line (m,n) + t*(dm,dn); the
    direction is proportional to (-lambda* m, lambda n).  Normalized so the
    n-component is negative, which makes small positive t hit the nearby
    small surfaces first.
    """
    vm = -lam.lam_star * s.m
    vn = lam.lam * s.n
    scale = math.lcm(vm.denominator, vn.denominator)
    am, an = int(vm * scale), int(vn * scale)
    g = math.gcd(am, an)
    am, an = am // g, an // g
    if an > 0:
        am, an = -am, -an
    return am, an


def _realizes(s: Surface, cand: Surface, lam: LambdaPair) -> bool:
    try:
        return lambda_of_intersection(s, cand) == lam
    except (NoIntersectionError, DegenerateParametrizationError):
        return False


def realize_line_as_intersections(s: Surface, lam: LambdaPair,
                                  count: int) -> list[Surface]:
    """`count` distinct surfaces whose intersection with s realizes lam.

    Enumerates the complete primitive-direction family through s, verifying
    every candidate via lambda_of_intersection before inclusion.  The
    Bezout/shift constructions (see bezout_realizations and
    cross_cancellation_realizations) generate sub-families of this lattice
    line and are kept as independent cross-checks.
    """
    if s.m == 0 or s.n == 0:
        raise DegenerateParametrizationError(f"{s} has no lambda coordinate")
    if lam.lam == 0 or lam.lam_star == 0:
        raise ConstructionFailedError(
            "lambda=0 or lambda*=0 cannot be realized as an intersection "
            "(it would force m=m' or n=n')")
    dm, dn = _realization_direction(s, lam)
    out: list[Surface] = []
    t = 1
    while len(out) < count:
        cand = Surface(s.m + t * dm, s.n + t * dn)
        if not _realizes(s, cand, lam):
            raise CrossCheckError(
                f"primitive-family candidate {cand} failed verification")
        out.append(cand)
        t += 1
    return out


def bezout_realizations(s: Surface, lam: LambdaPair,
                        k_values: Iterable[int]) -> Iterator[Surface]:
    """Integer-lambda realization family m' = m(l0 + k lam*), n' = n(l0' - k lam)
    with l0 lam + l0' lam* = 1.  Yields only verified candidates; k values
    hitting the degenerate member (the surface s itself, or a zero
    determinant) are skipped.
    """
    lam_i, lams_i = lam.lam, lam.lam_star
    if lam_i.denominator != 1 or lams_i.denominator != 1 or lam_i == 0 or lams_i == 0:
        raise ConstructionFailedError("requires non-vanishing integer lambda")
    lam_i, lams_i = int(lam_i), int(lams_i)
    l0, l0p = _bezout_min_second(lam_i, lams_i)
    for k in k_values:
        ell, ellp = l0 + k * lams_i, l0p - k * lam_i
        mp, np_ = s.m * ell, s.n * ellp
        if mp == 0 and np_ == 0:
            continue
        cand = Surface(mp, np_)
        if _realizes(s, cand, lam):
            yield cand


def cross_cancellation_realizations(s: Surface, lam: LambdaPair,
                                    u_values: Iterable[int]) -> Iterator[Surface]:
    """Condition-2 realization family m' = m - (b/g)u, n' = n + (a/g)u where
    lambda/m = a/d, lambda*/n = b/d in lowest terms and g = gcd(a, b)."""
    d = _condition2_d(s, lam)
    if d is None:
        raise ConstructionFailedError("line does not satisfy condition 2")
    a = (lam.lam / s.m).numerator
    b = (lam.lam_star / s.n).numerator
    gab = math.gcd(a, b)
    for u in u_values:
        if u == 0:
            continue
        cand = Surface(s.m - (b // gab) * u, s.n + (a // gab) * u)
        if _realizes(s, cand, lam):
            yield cand


def anchor_realization(s: Surface, lam: LambdaPair) -> tuple[Surface, bool]:
    """Single verified anchor surface for a generic rational lambda.

    Tries m' = (a+1)m + d, n' = (a+1)n first (with lambda/m = a/d in lowest
    terms); direct substitution shows that variant lands on -a/d, so on
    verification failure the sign-corrected m' = (1-a)m + d, n' = (1-a)n is
    used.  Returns (surface, used_sign_corrected).  Raises
    ConstructionFailedError when neither candidate verifies (then the
    primitive-direction family is the fallback).
    """
    if s.m == 0 or s.n == 0:
        raise DegenerateParametrizationError(f"{s} has no lambda coordinate")
    frac = lam.lam / s.m
    a, d = frac.numerator, frac.denominator
    for corrected, (mp, np_) in (
        (False, ((a + 1) * s.m + d, (a + 1) * s.n)),
        (True, ((1 - a) * s.m + d, (1 - a) * s.n)),
    ):
        if mp == 0 and np_ == 0:
            continue
        cand = Surface(mp, np_)
        if _realizes(s, cand, lam):
            return cand, corrected
    raise ConstructionFailedError(
        f"no anchor realization for lambda={lam.lam} on {s}")
