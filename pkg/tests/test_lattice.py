"""Exact-arithmetic tests: intersections, classification, realizations.

Expected values are frozen from hand evaluation of the intersection
formulas and cross-checked here against brute-force oracles (exhaustive
lattice scans, permutation matching, raw predicate enumeration).
"""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from abelianity import (
    ConstructionFailedError,
    DegenerateParametrizationError,
    LambdaPair,
    NoIntersectionError,
    Surface,
    Verdict,
    anchor_realization,
    bezout_realizations,
    classify_intersection,
    classify_lambda,
    cross_cancellation_realizations,
    intersect_surfaces,
    lambda_of_intersection,
    realize_line_as_intersections,
    solve_condition2,
    super_abelianity_check,
    surfaces_through_line,
)

surfaces = st.tuples(st.integers(-8, 8), st.integers(-8, 8)) \
    .filter(lambda t: t != (0, 0)).map(lambda t: Surface(*t))


def raw_condition2(s: Surface, lam: F):
    """Direct statement of the cross-cancellation condition; returns d or None.

    d = 1 means lambda/m and lambda*/n are both integers, which is the
    integer-lambda case, not a cross-cancellation.
    """
    lm = lam / s.m
    ln = (1 - lam) / s.n
    if (lm - ln).denominator != 1:
        return None
    d = lm.denominator
    if d == 1 or ln.denominator != d or (s.m + s.n) % d != 0:
        return None
    return d


class TestIntersect:
    def test_worked_example(self):
        lp = intersect_surfaces(Surface(3, 6), Surface(2, 5))
        assert (lp.e_p, lp.e_pstar, lp.c_over_N) == (F(1, 3), F(-1, 3), F(2, 3))

    def test_equal_exponents_example(self):
        lp = intersect_surfaces(Surface(1, 2), Surface(2, 1))
        assert (lp.e_p, lp.e_pstar, lp.c_over_N) == (F(-1, 3), F(-1, 3), F(0))

    def test_no_intersection_same_m(self):
        assert intersect_surfaces(Surface(1, 2), Surface(1, 5)) is None

    def test_no_intersection_same_surface(self):
        assert intersect_surfaces(Surface(3, 6), Surface(3, 6)) is None

    def test_zero_determinant(self):
        assert intersect_surfaces(Surface(1, 2), Surface(2, 4)) is None

    @given(surfaces, surfaces)
    def test_symmetry_and_central_charge(self, s1, s2):
        lp = intersect_surfaces(s1, s2)
        if lp is None:
            assert intersect_surfaces(s2, s1) is None
            return
        assert intersect_surfaces(s2, s1) == lp
        assert lp.c_over_N == lp.e_p - lp.e_pstar

    @given(st.integers(-8, 8).filter(bool), st.integers(-8, 8).filter(bool))
    def test_antidiagonal_surfaces_never_intersect(self, m, n):
        if m != n:
            assert intersect_surfaces(Surface(m, -m), Surface(n, -n)) is None

    def test_surface_origin_rejected(self):
        with pytest.raises(ValueError):
            Surface(0, 0)


class TestLambdaOfIntersection:
    def test_worked_example(self):
        lam = lambda_of_intersection(Surface(3, 6), Surface(2, 5))
        assert (lam.lam, lam.lam_star) == (F(-1), F(2))

    def test_rational_example(self):
        lam = lambda_of_intersection(Surface(1, 2), Surface(2, 1))
        assert (lam.lam, lam.lam_star) == (F(1, 3), F(2, 3))

    def test_identical_surfaces_rejected(self):
        with pytest.raises(NoIntersectionError):
            lambda_of_intersection(Surface(2, 5), Surface(2, 5))

    def test_degenerate_side(self):
        with pytest.raises(DegenerateParametrizationError):
            lambda_of_intersection(Surface(0, 3), Surface(2, 5))

    @given(surfaces, surfaces)
    def test_sum_is_one(self, s1, s2):
        if s1.m == 0 or s1.n == 0 or intersect_surfaces(s1, s2) is None:
            return
        lam = lambda_of_intersection(s1, s2)
        assert lam.lam + lam.lam_star == 1

    @given(surfaces, surfaces)
    def test_consistent_with_line_params(self, s1, s2):
        lp = intersect_surfaces(s1, s2)
        if lp is None or s1.m == 0 or s1.n == 0:
            return
        lam = lambda_of_intersection(s1, s2)
        assert lp.e_p == -lam.lam / s1.m
        assert lp.e_pstar == -lam.lam_star / s1.n


class TestSurfacesThroughLine:
    def test_forward_window(self):
        out = surfaces_through_line(Surface(3, 6), Surface(2, 5), range(0, 3))
        assert [(w.m, w.n) for w in out] == [(2, 5), (3, 6), (4, 7)]

    def test_t_zero_returns_second_surface(self):
        out = surfaces_through_line(Surface(1, 2), Surface(2, 1), [0])
        assert [(w.m, w.n) for w in out] == [(2, 1)]

    def test_backward_window(self):
        out = surfaces_through_line(Surface(3, 6), Surface(2, 5), range(-2, 0))
        assert [(w.m, w.n) for w in out] == [(0, 3), (1, 4)]
        line = intersect_surfaces(Surface(3, 6), Surface(2, 5))
        for w in out:
            assert intersect_surfaces(Surface(3, 6), w) == line

    def test_no_intersection_propagates(self):
        with pytest.raises(NoIntersectionError):
            surfaces_through_line(Surface(1, 2), Surface(1, 5), range(3))

    @given(surfaces, surfaces, st.integers(-6, 6), st.integers(0, 6))
    def test_collinearity_ratio(self, s1, s2, lo, width):
        if intersect_surfaces(s1, s2) is None:
            return
        out = surfaces_through_line(s1, s2, range(lo, lo + width + 1))
        for w1, w2, w3 in zip(out, out[1:], out[2:]):
            # (m'-m)/(n'-n) == (m''-m')/(n''-n'), cross-multiplied
            assert (w2.m - w1.m) * (w3.n - w2.n) == (w3.m - w2.m) * (w2.n - w1.n)


class TestClassifyLambda:
    def test_integer_lambda(self):
        v = classify_lambda(Surface(3, 6), LambdaPair.from_lambda(-1))
        assert v.tag is Verdict.INTEGER_LAMBDA and v.is_abelian

    def test_condition2_with_witness(self):
        v = classify_lambda(Surface(1, 2), LambdaPair.from_lambda(F(1, 3)))
        assert v.tag is Verdict.CONDITION2
        assert v.witnesses.d == 3
        assert v.witnesses.gamma == 1
        assert v.witnesses.gamma_prime == 0
        assert v.witnesses.g == 1

    def test_not_abelian(self):
        v = classify_lambda(Surface(2, 5), LambdaPair.from_lambda(F(-2, 3)))
        assert v.tag is Verdict.NOT_ABELIAN and not v.is_abelian

    def test_whole_surface(self):
        for s in (Surface(0, 3), Surface(-4, 0)):
            v = classify_lambda(s, LambdaPair.from_lambda(F(1, 2)))
            assert v.tag is Verdict.WHOLE_SURFACE

    def test_extended_center(self):
        for s in (Surface(1, -1), Surface(-1, 1)):
            assert classify_lambda(s, LambdaPair.from_lambda(F(7, 5))).tag \
                is Verdict.EXTENDED_CENTER

    def test_zero_lambda_not_abelian(self):
        assert classify_lambda(Surface(2, 5), LambdaPair.from_lambda(0)).tag \
            is Verdict.NOT_ABELIAN
        assert classify_lambda(Surface(3, 1), LambdaPair.from_lambda(1)).tag \
            is Verdict.NOT_ABELIAN

    def test_n2_caveat_flag(self):
        v = classify_lambda(Surface(2, 5), LambdaPair.from_lambda(F(-2, 3)), N=2)
        assert v.n_caveat
        assert not classify_lambda(Surface(2, 5),
                                   LambdaPair.from_lambda(F(-2, 3)), N=3).n_caveat

    def test_condition2_witness_solves_bezout_equation(self):
        s = Surface(5, 2)
        v = classify_lambda(s, LambdaPair.from_lambda(F(15, 7)))
        assert v.tag is Verdict.CONDITION2
        w = v.witnesses
        assert w.gamma_prime * w.g + w.gamma * ((s.m + s.n) // w.d) == 1


class TestClassifyIntersection:
    def test_asymmetric_type_a_witness(self):
        v1, v2 = classify_intersection(Surface(3, 6), Surface(2, 5))
        assert v1.tag is Verdict.INTEGER_LAMBDA
        assert v2.tag is Verdict.NOT_ABELIAN

    def test_symmetric_type_b(self):
        v1, v2 = classify_intersection(Surface(1, 2), Surface(2, 1))
        assert v1.tag is Verdict.CONDITION2 and v1.witnesses.d == 3
        assert v2.tag is Verdict.CONDITION2 and v2.witnesses.d == 3

    def test_extended_center_pair(self):
        v1, v2 = classify_intersection(Surface(5, 2), Surface(1, -1))
        assert v1.is_abelian and v1.tag is Verdict.CONDITION2
        assert v2.tag is Verdict.EXTENDED_CENTER

    def test_no_intersection_propagates(self):
        with pytest.raises(NoIntersectionError):
            classify_intersection(Surface(1, 2), Surface(1, 5))

    @given(st.tuples(st.integers(-20, 20), st.integers(-20, 20))
           .filter(lambda t: t != (0, 0)).map(lambda t: Surface(*t)),
           st.tuples(st.integers(-20, 20), st.integers(-20, 20))
           .filter(lambda t: t != (0, 0)).map(lambda t: Surface(*t)))
    @settings(max_examples=200)
    def test_wide_box_three_way_consistency(self, s1, s2):
        from abelianity import exchange_exponents, is_abelian
        if intersect_surfaces(s1, s2) is None:
            return
        v1, v2 = classify_intersection(s1, s2)  # internal theorem cross-check
        for sa, sb, v in ((s1, s2, v1), (s2, s1, v2)):
            lam = None if (sa.m == 0 or sa.n == 0) \
                else lambda_of_intersection(sa, sb)
            assert is_abelian(exchange_exponents(sa, lam)) == v.is_abelian

    def test_small_box_equivalence_and_symmetry(self):
        """Intersection-level conditions agree with the per-side verdicts,
        and cross-cancellation verdicts are always mutual."""
        box = 4
        surfs = [Surface(m, n) for m in range(-box, box + 1)
                 for n in range(-box, box + 1) if (m, n) != (0, 0)]
        checked = 0
        for i, s1 in enumerate(surfs):
            for s2 in surfs[i + 1:]:
                if intersect_surfaces(s1, s2) is None:
                    continue
                v1, v2 = classify_intersection(s1, s2)  # raises on mismatch
                if v1.tag is Verdict.CONDITION2:
                    assert v2.is_abelian
                if v2.tag is Verdict.CONDITION2:
                    assert v1.is_abelian
                checked += 1
        assert checked > 1000


class TestSolveCondition2:
    def test_families_on_1_2(self):
        fams = solve_condition2(Surface(1, 2))
        assert {(f.d, f.gamma) for f in fams} == {(3, 1), (3, 2)}
        lambdas = {f.lambda_pair(0).lam for f in fams}
        assert F(1, 3) in lambdas

    def test_extended_center_surface_rejected(self):
        with pytest.raises(ValueError):
            solve_condition2(Surface(1, -1))

    def test_whole_surface_rejected(self):
        with pytest.raises(DegenerateParametrizationError):
            solve_condition2(Surface(0, 3))

    def test_families_on_2_2(self):
        fams = solve_condition2(Surface(2, 2))
        assert {(f.d, f.gamma) for f in fams} == {(4, 1), (4, 3)}
        assert all(not f.integer_degenerate for f in fams)

    def test_integer_degenerate_family(self):
        # d = gcd(m,n) divides m: every member has integer lambda
        fams = solve_condition2(Surface(2, 4))
        degenerate = [f for f in fams if f.integer_degenerate]
        assert degenerate
        for f in degenerate:
            for k in range(-2, 3):
                pair = f.lambda_pair(k)
                assert pair.lam.denominator == 1
                assert classify_lambda(Surface(2, 4), pair).tag \
                    is Verdict.INTEGER_LAMBDA

    @pytest.mark.parametrize("mn", [(1, 2), (2, 2), (3, 4), (5, 4), (2, 4),
                                    (4, 6), (1, 5), (3, 6)])
    def test_against_brute_force_enumeration(self, mn):
        """Every rational in a window satisfying the raw predicate belongs to
        exactly the enumerated families, and vice versa."""
        s = Surface(*mn)
        fams = solve_condition2(s)

        def in_some_family(lam):
            for f in fams:
                diff = lam / s.m - f.lambda_over_m(0)
                if diff % F(s.n, f.g) == 0:
                    return True
            return False

        for den in range(1, 13):
            for num in range(-40, 41):
                lam = F(num, den)
                if lam in (0, 1):
                    continue
                d = raw_condition2(s, lam)
                if d is not None:
                    assert in_some_family(lam), (s, lam, d)

        for f in fams:
            for k in range(-3, 4):
                pair = f.lambda_pair(k)
                assert raw_condition2(s, pair.lam) == f.d


class TestSuperAbelianity:
    def test_passing_example(self):
        v = super_abelianity_check(3, 2)
        assert v.super_abelian and (v.beta0, v.beta0_prime) == (1, 1)

    def test_even_m_fails_first_condition(self):
        v = super_abelianity_check(2, 1)
        assert not v.super_abelian and v.failed_condition == 1

    def test_condition3_failure(self):
        v = super_abelianity_check(9, 4)
        assert not v.super_abelian and v.failed_condition == 3
        assert v.beta0_prime == 2  # beta0'+1 = 3 shares a factor with 9

    def test_no_bezout_reported(self):
        v = super_abelianity_check(9, 6)
        assert not v.super_abelian and v.failed_condition == 2

    def test_negative_m_reduction(self):
        v = super_abelianity_check(-9, 4)
        assert v.m_reduced_from == -9 and v.failed_condition == 3

    def test_m_one_is_critical_level(self):
        for lam in (-3, 0, 1, 7):
            assert super_abelianity_check(1, lam).super_abelian

    def test_canonical_bezout_range(self):
        for m in range(3, 16, 2):
            for lam in range(-15, 16):
                v = super_abelianity_check(m, lam)
                if v.beta0_prime is not None and m > 1:
                    assert 1 <= v.beta0_prime <= m - 1
                    assert v.beta0 * m - v.beta0_prime * lam == 1

    @staticmethod
    def _matching_exists(m, lam):
        """Backtracking search for a permutation matching the numerator and
        denominator shift factors up to whole periods."""
        cands = {k: [j for j in range(1, m + 1)
                     if (lam * j - (lam - 1) * k) % m == 0]
                 for k in range(1, m + 1)}
        used = [False] * (m + 1)

        def place(k):
            if k > m:
                return True
            for j in cands[k]:
                if not used[j]:
                    used[j] = True
                    if place(k + 1):
                        return True
                    used[j] = False
            return False

        return place(1)

    def test_against_permutation_matching_oracle(self):
        for m in range(1, 16, 2):
            for lam in range(-15, 16):
                assert super_abelianity_check(m, lam).super_abelian == \
                    self._matching_exists(m, lam), (m, lam)


class TestRealizeLine:
    def test_integer_lambda_example(self):
        out = realize_line_as_intersections(Surface(3, 6),
                                            LambdaPair.from_lambda(-1), 2)
        assert [(w.m, w.n) for w in out] == [(2, 5), (1, 4)]
        assert all(w.n - w.m == 3 for w in out)

    def test_condition2_example(self):
        out = realize_line_as_intersections(Surface(1, 2),
                                            LambdaPair.from_lambda(F(1, 3)), 1)
        assert [(w.m, w.n) for w in out] == [(2, 1)]
        lam = lambda_of_intersection(Surface(1, 2), out[0])
        assert lam.lam / 1 - lam.lam_star / 2 == 0

    def test_zero_lambda_rejected(self):
        with pytest.raises(ConstructionFailedError):
            realize_line_as_intersections(Surface(2, 3),
                                          LambdaPair.from_lambda(0), 1)

    @staticmethod
    def _brute_solutions(s, lam, box=8):
        """All surfaces |m'|,|n'| <= box with m'n lam + n'm lam* = mn."""
        out = []
        for mp in range(-box, box + 1):
            for np_ in range(-box, box + 1):
                if (mp, np_) == (0, 0):
                    continue
                if mp * s.n * lam.lam + np_ * s.m * lam.lam_star == s.m * s.n:
                    try:
                        if lambda_of_intersection(s, Surface(mp, np_)) == lam:
                            out.append((mp, np_))
                    except NoIntersectionError:
                        pass
        return set(out)

    @pytest.mark.parametrize("mn,lam", [
        ((3, 6), F(-1)), ((1, 2), F(1, 3)), ((2, 2), F(1, 2)),
        ((5, 2), F(15, 7)), ((4, 3), F(2)),
    ])
    def test_matches_brute_force(self, mn, lam):
        s = Surface(*mn)
        pair = LambdaPair.from_lambda(lam)
        brute = self._brute_solutions(s, pair)
        got = realize_line_as_intersections(s, pair, 3)
        for w in got:
            if abs(w.m) <= 8 and abs(w.n) <= 8:
                assert (w.m, w.n) in brute
            assert lambda_of_intersection(s, w) == pair

    @given(surfaces, st.integers(-9, 9), st.integers(1, 8))
    @settings(max_examples=60)
    def test_every_realization_verifies(self, s, num, den):
        if s.m == 0 or s.n == 0:
            return
        lam = LambdaPair.from_lambda(F(num, den))
        if lam.lam in (0, 1):
            return
        out = realize_line_as_intersections(s, lam, 4)
        assert len({(w.m, w.n) for w in out}) == 4
        for w in out:
            assert lambda_of_intersection(s, w) == lam


class TestRealizationConstructions:
    def test_bezout_family_members_verify(self):
        s = Surface(3, 6)
        lam = LambdaPair.from_lambda(-1)
        got = list(bezout_realizations(s, lam, range(-3, 4)))
        assert Surface(-3, 0) in got and Surface(9, 12) in got
        for w in got:
            assert lambda_of_intersection(s, w) == lam
            # lies on the primitive realization line n' - m' = 3
            assert w.n - w.m == 3

    def test_bezout_requires_integer_lambda(self):
        with pytest.raises(ConstructionFailedError):
            list(bezout_realizations(Surface(1, 2),
                                     LambdaPair.from_lambda(F(1, 3)), [0]))

    def test_cross_cancellation_family(self):
        s = Surface(1, 2)
        lam = LambdaPair.from_lambda(F(1, 3))
        got = list(cross_cancellation_realizations(s, lam, range(-3, 4)))
        assert Surface(2, 1) in got
        for w in got:
            assert lambda_of_intersection(s, w) == lam

    def test_anchor_sign_gate(self):
        # generic rational line: the uncorrected variant lands on -a/d and is
        # rejected by the verification gate, the corrected one passes
        s = Surface(2, 5)
        lam = LambdaPair.from_lambda(F(-2, 3))
        anchor, corrected = anchor_realization(s, lam)
        assert corrected
        assert anchor == Surface(7, 10)
        assert lambda_of_intersection(s, anchor) == lam

    def test_uncorrected_variant_misses_sign(self):
        s = Surface(2, 5)
        lam = LambdaPair.from_lambda(F(-2, 3))
        frac = lam.lam / s.m
        a, d = frac.numerator, frac.denominator
        cand = Surface((a + 1) * s.m + d, (a + 1) * s.n)
        got = lambda_of_intersection(s, cand)
        assert got.lam / s.m == -frac  # sign flip, hence the gate
