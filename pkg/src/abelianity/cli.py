"""Command-line interface: classification, enumeration and verification.

Machine-readable output: JSON documents (one object, or one object per line
for `scan`) and CSV for `poisson`.  Rationals are always serialized exactly
as "a/b" strings, never as floats.  Exit codes: 0 success, 1 verification
mismatch (exact verdict and numeric witness disagree), 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import elliptic, lattice, oracle, poisson
from .elliptic import EllipticContext, PoleError
from .lattice import LambdaPair, Surface

# numeric witness thresholds: abelian lines must sit below SOUND_TOL,
# non-abelian lines must exceed COMPLETE_TOL somewhere on the grid
SOUND_TOL = 1e-9
COMPLETE_TOL = 1e-4


def _frac_str(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _parse_frac(text: str) -> Fraction:
    return Fraction(text.strip())


def _parse_surface(text: str) -> Surface:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"surface must be 'm,n', got {text!r}")
    return Surface(int(parts[0]), int(parts[1]))


def _parse_grid(text: str) -> list[complex]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"grid must be 'r1,r2,count', got {text!r}")
    return elliptic.verification_grid(float(parts[0]), float(parts[1]),
                                      int(parts[2]))


def _surface_dict(s: Surface) -> dict:
    return {"m": s.m, "n": s.n}


def _lambda_dict(lam: LambdaPair | None) -> dict | None:
    if lam is None:
        return None
    return {"lambda": _frac_str(lam.lam), "lambda_star": _frac_str(lam.lam_star)}


def _verdict_dict(v: lattice.AbelianityVerdict) -> dict:
    wit = None
    if v.witnesses is not None:
        wit = {k: getattr(v.witnesses, k)
               for k in ("d", "gamma", "gamma_prime", "g", "beta0", "beta0_prime")
               if getattr(v.witnesses, k) is not None}
    return {"tag": v.tag.value, "abelian": v.is_abelian,
            "witnesses": wit, "n_caveat": v.n_caveat}


def _line_dict(line: lattice.LineParams | None) -> dict | None:
    if line is None:
        return None
    return {"e_p": _frac_str(line.e_p),
            "e_pstar": _frac_str(line.e_pstar),
            "c_over_N": _frac_str(line.c_over_N),
            "algebra_valid": line.algebra_valid}


def emit(report, fmt: str = "json") -> str:
    """Serialize a report deterministically (fixed field order)."""
    if fmt == "json":
        return json.dumps(report)
    if fmt == "csv":
        header, rows = report
        lines = [",".join(header)]
        lines += [",".join(row) for row in rows]
        return "\n".join(lines)
    raise ValueError(f"unknown format {fmt!r}")


def _write_output(text: str, out_path: str | None) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")
        text += "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)


def _side_lambda(sa: Surface, sb: Surface) -> LambdaPair | None:
    if sa.m == 0 or sa.n == 0:
        return None
    return lattice.lambda_of_intersection(sa, sb)


def _cmd_intersect(args) -> int:
    s1, s2 = args.s1, args.s2
    line = lattice.intersect_surfaces(s1, s2)
    report = {"s1": _surface_dict(s1), "s2": _surface_dict(s2), "N": args.N,
              "intersection": _line_dict(line),
              "lambda_s1": None, "lambda_s2": None,
              "verdict_s1": None, "verdict_s2": None}
    if line is not None:
        v1, v2 = lattice.classify_intersection(s1, s2, args.N)
        report["lambda_s1"] = _lambda_dict(_side_lambda(s1, s2))
        report["lambda_s2"] = _lambda_dict(_side_lambda(s2, s1))
        report["verdict_s1"] = _verdict_dict(v1)
        report["verdict_s2"] = _verdict_dict(v2)
    _write_output(emit(report), args.out)
    return 0


def _zero_lambda(lam: LambdaPair) -> bool:
    return lam.lam == 0 or lam.lam_star == 0


def _cmd_classify(args) -> int:
    s = args.surface
    lam = LambdaPair.from_lambda(args.lam)
    verdict = lattice.classify_lambda(s, lam, args.N)
    mset = oracle.exchange_exponents(s, lam)
    oracle_abelian = oracle.is_abelian(mset)
    # lambda=0 / lambda*=0 cancels identically but leaves the |p|<1 moduli
    # space, so the verdict is NotAbelian by convention; not a mismatch.
    excluded = _zero_lambda(lam) and not s.is_whole_surface_abelian()
    consistent = (verdict.is_abelian == oracle_abelian) or \
        (excluded and oracle_abelian and not verdict.is_abelian)
    report = {"surface": _surface_dict(s), "lambda": _lambda_dict(lam),
              "N": args.N, "verdict": _verdict_dict(verdict),
              "oracle_abelian": oracle_abelian,
              "zero_lambda_exclusion": excluded,
              "consistent": consistent}
    _write_output(emit(report), args.out)
    return 0 if consistent else 1


def _cmd_enumerate_lines(args) -> int:
    s = args.surface
    families = lattice.solve_condition2(s)
    ks = list(range(args.k_min, args.k_max + 1))
    fams = []
    for fam in families:
        members = []
        for k in ks:
            pair = fam.lambda_pair(k)
            tag = lattice.classify_lambda(s, pair, args.N).tag.value
            members.append({"k": k, "lambda": _frac_str(pair.lam),
                            "lambda_star": _frac_str(pair.lam_star),
                            "tag": tag})
        fams.append({"d": fam.d, "gamma": fam.gamma,
                     "gamma_prime": fam.gamma_prime, "g": fam.g,
                     "ell": fam.ell, "ell_prime": fam.ell_prime,
                     "integer_degenerate": fam.integer_degenerate,
                     "members": members})
    report = {"surface": _surface_dict(s), "N": args.N, "families": fams}
    _write_output(emit(report), args.out)
    return 0


def _cmd_surfaces_through(args) -> int:
    s1, s2 = args.s1, args.s2
    line = lattice.intersect_surfaces(s1, s2)
    if line is None:
        print(f"error: {s1} and {s2} do not intersect", file=sys.stderr)
        return 2
    surfs = lattice.surfaces_through_line(s1, s2, range(args.t_min, args.t_max + 1))
    report = {"s1": _surface_dict(s1), "s2": _surface_dict(s2),
              "line": _line_dict(line),
              "surfaces": [_surface_dict(w) for w in surfs]}
    _write_output(emit(report), args.out)
    return 0


def _grid_max_deviation(ctx: EllipticContext, evaluate, grid) -> tuple[float, int]:
    """Max |value - 1| over the grid, skipping pole-adjacent points."""
    worst = 0.0
    used = 0
    for x in grid:
        try:
            val = evaluate(x)
        except PoleError:
            continue
        used += 1
        worst = max(worst, abs(val - 1.0))
    return worst, used


def _cmd_verify_y(args) -> int:
    s = args.surface
    lam = None if args.lam is None else LambdaPair.from_lambda(args.lam)
    if not s.is_whole_surface_abelian() and lam is None:
        print("error: --lambda is required unless m=0 or n=0", file=sys.stderr)
        return 2
    ctx = EllipticContext(N=args.N, q=args.q)
    mset = oracle.exchange_exponents(s, lam)
    oracle_abelian = oracle.is_abelian(mset)
    if s.is_whole_surface_abelian():
        verdict = lattice.classify_lambda(s, LambdaPair.from_lambda(0), args.N)
        excluded = False
    else:
        verdict = lattice.classify_lambda(s, lam, args.N)
        excluded = _zero_lambda(lam)
    worst, used = _grid_max_deviation(
        ctx, lambda x: elliptic.yfunc(ctx, s, lam, x), args.grid)
    collapses = oracle.cycle_collapses(mset, args.N)
    if oracle_abelian or collapses:
        numeric_ok = worst < SOUND_TOL
    elif args.N == 2:
        numeric_ok = True  # sufficient-only regime: no completeness claim
    else:
        numeric_ok = worst > COMPLETE_TOL
    classification_ok = (verdict.is_abelian == oracle_abelian) or \
        (excluded and oracle_abelian)
    report = {"surface": _surface_dict(s), "lambda": _lambda_dict(lam),
              "N": args.N, "q": args.q,
              "verdict": _verdict_dict(verdict),
              "oracle_abelian": oracle_abelian,
              "cycle_collapse": collapses and not oracle_abelian,
              "max_abs_y_minus_1": worst,
              "points_evaluated": used,
              "numeric_consistent": numeric_ok,
              "classification_consistent": classification_ok}
    _write_output(emit(report), args.out)
    return 0 if (numeric_ok and classification_ok) else 1


def _cmd_verify_super(args) -> int:
    verdict = lattice.super_abelianity_check(args.m, args.lam)
    mset = oracle.centrality_exponents(abs(args.m), args.lam)
    oracle_empty = mset.is_empty()
    ctx = EllipticContext(N=args.N, q=args.q)
    worst, used = _grid_max_deviation(
        ctx, lambda x: elliptic.centrality_ratio(ctx, abs(args.m), args.lam, x),
        args.grid)
    collapses = oracle.cycle_collapses(mset, args.N)
    if oracle_empty or collapses:
        numeric_ok = worst < SOUND_TOL
    else:
        numeric_ok = worst > COMPLETE_TOL
    consistent = (verdict.super_abelian == oracle_empty) and numeric_ok
    report = {"m": args.m, "lambda": args.lam, "N": args.N, "q": args.q,
              "verdict": {"super_abelian": verdict.super_abelian,
                          "failed_condition": verdict.failed_condition,
                          "beta0": verdict.beta0,
                          "beta0_prime": verdict.beta0_prime,
                          "m_reduced_from": verdict.m_reduced_from},
              "oracle_empty": oracle_empty,
              "cycle_collapse": collapses and not oracle_empty,
              "max_abs_ratio_minus_1": worst,
              "points_evaluated": used,
              "consistent": consistent}
    _write_output(emit(report), args.out)
    return 0 if consistent else 1


def _cmd_poisson(args) -> int:
    s = args.surface
    lam = LambdaPair.from_lambda(args.lam)
    verdict = lattice.classify_lambda(s, lam, args.N)
    if verdict.tag not in (lattice.Verdict.INTEGER_LAMBDA,
                           lattice.Verdict.CONDITION2,
                           lattice.Verdict.EXTENDED_CENTER):
        print(f"error: no Poisson structure off abelianity lines "
              f"(verdict {verdict.tag.value})", file=sys.stderr)
        return 2
    try:
        params = poisson.params_for_line(s, lam)
    except poisson.DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    ctx = EllipticContext(N=args.N, q=args.q)
    k, kp = args.kk
    evaluate = (lambda x: poisson.f_kk(ctx, params, k, kp, x)) \
        if (k, kp) != (1, 1) else (
        (lambda x: poisson.f_series(ctx, params, x)) if args.route == "series"
        else (lambda x: poisson.f_compact(ctx, params, x)))
    rows = []
    for x in args.grid:
        try:
            val = evaluate(x)
        except PoleError:
            continue
        rows.append((f"{x.real:.17g}", f"{x.imag:.17g}",
                     f"{val.real:.17g}", f"{val.imag:.17g}"))
    _write_output(emit((("x_re", "x_im", "f_re", "f_im"), rows), "csv"), args.out)
    return 0


def _cmd_scan(args) -> int:
    box = args.box
    surfaces = [Surface(m, n)
                for m in range(-box, box + 1)
                for n in range(-box, box + 1)
                if (m, n) != (0, 0)]
    lines = []
    for i, s1 in enumerate(surfaces):
        for s2 in surfaces[i + 1:]:
            line = lattice.intersect_surfaces(s1, s2)
            if line is None:
                continue
            v1, v2 = lattice.classify_intersection(s1, s2, args.N)
            lam1 = _side_lambda(s1, s2)
            lam2 = _side_lambda(s2, s1)
            o1 = oracle.is_abelian(oracle.exchange_exponents(s1, lam1))
            o2 = oracle.is_abelian(oracle.exchange_exponents(s2, lam2))
            lines.append(((s1.m, s1.n, s2.m, s2.n), {
                "s1": [s1.m, s1.n], "s2": [s2.m, s2.n],
                "e_p": _frac_str(line.e_p),
                "e_pstar": _frac_str(line.e_pstar),
                "c_over_N": _frac_str(line.c_over_N),
                "lambda_s1": None if lam1 is None else _frac_str(lam1.lam),
                "lambda_s2": None if lam2 is None else _frac_str(lam2.lam),
                "tag_s1": v1.tag.value, "tag_s2": v2.tag.value,
                "oracle_agree": (v1.is_abelian == o1 and v2.is_abelian == o2),
            }))
    lines.sort(key=lambda kv: kv[0])
    text = "\n".join(emit(doc) for _, doc in lines)
    _write_output(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abelianity",
        description="Classify and verify abelianity lines on critical "
                    "surfaces of deformed W-algebra structure functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, numeric=False):
        p.add_argument("--N", type=int, default=3,
                       help="algebra rank parameter (default 3)")
        p.add_argument("--out", default=None,
                       help="also write the output bytes to this path")
        if numeric:
            p.add_argument("--q", type=float, default=0.6,
                           help="deformation parameter in (0,1)")
            p.add_argument("--grid", type=_parse_grid,
                           default=elliptic.verification_grid(),
                           help="evaluation grid 'r1,r2,count'")

    p = sub.add_parser("intersect", help="intersect two critical surfaces")
    p.add_argument("--s1", type=_parse_surface, required=True)
    p.add_argument("--s2", type=_parse_surface, required=True)
    add_common(p)
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("classify", help="classify a line on one surface")
    p.add_argument("--surface", type=_parse_surface, required=True)
    p.add_argument("--lambda", dest="lam", type=_parse_frac, required=True)
    add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("enumerate-lines",
                       help="enumerate cross-cancellation line families")
    p.add_argument("--surface", type=_parse_surface, required=True)
    p.add_argument("--k-min", type=int, default=-2)
    p.add_argument("--k-max", type=int, default=2)
    add_common(p)
    p.set_defaults(func=_cmd_enumerate_lines)

    p = sub.add_parser("surfaces-through",
                       help="surfaces through an intersection line")
    p.add_argument("--s1", type=_parse_surface, required=True)
    p.add_argument("--s2", type=_parse_surface, required=True)
    p.add_argument("--t-min", type=int, default=-5)
    p.add_argument("--t-max", type=int, default=5)
    add_common(p)
    p.set_defaults(func=_cmd_surfaces_through)

    p = sub.add_parser("verify-y",
                       help="verify a verdict against the numeric exchange function")
    p.add_argument("--surface", type=_parse_surface, required=True)
    p.add_argument("--lambda", dest="lam", type=_parse_frac, default=None)
    add_common(p, numeric=True)
    p.set_defaults(func=_cmd_verify_y)

    p = sub.add_parser("verify-super",
                       help="verify a super-abelianity verdict numerically")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    add_common(p, numeric=True)
    p.set_defaults(func=_cmd_verify_super)

    p = sub.add_parser("poisson",
                       help="evaluate the Poisson structure function on a grid")
    p.add_argument("--surface", type=_parse_surface, required=True)
    p.add_argument("--lambda", dest="lam", type=_parse_frac, required=True)
    p.add_argument("--kk", type=lambda t: tuple(int(v) for v in t.split(",")),
                   default=(1, 1), help="multi-index 'k,kp' (default 1,1)")
    p.add_argument("--route", choices=("compact", "series"), default="compact")
    add_common(p, numeric=True)
    p.set_defaults(func=_cmd_poisson)

    p = sub.add_parser("scan", help="sweep all surface pairs within a box")
    p.add_argument("--box", type=int, required=True)
    add_common(p)
    p.set_defaults(func=_cmd_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, lattice.NoIntersectionError,
            lattice.DegenerateParametrizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except lattice.CrossCheckError as exc:
        print(f"verification mismatch: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
