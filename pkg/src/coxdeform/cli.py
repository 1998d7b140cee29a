"""``arr``: command-line front end.

Exit codes: 0 success, 1 engine disagreement or failed check, 2 usage or
invalid input, 3 an enumeration cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import affine, checks, combinat, series
from .arrangement import (
    Arrangement,
    ArrangementError,
    CapExceeded,
    Caps,
    DEFAULT_CAPS,
    admissible_primes,
    bounded_count,
    build_family,
    chi_finite_field,
    chi_nbc,
    chi_to_poin,
    chi_whitney,
    essential_chi,
    region_count,
    regions_geometric,
)
from .combinat import CombinatError, EnumerationCapExceeded
from .exactmath import QPolynomial, RootFindingError, rational_str
from .series import SeriesError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _poly(p: QPolynomial) -> dict:
    return {"text": str(p), "coefficients": p.to_json()}


def _caps(args) -> Caps:
    return Caps(
        whitney=args.whitney_cap,
        geometric=args.geometric_cap,
        central_subsets=DEFAULT_CAPS.central_subsets,
        finite_field_dim=args.ff_dim_cap,
        finite_field_prime=args.ff_prime_cap,
    )


def _arrangement(args) -> Arrangement:
    if args.file:
        return Arrangement.load(args.file)
    if not args.family or args.n is None:
        raise UsageError("give --family and --n, or --file")
    params = {}
    for key in ("a", "b", "m"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if getattr(args, "R", None):
        params["R"] = args.R
    return build_family(args.family, args.n, **params)


def _describe(A: Arrangement) -> dict:
    return {"label": A.label, "dim": A.dim, "hyperplanes": len(A)}


def _chi_block(A: Arrangement, chi: QPolynomial) -> dict:
    out = {
        "chi": _poly(chi),
        "poincare": _poly(chi_to_poin(chi, A.dim)),
        "regions": region_count(chi, A.dim),
        "bounded": bounded_count(chi, A.dim),
    }
    if A.lineality:
        out["chi_essential"] = _poly(essential_chi(A, chi))
    return out


def _emit(report: dict, args, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# commands


def cmd_chi(args) -> int:
    A = _arrangement(args)
    caps = _caps(args)
    engines = ["nbc", "whitney"] if args.engine == "both" else [args.engine]
    results = {}
    for eng in engines:
        if eng == "whitney":
            chi = chi_whitney(A, cap=caps.whitney)
        else:
            chi = chi_nbc(A)
        results[eng] = chi
    polys = list(results.values())
    agree = all(p == polys[0] for p in polys)
    report = {
        "command": "chi",
        "arrangement": _describe(A),
        "results": {eng: _chi_block(A, chi) for eng, chi in results.items()},
    }
    if len(engines) > 1:
        report["agree"] = {"nbc/whitney": agree}
    lines = [f"{A.label or 'custom'}: d={A.dim}, {len(A)} hyperplanes"]
    for eng, chi in results.items():
        blk = report["results"][eng]
        lines.append(f"[{eng}] chi(q) = {chi}")
        if "chi_essential" in blk:
            lines.append(f"[{eng}] chi_essential(q) = {blk['chi_essential']['text']}")
        lines.append(f"[{eng}] Poin(q) = {blk['poincare']['text']}")
        lines.append(f"[{eng}] regions r = {blk['regions']}, bounded b = {blk['bounded']}")
    if len(engines) > 1:
        lines.append("engines agree" if agree else "ENGINES DISAGREE")
    _emit(report, args, lines)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_regions(args) -> int:
    A = _arrangement(args)
    caps = _caps(args)
    engines = ["geometric", "nbc", "whitney"] if args.engine == "all" else [args.engine]
    counts = {}
    sign_vectors = None
    for eng in engines:
        if eng == "geometric":
            rep = regions_geometric(A, keep_regions=args.sign_vectors, cap=caps.geometric)
            counts[eng] = (rep.r, rep.b)
            if args.sign_vectors:
                sign_vectors = [
                    {"signs": list(reg.signs), "witness": [rational_str(v) for v in reg.witness]}
                    for reg in rep.regions
                ]
        else:
            chi = chi_whitney(A, cap=caps.whitney) if eng == "whitney" else chi_nbc(A)
            counts[eng] = (region_count(chi, A.dim), bounded_count(chi, A.dim))
    agree = len(set(counts.values())) == 1
    report = {
        "command": "regions",
        "arrangement": _describe(A),
        "results": {eng: {"r": r, "b": b} for eng, (r, b) in counts.items()},
    }
    if len(engines) > 1:
        report["agree"] = agree
    if sign_vectors is not None:
        report["sign_vectors"] = sign_vectors
    lines = [f"{A.label or 'custom'}: d={A.dim}, {len(A)} hyperplanes"]
    lines += [f"[{eng}] r = {r}, b = {b}" for eng, (r, b) in counts.items()]
    if sign_vectors is not None:
        lines += [" ".join("+" if s > 0 else "-" for s in sv["signs"]) for sv in sign_vectors]
    if len(engines) > 1:
        lines.append("engines agree" if agree else "ENGINES DISAGREE")
    _emit(report, args, lines)
    return EXIT_OK if agree else EXIT_FAIL


COUNT_FAMILIES = (
    "alternating-trees",
    "lbs-trees",
    "semiacyclic-tournaments",
    "sleek-posets",
    "semiorders",
    "semiorders-labelled",
    "semiorders-unlabelled",
    "graded-forests",
    "forests",
    "semigeneric-chi",
)


def _count_one(family: str, n: int, args):
    if family == "alternating-trees":
        return combinat.count_alternating_trees(n, enumerate=args.enumerate)
    if family == "lbs-trees":
        return combinat.count_local_binary_search_trees(n)
    if family == "semiacyclic-tournaments":
        return combinat.count_semiacyclic_tournaments(n, method=args.method)
    if family == "sleek-posets":
        return combinat.count_sleek_posets(n)
    if family in ("semiorders", "semiorders-labelled"):
        return combinat.count_semiorders(n, labelled=True)
    if family == "semiorders-unlabelled":
        return combinat.count_semiorders(n, labelled=False)
    if family == "graded-forests":
        if args.a is None or args.b is None:
            raise UsageError("graded-forests needs --a and --b")
        return combinat.count_graded_forests(n, args.a, args.b)
    if family == "forests":
        return combinat.count_forests_weighted(n, args.m if args.m is not None else 1)
    if family == "semigeneric-chi":
        return combinat.semigeneric_chi_bruteforce(n)
    raise UsageError(f"unknown count family {family!r}")


def _count_json(family: str, value):
    if family == "forests":
        return {"poincare": _poly(value), "total": int(value(1))}
    if family == "semigeneric-chi":
        n = value.degree
        return {"chi": _poly(value), "regions": int((-1) ** n * value(-1))}
    return value


def cmd_count(args) -> int:
    family = args.family
    if family not in COUNT_FAMILIES:
        raise UsageError(f"unknown count family {family!r}; choose from {', '.join(COUNT_FAMILIES)}")
    ns = range(args.start, args.n + 1) if args.csv else [args.n]
    values = [(n, _count_one(family, n, args)) for n in ns]
    if args.csv:
        print("n,count")
        for n, v in values:
            print(f"{n},{v(1) if isinstance(v, QPolynomial) else v}")
        return EXIT_OK
    n, v = values[0]
    report = {"command": "count", "family": family, "n": n, "result": _count_json(family, v)}
    if family == "forests":
        lines = [f"{family} n={n}: Poin(q) = {v}, total = {v(1)}"]
    elif family == "semigeneric-chi":
        lines = [f"{family} n={n}: chi(q) = {v}, regions = {report['result']['regions']}"]
    else:
        lines = [f"{family} n={n}: {v}"]
    _emit(report, args, lines)
    return EXIT_OK


def _counts(f) -> list:
    """EGF coefficients n! a_n, as ints when integral and "p/q" strings otherwise."""
    return [int(c) if c.denominator == 1 else rational_str(c) for c in f.coeffs]


def _join(f) -> str:
    return ", ".join(str(c) for c in _counts(f))


def cmd_series(args) -> int:
    kind = args.kind
    report: dict = {"command": "series", "kind": kind, "order": args.order}
    lines = []
    ok = True
    if kind in ("affine", "qtower", "chi") and (args.a is None or args.b is None):
        raise UsageError(f"{kind} series needs --a and --b")
    if kind == "affine":
        a, b = args.a, args.b
        f = series.solve_truncated_affine_egf(a, b, args.order)
        res = series.affine_residual(f, a, b)
        ok = all(c == 0 for c in res.ordinary)
        eq = "f = 1 + x f^a" if a == b else "f^(b-a) = exp(x (f^a - f^b) / (1 - f))"
        report.update(equation=eq, a=a, b=b, counts=_counts(f), residual_zero=ok)
        lines.append(f"{eq} with a={a}, b={b}")
        lines.append(f"counts: {_join(f)}")
        lines.append(f"residual zero through x^{args.order}: {ok}")
    elif kind == "semigeneric":
        sg = series.solve_semigeneric(args.order)
        eq = "1 = y (2 - exp(x y)), z'/z = y^2, z(0) = 1"
        report.update(equation=eq, counts=_counts(sg.z), y=_counts(sg.y))
        lines += [eq, f"y: {_join(sg.y)}", f"z (counts): {_join(sg.z)}"]
    elif kind == "qtower":
        a, b = args.a, args.b
        qs = series.qk_tower(a, b, args.kmax, args.order)
        eq = "q_k' = -sum_{r=0}^k q_{r-a} q_{k-r-b}, q_j = 1 for j < 0, q_k(0) = 1"
        report.update(equation=eq, a=a, b=b, kmax=args.kmax, q=[_counts(s) for s in qs])
        lines.append(eq)
        if len(qs) > 1:
            ratio = qs[-2] / qs[-1]
            report["counts"] = _counts(ratio)
            lines.append(f"q_{args.kmax - 1}/q_{args.kmax}: {_join(ratio)}")
            if a + b >= 2:
                ok = ratio == series.solve_truncated_affine_egf(a, b, args.order)
                report["ratio_matches_f"] = ok
                lines.append(f"matches the functional-equation solution: {ok}")
        lines += [f"q_{k}: {_join(s)}" for k, s in enumerate(qs)]
    elif kind == "chi":
        if args.q is None:
            raise UsageError("chi series needs --q")
        f = series.solve_truncated_affine_egf(args.a, args.b, args.order)
        qv = Fraction(args.q)
        egf = series.chi_egf_from_f(f, qv)
        eq = "sum_n chi_n(q) x^n / n! = f(-x)^(-q)"
        report.update(equation=eq, a=args.a, b=args.b, q=rational_str(qv), counts=_counts(egf))
        lines += [f"{eq} at q={rational_str(qv)}", f"coefficients: {_join(egf)}"]
    else:
        raise UsageError(f"unknown series kind {kind!r}")
    _emit(report, args, lines)
    return EXIT_OK if ok else EXIT_FAIL


def _require(args, family: str, *names: str) -> None:
    missing = [f"--{x}" for x in names if getattr(args, x, None) is None]
    if missing:
        raise UsageError(f"{family} needs {' and '.join(missing)}")


def _closed_poly(args) -> tuple[QPolynomial, Fraction | None]:
    """(polynomial, expected real part or None) for the closed-form families."""
    fam = args.family.replace("_", "-").lower()
    if fam in ("trunc-affine", "linial", "shi", "ext-shi"):
        if fam == "linial":
            a, b = 0, 2
        elif fam == "shi":
            a, b = 1, 2
        elif fam == "ext-shi":
            _require(args, fam, "a")
            a, b = args.a, args.a + 1
        else:
            _require(args, fam, "a", "b")
            a, b = args.a, args.b
        _require(args, fam, "n")
        if a == b:
            return affine.chi_balanced(a, args.n), Fraction((2 * a - 1) * args.n, 2)
        lo, hi = min(a, b), max(a, b)
        if args.form == "operator":
            p = affine.chi_operator(lo, hi, args.n)
        else:
            p = affine.chi_corollary_forms(lo, hi, args.n, int(args.form))
        return p, affine.expected_affine_center(a, b, args.n)
    if fam == "balanced":
        _require(args, fam, "a", "n")
        return affine.chi_balanced(args.a, args.n), Fraction((2 * args.a - 1) * args.n, 2)
    if fam == "rootsystem":
        _require(args, fam, "R", "variant", "k", "n")
        return affine.chi_rootsystem(args.R, args.variant, args.k, args.n), None
    if fam == "exceptional":
        _require(args, fam, "which")
        return affine.exceptional_chi(args.which), None
    raise UsageError(f"unknown closed-form family {args.family!r}")


def cmd_chi_closed(args) -> int:
    p, _ = _closed_poly(args)
    report = {"command": "chi-closed", "family": args.family, "chi": _poly(p)}
    lines = [f"chi(q) = {p}"]
    if p.degree >= 0:
        r = int((-1) ** p.degree * p(-1))
        report["regions"] = r
        lines.append(f"regions r = {r}")
    _emit(report, args, lines)
    return EXIT_OK


def cmd_roots(args) -> int:
    p, expected = _closed_poly(args)
    rep = affine.check_root_location(p, expected, tol=args.tol)
    report = {"command": "roots", "family": args.family, **rep.to_dict()}
    lines = [
        f"chi(q) = {p}",
        f"expected real part {rational_str(rep.expected_real_part)}; max deviation {rep.max_deviation:.3e} (tol {args.tol:g})",
        f"reflection symmetric: {rep.symmetric}; functional equation exact: {rep.functional_equation}",
    ]
    lines += [f"  {z.real:+.12f} {z.imag:+.12f}i" for z in rep.roots]
    lines.append("PASS" if rep.ok else "FAIL")
    _emit(report, args, lines)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    A = _arrangement(args)
    caps = _caps(args)
    chi = chi_nbc(A)
    primes = [args.prime]
    primes += [p for p in admissible_primes(A, 3, start=args.prime + 1, caps=caps) if p != args.prime][:2]
    rows = {}
    for p in primes:
        count = chi_finite_field(A, p, caps)
        rows[p] = (count, int(chi(p)))
    agree = all(c == v for c, v in rows.values())
    report = {
        "command": "oracle",
        "arrangement": _describe(A),
        "chi": _poly(chi),
        "primes": [{"p": p, "points": c, "chi_at_p": v, "agree": c == v} for p, (c, v) in rows.items()],
        "agree": agree,
    }
    lines = [f"{A.label or 'custom'}: d={A.dim}, chi(q) = {chi}"]
    lines += [f"p={p}: points={c}, chi(p)={v} {'ok' if c == v else 'MISMATCH'}" for p, (c, v) in rows.items()]
    _emit(report, args, lines)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_verify(args) -> int:
    results = checks.run_suite(args.suite, threads=args.threads)
    ok = all(r.ok for r in results)
    if args.json:
        report = {
            "command": "verify",
            "suite": args.suite,
            "passed": ok,
            "results": [r.to_dict(timing=args.timing) for r in results],
        }
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.ok for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _family_flags(p: argparse.ArgumentParser, file_ok: bool = True) -> None:
    p.add_argument("--family", help="family tag, e.g. linial, shi, catalan0, trunc-affine")
    p.add_argument("--n", type=int, help="size parameter")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--m", type=int, help="colours per pair for the generic family")
    p.add_argument("--R", help="root system B, C, D or BC")
    if file_ok:
        p.add_argument("--file", help="arrangement JSON file")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: $ARR_THREADS or 1)")
    common.add_argument("--whitney-cap", type=int, default=DEFAULT_CAPS.whitney)
    common.add_argument("--geometric-cap", type=int, default=DEFAULT_CAPS.geometric)
    common.add_argument("--ff-dim-cap", type=int, default=DEFAULT_CAPS.finite_field_dim)
    common.add_argument("--ff-prime-cap", type=int, default=DEFAULT_CAPS.finite_field_prime)

    parser = argparse.ArgumentParser(prog="arr", description="Regions and characteristic polynomials of braid deformations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chi", parents=[common], help="characteristic polynomial")
    _family_flags(p)
    p.add_argument("--engine", choices=["nbc", "whitney", "both"], default="nbc")
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("regions", parents=[common], help="region and bounded-region counts")
    _family_flags(p)
    p.add_argument("--engine", choices=["geometric", "nbc", "whitney", "all"], default="geometric")
    p.add_argument("--sign-vectors", action="store_true", help="list each region's sign vector and witness")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("count", parents=[common], help="combinatorial enumerations")
    p.add_argument("--family", required=True, help=", ".join(COUNT_FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--m", type=int, help="uniform edge multiplicity for forests")
    p.add_argument("--enumerate", action="store_true", help="enumerate instead of using a formula")
    p.add_argument("--method", choices=["definition", "obstructions"], default="definition")
    p.add_argument("--csv", action="store_true", help="print a CSV table for n = start..N")
    p.add_argument("--start", type=int, default=0)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("series", parents=[common], help="generating-function solvers")
    p.add_argument("--kind", choices=["affine", "semigeneric", "qtower", "chi"], default="affine")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--kmax", type=int, default=12)
    p.add_argument("--q", help="rational value of q for --kind chi")
    p.set_defaults(func=cmd_series)

    for name, func, helptext in (
        ("roots", cmd_roots, "root location of a closed-form characteristic polynomial"),
        ("chi-closed", cmd_chi_closed, "closed-form characteristic polynomials"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--family", required=True,
                       help="trunc-affine, linial, shi, ext-shi, balanced, rootsystem, exceptional")
        p.add_argument("--n", type=int)
        p.add_argument("--a", type=int)
        p.add_argument("--b", type=int)
        p.add_argument("--R", help="B, C, D or BC")
        p.add_argument("--variant", choices=["odd", "even"], help="odd: (0,2k+1), even: (0,2k+2)")
        p.add_argument("--k", type=int)
        p.add_argument("--which", choices=list(affine.EXCEPTIONAL))
        p.add_argument("--form", choices=["operator", "1", "2", "3"], default="operator")
        if name == "roots":
            p.add_argument("--tol", type=float, default=1e-8)
        p.set_defaults(func=func)

    p = sub.add_parser("oracle", parents=[common], help="finite-field point count against chi(p)")
    _family_flags(p)
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--suite", choices=list(checks.SUITES), default="all")
    p.add_argument("--timing", action="store_true", help="include timings in JSON output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CapExceeded, EnumerationCapExceeded) as exc:
        print(f"arr: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ArrangementError, CombinatError, SeriesError, affine.AffineError, KeyError, ValueError) as exc:
        print(f"arr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RootFindingError as exc:
        print(f"arr: root finding failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
