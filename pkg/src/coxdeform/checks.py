"""The acceptance checks, shared by ``arr verify`` and the test suite.

Each check collects every failed sub-assertion instead of stopping at the
first, and reports its wall time against a budget.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import affine, combinat, series
from .arrangement import (
    build_family,
    chi_finite_field,
    chi_nbc,
    chi_whitney,
    regions_geometric,
    region_count,
)
from .exactmath import QPolynomial, catalan

q = QPolynomial.q

LINIAL = (1, 2, 7, 36, 246)
LINIAL_LARGE = (2104, 21652, 260720, 3598120, 56010096)
SEMIGENERIC_Z = (1, 1, 3, 19, 195, 2831, 53703)


class _Collector:
    def __init__(self):
        self.failures: list[str] = []
        self.count = 0

    def expect(self, ok: bool, what: str) -> None:
        self.count += 1
        if not ok:
            self.failures.append(what)

    def equal(self, got, want, what: str) -> None:
        self.expect(got == want, f"{what}: got {got}, expected {want}")


def _r_from_essential_chi(chi: QPolynomial, n: int) -> int:
    """Region count (-1)^{n-1} chi(-1) for the essential degree n-1 polynomial."""
    return int((-1) ** (n - 1) * chi(-1))


def _nbc_regions(tag: str, n: int, **kw) -> int:
    A = build_family(tag, n, **kw)
    return region_count(chi_nbc(A), A.dim)


# ---------------------------------------------------------------------------


def check_linial(c: _Collector) -> None:
    for n, want in enumerate(LINIAL, start=1):
        A = build_family("linial", n)
        chi_n = chi_nbc(A)
        chi_w = chi_whitney(A)
        c.equal(region_count(chi_n, n), want, f"NBC r(L_{n-1})")
        c.equal(region_count(chi_w, n), want, f"Whitney r(L_{n-1})")
        c.equal(regions_geometric(A).r, want, f"geometric r(L_{n-1})")
        c.equal(_r_from_essential_chi(affine.chi_operator(0, 2, n), n), want, f"operator r(L_{n-1})")
        c.equal(combinat.count_alternating_trees(n, enumerate=True), want, f"alternating trees n={n}")
    for n, want in zip(range(6, 11), LINIAL_LARGE):
        c.equal(combinat.alternating_tree_formula(n), want, f"tree formula n={n}")
        c.equal(_r_from_essential_chi(affine.chi_operator(0, 2, n), n), want, f"operator r(L_{n-1})")


def check_shi(c: _Collector) -> None:
    for a in (1, 2, 3):
        for n in range(1, 7):
            want = (a * n + 1) ** (n - 1)
            c.equal(_r_from_essential_chi(affine.chi_operator(a, a + 1, n), n), want, f"operator ext-Shi a={a} n={n}")
            A = build_family("ext_shi", n, a=a)
            if len(A) <= 18:
                c.equal(region_count(chi_nbc(A), n), want, f"NBC ext-Shi a={a} n={n}")
    for n in range(1, 9):
        c.equal(affine.chi_operator(1, 2, n), (q - n) ** (n - 1), f"chi^(1,2)_{n}")


def check_balanced(c: _Collector) -> None:
    for a in (1, 2):
        for n in range(1, 5):
            A = build_family("trunc_affine", n, a=a, b=a)
            full = affine.chi_balanced(a, n) * q
            c.equal(chi_nbc(A), full, f"NBC balanced a={a} n={n}")
            c.equal(chi_whitney(A), full, f"Whitney balanced a={a} n={n}")
    for a in (1, 2, 3):
        f = series.solve_truncated_affine_egf(a, a, 7)
        for n in range(1, 8):
            want = affine.balanced_region_product(a, n)
            c.equal(_r_from_essential_chi(affine.chi_balanced(a, n), n), want, f"balanced r a={a} n={n}")
            c.equal(f[n], want, f"balanced series coefficient a={a} n={n}")


def check_catalan(c: _Collector) -> None:
    for n in range(1, 6):
        c.equal(_nbc_regions("catalan0", n), math.factorial(n) * catalan(n), f"r(C0_{n-1})")
    for n in range(0, 6):
        lhs, rhs = combinat.stirling_relation_sides(n)
        c.equal(lhs, rhs, f"Stirling relation n={n}")
    c.expect(combinat.catalan_egf_identity(6), "Catalan EGF identity through t^6")


def check_semigeneric(c: _Collector) -> None:
    sg = series.solve_semigeneric(6)
    c.equal(tuple(series.counts(sg.z)), SEMIGENERIC_Z, "z coefficients")
    for n in range(1, 6):
        c.equal(combinat.semigeneric_regions_bruteforce(n), SEMIGENERIC_Z[n], f"bipartite brute force n={n}")
    for n in range(1, 5):
        c.equal(regions_geometric(build_family("semigeneric", n)).r, SEMIGENERIC_Z[n], f"geometric semigeneric n={n}")
    chis = [QPolynomial([1])] + [combinat.semigeneric_chi_bruteforce(n) for n in range(1, 6)]
    for qv in (1, 2, -1):
        egf = series.chi_egf_from_f(sg.z.truncate(5), qv)
        for n in range(6):
            c.equal(egf[n], chis[n](qv), f"semigeneric chi EGF q={qv} n={n}")


AFFINE_PAIRS = ((0, 2), (1, 2), (1, 3), (2, 3), (0, 3))


def check_series(c: _Collector) -> None:
    for a, b in AFFINE_PAIRS:
        f = series.solve_truncated_affine_egf(a, b, 10)
        res = series.affine_residual(f, a, b)
        c.expect(all(v == 0 for v in res.ordinary), f"residual ({a},{b}) mod x^11")
    for a, b in ((0, 2), (1, 2)):
        qs = series.qk_tower(a, b, 12, 8)
        f = series.solve_truncated_affine_egf(a, b, 8)
        c.equal(qs[11] / qs[12], f, f"q-tower ratio ({a},{b})")
    for a, b in AFFINE_PAIRS:
        f = series.solve_truncated_affine_egf(a, b, 6)
        for qv in (-1, 1, 3):
            egf = series.chi_egf_from_f(f, qv)
            for n in range(7):
                want = 1 if n == 0 else qv * affine.chi_operator(min(a, b), max(a, b), n)(qv)
                c.equal(egf[n], want, f"chi EGF ({a},{b}) q={qv} n={n}")


def check_root_location(c: _Collector) -> None:
    for b in range(1, 5):
        for a in range(0, b):
            if a + b < 2:
                continue
            for n in range(2, 9):
                p = affine.chi_operator(a, b, n)
                rep = affine.check_root_location(p, affine.expected_affine_center(a, b, n), tol=1e-8)
                c.expect(rep.max_deviation < 1e-8, f"root real parts ({a},{b},{n}): deviation {rep.max_deviation}")
                c.expect(rep.symmetric, f"root symmetry ({a},{b},{n})")
                c.expect(rep.functional_equation, f"functional equation ({a},{b},{n})")
    for a in range(1, 5):
        for n in range(2, 9):
            c.expect(affine.balanced_factors_exactly(a, n), f"balanced factorization a={a} n={n}")
            center = Fraction((2 * a - 1) * n, 2)
            c.expect(affine.functional_equation_holds(affine.chi_balanced(a, n), center),
                     f"balanced functional equation a={a} n={n}")


def check_rootsystems(c: _Collector) -> None:
    for system in ("B", "C", "D", "BC"):
        for variant in ("odd", "even"):
            for k in (0, 1):
                for n in range(3 if system == "D" else 2, 6):
                    p = affine.chi_rootsystem(system, variant, k, n)
                    h = -p[p.degree - 1] / p.leading
                    rep = affine.check_root_location(p, h / n, tol=1e-8)
                    tag = f"{system}_{n} {variant} k={k}"
                    c.expect(rep.max_deviation < 1e-8, f"{tag}: deviation {rep.max_deviation}")
                    c.expect(rep.functional_equation, f"{tag}: functional equation")
    c.equal(affine.exceptional_chi("F4_alt"), affine.exceptional_chi("F4_02"), "F4 alternative form")
    c.equal(affine.exceptional_chi("E6_alt"), affine.exceptional_chi("E6_02"), "E6 alternative form")
    for which, h, n in (("F4_02", 24, 4), ("E6_02", 36, 6)):
        p = affine.exceptional_chi(which)
        c.equal(-p[p.degree - 1], h, f"{which} root sum")
        rep = affine.check_root_location(p, Fraction(h, n), tol=1e-8)
        c.expect(rep.max_deviation < 1e-8, f"{which}: deviation {rep.max_deviation}")
        c.equal(rep.expected_real_part, 6, f"{which} real part")


def check_finite_field(c: _Collector) -> None:
    closed = {
        "linial": affine.chi_operator(0, 2, 3),
        "shi": affine.chi_operator(1, 2, 3),
        "catalan0": affine.chi_balanced(2, 3),
    }
    for tag, chi in closed.items():
        A = build_family(tag, 3)
        for p in (11, 13, 17):
            c.equal(chi_finite_field(A, p), p * chi(p), f"{tag} n=3 over F_{p}")


def check_characterizations(c: _Collector) -> None:
    for n in range(1, 6):
        r = _nbc_regions("linial", n)
        c.equal(combinat.count_sleek_posets(n), r, f"sleek posets n={n}")
        c.equal(combinat.count_semiacyclic_tournaments(n), r, f"semiacyclic tournaments n={n}")
        c.expect(combinat.semiacyclic_filters_agree(n), f"semiacyclicity filters n={n}")
        c.equal(combinat.count_semiorders(n, labelled=False), catalan(n), f"unlabelled semiorders n={n}")
        for a, b in ((0, 2), (1, 2)):
            c.equal(combinat.count_graded_forests(n, a, b), _nbc_regions("trunc_affine", n, a=a, b=b),
                    f"graded forests ({a},{b}) n={n}")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    suite: str
    budget: float  # seconds
    run: Callable[[_Collector], None]


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "Linial numbers, five ways", "linial", 120, check_linial),
    Criterion(2, "Shi and extended Shi", "shi", 60, check_shi),
    Criterion(3, "Balanced case", "shi", 60, check_balanced),
    Criterion(4, "Catalan suite", "catalan", 120, check_catalan),
    Criterion(5, "Semigeneric suite", "semigeneric", 180, check_semigeneric),
    Criterion(6, "Functional equations", "series", 60, check_series),
    Criterion(7, "Root location", "roots", 60, check_root_location),
    Criterion(8, "Root systems and exceptional data", "roots", 60, check_rootsystems),
    Criterion(9, "Finite-field oracle", "oracle", 60, check_finite_field),
    Criterion(10, "Characterization agreement", "linial", 300, check_characterizations),
)

SUITES = ("all", "linial", "shi", "catalan", "semigeneric", "roots", "series", "oracle")


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    seconds: float
    budget: float
    assertions: int
    failures: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def within_budget(self) -> bool:
        return self.seconds <= self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        extra = ""
        if self.error:
            extra = f"  error: {self.error}"
        elif self.failures:
            extra = f"  first failure: {self.failures[0]}"
        elif not self.within_budget:
            extra = "  over time budget"
        return (f"[{verdict}] {self.number:>2}. {self.name}: {self.assertions} assertions, "
                f"{self.seconds:.1f}s / {self.budget:.0f}s{extra}")

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "criterion": self.number,
            "name": self.name,
            "passed": self.ok,
            "assertions": self.assertions,
            "failures": self.failures,
            "error": self.error,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
            out["budget"] = self.budget
        return out


def select(suite: str = "all") -> list[Criterion]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return [c for c in CRITERIA if suite == "all" or c.suite == suite]


def run_criterion(number: int) -> CheckResult:
    crit = next(c for c in CRITERIA if c.number == number)
    col = _Collector()
    error = None
    start = time.perf_counter()
    try:
        crit.run(col)
    except Exception as exc:  # a crash is a failed check, not a crashed suite
        error = f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    passed = error is None and not col.failures
    return CheckResult(crit.number, crit.name, passed, seconds, crit.budget, col.count, col.failures, error)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("ARR_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(suite: str = "all", threads: int | None = None) -> list[CheckResult]:
    """Run the selected criteria; result order follows the criterion numbers."""
    chosen = [c.number for c in select(suite)]
    threads = default_threads() if threads is None else max(1, threads)
    if threads == 1 or len(chosen) == 1:
        return [run_criterion(k) for k in chosen]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_criterion, chosen))
