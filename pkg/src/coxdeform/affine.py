"""Characteristic polynomials of truncated affine arrangements.

The workhorse is the shift operator ``S: p(q) -> p(q - 1)``.  Polynomials in
``S`` act on ``QPolynomial`` through :func:`poly_shift`.  Root-system tables
and the two exceptional polynomials are embedded verbatim, and
:func:`check_root_location` tests the vertical-line root law numerically and
the matching functional equation exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmath import QPolynomial, poly_complex_roots, poly_shift, to_rational

q = QPolynomial.q


class AffineError(ValueError):
    pass


# ---------------------------------------------------------------------------
# operator expressions


def s_block(step: int, top: int) -> QPolynomial:
    """1 + S^step + S^(2 step) + ... + S^top as a polynomial in S."""
    if step < 1 or top < 0 or top % step:
        raise AffineError(f"bad geometric block step={step} top={top}")
    return QPolynomial([1 if k % step == 0 else 0 for k in range(top + 1)])


def apply_operator(op: QPolynomial, p: QPolynomial) -> QPolynomial:
    """Apply sum_k c_k S^k to p."""
    acc = QPolynomial()
    for k, c in enumerate(op.coeffs):
        if c:
            acc = acc + poly_shift(p, k) * c
    return acc


@dataclass(frozen=True)
class OperatorExpr:
    """``prefactor * prod F_i(S)^{e_i}`` acting on a base polynomial."""

    prefactor: Fraction
    factors: tuple[tuple[QPolynomial, int], ...]

    def __post_init__(self):
        if to_rational(self.prefactor) == 0:
            raise AffineError("operator prefactor must be nonzero")
        for _, e in self.factors:
            if e < 1:
                raise AffineError("operator exponents must be >= 1")

    def expand(self) -> QPolynomial:
        op = QPolynomial([self.prefactor])
        for f, e in self.factors:
            op = op * f ** e
        return op

    def value_at_one(self) -> Fraction:
        v = to_rational(self.prefactor)
        for f, e in self.factors:
            v *= f(1) ** e
        return v

    def normalized(self) -> "OperatorExpr":
        return OperatorExpr(to_rational(self.prefactor) / self.value_at_one(), self.factors)

    def apply(self, p: QPolynomial) -> QPolynomial:
        return apply_operator(self.expand(), p)


def _require_integral(p: QPolynomial, what: str) -> QPolynomial:
    if any(c.denominator != 1 for c in p.coeffs):
        raise AffineError(f"{what} produced non-integral coefficients: {p}")
    return p


# ---------------------------------------------------------------------------
# type A


def affine_operator(a: int, b: int, n: int) -> OperatorExpr:
    if not 0 <= a < b:
        raise AffineError(f"need 0 <= a < b, got a={a}, b={b}; use chi_balanced for a = b")
    block = QPolynomial([0] * a + [1] * (b - a))
    return OperatorExpr(Fraction(1, (b - a) ** n), ((block, n),))


def chi_operator(a: int, b: int, n: int) -> QPolynomial:
    """chi_n^{ab}(q) in the essential n-1 dimensional space."""
    if n < 1:
        raise AffineError("n must be >= 1")
    p = affine_operator(a, b, n).apply(q ** (n - 1))
    return _require_integral(p, f"chi_operator({a},{b},{n})")


def chi_balanced(a: int, n: int) -> QPolynomial:
    if a < 1:
        raise AffineError("chi_balanced needs a >= 1")
    if n < 1:
        raise AffineError("n must be >= 1")
    return QPolynomial.from_roots(a * n - j for j in range(1, n))


def balanced_region_product(a: int, n: int) -> int:
    """an(an-1)...(an-n+2), the region count in the balanced case."""
    return math.prod(a * n - j for j in range(n - 1))


def balanced_factors_exactly(a: int, n: int) -> bool:
    """Divide chi_balanced by each predicted linear factor; no numerics."""
    p = chi_balanced(a, n)
    for j in range(1, n):
        p, rem = p.divmod(q - (a * n - j))
        if not rem.is_zero():
            return False
    return p == QPolynomial([1])


def chi_corollary_forms(a: int, b: int, n: int, which: int) -> QPolynomial:
    """The three expanded forms of the operator formula."""
    if not 0 <= a < b:
        raise AffineError(f"need 0 <= a < b, got a={a}, b={b}")
    if n < 1:
        raise AffineError("n must be >= 1")
    r = b - a
    scale = Fraction(1, r ** n)
    acc = QPolynomial()
    if which == 1:
        for phi in itertools.product(range(a, b), repeat=n):
            acc = acc + (q - sum(phi)) ** (n - 1)
    elif which == 2:
        # the inner S-series is (1 - S^r)^n / (1 - S)^n, so s runs to n(r-1)
        for s in range(n * (r - 1) + 1):
            for l in range(min(n, s // r) + 1):
                c = (-1) ** l * math.comb(n, l) * math.comb(s - r * l + n - 1, n - 1)
                acc = acc + (q - s - a * n) ** (n - 1) * c
    elif which == 3:
        for parts in _compositions(n, r):
            shift = sum((a + i) * m for i, m in enumerate(parts))
            acc = acc + (q - shift) ** (n - 1) * _multinomial(parts)
    else:
        raise AffineError("which must be 1, 2 or 3")
    return acc * scale


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(parts: Sequence[int]) -> int:
    out, used = 1, 0
    for m in parts:
        used += m
        out *= math.comb(used, m)
    return out


def translation_identity_holds(a: int, b: int, n: int) -> bool:
    return chi_operator(a, b, n) == poly_shift(chi_operator(0, b - a, n), a * n)


# ---------------------------------------------------------------------------
# other root systems


def rootsystem_operator(system: str, variant: str, k: int, n: int) -> tuple[OperatorExpr, QPolynomial]:
    """Operator and base polynomial for A^{0,2k+1} ("odd") or A^{0,2k+2} ("even")."""
    system = system.upper()
    if k < 0:
        raise AffineError("k must be >= 0")
    if system not in ("B", "C", "D", "BC"):
        raise AffineError(f"unknown root system {system!r}")
    if variant not in ("odd", "even"):
        raise AffineError("variant must be 'odd' (0,2k+1) or 'even' (0,2k+2)")
    min_n = 3 if system == "D" else 2
    if n < min_n:
        raise AffineError(f"{system}_n needs n >= {min_n}")
    if variant == "even":
        small, big, base = s_block(2, 2 * k), s_block(2, 4 * k + 2), (q - 1) ** n
    else:
        small, big, base = s_block(1, 2 * k), s_block(2, 4 * k), q ** n
    if system in ("B", "C"):
        factors = [(small, 2), (big, n - 1)]
    elif system == "D":
        factors = [(small, 4), (big, n - 3)]
        if variant == "even":
            factors.insert(0, (s_block(2, 2), 1))
    else:
        factors = [(small, 1), (big, n)]
    factors = tuple((f, e) for f, e in factors if e > 0)
    return OperatorExpr(Fraction(1), factors).normalized(), base


def chi_rootsystem(system: str, variant: str, k: int, n: int) -> QPolynomial:
    op, base = rootsystem_operator(system, variant, k, n)
    p = op.apply(base)
    if p.leading != 1:
        raise AffineError(f"normalized root-system polynomial is not monic: {p}")
    return p


def rootsystem_params(variant: str, k: int) -> tuple[int, int]:
    """(a, b) of the arrangement described by (variant, k)."""
    return (0, 2 * k + 1) if variant == "odd" else (0, 2 * k + 2)


# ---------------------------------------------------------------------------
# exceptional types


def _exceptional(which: str) -> QPolynomial:
    if which == "F4_02":
        return QPolynomial([2917, -1368, 258, -24, 1])
    if which == "E6_02":
        return QPolynomial([212002, -140076, 40185, -6480, 630, -36, 1])
    if which == "F4_alt":
        s = (q - 1) ** 4 + 3 * (q - 5) ** 4 + 3 * (q - 7) ** 4 + (q - 11) ** 4
        return s / 8 - 48
    if which == "E6_alt":
        weights = ((61, 1), (352, 4), (91, 5), (91, 7), (352, 8), (61, 11))
        P = QPolynomial()
        for w, e in weights:
            P = P + (q - e) ** 6 * w
        return P / 1008 - 210
    raise AffineError(f"unknown exceptional polynomial {which!r}")


EXCEPTIONAL = ("F4_02", "E6_02", "F4_alt", "E6_alt")


def exceptional_chi(which: str) -> QPolynomial:
    return _exceptional(which)


# ---------------------------------------------------------------------------
# root location


def mean_root(p: QPolynomial) -> Fraction:
    """Mean of the complex roots: -(q^{d-1} coefficient) / (d * leading)."""
    if p.degree < 1:
        raise AffineError("mean_root needs degree >= 1")
    return -p[p.degree - 1] / (p.degree * p.leading)


def functional_equation_holds(p: QPolynomial, center) -> bool:
    """p(q) == (-1)^deg p(2 center - q), exactly."""
    return p == p.reflect(center) * (-1) ** p.degree


@dataclass(frozen=True)
class RootLocationReport:
    polynomial: QPolynomial
    roots: tuple[complex, ...]
    expected_real_part: Fraction
    max_deviation: float
    symmetric: bool
    functional_equation: bool
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_deviation < self.tol and self.symmetric and self.functional_equation

    def to_dict(self) -> dict:
        from .exactmath import rational_str

        return {
            "polynomial": str(self.polynomial),
            "coefficients": self.polynomial.to_json(),
            "roots": [[z.real, z.imag] for z in self.roots],
            "expected_real_part": rational_str(self.expected_real_part),
            "max_deviation": self.max_deviation,
            "symmetric": self.symmetric,
            "functional_equation": self.functional_equation,
            "tol": self.tol,
            "ok": self.ok,
        }


def _reflection_symmetric(roots: Sequence[complex], center: float, tol: float) -> bool:
    pool = list(roots)
    for z in roots:
        target = complex(2 * center - z.real, z.imag)
        best = min(range(len(pool)), key=lambda i: abs(pool[i] - target), default=None)
        if best is None or abs(pool[best] - target) > tol * max(1.0, abs(target)):
            return False
        pool.pop(best)
    return True


def check_root_location(p: QPolynomial, expected_real_part=None, tol: float = 1e-8) -> RootLocationReport:
    """Roots of ``p`` against the vertical line Re = expected_real_part.

    With no expected value the mean root is used, which is what the
    conjectured law predicts whenever it holds.
    """
    if p.degree < 1:
        raise AffineError("check_root_location needs degree >= 1")
    center = mean_root(p) if expected_real_part is None else to_rational(expected_real_part)
    roots = poly_complex_roots(p)
    c = float(center)
    dev = max(abs(z.real - c) for z in roots)
    return RootLocationReport(
        polynomial=p,
        roots=tuple(roots),
        expected_real_part=center,
        max_deviation=dev,
        symmetric=_reflection_symmetric(roots, c, tol),
        functional_equation=functional_equation_holds(p, center),
        tol=tol,
    )


def expected_affine_center(a: int, b: int, n: int) -> Fraction:
    return Fraction((a + b - 1) * n, 2)
