"""Truncated exponential generating functions and functional-equation solvers.

An :class:`EgfSeries` of order N stands for ``sum_{n<=N} a_n x^n / n!`` known
modulo ``x^(N+1)``.  Internally the ordinary coefficients ``a_n / n!`` are
kept, which makes products plain convolutions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmath import to_rational


class SeriesError(ValueError):
    pass


class EgfSeries:
    __slots__ = ("order", "_ord")

    def __init__(self, order: int, ordinary: Sequence[Fraction]):
        if order < 0:
            raise SeriesError("order must be nonnegative")
        c = [to_rational(v) for v in ordinary[: order + 1]]
        c += [Fraction(0)] * (order + 1 - len(c))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_ord", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("EgfSeries is immutable")

    @classmethod
    def from_egf(cls, coeffs: Sequence, order: int | None = None) -> "EgfSeries":
        """Build from EGF coefficients ``a_n`` (series = sum a_n x^n/n!)."""
        if order is None:
            order = len(coeffs) - 1
        return cls(order, [to_rational(a) / math.factorial(n) for n, a in enumerate(coeffs)])

    @classmethod
    def constant(cls, c, order: int) -> "EgfSeries":
        return cls(order, [c])

    @classmethod
    def x(cls, order: int) -> "EgfSeries":
        return cls(order, [0, 1])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """EGF coefficients a_0..a_N."""
        return tuple(c * math.factorial(n) for n, c in enumerate(self._ord))

    @property
    def ordinary(self) -> tuple[Fraction, ...]:
        return self._ord

    def __getitem__(self, n: int) -> Fraction:
        return self._ord[n] * math.factorial(n)

    def __eq__(self, other):
        if not isinstance(other, EgfSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self._ord[: n + 1] == other._ord[: n + 1]

    def __hash__(self):
        return hash(self._ord)

    def __repr__(self):
        return f"EgfSeries(order={self.order}, coeffs={[str(c) for c in self.coeffs]})"

    def truncate(self, order: int) -> "EgfSeries":
        return EgfSeries(min(order, self.order), self._ord)

    def _coerce(self, other) -> "EgfSeries":
        if isinstance(other, EgfSeries):
            return other
        return EgfSeries.constant(other, self.order)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return EgfSeries(n, [self._ord[k] + other._ord[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return EgfSeries(self.order, [-c for c in self._ord])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, EgfSeries):
            c = to_rational(other)
            return EgfSeries(self.order, [c * v for v in self._ord])
        n = min(self.order, other.order)
        a, b = self._ord, other._ord
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            if a[i]:
                ai = a[i]
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return EgfSeries(n, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, EgfSeries):
            return self * (1 / to_rational(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def reciprocal(self) -> "EgfSeries":
        b = self._ord
        if b[0] == 0:
            raise SeriesError("divide: divisor has zero constant term")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / b[0]
        for k in range(1, n + 1):
            s = sum(b[j] * out[k - j] for j in range(1, k + 1))
            out[k] = -s / b[0]
        return EgfSeries(n, out)

    def __pow__(self, e):
        if isinstance(e, int) and e >= 0:
            result = EgfSeries.constant(1, self.order)
            base = self
            while e:
                if e & 1:
                    result = result * base
                base = base * base
                e >>= 1
            return result
        if isinstance(e, int):
            return self.reciprocal() ** (-e)
        return power(self, e)

    # -- calculus ------------------------------------------------------------

    def differentiate(self) -> "EgfSeries":
        """Derivative; the result has order N-1 (or 0 for a constant)."""
        n = self.order
        if n == 0:
            return EgfSeries(0, [0])
        return EgfSeries(n - 1, [k * self._ord[k] for k in range(1, n + 1)])

    def integrate(self, constant=0) -> "EgfSeries":
        n = self.order
        return EgfSeries(n + 1, [constant] + [self._ord[k] / (k + 1) for k in range(n + 1)])

    def scale_argument(self, c) -> "EgfSeries":
        """f(c*x)."""
        c = to_rational(c)
        return EgfSeries(self.order, [v * c**k for k, v in enumerate(self._ord)])

    def compose(self, inner: "EgfSeries") -> "EgfSeries":
        """self(inner(x)); ``inner`` must have zero constant term."""
        if inner._ord[0] != 0:
            raise SeriesError("compose: inner series must have zero constant term")
        n = min(self.order, inner.order)
        acc = EgfSeries.constant(0, n)
        for c in reversed(self._ord[: n + 1]):
            acc = acc * inner + c
        return acc

    def evaluate_zero(self) -> Fraction:
        return self._ord[0]

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def exp(f: EgfSeries) -> EgfSeries:
    if f.ordinary[0] != 0:
        raise SeriesError("exp: constant term must be 0")
    n = f.order
    a = f.ordinary
    out = [Fraction(0)] * (n + 1)
    out[0] = Fraction(1)
    # g' = f' g
    for k in range(1, n + 1):
        out[k] = sum(j * a[j] * out[k - j] for j in range(1, k + 1)) / k
    return EgfSeries(n, out)


def log(f: EgfSeries) -> EgfSeries:
    if f.ordinary[0] != 1:
        raise SeriesError("log: constant term must be 1")
    n = f.order
    if n == 0:
        return EgfSeries(0, [0])
    d = f.differentiate() / f.truncate(n - 1)
    return d.integrate()


def power(f: EgfSeries, e) -> EgfSeries:
    """f**e for rational e; needs f(0) = 1 unless e is a nonnegative integer."""
    if isinstance(e, int) and e >= 0:
        return f ** e
    e = to_rational(e)
    if e.denominator == 1 and e >= 0:
        return f ** int(e)
    if f.ordinary[0] != 1:
        raise SeriesError("power: non-integer or negative exponent needs constant term 1")
    return exp(log(f) * e)


def series_arith(op: str, *args):
    """Dispatch ``add | multiply | divide | exp | log | integrate |
    differentiate | compose | power`` on EgfSeries arguments."""
    table = {
        "add": lambda a, b: a + b,
        "multiply": lambda a, b: a * b,
        "divide": lambda a, b: a / b,
        "exp": exp,
        "log": log,
        "integrate": lambda a: a.integrate(),
        "differentiate": lambda a: a.differentiate(),
        "compose": lambda outer, inner: outer.compose(inner),
        "power": power,
    }
    if op not in table:
        raise SeriesError(f"unknown series operation {op!r}")
    return table[op](*args)


# ---------------------------------------------------------------------------
# functional equations


def _bootstrap(step, order: int) -> EgfSeries:
    """Iterate ``g <- step(g)`` from the constant 1.

    ``step`` must be an x-adic contraction, so each pass fixes one more
    coefficient; ``order + 1`` passes pin everything up to x^order.
    """
    g = EgfSeries.constant(1, order)
    for _ in range(order + 1):
        nxt = step(g)
        if nxt == g:
            return nxt
        g = nxt
    if step(g) != g:
        raise SeriesError("coefficient fixpoint did not converge")
    return g


def _geometric_sum(f: EgfSeries, terms: int) -> EgfSeries:
    """1 + f + ... + f^(terms-1)."""
    acc = EgfSeries.constant(0, f.order)
    p = EgfSeries.constant(1, f.order)
    for _ in range(terms):
        acc = acc + p
        p = p * f
    return acc


def solve_truncated_affine_egf(a: int, b: int, order: int) -> EgfSeries:
    """Region-count EGF f of the truncated affine arrangements of type (a, b).

    For a == b this solves ``f = 1 + x f^a``; otherwise
    ``f^(b-a) = exp(x (f^a - f^b)/(1 - f))`` rewritten as
    ``f = exp(x f^min(a,b) (1 + f + ... + f^(|b-a|-1)) / |b-a|)``.
    """
    if a < 0 or b < 0:
        raise SeriesError("a and b must be nonnegative")
    if a + b < 2:
        raise SeriesError("need a + b >= 2")
    x = EgfSeries.x(order)
    if a == b:
        return _bootstrap(lambda f: 1 + x * f ** a, order)
    lo, r = min(a, b), abs(b - a)
    return _bootstrap(lambda f: exp(x * f ** lo * _geometric_sum(f, r) / r), order)


def affine_residual(f: EgfSeries, a: int, b: int) -> EgfSeries:
    """Residual of f in the symmetric form
    ``f^a exp(-x [a]_f) - f^b exp(-x [b]_f)`` with ``[k]_f = 1 + f + ... + f^(k-1)``
    (for a != b), or ``f - 1 - x f^a`` (for a == b).  Zero iff f solves it."""
    x = EgfSeries.x(f.order)
    if a == b:
        return f - 1 - x * f ** a
    lhs = f ** a * exp(-(x * _geometric_sum(f, a)))
    rhs = f ** b * exp(-(x * _geometric_sum(f, b)))
    return lhs - rhs


@dataclass(frozen=True)
class SemigenericSeries:
    y: EgfSeries
    z: EgfSeries


def solve_semigeneric(order: int) -> SemigenericSeries:
    """y with ``1 = y (2 - e^{xy})`` and z with ``z'/z = y^2, z(0) = 1``."""
    if order < 0:
        raise SeriesError("order must be nonnegative")
    x = EgfSeries.x(order)
    y = _bootstrap(lambda y: 1 / (2 - exp(x * y)), order)
    if order == 0:
        return SemigenericSeries(y, EgfSeries.constant(1, 0))
    z = exp((y * y).truncate(order - 1).integrate())
    return SemigenericSeries(y, z)


def qk_tower(a: int, b: int, kmax: int, order: int) -> list[EgfSeries]:
    """q_0..q_kmax from ``q_k' = -sum_{r=0}^k q_{r-a} q_{k-r-b}``,
    ``q_j = 1`` for j < 0 and ``q_k(0) = 1``."""
    if a < 0 or b < 0 or kmax < 0:
        raise SeriesError("a, b, kmax must be nonnegative")
    one = EgfSeries.constant(1, order)
    qs: list[EgfSeries] = []

    def get(j, current):
        if j < 0:
            return one
        if j == len(qs):
            return current
        return qs[j]

    for k in range(kmax + 1):
        def step(cur, k=k):
            rhs = EgfSeries.constant(0, order)
            for r in range(k + 1):
                rhs = rhs + get(r - a, cur) * get(k - r - b, cur)
            return (-rhs).truncate(max(order - 1, 0)).integrate(1).truncate(order)
        qs.append(_bootstrap(step, order))
    return qs


def chi_egf_from_f(f: EgfSeries, q, order: int | None = None) -> EgfSeries:
    """``f(-x)^(-q)`` computed as ``exp(-q log f(-x))``.

    The coefficient of x^n/n! is the characteristic polynomial, at q, of the
    n-coordinate member of the family in its full ambient space R^n.
    """
    if f.ordinary[0] != 1:
        raise SeriesError("chi_egf_from_f needs f(0) = 1")
    if order is not None:
        f = f.truncate(order)
    q = to_rational(q)
    return exp(log(f.scale_argument(-1)) * (-q))


def counts(f: EgfSeries) -> list[int]:
    """EGF coefficients as Python ints (asserting integrality)."""
    out = []
    for c in f.coeffs:
        if c.denominator != 1:
            raise SeriesError(f"coefficient {c} is not an integer")
        out.append(int(c))
    return out
