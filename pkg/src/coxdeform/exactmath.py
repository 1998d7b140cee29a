"""Exact rational arithmetic: matrices, univariate polynomials, and a few
classical combinatorial numbers.

Scalars are :class:`fractions.Fraction`.  Everything here is immutable.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected so that inexact data cannot leak into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [tuple(to_rational(v) for v in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(v for r in rows for v in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [[self.entries[i * self.cols + j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def augment(self, column: Sequence) -> "RationalMatrix":
        if len(column) != self.rows:
            raise ValueError(f"column has length {len(column)}, matrix has {self.rows} rows")
        return RationalMatrix.from_rows(
            [list(self.row(i)) + [to_rational(column[i])] for i in range(self.rows)],
            cols=self.cols + 1,
        )


def _row_echelon(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gaussian elimination with partial pivoting (largest |numerator|).

    Returns the nonzero rows of an echelon form.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    out = []
    col = 0
    while rows and col < ncols:
        pivot = max(range(len(rows)), key=lambda i: abs(rows[i][col].numerator))
        if rows[pivot][col] == 0:
            col += 1
            continue
        prow = rows.pop(pivot)
        inv = 1 / prow[col]
        prow = [v * inv for v in prow]
        for r in rows:
            f = r[col]
            if f:
                for j in range(col, ncols):
                    r[j] -= f * prow[j]
        out.append(prow)
        col += 1
    return out


def rank(m: RationalMatrix) -> int:
    """Exact rank over Q."""
    return len(_row_echelon(m.to_rows()))


def linear_system_consistent(m: RationalMatrix, rhs: Sequence) -> bool:
    if len(rhs) != m.rows:
        raise ValueError(f"rhs has length {len(rhs)} but matrix has {m.rows} rows")
    return rank(m) == rank(m.augment(rhs))


def determinant(rows: Sequence[Sequence]) -> Fraction:
    a = [[to_rational(v) for v in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] * inv
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return det


# ---------------------------------------------------------------------------
# polynomials


class QPolynomial:
    """Dense univariate polynomial with rational coefficients.

    ``coeffs[k]`` is the coefficient of ``q**k``; trailing zeros are stripped.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_rational(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("QPolynomial is immutable")

    # constructors
    @classmethod
    def constant(cls, c) -> "QPolynomial":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "QPolynomial":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "QPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_rational(r), 1])
        return p

    q = None  # set below to the polynomial "q"

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, QPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == QPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QPolynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "q" if k == 1 else f"q^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    # arithmetic
    @staticmethod
    def _lift(x) -> "QPolynomial":
        return x if isinstance(x, QPolynomial) else QPolynomial([x])

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QPolynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return QPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, QPolynomial):
            c = to_rational(other)
            return QPolynomial(c * v for v in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return QPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = to_rational(c)
        return QPolynomial(v / c for v in self.coeffs)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = QPolynomial([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: "QPolynomial") -> tuple["QPolynomial", "QPolynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quo = [Fraction(0)] * max(0, len(r) - dq)
        for k in range(len(r) - 1, dq - 1, -1):
            c = r[k] / lead
            if c:
                quo[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    r[k - dq + j] -= c * b
        return QPolynomial(quo), QPolynomial(r[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "QPolynomial":
        return self / self.leading if self.coeffs else self

    def derivative(self) -> "QPolynomial":
        return QPolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "QPolynomial") -> "QPolynomial":
        acc = QPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def reflect(self, center) -> "QPolynomial":
        """Return p(2*center - q)."""
        return self.compose(QPolynomial([2 * to_rational(center), -1]))

    def to_json(self) -> list[str]:
        return [rational_str(c) for c in self.coeffs]


QPolynomial.q = QPolynomial([0, 1])


def poly_gcd(a: QPolynomial, b: QPolynomial) -> QPolynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_shift(p: QPolynomial, steps: int) -> QPolynomial:
    """p(q - steps), exactly.  Negative ``steps`` shift the other way."""
    if steps == 0 or p.degree < 1:
        return p
    # Taylor shift by repeated synthetic division
    c = list(p.coeffs)
    s = -to_rational(steps)
    n = len(c)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            c[k] += s * c[k + 1]
    return QPolynomial(c)


def squarefree_decomposition(p: QPolynomial) -> list[tuple[QPolynomial, int]]:
    """Yun's algorithm.  Returns monic squarefree factors with multiplicity."""
    if p.degree < 1:
        return []
    p = p.monic()
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# combinatorial numbers


@lru_cache(maxsize=None)
def stirling_cycle(n: int, k: int) -> int:
    """Signless Stirling number of the first kind c(n, k)."""
    if n < 0 or k < 0:
        raise ValueError("stirling_cycle needs nonnegative arguments")
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return stirling_cycle(n - 1, k - 1) + (n - 1) * stirling_cycle(n - 1, k)


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("catalan needs n >= 0")
    return math.comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# complex roots


class RootFindingError(RuntimeError):
    pass


def _exact_complex_eval(coeffs: Sequence[Fraction], z: complex) -> tuple[complex, complex]:
    """Evaluate p(z) and p'(z) with z taken as an exact binary rational."""
    zr, zi = Fraction(z.real), Fraction(z.imag)
    pr = pi = Fraction(0)
    dr = di = Fraction(0)
    for c in reversed(coeffs):
        dr, di = dr * zr - di * zi + pr, dr * zi + di * zr + pi
        pr, pi = pr * zr - pi * zi + c, pr * zi + pi * zr
    return complex(float(pr), float(pi)), complex(float(dr), float(di))


def _aberth(coeffs: Sequence[Fraction], max_iter: int = 500) -> list[complex]:
    """Aberth-Ehrlich iteration on a squarefree polynomial (monic, exact coeffs)."""
    n = len(coeffs) - 1
    if n == 1:
        return [complex(float(-coeffs[0] / coeffs[1]))]
    c = [complex(float(v)) for v in coeffs]
    lead = c[-1]
    # Fujiwara-type bound on root moduli
    radius = 2 * max(abs(c[n - k] / lead) ** (1.0 / k) for k in range(1, n + 1))
    radius = max(radius, 1e-3)
    z = [radius * 0.5 * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]

    def horner(x):
        p = dp = 0j
        for v in reversed(c):
            dp = dp * x + p
            p = p * x + v
        return p, dp

    for _ in range(max_iter):
        biggest = 0.0
        for k in range(n):
            p, dp = horner(z[k])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else complex(radius)
            s = sum(1 / (z[k] - z[j]) for j in range(n) if j != k)
            w = ratio / (1 - ratio * s)
            z[k] -= w
            biggest = max(biggest, abs(w) / max(1.0, abs(z[k])))
        if biggest < 1e-15:
            break
    else:
        raise RootFindingError(f"Aberth iteration did not converge for {QPolynomial(coeffs)}")
    # Newton polish with exactly evaluated residuals
    for k in range(n):
        for _ in range(4):
            p, dp = _exact_complex_eval(coeffs, z[k])
            if p == 0 or dp == 0:
                break
            step = p / dp
            z[k] -= step
            if abs(step) <= 1e-17 * max(1.0, abs(z[k])):
                break
    return z


def poly_complex_roots(p: QPolynomial, tol: float = 1e-10) -> list[complex]:
    """All complex roots of ``p`` with multiplicity, in a deterministic order.

    Multiple roots are separated exactly (squarefree decomposition over Q),
    and each squarefree part is recentred at its root mean before iterating.
    """
    if p.degree < 1:
        raise ValueError("poly_complex_roots needs a polynomial of degree >= 1")
    roots: list[complex] = []
    for factor, mult in squarefree_decomposition(p):
        center = -factor[factor.degree - 1] / (factor.degree * factor.leading)
        centred = poly_shift(factor, -center)
        found = _aberth(centred.coeffs)
        for z in found:
            z = z + complex(float(center))
            roots.extend([z] * mult)
    # post-condition on the residual of every root against the original polynomial
    scale = 1 + max(abs(float(c)) for c in p.coeffs)
    for z in roots:
        val, _ = _exact_complex_eval(p.coeffs, z)
        if abs(val) >= tol * scale:
            raise RootFindingError(
                f"root {z} of {p} has residual {abs(val):.3e}, above tolerance"
            )
    roots.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return roots
