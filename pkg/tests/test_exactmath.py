import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coxdeform.exactmath import (
    QPolynomial,
    RationalMatrix,
    catalan,
    determinant,
    linear_system_consistent,
    poly_complex_roots,
    poly_shift,
    rank,
    rational_str,
    squarefree_decomposition,
    stirling_cycle,
    to_rational,
)

q = QPolynomial.q
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def M(rows):
    return RationalMatrix.from_rows(rows)


# -- rationals ---------------------------------------------------------------


def test_to_rational_accepts_exact_inputs():
    assert to_rational(3) == 3
    assert to_rational("6/4") == Fraction(3, 2)
    assert to_rational(Fraction(-2, 4)) == Fraction(-1, 2)


@pytest.mark.parametrize("bad", [0.5, True, None])
def test_to_rational_rejects_inexact(bad):
    with pytest.raises(TypeError):
        to_rational(bad)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rationals_stay_reduced(p, d):
    x = to_rational(f"{p}/{d}")
    assert math.gcd(x.numerator, x.denominator) == 1
    assert x.denominator > 0
    assert to_rational(rational_str(x)) == x


# -- matrices ------------------------------------------------------------------


def test_rank_examples():
    assert rank(M([[1, 0], [0, 1]])) == 2
    assert rank(RationalMatrix.zeros(3, 3)) == 0
    assert rank(M([[1, -1, 0], [0, 1, -1], [1, 0, -1]])) == 2


def test_consistency_examples():
    assert linear_system_consistent(M([[1, -1]]), [1])
    assert not linear_system_consistent(M([[1, -1], [1, -1]]), [0, 1])
    cyc = M([[1, -1, 0], [0, 1, -1], [1, 0, -1]])
    assert not linear_system_consistent(cyc, [1, 1, 1])
    assert linear_system_consistent(cyc, [1, 1, 2])


def test_consistency_dimension_mismatch():
    with pytest.raises(ValueError):
        linear_system_consistent(M([[1, 0]]), [1, 2])


def test_determinant():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant([[1, 2], [2, 4]]) == 0
    assert determinant([[0, 1], [1, 0]]) == -1


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 4))
    c = draw(st.integers(1, 4))
    return M([[draw(rationals) for _ in range(c)] for _ in range(r)])


@given(matrices())
def test_rank_of_transpose(m):
    assert rank(m) == rank(m.transpose())
    assert rank(m) <= min(m.rows, m.cols)


# -- polynomials ---------------------------------------------------------------


def test_shift_examples():
    assert poly_shift(q**2, 1) == q**2 - 2 * q + 1
    assert poly_shift(q, 0) == q
    assert poly_shift(q**3, 2) == q**3 - 6 * q**2 + 12 * q - 8
    assert poly_shift(q**2, -1) == (q + 1) ** 2


polys = st.lists(rationals, min_size=0, max_size=6).map(QPolynomial)


@given(polys, st.integers(-5, 5), st.integers(-5, 5))
def test_shift_composes(p, a, b):
    assert poly_shift(poly_shift(p, a), b) == poly_shift(p, a + b)


@given(polys, rationals)
def test_shift_is_evaluation_shift(p, x):
    assert poly_shift(p, 3)(x) == p(x - 3)


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_divmod_identity(a, b):
    quo, rem = a.divmod(b)
    assert quo * b + rem == a
    assert rem.is_zero() or rem.degree < b.degree


def test_polynomial_basics():
    p = QPolynomial.from_roots([1, 2])
    assert p == q**2 - 3 * q + 2
    assert p(3) == 2
    assert p.derivative() == 2 * q - 3
    assert str(QPolynomial()) == "0"
    assert QPolynomial([1, 2, 0, 0]).degree == 1


def test_squarefree_decomposition():
    p = (q - 1) ** 3 * (q + 2)
    parts = squarefree_decomposition(p)
    prod = QPolynomial([1])
    for f, e in parts:
        prod = prod * f**e
    assert prod.monic() == p.monic()
    assert {e for _, e in parts} == {1, 3}


# -- integer sequences ---------------------------------------------------------


def test_stirling_examples():
    assert stirling_cycle(3, 1) == 2
    assert stirling_cycle(4, 2) == 11
    for n in range(8):
        assert stirling_cycle(n, n) == 1
    assert stirling_cycle(4, 0) == 0


@pytest.mark.parametrize("n", range(11))
def test_stirling_row_sums_to_factorial(n):
    assert sum(stirling_cycle(n, k) for k in range(n + 1)) == math.factorial(n)


def test_catalan():
    assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]
    assert all(catalan(n) == math.comb(2 * n, n) // (n + 1) for n in range(30))


# -- roots ---------------------------------------------------------------------


def _close_multiset(found, expected, tol=1e-9):
    pool = list(found)
    for z in expected:
        j = min(range(len(pool)), key=lambda i: abs(pool[i] - z))
        assert abs(pool[j] - z) < tol, (found, expected)
        pool.pop(j)
    assert not pool


def test_root_examples():
    s = math.sqrt(3) / 2
    _close_multiset(poly_complex_roots(q**2 - 3 * q + 3), [1.5 + s * 1j, 1.5 - s * 1j])
    _close_multiset(poly_complex_roots((q - 1) * (q - 2)), [1, 2])
    _close_multiset(poly_complex_roots(q**3), [0, 0, 0])


def test_roots_need_degree():
    with pytest.raises(ValueError):
        poly_complex_roots(QPolynomial([5]))


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=7))
def test_roots_residuals_and_multiplicity(roots):
    p = QPolynomial.from_roots(roots)
    found = poly_complex_roots(p)
    assert len(found) == p.degree
    _close_multiset(found, roots, tol=1e-7)
