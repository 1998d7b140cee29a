"""Exact two-phase simplex over the rationals (Bland's rule).

Only what the geometric region engine needs: ``maximize c.v`` subject to
``A v <= b`` with each variable either free or nonnegative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None


def _pivot(T, basis, r, c):
    row = T[r]
    inv = 1 / row[c]
    T[r] = row = [v * inv for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _run(T, basis, cost, allowed):
    """Maximize sum(cost[j] * v_j) on tableau T (last column = rhs)."""
    ncols = len(T[0]) - 1
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            red = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T)) if T[i][j])
            if red > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                ratio = row[ncols] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], entering)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence, free: Sequence[bool] | None = None) -> LPResult:
    nvar = len(c)
    m = len(A)
    if free is None:
        free = [False] * nvar
    # split free variables into positive and negative parts
    cols = []  # (original index, sign)
    for j in range(nvar):
        cols.append((j, 1))
        if free[j]:
            cols.append((j, -1))
    n = len(cols)
    neg_rows = [i for i in range(m) if b[i] < 0]
    nart = len(neg_rows)
    width = n + m + nart
    T = []
    basis = []
    art_of_row = {}
    for i in range(m):
        row = [Fraction(A[i][j]) * s for (j, s) in cols] + [ZERO] * (m + nart) + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        if b[i] < 0:
            row = [-v for v in row]
            k = n + m + len(art_of_row)
            art_of_row[i] = k
            row[k] = Fraction(1)
            basis.append(k)
        else:
            basis.append(n + i)
        T.append(row)

    real_cols = list(range(n + m))
    if nart:
        cost1 = [ZERO] * width
        for k in art_of_row.values():
            cost1[k] = Fraction(-1)
        _run(T, basis, cost1, list(range(width)))
        if any(T[i][width] != 0 for i in range(m) if basis[i] >= n + m):
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis
        for i in range(m):
            if basis[i] >= n + m:
                j = next((j for j in real_cols if T[i][j] != 0), None)
                if j is not None:
                    _pivot(T, basis, i, j)
        keep = [i for i in range(m) if basis[i] < n + m]
        T = [T[i][: n + m] + [T[i][width]] for i in keep]
        basis = [basis[i] for i in keep]

    cost2 = [Fraction(c[j]) * s for (j, s) in cols] + [ZERO] * m
    status = _run(T, basis, cost2, real_cols)
    if status != "optimal":
        return LPResult(status)
    vals = [ZERO] * (n + m)
    for i, j in enumerate(basis):
        vals[j] = T[i][-1]
    x = [ZERO] * nvar
    for k, (j, s) in enumerate(cols):
        x[j] += s * vals[k]
    value = sum((Fraction(c[j]) * x[j] for j in range(nvar)), ZERO)
    return LPResult("optimal", value, tuple(x))
