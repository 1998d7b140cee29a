"""Rational affine hyperplane arrangements and four independent engines for
their characteristic polynomial / region counts.

Engines
-------
* :func:`chi_whitney` -- signed sum over central subsets.
* :func:`chi_nbc` -- generating polynomial of subsets without broken central
  circuits (depends on a linear order only through its enumeration path).
* :func:`regions_geometric` -- explicit sign-vector enumeration with an exact
  simplex feasibility test.
* :func:`chi_finite_field` -- brute-force point count over F_p.

Type-A deformations live in R^n (not the sum-zero hyperplane), so their
characteristic polynomial carries an extra factor q for the diagonal line;
:func:`essential_chi` strips it.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import lp
from .exactmath import QPolynomial, RationalMatrix, determinant, rank, to_rational


class ArrangementError(ValueError):
    pass


class CapExceeded(ArrangementError):
    """An enumeration would exceed its configured size cap."""


@dataclass(frozen=True)
class Caps:
    whitney: int | None = 22
    geometric: int | None = 18
    central_subsets: int | None = 22
    finite_field_dim: int = 4
    finite_field_prime: int = 64


DEFAULT_CAPS = Caps()


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(to_rational(v) for v in self.normal))
        object.__setattr__(self, "offset", to_rational(self.offset))
        if all(v == 0 for v in self.normal):
            raise ArrangementError("hyperplane normal must be nonzero")

    def canonical(self) -> tuple[Fraction, ...]:
        """(normal, offset) scaled so the first nonzero normal entry is 1."""
        lead = next(v for v in self.normal if v != 0)
        return tuple(v / lead for v in self.normal) + (self.offset / lead,)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(self.normal, x)), Fraction(0)) - self.offset


@dataclass(frozen=True)
class Arrangement:
    dim: int
    hyperplanes: tuple[Hyperplane, ...]
    label: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "hyperplanes", tuple(self.hyperplanes))
        seen = set()
        for h in self.hyperplanes:
            if len(h.normal) != self.dim:
                raise ArrangementError(
                    f"normal of length {len(h.normal)} in a {self.dim}-dimensional arrangement"
                )
            key = h.canonical()
            if key in seen:
                raise ArrangementError(f"duplicate hyperplane {h}")
            seen.add(key)

    def __len__(self):
        return len(self.hyperplanes)

    @property
    def is_type_a(self) -> bool:
        """Every normal has the form e_i - e_j."""
        for h in self.hyperplanes:
            nz = sorted(v for v in h.normal if v != 0)
            if nz != [-1, 1]:
                return False
        return True

    @property
    def lineality(self) -> int:
        """Dimension of the space of directions parallel to every hyperplane."""
        if not self.hyperplanes:
            return self.dim
        return self.dim - rank(RationalMatrix.from_rows([h.normal for h in self.hyperplanes]))

    def reordered(self, order: Sequence[int]) -> "Arrangement":
        if sorted(order) != list(range(len(self))):
            raise ArrangementError("order must be a permutation of hyperplane indices")
        return Arrangement(self.dim, tuple(self.hyperplanes[i] for i in order), self.label)

    # -- JSON -----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "hyperplanes": [
                {"normal": [str(v) for v in h.normal], "offset": str(h.offset)}
                for h in self.hyperplanes
            ],
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Arrangement":
        try:
            dim = int(data["dim"])
            hs = tuple(
                Hyperplane(tuple(to_rational(str(v)) for v in h["normal"]), to_rational(str(h["offset"])))
                for h in data["hyperplanes"]
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ArrangementError(f"malformed arrangement JSON: {exc}") from exc
        return cls(dim, hs, data.get("label", "custom"))

    @classmethod
    def load(cls, path) -> "Arrangement":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# families


def _type_a(n: int, values_for_pair, label: str) -> Arrangement:
    hs = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for c in values_for_pair(i, j):
                normal = [0] * n
                normal[i], normal[j] = 1, -1
                hs.append(Hyperplane(tuple(normal), c))
    return Arrangement(n, tuple(hs), label)


def _upper(values):
    return lambda i, j: values if i < j else ()


def positive_roots(system: str, n: int) -> list[tuple[int, ...]]:
    """Positive roots of A_{n-1} (in R^n), B_n, C_n, D_n, BC_n."""
    def e(*pairs):
        v = [0] * n
        for k, c in pairs:
            v[k] += c
        return tuple(v)

    system = system.upper()
    pairs_minus = [e((i, 1), (j, -1)) for i in range(n) for j in range(i + 1, n)]
    pairs_plus = [e((i, 1), (j, 1)) for i in range(n) for j in range(i + 1, n)]
    singles = [e((i, 1)) for i in range(n)]
    doubles = [e((i, 2)) for i in range(n)]
    if system == "A":
        return pairs_minus
    if system == "B":
        return pairs_minus + pairs_plus + singles
    if system == "C":
        return pairs_minus + pairs_plus + doubles
    if system == "D":
        return pairs_minus + pairs_plus
    if system == "BC":
        return pairs_minus + pairs_plus + singles + doubles
    raise ArrangementError(f"unknown root system {system!r}")


def _rootsystem(system: str, n: int, a: int, b: int) -> Arrangement:
    if a + b < 2:
        raise ArrangementError("need a + b >= 2")
    hs, seen = [], set()
    for alpha in positive_roots(system, n):
        for c in range(-a + 1, b):
            h = Hyperplane(alpha, c)
            # BC_n: <e_i, x> = c and <2e_i, x> = 2c coincide
            if h.canonical() not in seen:
                seen.add(h.canonical())
                hs.append(h)
    return Arrangement(n, tuple(hs), f"rootsystem({system.upper()},{a},{b})")


def _check_cycles_generic(n: int, offset, colors: int) -> bool:
    """No simple cycle (any colours) has zero signed offset sum."""
    for length in range(3, n + 1):
        for cyc in itertools.permutations(range(n), length):
            if cyc[0] != min(cyc) or cyc[1] > cyc[-1]:
                continue
            edges = [(cyc[k], cyc[(k + 1) % length]) for k in range(length)]
            for cols in itertools.product(range(colors), repeat=length):
                total = 0
                for (u, v), k in zip(edges, cols):
                    i, j = min(u, v), max(u, v)
                    total += offset(i, j, k) if u < v else -offset(i, j, k)
                if total == 0:
                    return False
    return True


def _check_semigeneric(n: int, a) -> bool:
    """Central circuits are exactly the even cycles oriented source/sink."""
    for length in range(2, n + 1):
        for cyc in itertools.permutations(range(n), length):
            if cyc[0] != min(cyc) or (length > 2 and cyc[1] > cyc[-1]):
                continue
            for orient in itertools.product((True, False), repeat=length):
                # orient[k]: hyperplane for the k-th cycle step points forward
                steps = [(cyc[k], cyc[(k + 1) % length]) for k in range(length)]
                if length == 2 and orient[0] != orient[1]:
                    continue  # same hyperplane twice, not a circuit
                total = 0
                for (u, v), fwd in zip(steps, orient):
                    total += a[u] if fwd else -a[v]
                alternating = all(orient[k] != orient[(k + 1) % length] for k in range(length))
                predicted = alternating and length % 2 == 0 and length > 2
                if (total == 0) != predicted:
                    return False
    return True


GENERICITY_CHECK_MAX_N = 6
GENERICITY_RETRIES = 4


def build_family(tag: str, n: int, **params) -> Arrangement:
    """Construct a named deformation.

    Tags: braid, linial, shi, ext_shi(a), catalan, catalan0,
    trunc_affine(a, b), semigeneric, generic(m), rootsystem(R, a, b).
    Type-A families live in R^n.
    """
    tag = tag.replace("-", "_").lower()
    if n < 1:
        raise ArrangementError("n must be >= 1")
    if tag == "braid":
        return _type_a(n, _upper((0,)), "braid")
    if tag == "linial":
        return _type_a(n, _upper((1,)), "linial")
    if tag == "shi":
        return _type_a(n, _upper((0, 1)), "shi")
    if tag == "ext_shi":
        a = int(params.get("a", 1))
        if a < 1:
            raise ArrangementError("ext_shi needs a >= 1")
        A = _type_a(n, _upper(tuple(range(-a + 1, a + 1))), f"ext_shi({a})")
        return A
    if tag == "catalan":
        return _type_a(n, _upper((-1, 1)), "catalan")
    if tag == "catalan0":
        return _type_a(n, _upper((-1, 0, 1)), "catalan0")
    if tag in ("trunc_affine", "truncated_affine"):
        a, b = int(params["a"]), int(params["b"])
        if a + b < 2:
            raise ArrangementError("trunc_affine needs a + b >= 2")
        return _type_a(n, _upper(tuple(range(-a + 1, b))), f"trunc_affine({a},{b})")
    if tag == "semigeneric":
        base = int(params.get("base", 2))
        for _ in range(GENERICITY_RETRIES):
            a = [base ** (i + 1) for i in range(n)]
            if n > GENERICITY_CHECK_MAX_N or _check_semigeneric(n, a):
                break
            base *= 2
        else:
            raise ArrangementError("could not find generic offsets for the semigeneric family")
        return _type_a(n, lambda i, j: (a[i],), "semigeneric")
    if tag == "generic":
        m = int(params.get("m", 1))
        if m < 1:
            raise ArrangementError("generic needs m >= 1")
        base = int(params.get("base", 2))
        for _ in range(GENERICITY_RETRIES):
            def offset(i, j, k, base=base):
                return base ** ((i * n + j) * m + k + 1)
            if n > GENERICITY_CHECK_MAX_N or _check_cycles_generic(n, offset, m):
                break
            base *= 2
        else:
            raise ArrangementError("could not find generic offsets for the generic family")
        return _type_a(
            n,
            lambda i, j: tuple(offset(i, j, k) for k in range(m)) if i < j else (),
            f"generic({m})",
        )
    if tag == "rootsystem":
        system = str(params["R"])
        a, b = int(params["a"]), int(params["b"])
        min_n = {"A": 2, "B": 2, "C": 2, "D": 3, "BC": 1}.get(system.upper(), 1)
        if n < min_n:
            raise ArrangementError(f"{system}_n needs n >= {min_n}")
        return _rootsystem(system, n, a, b)
    raise ArrangementError(f"unknown family {tag!r}")


# ---------------------------------------------------------------------------
# flats of the intersection semilattice


class FlatIndex:
    """Memoised flats (nonempty intersections) of an arrangement.

    A flat is stored as the reduced row-echelon form of the augmented rows
    ``(normal | offset)`` of hyperplanes through it; that form is canonical.
    """

    def __init__(self, A: Arrangement):
        self.A = A
        self.d = A.dim
        self.rows = [tuple(h.normal) + (h.offset,) for h in A.hyperplanes]
        self._keys: dict[tuple, int] = {}
        self.echelons: list[tuple] = []
        self.ranks: list[int] = []
        self._closure: dict[int, int] = {}
        self._meet: dict[tuple[int, int], int | None] = {}
        self.top = self._intern(())

    def _intern(self, ech: tuple) -> int:
        fid = self._keys.get(ech)
        if fid is None:
            fid = len(self.echelons)
            self._keys[ech] = fid
            self.echelons.append(ech)
            self.ranks.append(len(ech))
        return fid

    @staticmethod
    def _reduce(ech, v):
        v = list(v)
        for p, row in ech:
            f = v[p]
            if f:
                for k in range(p, len(v)):
                    v[k] -= f * row[k]
        return v

    def rank(self, fid: int) -> int:
        return self.ranks[fid]

    def closure(self, fid: int) -> int:
        """Bitmask of hyperplanes containing the flat."""
        c = self._closure.get(fid)
        if c is None:
            ech = self.echelons[fid]
            c = 0
            for i, r in enumerate(self.rows):
                if not any(self._reduce(ech, r)):
                    c |= 1 << i
            self._closure[fid] = c
        return c

    def meet(self, fid: int, i: int) -> int | None:
        """Flat of (flat ∩ H_i), or None when the intersection is empty."""
        key = (fid, i)
        if key in self._meet:
            return self._meet[key]
        ech = self.echelons[fid]
        v = self._reduce(ech, self.rows[i])
        p = next((k for k in range(self.d) if v[k] != 0), None)
        if p is None:
            out = fid if v[self.d] == 0 else None
        else:
            inv = 1 / v[p]
            v = tuple(x * inv for x in v)
            new = []
            for q, row in ech:
                f = row[p]
                if f:
                    row = tuple(a - f * b for a, b in zip(row, v))
                new.append((q, row))
            new.append((p, v))
            new.sort()
            out = self._intern(tuple(new))
        self._meet[key] = out
        return out


class GraphicFlatIndex:
    """Flats of an arrangement whose normals are all e_i - e_j.

    Such a flat is a partition of the coordinates into blocks with fixed
    differences inside each block.  Vertex v is stored as (root, x_v - x_root)
    with root the smallest vertex of its block, which is canonical.
    """

    def __init__(self, A: Arrangement):
        if not A.is_type_a:
            raise ArrangementError("GraphicFlatIndex needs normals of the form e_i - e_j")
        self.A = A
        self.d = A.dim
        self.edges = []
        for h in A.hyperplanes:
            plus = h.normal.index(1)
            minus = h.normal.index(-1)
            self.edges.append((plus, minus, h.offset))
        self._keys: dict[tuple, int] = {}
        self.states: list[tuple] = []
        self.ranks: list[int] = []
        self._closure: dict[int, int] = {}
        self._meet: dict[tuple[int, int], int | None] = {}
        self.top = self._intern(tuple((v, 0) for v in range(self.d)))

    def _intern(self, state: tuple) -> int:
        fid = self._keys.get(state)
        if fid is None:
            fid = len(self.states)
            self._keys[state] = fid
            self.states.append(state)
            self.ranks.append(sum(1 for v, (root, _) in enumerate(state) if root != v))
        return fid

    def rank(self, fid: int) -> int:
        return self.ranks[fid]

    def closure(self, fid: int) -> int:
        c = self._closure.get(fid)
        if c is None:
            st = self.states[fid]
            c = 0
            for i, (p, m, off) in enumerate(self.edges):
                (rp, xp), (rm, xm) = st[p], st[m]
                if rp == rm and xp - xm == off:
                    c |= 1 << i
            self._closure[fid] = c
        return c

    def meet(self, fid: int, i: int) -> int | None:
        key = (fid, i)
        if key in self._meet:
            return self._meet[key]
        st = self.states[fid]
        p, m, off = self.edges[i]
        (rp, xp), (rm, xm) = st[p], st[m]
        if rp == rm:
            out = fid if xp - xm == off else None
        else:
            # x_rm = x_rp + delta
            delta = xp - xm - off
            if rp < rm:
                new = tuple((rp, x + delta) if r == rm else (r, x) for r, x in st)
            else:
                new = tuple((rm, x - delta) if r == rp else (r, x) for r, x in st)
            out = self._intern(new)
        self._meet[key] = out
        return out


def flat_index(A: Arrangement, kernel: str = "auto"):
    """Pick the flat kernel: "graphic" for e_i - e_j normals, else "generic"."""
    if kernel == "auto":
        kernel = "graphic" if A.is_type_a else "generic"
    if kernel == "graphic":
        return GraphicFlatIndex(A)
    if kernel == "generic":
        return FlatIndex(A)
    raise ArrangementError(f"unknown flat kernel {kernel!r}")


# ---------------------------------------------------------------------------
# characteristic polynomial engines


def _check_cap(A: Arrangement, cap: int | None, engine: str, advice: str = ""):
    if cap is not None and len(A) > cap:
        raise CapExceeded(
            f"{engine} engine cap is {cap} hyperplanes, arrangement has {len(A)}{advice}"
        )


@dataclass(frozen=True)
class CentralSubsetReport:
    subset: tuple[int, ...]
    rank: int
    central: bool


def central_subsets(A: Arrangement, cap: int | None = DEFAULT_CAPS.central_subsets) -> Iterator[CentralSubsetReport]:
    """Every subset of hyperplanes (in binary-counting order) with its rank
    and whether the hyperplanes have a common point."""
    _check_cap(A, cap, "central-subset")
    flats = flat_index(A)
    normals = [h.normal for h in A.hyperplanes]
    N = len(A)
    for mask in range(1 << N):
        subset = tuple(i for i in range(N) if mask >> i & 1)
        fid = flats.top
        for i in subset:
            fid = flats.meet(fid, i)
            if fid is None:
                break
        if fid is not None:
            yield CentralSubsetReport(subset, flats.rank(fid), True)
        else:
            r = rank(RationalMatrix.from_rows([normals[i] for i in subset]))
            yield CentralSubsetReport(subset, r, False)


def chi_whitney(A: Arrangement, cap: int | None = DEFAULT_CAPS.whitney, kernel: str = "auto") -> QPolynomial:
    """chi(q) = sum over central subsets I of (-1)^|I| q^(d - rk I).

    Subsets are grouped by (next index, current flat) so the sum is
    evaluated without listing each of the 2^N subsets separately.
    """
    _check_cap(A, cap, "Whitney", "; use the NBC engine for larger arrangements")
    flats = flat_index(A, kernel)
    N, d = len(A), A.dim
    memo: dict[tuple[int, int], tuple[int, ...]] = {}

    # S(k, F) = signed rank distribution of subsets J of {k..N-1} with F ∩ J nonempty
    def S(k: int, fid: int) -> tuple[int, ...]:
        key = (k, fid)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if k == N:
            out = [0] * (d + 1)
            out[flats.rank(fid)] = 1
            res = tuple(out)
        else:
            skip = S(k + 1, fid)
            nf = flats.meet(fid, k)
            if nf is None:
                res = skip
            else:
                take = S(k + 1, nf)
                res = tuple(s - t for s, t in zip(skip, take))
        memo[key] = res
        return res

    dist = S(0, flats.top)
    coeffs = [0] * (d + 1)
    for r, c in enumerate(dist):
        coeffs[d - r] += c
    return QPolynomial(coeffs)


def _nbc_poin(A: Arrangement, kernel: str = "auto") -> list[int]:
    """Counts of NBC sets by size, hyperplane order = index order."""
    flats = flat_index(A, kernel)
    N = len(A)
    memo: dict[tuple[int, int], tuple[int, ...]] = {}

    # Sets are grown by adding ever-smaller indices; after adding i the flat
    # of the current set must contain no hyperplane with index below i.
    def P(fid: int, m: int) -> tuple[int, ...]:
        key = (fid, m)
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = [1]
        clos = flats.closure(fid)
        for i in range(m):
            if clos >> i & 1:
                continue
            nf = flats.meet(fid, i)
            if nf is None:
                continue
            c = flats.closure(nf)
            if c & ((1 << i) - 1):
                continue  # some earlier hyperplane closes a broken central circuit
            sub = P(nf, i)
            if len(acc) < len(sub) + 1:
                acc += [0] * (len(sub) + 1 - len(acc))
            for k, v in enumerate(sub):
                acc[k + 1] += v
        res = tuple(acc)
        memo[key] = res
        return res

    return list(P(flats.top, N))


def nbc_sets(A: Arrangement) -> Iterator[tuple[int, ...]]:
    """Plain (unmemoised) enumeration of the NBC sets, for small arrangements."""
    flats = flat_index(A)

    def walk(fid, m, current):
        yield tuple(sorted(current))
        clos = flats.closure(fid)
        for i in range(m):
            if clos >> i & 1:
                continue
            nf = flats.meet(fid, i)
            if nf is None or flats.closure(nf) & ((1 << i) - 1):
                continue
            yield from walk(nf, i, current + [i])

    yield from walk(flats.top, len(A), [])


def poin_to_chi(poin: Sequence[int] | QPolynomial, d: int) -> QPolynomial:
    """chi(q) = q^d Poin(-1/q)."""
    c = poin.coeffs if isinstance(poin, QPolynomial) else [Fraction(v) for v in poin]
    out = [Fraction(0)] * (d + 1)
    for k, v in enumerate(c):
        out[d - k] += (-1) ** k * v
    return QPolynomial(out)


def chi_to_poin(chi: QPolynomial, d: int) -> QPolynomial:
    """Poin(q) = (-q)^d chi(-1/q), i.e. coefficient of q^k is (-1)^k [q^(d-k)] chi."""
    return QPolynomial((-1) ** k * chi[d - k] for k in range(d + 1))


def chi_nbc(A: Arrangement, order: Sequence[int] | None = None, kernel: str = "auto") -> QPolynomial:
    """Characteristic polynomial from NBC sets under the given hyperplane order."""
    if order is not None:
        A = A.reordered(order)
    return poin_to_chi(_nbc_poin(A, kernel), A.dim)


def poincare(A: Arrangement, engine: str = "nbc") -> QPolynomial:
    chi = chi_whitney(A) if engine == "whitney" else chi_nbc(A)
    return chi_to_poin(chi, A.dim)


def essential_chi(A: Arrangement, chi: QPolynomial) -> QPolynomial:
    """Divide out q^lineality (for type A in R^n this is the factor q of the
    diagonal), giving the polynomial of the essentialised arrangement."""
    k = A.lineality
    quo, rem = chi.divmod(QPolynomial.monomial(k))
    if not rem.is_zero():
        raise ArrangementError("characteristic polynomial not divisible by q^lineality")
    return quo


def region_count(chi: QPolynomial, d: int) -> int:
    v = chi_to_poin(chi, d)(Fraction(1))
    return int(v)


def bounded_count(chi: QPolynomial, d: int) -> int:
    """Relatively bounded regions: (-1)^rank Poin(-1), rank = d - lineality.

    The lineality is read off chi as the multiplicity of the root q = 0.
    """
    poin_m1 = chi_to_poin(chi, d)(Fraction(-1))
    lin = next(k for k, c in enumerate(chi.coeffs) if c != 0)
    return int((-1) ** (d - lin) * poin_m1)


# ---------------------------------------------------------------------------
# geometric engine


@dataclass(frozen=True)
class Region:
    signs: tuple[int, ...]
    witness: tuple[Fraction, ...]


@dataclass(frozen=True)
class RegionReport:
    r: int
    b: int
    regions: tuple[Region, ...] | None = None


def _strict_point(A: Arrangement, idx: Sequence[int], signs: Sequence[int]):
    """A point with sign_i (h_i.x - a_i) > 0 for all listed i, or None.

    Solves max delta s.t. sign_i (h_i.x - a_i) >= delta, delta <= 1.
    """
    d = A.dim
    rows, rhs = [], []
    for i, s in zip(idx, signs):
        h = A.hyperplanes[i]
        rows.append([-s * v for v in h.normal] + [1])
        rhs.append(-s * h.offset)
    rows.append([0] * d + [1])
    rhs.append(1)
    res = lp.maximize([0] * d + [1], rows, rhs, free=[True] * (d + 1))
    if res.status != "optimal" or res.value <= 0:
        return None
    return res.solution[:d]


def _is_bounded(A: Arrangement, signs: Sequence[int]) -> bool:
    """Relatively bounded iff the recession cone is the lineality space:
    max sum sign_i h_i.y over sign_i h_i.y >= 0 (capped at 1) must be 0."""
    d = A.dim
    if not A.hyperplanes:
        return True  # the lineality space is everything
    total = [sum(s * h.normal[k] for s, h in zip(signs, A.hyperplanes)) for k in range(d)]
    rows = [[-s * v for v in h.normal] for s, h in zip(signs, A.hyperplanes)]
    rhs = [0] * len(rows)
    rows.append(total)
    rhs.append(1)
    res = lp.maximize(total, rows, rhs, free=[True] * d)
    return res.status == "optimal" and res.value == 0


def regions_geometric(
    A: Arrangement,
    keep_regions: bool = False,
    cap: int | None = DEFAULT_CAPS.geometric,
) -> RegionReport:
    """Enumerate regions by inserting hyperplanes one at a time.

    Each region carries an interior witness point; a new hyperplane either
    misses the region (one side) or cuts it, which is decided by one exact
    LP for the side the witness is not on.
    """
    _check_cap(A, cap, "geometric")
    d = A.dim
    regions = [Region((), tuple(Fraction(0) for _ in range(d)))]
    for k, h in enumerate(A.hyperplanes):
        idx = list(range(k + 1))
        nxt = []
        for reg in regions:
            val = h.value(reg.witness)
            if val == 0:
                # the hyperplane passes through the open region: both sides survive
                for s in (1, -1):
                    p = _strict_point(A, idx, reg.signs + (s,))
                    nxt.append(Region(reg.signs + (s,), p))
                continue
            s = 1 if val > 0 else -1
            nxt.append(Region(reg.signs + (s,), reg.witness))
            p = _strict_point(A, idx, reg.signs + (-s,))
            if p is not None:
                nxt.append(Region(reg.signs + (-s,), p))
        regions = nxt
    regions.sort(key=lambda r: r.signs)
    b = sum(1 for reg in regions if _is_bounded(A, reg.signs))
    return RegionReport(len(regions), b, tuple(regions) if keep_regions else None)


# ---------------------------------------------------------------------------
# finite field engine


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, math.isqrt(p) + 1))


def _integer_rows(A: Arrangement) -> list[list[int]]:
    rows = []
    for h in A.hyperplanes:
        vals = list(h.normal) + [h.offset]
        if any(v.denominator != 1 for v in vals):
            raise ArrangementError("finite-field engine needs integer normals and offsets")
        rows.append([int(v) for v in vals])
    return rows


def bad_primes(A: Arrangement) -> set[int]:
    """Primes dividing some nonzero minor of the augmented matrix (normals | offsets).

    Away from these primes every subset keeps its rank and centrality mod p.
    """
    rows = _integer_rows(A)
    ncol = A.dim + 1
    out: set[int] = set()
    for k in range(1, min(len(rows), ncol) + 1):
        for rsel in itertools.combinations(range(len(rows)), k):
            for csel in itertools.combinations(range(ncol), k):
                det = abs(int(determinant([[rows[i][j] for j in csel] for i in rsel])))
                if det > 1:
                    m, f = det, 2
                    while f * f <= m:
                        while m % f == 0:
                            out.add(f)
                            m //= f
                        f += 1
                    if m > 1:
                        out.add(m)
    return out


def check_prime_admissible(A: Arrangement, p: int, caps: Caps = DEFAULT_CAPS) -> None:
    if not _is_prime(p):
        raise ArrangementError(f"{p} is not prime")
    if A.dim > caps.finite_field_dim:
        raise CapExceeded(f"finite-field engine cap is dimension {caps.finite_field_dim}, got {A.dim}")
    if p > caps.finite_field_prime:
        raise CapExceeded(f"finite-field engine cap is p <= {caps.finite_field_prime}, got {p}")
    rows = _integer_rows(A)
    max_off = max((abs(r[-1]) for r in rows), default=0)
    if p <= 2 * max_off:
        raise ArrangementError(f"prime {p} must exceed twice the largest offset {max_off}")
    if p in bad_primes(A):
        raise ArrangementError(f"prime {p} divides a minor of the arrangement (bad reduction)")


def chi_finite_field(A: Arrangement, p: int, caps: Caps = DEFAULT_CAPS) -> int:
    """#{x in F_p^d : h_i(x) != a_i mod p for every i}, by brute force."""
    check_prime_admissible(A, p, caps)
    rows = _integer_rows(A)
    d = A.dim
    if d == 0:
        return 1 if not rows else 0
    grids = np.indices((p,) * d, dtype=np.int64).reshape(d, -1)
    alive = np.ones(grids.shape[1], dtype=bool)
    for r in rows:
        val = np.zeros(grids.shape[1], dtype=np.int64)
        for k in range(d):
            if r[k]:
                val += r[k] * grids[k]
        alive &= (val - r[d]) % p != 0
    return int(alive.sum())


def admissible_primes(A: Arrangement, count: int, start: int = 2, caps: Caps = DEFAULT_CAPS) -> list[int]:
    out = []
    bad = bad_primes(A)
    max_off = max((abs(r[-1]) for r in _integer_rows(A)), default=0)
    p = max(start, 2 * max_off + 1)
    while len(out) < count and p <= caps.finite_field_prime:
        if _is_prime(p) and p not in bad:
            out.append(p)
        p += 1
    return out


def finite_field_agreement(A: Arrangement, primes: Sequence[int], chi: QPolynomial | None = None) -> dict[int, tuple[int, int]]:
    """Point counts versus chi(p) at several primes: {p: (count, chi(p))}."""
    if chi is None:
        chi = chi_whitney(A)
    return {p: (chi_finite_field(A, p), int(chi(Fraction(p)))) for p in primes}
