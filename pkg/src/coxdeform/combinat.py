"""Combinatorial families equinumerous with regions of braid deformations.

Vertices are 0-based internally; only the relative order of labels matters
for every filter below, so this is the same as labelling by 1..n.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .exactmath import QPolynomial, stirling_cycle


class CombinatError(ValueError):
    pass


class EnumerationCapExceeded(CombinatError):
    pass


def _cap(n: int, limit: int, what: str) -> None:
    if n < 0:
        raise CombinatError(f"{what}: n must be >= 0")
    if n > limit:
        raise EnumerationCapExceeded(f"{what}: enumeration cap is n <= {limit}, got {n}")


def _pairs(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


# ---------------------------------------------------------------------------
# trees


def alternating_tree_formula(n: int) -> int:
    """2^{-n} sum_k C(n,k) (k+1)^{n-1}."""
    if n < 0:
        raise CombinatError("n must be >= 0")
    total = sum(math.comb(n, k) * Fraction(k + 1) ** (n - 1) for k in range(n + 1))
    value = total / 2 ** n
    if value.denominator != 1:
        raise ArithmeticError(f"alternating-tree formula is not integral at n={n}")
    return int(value)


def _prufer_edges(seq: Sequence[int], size: int) -> list[tuple[int, int]]:
    degree = [1] * size
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = next(u for u in range(size) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(size) if degree[x] == 1)
    edges.append((u, w))
    return edges


def labelled_trees(size: int) -> Iterator[list[tuple[int, int]]]:
    """All labelled trees on {0..size-1} as edge lists (Pruefer decoding)."""
    if size == 1:
        yield []
        return
    for seq in itertools.product(range(size), repeat=size - 2):
        yield _prufer_edges(seq, size)


def is_alternating(size: int, edges: Sequence[tuple[int, int]]) -> bool:
    """No path i - j - k with i < j < k."""
    lo = [False] * size  # has a smaller neighbour
    hi = [False] * size  # has a larger neighbour
    for u, v in edges:
        a, b = min(u, v), max(u, v)
        hi[a] = True
        lo[b] = True
    return not any(lo[v] and hi[v] for v in range(size))


def alternating_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    """Alternating trees on n + 1 vertices."""
    _cap(n, 8, "alternating trees")
    for edges in labelled_trees(n + 1):
        if is_alternating(n + 1, edges):
            yield edges


def count_alternating_trees(n: int, enumerate: bool = False) -> int:
    if not enumerate:
        return alternating_tree_formula(n)
    return sum(1 for _ in alternating_trees(n))


def count_local_binary_search_trees(n: int) -> int:
    """Plane binary trees on n labels, left child < parent < right child.

    Exhaustive over (root, left label set) choices; memoized on the label set.
    """
    _cap(n, 8, "local binary search trees")

    @lru_cache(maxsize=None)
    def rooted(mask: int, root: int) -> int:
        rest = mask & ~(1 << root)
        total = 0
        sub = rest
        while True:
            left, right = sub, rest & ~sub
            total += side(left, root, below=True) * side(right, root, below=False)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return total

    @lru_cache(maxsize=None)
    def side(mask: int, parent: int, below: bool) -> int:
        if mask == 0:
            return 1
        roots = range(parent) if below else range(parent + 1, n)
        return sum(rooted(mask, r) for r in roots if mask >> r & 1)

    if n == 0:
        return 1
    full = (1 << n) - 1
    return sum(rooted(full, r) for r in range(n))


# ---------------------------------------------------------------------------
# tournaments


@dataclass(frozen=True)
class Tournament:
    n: int
    edges: tuple[bool, ...]  # one bit per pair (i, j), i < j, in lexicographic order; True = i -> j

    def __post_init__(self):
        if len(self.edges) != self.n * (self.n - 1) // 2:
            raise CombinatError("a tournament needs exactly one orientation per pair")

    def beats(self, i: int, j: int) -> bool:
        if i == j:
            return False
        a, b = min(i, j), max(i, j)
        forward = self.edges[_pair_index(self.n, a, b)]
        return forward if i < j else not forward

    def out_masks(self) -> list[int]:
        out = [0] * self.n
        for (i, j), fwd in zip(_pairs(self.n), self.edges):
            if fwd:
                out[i] |= 1 << j
            else:
                out[j] |= 1 << i
        return out


def _pair_index(n: int, i: int, j: int) -> int:
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def tournaments(n: int) -> Iterator[Tournament]:
    _cap(n, 6, "tournaments")
    for bits in itertools.product((True, False), repeat=n * (n - 1) // 2):
        yield Tournament(n, bits)


def has_ascending_cycle(t: Tournament) -> bool:
    """Definitional scan: some directed cycle with asc >= des.

    Each cycle is visited once, starting from its smallest vertex.
    """
    out = t.out_masks()
    n = t.n

    def dfs(start: int, v: int, length: int, seen: int, balance: int) -> bool:
        # balance = asc - des along the path start -> ... -> v
        if length >= 3 and out[v] >> start & 1:
            # v > start, so the closing edge v -> start is a descent
            if balance - 1 >= 0:
                return True
        for w in range(start + 1, n):
            if out[v] >> w & 1 and not seen >> w & 1:
                if dfs(start, w, length + 1, seen | 1 << w, balance + (1 if v < w else -1)):
                    return True
        return False

    return any(dfs(s, s, 1, 1 << s, 0) for s in range(n))


# the five obstruction cycles, written on positions of a < b < c < d
_OBSTRUCTIONS_4 = ((0, 2, 1, 3), (0, 3, 1, 2), (0, 1, 3, 2), (0, 2, 3, 1))


def has_obstruction_cycle(t: Tournament) -> bool:
    """Finite obstruction test: a cycle of type C0 (3 vertices) or C1..C4 (4 vertices)."""
    for a, b, c in itertools.combinations(range(t.n), 3):
        if t.beats(a, b) and t.beats(b, c) and t.beats(c, a):
            return True
    for quad in itertools.combinations(range(t.n), 4):
        for pattern in _OBSTRUCTIONS_4:
            cyc = [quad[p] for p in pattern]
            if all(t.beats(cyc[k], cyc[(k + 1) % 4]) for k in range(4)):
                return True
    return False


def is_semiacyclic(t: Tournament, method: str = "definition") -> bool:
    if method == "definition":
        return not has_ascending_cycle(t)
    if method == "obstructions":
        return not has_obstruction_cycle(t)
    raise CombinatError(f"unknown semiacyclicity method {method!r}")


def count_semiacyclic_tournaments(n: int, method: str = "definition") -> int:
    return sum(1 for t in tournaments(n) if is_semiacyclic(t, method))


def semiacyclic_filters_agree(n: int) -> bool:
    return all(is_semiacyclic(t, "definition") == is_semiacyclic(t, "obstructions") for t in tournaments(n))


# ---------------------------------------------------------------------------
# posets


@dataclass(frozen=True)
class Poset:
    n: int
    lt: frozenset  # pairs (i, j) meaning i < j in the poset

    def __post_init__(self):
        for i, j in self.lt:
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise CombinatError(f"bad relation {(i, j)}")
        for (i, j), (k, l) in itertools.product(self.lt, repeat=2):
            if j == k and (i, l) not in self.lt:
                raise CombinatError("relation is not transitive")
        if any((j, i) in self.lt for i, j in self.lt):
            raise CombinatError("relation is not antisymmetric")

    def less(self, i: int, j: int) -> bool:
        return (i, j) in self.lt

    def comparable(self, i: int, j: int) -> bool:
        return (i, j) in self.lt or (j, i) in self.lt

    def up_masks(self) -> tuple[int, ...]:
        up = [0] * self.n
        for i, j in self.lt:
            up[i] |= 1 << j
        return tuple(up)

    @classmethod
    def from_up_masks(cls, up: Sequence[int]) -> "Poset":
        n = len(up)
        return cls(n, frozenset((i, j) for i in range(n) for j in range(n) if up[i] >> j & 1))


def _posets_up(n: int) -> Iterator[tuple[int, ...]]:
    """Posets on {0..n-1} as up-set masks, built by adding one element at a time.

    The new element gets a down-set D (an order ideal) and an up-set U (a
    filter), and every d in D must already lie below every u in U.
    """
    if n == 0:
        yield ()
        return
    for up in _posets_up(n - 1):
        m = n - 1
        down = [0] * m
        for i in range(m):
            for j in range(m):
                if up[i] >> j & 1:
                    down[j] |= 1 << i
        ideals = [s for s in range(1 << m) if all(down[i] & ~s == 0 for i in range(m) if s >> i & 1)]
        filters = [s for s in range(1 << m) if all(up[i] & ~s == 0 for i in range(m) if s >> i & 1)]
        for D in ideals:
            for U in filters:
                if D & U:
                    continue
                if any(U & ~up[d] for d in range(m) if D >> d & 1):
                    continue
                new = [up[i] | (1 << m if D >> i & 1 else 0) for i in range(m)]
                yield tuple(new) + (U,)


def posets(n: int) -> Iterator[Poset]:
    _cap(n, 6, "posets")
    for up in _posets_up(n):
        yield Poset.from_up_masks(up)


def _natural_posets_up(n: int) -> Iterator[tuple[int, ...]]:
    """Posets in which i < j in P implies i < j as integers."""
    pairs = _pairs(n)
    for bits in itertools.product((False, True), repeat=len(pairs)):
        up = [0] * n
        for (i, j), on in zip(pairs, bits):
            if on:
                up[i] |= 1 << j
        if all(up[j] & ~up[i] == 0 for i in range(n) for j in range(n) if up[i] >> j & 1):
            yield tuple(up)


def _induced(up: Sequence[int], verts: Sequence[int]) -> frozenset:
    return frozenset(
        (x, y) for x, u in enumerate(verts) for y, v in enumerate(verts) if up[u] >> v & 1
    )


def _is_2p2(rel: frozenset) -> bool:
    # two disjoint 2-chains, nothing else
    if len(rel) != 2:
        return False
    (a, b), (c, d) = sorted(rel)
    return len({a, b, c, d}) == 4


def _is_3p1(rel: frozenset) -> bool:
    # a 3-chain plus an isolated point
    if len(rel) != 3:
        return False
    verts = {v for pair in rel for v in pair}
    if len(verts) != 3:
        return False
    for x, y, z in itertools.permutations(verts):
        if rel == {(x, y), (y, z), (x, z)}:
            return True
    return False


def is_semiorder(p: Poset) -> bool:
    """No induced 2+2 and no induced 3+1."""
    up = p.up_masks()
    for quad in itertools.combinations(range(p.n), 4):
        rel = _induced(up, quad)
        if _is_2p2(rel) or _is_3p1(rel):
            return False
    return True


# the four sleek obstructions on positions a < b < c < d
_SLEEK_OBSTRUCTIONS = (
    frozenset({(0, 2), (1, 3)}),
    frozenset({(0, 3), (1, 2)}),
    frozenset({(0, 1), (1, 3), (0, 3)}),
    frozenset({(0, 2), (2, 3), (0, 3)}),
)


def is_sleek(p: Poset) -> bool:
    if any(i > j for i, j in p.lt):
        return False
    up = p.up_masks()
    return not any(_induced(up, quad) in _SLEEK_OBSTRUCTIONS for quad in itertools.combinations(range(p.n), 4))


def sleek_posets(n: int) -> Iterator[Poset]:
    _cap(n, 6, "sleek posets")
    for up in _natural_posets_up(n):
        p = Poset.from_up_masks(up)
        if is_sleek(p):
            yield p


def count_sleek_posets(n: int) -> int:
    return sum(1 for _ in sleek_posets(n))


def canonical_form(p: Poset) -> tuple:
    """Lexicographically least relation set over all relabellings."""
    best = None
    for perm in itertools.permutations(range(p.n)):
        key = tuple(sorted((perm[i], perm[j]) for i, j in p.lt))
        if best is None or key < best:
            best = key
    return best


def count_semiorders(n: int, labelled: bool = True) -> int:
    _cap(n, 6 if labelled else 5, "labelled semiorders" if labelled else "unlabelled semiorders")
    orders = (p for p in posets(n) if is_semiorder(p))
    if labelled:
        return sum(1 for _ in orders)
    return len({canonical_form(p) for p in orders})


def semiorders_from_regions(n: int) -> set:
    """Posets i >_P j iff x_i - x_j > 1, read off witness points of each
    region of the Catalan arrangement x_i - x_j = +-1."""
    from .arrangement import build_family, regions_geometric

    _cap(n, 4, "region-derived semiorders")
    if n == 0:
        return {frozenset()}
    report = regions_geometric(build_family("catalan", n), keep_regions=True)
    out = set()
    for region in report.regions:
        x = region.witness
        out.add(frozenset((j, i) for i in range(n) for j in range(n) if i != j and x[i] - x[j] > 1))
    return out


# ---------------------------------------------------------------------------
# forests


def _forests(n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Edge sets of all forests on n labelled vertices."""
    pairs = _pairs(n)

    def walk(start: int, comp: tuple[int, ...], chosen: tuple):
        yield chosen
        for k in range(start, len(pairs)):
            i, j = pairs[k]
            ci, cj = comp[i], comp[j]
            if ci != cj:
                merged = tuple(ci if c == cj else c for c in comp)
                yield from walk(k + 1, merged, chosen + ((i, j),))

    yield from walk(0, tuple(range(n)), ())


def _multiplicity(m) -> Callable[[int, int], int]:
    if callable(m):
        return m
    if isinstance(m, dict):
        return lambda i, j: m.get((i, j), m.get((j, i), 0))
    if isinstance(m, int):
        return lambda i, j: m
    return lambda i, j: m[i][j]


def count_forests_weighted(n: int, m=1) -> QPolynomial:
    """sum over forests F of (prod_{ij in F} m_ij) q^{|F|}.

    ``m`` may be an int (constant), a symmetric matrix, a dict keyed by pairs,
    or a function of (i, j) with 0-based i < j.
    """
    _cap(n, 8, "weighted forests")
    weight = _multiplicity(m)
    coeffs = [0] * max(n, 1)
    for forest in _forests(n):
        coeffs[len(forest)] += math.prod(weight(i, j) for i, j in forest)
    return QPolynomial(coeffs)


@dataclass(frozen=True)
class ColoredForest:
    n: int
    edges: tuple[tuple[int, int, int], ...]  # (i, j, colour) with i < j


@dataclass(frozen=True)
class GradedForest:
    n: int
    edges: tuple[tuple[int, int], ...]  # (u, v) with u < v
    levels: tuple[int, ...]
    a: int
    b: int

    def __post_init__(self):
        for u, v in self.edges:
            t = self.levels[v] - self.levels[u]
            if not (u < v and -self.a + 1 <= t <= self.b - 1):
                raise CombinatError(f"edge {(u, v)} of type {t} is outside [{-self.a + 1}, {self.b - 1}]")
        if any(h < 0 for h in self.levels):
            raise CombinatError("levels must be nonnegative")

    def components(self) -> list[list[int]]:
        comp = list(range(self.n))

        def find(x):
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        for u, v in self.edges:
            comp[find(u)] = find(v)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    @property
    def grounded(self) -> bool:
        return all(any(self.levels[v] == 0 for v in c) for c in self.components())

    def has_broken_circuit(self) -> bool:
        """Some non-edge triple (u, t, v) closes a graded cycle and is its
        smallest triple in the (u, t, v) lexicographic order."""
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        edge_set = set(self.edges)
        lo, hi = -self.a + 1, self.b - 1
        for comp in self.components():
            for u, v in itertools.combinations(comp, 2):
                if (u, v) in edge_set:
                    continue
                t = self.levels[v] - self.levels[u]
                if not lo <= t <= hi:
                    continue
                path = _tree_path(adj, u, v)
                triples = []
                for x, y in zip(path, path[1:]):
                    s, w = min(x, y), max(x, y)
                    triples.append((s, self.levels[w] - self.levels[s], w))
                if (u, t, v) < min(triples):
                    return True
        return False


def _tree_path(adj, src: int, dst: int) -> list[int]:
    parent = {src: None}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == dst:
            break
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    path = [dst]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def level_bound(n: int, a: int, b: int) -> int:
    return (n - 1) * max(a - 1, b - 1, 1) if n else 0


def graded_forests(n: int, a: int, b: int, level_cap: int | None = None) -> Iterator[GradedForest]:
    """Grounded graded forests of type (a, b) without broken circuits.

    Each forest is enumerated together with an edge type in [-a+1, b-1]; the
    grounded grading is then forced (lowest level 0 in every component).
    Gradings with a level above ``level_cap`` are dropped.
    """
    if a < 0 or b < 0 or a + b < 2:
        raise CombinatError("graded forests need a, b >= 0 and a + b >= 2")
    _cap(n, 6, "graded forests")
    if level_cap is None:
        level_cap = level_bound(n, a, b)
    types = range(-a + 1, b)
    for forest in _forests(n):
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n)}
        for k, (u, v) in enumerate(forest):
            adj[u].append((v, k))
            adj[v].append((u, k))
        for colours in itertools.product(types, repeat=len(forest)):
            levels = [None] * n
            for root in range(n):
                if levels[root] is not None:
                    continue
                levels[root] = 0
                comp, stack = [root], [root]
                while stack:
                    x = stack.pop()
                    for y, k in adj[x]:
                        if levels[y] is None:
                            u, _ = forest[k]
                            levels[y] = levels[x] + (colours[k] if x == u else -colours[k])
                            comp.append(y)
                            stack.append(y)
                low = min(levels[v] for v in comp)
                for v in comp:
                    levels[v] -= low
            if max(levels, default=0) > level_cap:
                continue
            g = GradedForest(n, forest, tuple(levels), a, b)
            if not g.has_broken_circuit():
                yield g


def count_graded_forests(n: int, a: int, b: int, level_cap: int | None = None) -> int:
    return sum(1 for _ in graded_forests(n, a, b, level_cap))


# ---------------------------------------------------------------------------
# semigeneric deformation: bipartite graphs


def _components(n: int, edges) -> int:
    comp = list(range(n))

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for u, v in edges:
        comp[find(u)] = find(v)
    return len({find(v) for v in range(n)})


def _is_bipartite(n: int, edges) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    colour = [None] * n
    for s in range(n):
        if colour[s] is not None:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if colour[y] is None:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return False
    return True


def count_blocks(n: int, edges) -> int:
    """Number of blocks (biconnected components with at least one edge)."""
    adj = [[] for _ in range(n)]
    for k, (u, v) in enumerate(edges):
        adj[u].append((v, k))
        adj[v].append((u, k))
    disc = [-1] * n
    low = [0] * n
    clock = [0]
    blocks = [0]
    stack: list[int] = []

    def dfs(v: int, via: int):
        disc[v] = low[v] = clock[0]
        clock[0] += 1
        for w, k in adj[v]:
            if k == via:
                continue
            if disc[w] == -1:
                stack.append(k)
                dfs(w, k)
                low[v] = min(low[v], low[w])
                if low[w] >= disc[v]:
                    blocks[0] += 1
                    while stack.pop() != k:
                        pass
            elif disc[w] < disc[v]:
                stack.append(k)
                low[v] = min(low[v], disc[w])

    for v in range(n):
        if disc[v] == -1:
            dfs(v, -1)
    return blocks[0]


def semigeneric_chi_bruteforce(n: int) -> QPolynomial:
    """sum over bipartite graphs G of (-1)^{e(G)} 2^{b(G)} q^{c(G)}."""
    _cap(n, 6, "semigeneric brute force")
    pairs = _pairs(n)
    coeffs = [0] * (n + 1)
    for bits in itertools.product((False, True), repeat=len(pairs)):
        edges = [p for p, on in zip(pairs, bits) if on]
        if not _is_bipartite(n, edges):
            continue
        coeffs[_components(n, edges)] += (-1) ** len(edges) * 2 ** count_blocks(n, edges)
    return QPolynomial(coeffs)


def semigeneric_regions_bruteforce(n: int) -> int:
    """(-1)^n sum_G (-1)^{e+c} 2^b, i.e. (-1)^n chi(-1)."""
    return int((-1) ** n * semigeneric_chi_bruteforce(n)(-1))


# ---------------------------------------------------------------------------
# Catalan relations


@lru_cache(maxsize=None)
def catalan_region_counts(n: int) -> tuple[int, int]:
    """(r(C_{n-1}), r(C0_{n-1})) from the arrangement engine; n = 0 gives (1, 1)."""
    from .arrangement import build_family, chi_nbc, region_count

    if n == 0:
        return 1, 1
    out = []
    for tag in ("catalan", "catalan0"):
        A = build_family(tag, n)
        out.append(region_count(chi_nbc(A), A.dim))
    return out[0], out[1]


def stirling_relation_sides(n: int) -> tuple[int, int]:
    """(r(C0_{n-1}), sum_k c(n,k) r(C_{k-1})), with r(C_{-1}) = 1."""
    _cap(n, 5, "Stirling relation")
    lhs = catalan_region_counts(n)[1]
    rhs = sum(stirling_cycle(n, k) * catalan_region_counts(k)[0] for k in range(n + 1))
    return lhs, rhs


def stirling_relation_check(n: int) -> bool:
    lhs, rhs = stirling_relation_sides(n)
    return lhs == rhs


def catalan_egf_identity(order: int) -> bool:
    """f(t) == g(1 - e^{-t}) coefficientwise through t^order, where f and g are
    the region EGFs of the two Catalan arrangements."""
    from .series import EgfSeries, exp

    _cap(order, 6, "Catalan EGF identity")
    counts = [catalan_region_counts(n) for n in range(order + 1)]
    f = EgfSeries.from_egf([c[0] for c in counts])
    g = EgfSeries.from_egf([c[1] for c in counts])
    x = EgfSeries.x(order)
    inner = 1 - exp(-x)
    return g.compose(inner) == f
