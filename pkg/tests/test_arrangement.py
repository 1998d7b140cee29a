import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coxdeform.arrangement import (
    Arrangement,
    ArrangementError,
    CapExceeded,
    Caps,
    Hyperplane,
    admissible_primes,
    bad_primes,
    bounded_count,
    build_family,
    central_subsets,
    chi_finite_field,
    chi_nbc,
    chi_to_poin,
    chi_whitney,
    essential_chi,
    finite_field_agreement,
    nbc_sets,
    poincare,
    poin_to_chi,
    region_count,
    regions_geometric,
)
from coxdeform.combinat import count_forests_weighted
from coxdeform.exactmath import QPolynomial

q = QPolynomial.q


def single(d=1, offset=0):
    return Arrangement(d, (Hyperplane((1,) + (0,) * (d - 1), offset),))


# -- construction ----------------------------------------------------------------


def test_family_examples():
    L = build_family("linial", 3)
    assert len(L) == 3 and L.dim == 3
    assert {h.offset for h in L.hyperplanes} == {1}
    S = build_family("shi", 2)
    assert sorted(h.offset for h in S.hyperplanes) == [0, 1]
    T = build_family("trunc_affine", 4, a=0, b=2)
    assert len(T) == 6 and {h.offset for h in T.hyperplanes} == {1}


def test_family_sizes():
    assert len(build_family("catalan0", 4)) == 18
    assert len(build_family("ext_shi", 3, a=2)) == 12
    assert len(build_family("generic", 3, m=2)) == 6
    assert len(build_family("rootsystem", 2, R="B", a=0, b=2)) == 4


@pytest.mark.parametrize(
    "tag, n, params",
    [("nosuch", 3, {}), ("linial", 0, {}), ("trunc_affine", 3, {"a": 1, "b": 0}), ("rootsystem", 2, {"R": "D", "a": 0, "b": 2})],
)
def test_family_errors(tag, n, params):
    with pytest.raises(ArrangementError):
        build_family(tag, n, **params)


def test_duplicate_and_degenerate_hyperplanes():
    with pytest.raises(ArrangementError):
        Arrangement(2, (Hyperplane((1, 1), 1), Hyperplane((2, 2), 2)))
    with pytest.raises(ArrangementError):
        Hyperplane((0, 0), 1)
    with pytest.raises(ArrangementError):
        Arrangement(3, (Hyperplane((1, 1), 0),))


def test_json_roundtrip(tmp_path):
    A = build_family("rootsystem", 2, R="BC", a=1, b=2)
    again = Arrangement.from_dict(json.loads(json.dumps(A.to_dict())))
    assert again == A
    path = tmp_path / "arr.json"
    path.write_text(json.dumps(A.to_dict()))
    assert Arrangement.load(path) == A


def test_json_malformed():
    with pytest.raises(ArrangementError):
        Arrangement.from_dict({"dim": 2, "hyperplanes": [{"normal": ["1"]}]})


# -- characteristic polynomial ---------------------------------------------------


def test_whitney_examples():
    braid = build_family("braid", 3)
    assert essential_chi(braid, chi_whitney(braid)) == q**2 - 3 * q + 2
    assert chi_to_poin(essential_chi(braid, chi_whitney(braid)), 2) == (1 + q) * (1 + 2 * q)
    lin = build_family("linial", 3)
    assert essential_chi(lin, chi_whitney(lin)) == q**2 - 3 * q + 3
    assert chi_whitney(Arrangement(2, ())) == q**2


def test_whitney_cap():
    with pytest.raises(CapExceeded):
        chi_whitney(build_family("catalan0", 4), cap=10)


def test_nbc_examples():
    assert poincare(build_family("shi", 3))(1) == 16
    assert poincare(build_family("linial", 4))(1) == 36
    assert poincare(build_family("catalan0", 3))(1) == 30


def test_poin_chi_inverse():
    chi = chi_nbc(build_family("shi", 4))
    assert poin_to_chi(chi_to_poin(chi, 4), 4) == chi


def test_nbc_sets_count_matches_poincare():
    A = build_family("catalan", 3)
    sets = list(nbc_sets(A))
    poin = poincare(A)
    for k in range(4):
        assert sum(1 for s in sets if len(s) == k) == poin[k]


SMALL = [
    ("braid", 4, {}),
    ("linial", 4, {}),
    ("shi", 3, {}),
    ("ext_shi", 3, {"a": 2}),
    ("catalan", 3, {}),
    ("catalan0", 3, {}),
    ("trunc_affine", 3, {"a": 1, "b": 3}),
    ("semigeneric", 3, {}),
    ("generic", 3, {"m": 2}),
    ("rootsystem", 2, {"R": "B", "a": 1, "b": 2}),
    ("rootsystem", 2, {"R": "BC", "a": 0, "b": 2}),
    ("rootsystem", 3, {"R": "D", "a": 0, "b": 2}),
]


@pytest.mark.parametrize("tag, n, params", SMALL, ids=lambda v: str(v))
def test_engines_agree(tag, n, params):
    A = build_family(tag, n, **params)
    chi = chi_whitney(A)
    assert chi_nbc(A) == chi
    poin = chi_to_poin(chi, A.dim)
    rep = regions_geometric(A)
    assert rep.r == poin(1) == region_count(chi, A.dim)
    assert rep.b == bounded_count(chi, A.dim)
    for k in range(A.dim + 1):
        c = chi[A.dim - k]
        assert c == 0 or (c > 0) == (k % 2 == 0)
    if A.dim <= 3:
        for p, (count, value) in finite_field_agreement(A, admissible_primes(A, 3, start=11)).items():
            assert count == value


@pytest.mark.parametrize("tag, n, params", SMALL, ids=lambda v: str(v))
def test_nbc_order_independence(tag, n, params):
    A = build_family(tag, n, **params)
    rng = random.Random(len(A) * 31 + n)
    ref = chi_nbc(A)
    for _ in range(5):
        order = list(range(len(A)))
        rng.shuffle(order)
        assert chi_nbc(A, order) == ref


@pytest.mark.parametrize("tag, n", [("linial", 5), ("shi", 4), ("catalan", 4), ("braid", 5)])
def test_graphic_kernel_matches_generic(tag, n):
    A = build_family(tag, n)
    assert chi_nbc(A, kernel="graphic") == chi_nbc(A, kernel="generic")
    assert chi_whitney(A, kernel="graphic") == chi_whitney(A, kernel="generic")


def test_graphic_kernel_refuses_other_normals():
    A = build_family("rootsystem", 2, R="B", a=0, b=2)
    with pytest.raises(ArrangementError):
        chi_nbc(A, kernel="graphic")


@pytest.mark.parametrize("tag", ["braid", "linial", "shi", "catalan", "catalan0", "semigeneric"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_diagonal_convention(tag, n):
    A = build_family(tag, n)
    chi = chi_nbc(A)
    quo, rem = chi.divmod(q)
    assert rem.is_zero()
    assert essential_chi(A, chi) == quo


@pytest.mark.parametrize("n, m", [(3, 1), (3, 2), (4, 1), (4, 2)])
def test_generic_regions_are_forest_sums(n, m):
    A = build_family("generic", n, m=m)
    assert poincare(A) == count_forests_weighted(n, m)


# -- regions -----------------------------------------------------------------------


def test_region_examples():
    rep = regions_geometric(build_family("linial", 3))
    assert (rep.r, rep.b) == (7, 1)
    rep = regions_geometric(build_family("braid", 3))
    assert (rep.r, rep.b) == (6, 0)
    rep = regions_geometric(single())
    assert (rep.r, rep.b) == (2, 0)
    rep = regions_geometric(Arrangement(1, (Hyperplane((1,), 0), Hyperplane((1,), 1))))
    assert (rep.r, rep.b) == (3, 1)


def test_region_witnesses_are_interior():
    A = build_family("catalan", 3)
    rep = regions_geometric(A, keep_regions=True)
    assert len({r.signs for r in rep.regions}) == rep.r
    for reg in rep.regions:
        for s, h in zip(reg.signs, A.hyperplanes):
            assert s * h.value(reg.witness) > 0


def test_geometric_cap():
    with pytest.raises(CapExceeded):
        regions_geometric(build_family("catalan0", 4), cap=12)


# -- central subsets ---------------------------------------------------------------


def test_central_subset_examples():
    reports = {r.subset: r for r in central_subsets(build_family("linial", 3))}
    assert reports[()].central and reports[()].rank == 0
    assert not reports[(0, 1, 2)].central
    assert all(reports[(i,)].central for i in range(3))
    par = Arrangement(1, (Hyperplane((1,), 0), Hyperplane((1,), 1)))
    assert not {r.subset: r for r in central_subsets(par)}[(0, 1)].central


# -- finite field --------------------------------------------------------------------


def test_finite_field_examples():
    assert chi_finite_field(Arrangement(2, ()), 7) == 49
    assert chi_finite_field(build_family("linial", 3), 11) == 1001
    assert chi_finite_field(build_family("shi", 2), 13) == 143


def test_finite_field_preconditions():
    A = build_family("linial", 3)
    with pytest.raises(ArrangementError):
        chi_finite_field(A, 12)
    with pytest.raises(CapExceeded):
        chi_finite_field(A, 67)
    with pytest.raises(CapExceeded):
        chi_finite_field(build_family("linial", 5), 11)
    with pytest.raises(ArrangementError):
        chi_finite_field(build_family("ext_shi", 2, a=3), 5)
    B = Arrangement(2, (Hyperplane((1, 0), 0), Hyperplane((1, 5), 0)))
    assert 5 in bad_primes(B)
    with pytest.raises(ArrangementError):
        chi_finite_field(B, 5)


def test_finite_field_matches_chi_on_small_custom():
    B = Arrangement(2, (Hyperplane((1, 0), 0), Hyperplane((1, 5), 0), Hyperplane((0, 1), 1)))
    chi = chi_whitney(B)
    for p in admissible_primes(B, 3, start=3):
        assert chi_finite_field(B, p) == chi(p)


@settings(max_examples=25)
@given(
    st.lists(
        st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-3, 3)).filter(lambda t: t[:2] != (0, 0)),
        min_size=0,
        max_size=5,
    )
)
def test_random_plane_arrangements(rows):
    hs, seen = [], set()
    for a, b, c in rows:
        h = Hyperplane((a, b), c)
        if h.canonical() not in seen:
            seen.add(h.canonical())
            hs.append(h)
    A = Arrangement(2, tuple(hs))
    chi = chi_whitney(A)
    assert chi_nbc(A) == chi
    rep = regions_geometric(A)
    assert rep.r == region_count(chi, 2)
    assert rep.b == bounded_count(chi, 2)
    primes = admissible_primes(A, 1, start=11)
    for p in primes:
        assert chi_finite_field(A, p) == chi(Fraction(p))
