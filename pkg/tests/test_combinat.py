import math

import pytest

from coxdeform.arrangement import build_family, poincare
from coxdeform.combinat import (
    CombinatError,
    EnumerationCapExceeded,
    Poset,
    Tournament,
    alternating_tree_formula,
    alternating_trees,
    catalan_egf_identity,
    count_alternating_trees,
    count_blocks,
    count_forests_weighted,
    count_graded_forests,
    count_local_binary_search_trees,
    count_semiacyclic_tournaments,
    count_semiorders,
    count_sleek_posets,
    has_ascending_cycle,
    is_alternating,
    is_semiacyclic,
    is_semiorder,
    is_sleek,
    level_bound,
    posets,
    semiacyclic_filters_agree,
    semigeneric_chi_bruteforce,
    semigeneric_regions_bruteforce,
    semiorders_from_regions,
    stirling_relation_check,
    stirling_relation_sides,
)
from coxdeform.exactmath import QPolynomial, catalan

q = QPolynomial.q
LINIAL = [1, 1, 2, 7, 36, 246, 2104, 21652, 260720, 3598120, 56010096]


def r_linial(n):
    return int(poincare(build_family("linial", n))(1))


# -- trees -----------------------------------------------------------------------


def test_alternating_tree_examples():
    assert count_alternating_trees(3) == 7
    assert count_alternating_trees(1) == 1
    assert count_alternating_trees(10) == 56010096


@pytest.mark.parametrize("n", range(8))
def test_alternating_enumeration_matches_formula(n):
    assert count_alternating_trees(n, enumerate=True) == alternating_tree_formula(n) == LINIAL[n]


def test_alternating_formula_integral():
    for n in range(21):
        alternating_tree_formula(n)


def test_alternating_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        list(alternating_trees(9))


def test_is_alternating():
    assert is_alternating(3, [(0, 2), (1, 2)])
    assert not is_alternating(3, [(0, 1), (1, 2)])


def test_local_binary_search_trees():
    assert count_local_binary_search_trees(0) == 1
    assert count_local_binary_search_trees(2) == 2
    assert count_local_binary_search_trees(5) == 246
    assert [count_local_binary_search_trees(n) for n in range(9)] == LINIAL[:9]


# -- tournaments -----------------------------------------------------------------


def test_semiacyclic_examples():
    assert count_semiacyclic_tournaments(1) == 1
    assert count_semiacyclic_tournaments(3) == 7
    assert count_semiacyclic_tournaments(4) == 36


def test_ascending_cycle_definition():
    # 0 -> 1 -> 2 -> 0: ascents 2, descents 1
    assert has_ascending_cycle(Tournament(3, (True, False, True)))
    # 0 -> 2 -> 1 -> 0: ascents 1, descents 2
    assert not has_ascending_cycle(Tournament(3, (False, True, False)))


@pytest.mark.parametrize("n", range(6))
def test_semiacyclic_filters_agree(n):
    assert semiacyclic_filters_agree(n)


def test_semiacyclic_unknown_method():
    with pytest.raises(CombinatError):
        is_semiacyclic(Tournament(2, (True,)), "guess")


def test_tournament_validation():
    with pytest.raises(CombinatError):
        Tournament(3, (True,))


# -- posets ----------------------------------------------------------------------


def test_poset_validation():
    with pytest.raises(CombinatError):
        Poset(3, frozenset({(0, 1), (1, 2)}))
    with pytest.raises(CombinatError):
        Poset(2, frozenset({(0, 1), (1, 0)}))


def test_poset_counts():
    # labelled posets: OEIS A001035
    assert [sum(1 for _ in posets(n)) for n in range(6)] == [1, 1, 3, 19, 219, 4231]


def test_sleek_examples():
    assert count_sleek_posets(1) == 1
    assert count_sleek_posets(3) == 7
    assert count_sleek_posets(5) == 246


def test_sleek_needs_natural_labelling():
    assert not is_sleek(Poset(2, frozenset({(1, 0)})))
    assert is_sleek(Poset(2, frozenset({(0, 1)})))


def test_semiorder_examples():
    assert count_semiorders(3, labelled=False) == 5
    assert count_semiorders(3) == 19
    assert count_semiorders(1) == 1


def test_semiorder_filter():
    two_plus_two = Poset(4, frozenset({(0, 1), (2, 3)}))
    three_plus_one = Poset(4, frozenset({(0, 1), (1, 2), (0, 2)}))
    assert not is_semiorder(two_plus_two)
    assert not is_semiorder(three_plus_one)
    assert is_semiorder(Poset(4, frozenset({(0, 1)})))


def test_semiorder_counts():
    assert [count_semiorders(n) for n in range(6)] == [1, 1, 3, 19, 183, 2371]
    assert [count_semiorders(n, labelled=False) for n in range(6)] == [catalan(n) for n in range(6)]


@pytest.mark.parametrize("n", range(5))
def test_semiorders_from_regions(n):
    derived = semiorders_from_regions(n)
    filtered = {p.lt for p in posets(n) if is_semiorder(p)}
    assert derived == filtered
    assert len(derived) == count_semiorders(n)


def test_semiorder_caps():
    with pytest.raises(EnumerationCapExceeded):
        count_semiorders(6, labelled=False)
    with pytest.raises(EnumerationCapExceeded):
        count_semiorders(7)


# -- forests -----------------------------------------------------------------------


def test_forest_examples():
    assert count_forests_weighted(3) == 1 + 3 * q + 3 * q**2
    assert count_forests_weighted(3)(1) == 7
    assert count_forests_weighted(2, {(0, 1): 5}) == 1 + 5 * q
    assert count_forests_weighted(4)(1) == 38


def test_forest_counts():
    # forests on n labelled vertices: OEIS A001858
    assert [count_forests_weighted(n)(1) for n in range(1, 8)] == [1, 2, 7, 38, 291, 2932, 36961]


def test_forest_multiplicity_forms_agree():
    mat = [[0, 2, 3], [2, 0, 1], [3, 1, 0]]
    as_dict = {(0, 1): 2, (0, 2): 3, (1, 2): 1}
    a = count_forests_weighted(3, mat)
    assert a == count_forests_weighted(3, as_dict) == count_forests_weighted(3, lambda i, j: mat[i][j])
    assert a == 1 + 6 * q + 11 * q**2


def test_graded_forest_examples():
    assert count_graded_forests(3, 0, 2) == 7
    assert count_graded_forests(2, 1, 2) == 3
    assert count_graded_forests(1, 0, 2) == count_graded_forests(1, 2, 3) == 1


@pytest.mark.parametrize("a, b", [(0, 2), (1, 2), (2, 2), (1, 3), (2, 3)])
def test_graded_forests_match_arrangements(a, b):
    for n in range(1, 5):
        A = build_family("trunc_affine", n, a=a, b=b)
        assert count_graded_forests(n, a, b) == poincare(A)(1)


@pytest.mark.parametrize("a, b", [(0, 2), (1, 2), (2, 3)])
def test_graded_forest_level_cap_independent(a, b):
    for n in range(1, 5):
        base = count_graded_forests(n, a, b)
        bound = level_bound(n, a, b)
        assert count_graded_forests(n, a, b, level_cap=bound + 3) == base
        assert count_graded_forests(n, a, b, level_cap=2 * bound + 5) == base


def test_graded_forest_parameters():
    with pytest.raises(CombinatError):
        count_graded_forests(3, 1, 0)


# -- semigeneric -------------------------------------------------------------------


def test_semigeneric_examples():
    assert semigeneric_chi_bruteforce(1) == q
    assert semigeneric_chi_bruteforce(2) == q**2 - 2 * q
    assert semigeneric_regions_bruteforce(2) == 3
    assert semigeneric_regions_bruteforce(4) == 195


def test_semigeneric_bruteforce_matches_arrangement():
    for n in range(1, 5):
        assert semigeneric_regions_bruteforce(n) == poincare(build_family("semigeneric", n))(1)


def test_count_blocks():
    assert count_blocks(3, []) == 0
    assert count_blocks(3, [(0, 1), (1, 2)]) == 2
    assert count_blocks(4, [(0, 1), (1, 2), (2, 3), (3, 0)]) == 1


# -- Catalan -----------------------------------------------------------------------


def test_stirling_relation_examples():
    assert stirling_relation_sides(3) == (30, 30)
    assert stirling_relation_check(1)
    assert stirling_relation_sides(4)[0] == 336


@pytest.mark.parametrize("n", range(6))
def test_stirling_relation(n):
    assert stirling_relation_check(n)


def test_catalan_egf_identity():
    assert catalan_egf_identity(5)


# -- agreement -------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_linial_characterizations_agree(n):
    expected = r_linial(n)
    assert expected == LINIAL[n]
    assert count_alternating_trees(n, enumerate=True) == expected
    assert count_local_binary_search_trees(n) == expected
    assert count_semiacyclic_tournaments(n) == expected
    assert count_sleek_posets(n) == expected
    assert count_graded_forests(n, 0, 2) == expected


def test_bad_n():
    with pytest.raises(CombinatError):
        count_local_binary_search_trees(-1)
    assert math.isfinite(alternating_tree_formula(0))
