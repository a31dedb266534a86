import pytest
from hypothesis import given, settings

from iwagraph.config import Budget, BudgetExceeded
from iwagraph.exact.laurent import LaurentPoly
from iwagraph.iwasawa import cycle_family
from iwagraph.jacobian import (
    DisconnectedTowerError,
    RankIdealSpec,
    fukuda_stabilize,
    galois_matrix_rows,
    jacobian_of_cover,
    jacobian_of_graph,
    rank_ideal,
)
from iwagraph.multigraph import spanning_tree_count
from iwagraph.voltage import VoltageAssignment, derived_graph

from conftest import towers

T = LaurentPoly.T(0, 1)


def test_hexagon():
    X, a = cycle_family(3, ((1,),), 2)
    J = jacobian_of_cover(X, a, 1)
    assert J.invariant_factors == (6,)
    assert J.order == 6 and J.vp == 1


def test_base_level():
    X, a = cycle_family(3, ((1,),), 2)
    assert jacobian_of_cover(X, a, 0).vp == 0
    X, a = cycle_family(3, ((1,),), 3)
    J = jacobian_of_cover(X, a, 0)
    assert J.order == 3 and J.vp == 1


def test_bundle_base():
    X, a = cycle_family(3, ((1,), (0,)), 5)
    J = jacobian_of_cover(X, a, 0)
    assert J.order == 5 and J.vp == 1


def test_disconnected_tower_rejected():
    X, _ = cycle_family(3, ((1,),), 3)
    a = VoltageAssignment.build(3, 1, [(0,), (0,), (0,)])
    with pytest.raises(DisconnectedTowerError):
        jacobian_of_cover(X, a, 1)


def test_budget():
    X, a = cycle_family(3, ((1,),), 3)
    with pytest.raises(BudgetExceeded):
        jacobian_of_cover(X, a, 3, budget=Budget(max_modpk_vertices=50))


def test_rank_ideal_examples():
    X, a = cycle_family(3, ((1,),), 3)
    I = RankIdealSpec(1, (T,))
    assert rank_ideal(X, a, 0, I) == 1
    assert rank_ideal(X, a, 1, I) == 1
    X5, a5 = cycle_family(3, ((1,),), 5)
    assert rank_ideal(X5, a5, 0, RankIdealSpec(1)) == 0


def test_fukuda():
    X, a = cycle_family(3, ((1,),), 3)
    res, ranks = fukuda_stabilize(X, a, RankIdealSpec(1, (T,)), 3)
    assert (res.level, res.rank) == (0, 1)
    for m in (2, 3):
        assert rank_ideal(X, a, m, RankIdealSpec(1, (T,))) == 1
    res, ranks = fukuda_stabilize(X, a, RankIdealSpec(8, (T,)), 2)
    assert res is None and ranks == (1, 2, 3)


def test_infinite_quotient_needs_p_power():
    with pytest.raises(ValueError):
        RankIdealSpec(0)


def test_translation_rows_are_permutation_like():
    X, a = cycle_family(3, ((1,),), 3)
    DG = derived_graph(X, a, 1)
    rows = galois_matrix_rows(DG, (0,))
    assert rows == [{i: 1} for i in range(DG.cover.vertex_count - 1)]


@given(towers(primes=(2, 3), l=1))
@settings(max_examples=30)
def test_order_is_tree_count(Xa):
    X, a = Xa
    for m in (0, 1, 2):
        J = jacobian_of_cover(X, a, m, method="exact-snf")
        assert J.order == spanning_tree_count(derived_graph(X, a, m).cover)
        assert J.vp == sum(J.p_valuations)


@given(towers(primes=(2, 3), l=1))
@settings(max_examples=30)
def test_local_and_exact_agree(Xa):
    X, a = Xa
    for m in (0, 1, 2):
        ex = jacobian_of_cover(X, a, m, method="exact-snf")
        lo = jacobian_of_cover(X, a, m, method="mod-pk")
        assert ex.vp == lo.vp
        assert sorted(ex.p_valuations) == sorted(lo.p_valuations)


@given(towers(primes=(2, 3), l=1))
@settings(max_examples=30)
def test_huge_p_power_ideal_is_everything(Xa):
    X, a = Xa
    for m in (0, 1):
        assert rank_ideal(X, a, m, RankIdealSpec(40)) == jacobian_of_cover(X, a, m).vp


@given(towers(primes=(2, 3), l=1))
@settings(max_examples=20)
def test_fukuda_consistency(Xa):
    X, a = Xa
    I = RankIdealSpec(2, (T,))
    res, _ = fukuda_stabilize(X, a, I, 2)
    if res is not None:
        for m in (res.level + 2, res.level + 3):
            if X.vertex_count * a.p**m <= 400:
                assert rank_ideal(X, a, m, I) == res.rank


@given(towers(primes=(2, 3), l=1))
@settings(max_examples=30)
def test_vp_nondecreasing(Xa):
    X, a = Xa
    vals = [jacobian_of_cover(X, a, m).vp for m in range(4) if X.vertex_count * a.p**m <= 300]
    assert vals == sorted(vals)


def test_graph_level_entry_point():
    X, a = cycle_family(4, ((1,),), 2)
    J = jacobian_of_graph(derived_graph(X, a, 2).cover, 2, level=2)
    assert J.order == 16 and J.vp == 4
