import pytest
from hypothesis import given, settings

from iwagraph.multigraph import build_multigraph, spanning_tree_count
from iwagraph.voltage import (
    DerivedGraph,
    VoltageAssignment,
    derived_graph,
    edge_multiset,
    galois_orbit_check,
    project_cover,
    tower_is_connected,
)

from conftest import towers

TRI = build_multigraph(3, [(1, 2), (2, 3), (3, 1)])
BUNDLE = build_multigraph(3, [(1, 2), (1, 2), (2, 3), (3, 1)])


def test_triangle_double_cover_is_hexagon():
    a = VoltageAssignment.build(2, 1, [(1,), (0,), (0,)])
    DG = derived_graph(TRI, a, 1)
    assert DG.cover.vertex_count == 6
    assert DG.cover.is_connected()
    assert set(DG.cover.degrees()) == {2}
    assert spanning_tree_count(DG.cover) == 6


def test_level_zero_is_base():
    a = VoltageAssignment.build(3, 1, [(1,), (0,), (0,)])
    DG = derived_graph(TRI, a, 0)
    assert edge_multiset(DG.cover) == edge_multiset(TRI)


def test_trivial_voltages_split():
    a = VoltageAssignment.build(3, 1, [(0,), (0,), (0,)])
    DG = derived_graph(TRI, a, 1)
    assert len(DG.cover.components()) == 3
    assert not tower_is_connected(TRI, a)


def test_certificates():
    a = VoltageAssignment.build(5, 1, [(1,), (0,), (0,)])
    assert tower_is_connected(TRI, a)
    b = VoltageAssignment.build(5, 2, [(1, 0), (0, 1), (0, 0), (0, 0)])
    cert = tower_is_connected(BUNDLE, b)
    assert cert and len(cert.cycles) == 2
    c = VoltageAssignment.build(5, 2, [(1, 0), (6, 0), (0, 0), (0, 0)])
    bad = tower_is_connected(BUNDLE, c)
    assert not bad
    assert all(sum(w * x for w, x in zip(bad.witness, beta)) % 5 == 0 for beta in bad.cycle_voltages)


def test_bad_inputs():
    with pytest.raises(ValueError, match="p must be prime"):
        VoltageAssignment.build(6, 1, [(1,)])
    with pytest.raises(ValueError):
        VoltageAssignment.build(3, 2, [(1,)])
    with pytest.raises(ValueError):
        derived_graph(TRI, VoltageAssignment.build(3, 1, [(1,)]), 1)


def test_corrupted_labels_detected():
    a = VoltageAssignment.build(3, 1, [(1,), (0,), (0,)])
    DG = derived_graph(TRI, a, 1)
    labels = list(DG.labels)
    labels[0], labels[1] = labels[1], labels[0]
    bad = DerivedGraph(DG.base, DG.assignment, DG.level, DG.cover, tuple(labels), DG.actions)
    assert not galois_orbit_check(bad)
    assert galois_orbit_check(derived_graph(TRI, a, 0))


@given(towers(primes=(2, 3), l=1, connected=False))
@settings(max_examples=40)
def test_scaling_and_automorphisms(Xa):
    X, a = Xa
    for m in (0, 1, 2):
        DG = derived_graph(X, a, m)
        q = a.p ** (m * a.l)
        assert DG.cover.vertex_count == X.vertex_count * q
        assert DG.cover.edge_count == X.edge_count * q
        assert DG.cover.degrees() == tuple(d for d in X.degrees() for _ in range(q))
        assert galois_orbit_check(DG)


@given(towers(primes=(2, 3), l=2, max_n=3, connected=False))
@settings(max_examples=25)
def test_two_variable_automorphisms(Xa):
    X, a = Xa
    assert galois_orbit_check(derived_graph(X, a, 1))


@given(towers(primes=(2, 3), l=1, connected=False))
@settings(max_examples=40)
def test_projection_compatibility(Xa):
    X, a = Xa
    top = derived_graph(X, a, 2)
    for m in (0, 1):
        assert edge_multiset(project_cover(top, m)) == edge_multiset(derived_graph(X, a, m).cover)


@given(towers(primes=(2, 3), l=1, connected=False))
@settings(max_examples=60)
def test_certificate_matches_bfs(Xa):
    X, a = Xa
    cert = bool(tower_is_connected(X, a))
    bfs = derived_graph(X, a, 1).cover.is_connected() and derived_graph(X, a, 2).cover.is_connected()
    assert cert == bfs


@given(towers(primes=(2,), l=2, max_n=3, connected=False))
@settings(max_examples=30)
def test_certificate_matches_bfs_two_variables(Xa):
    X, a = Xa
    cert = bool(tower_is_connected(X, a))
    assert cert == derived_graph(X, a, 1).cover.is_connected()
