from itertools import combinations

import pytest
from hypothesis import given

from iwagraph.multigraph import (
    DisconnectedGraphError,
    GraphError,
    build_multigraph,
    fundamental_cycles,
    laplacian,
    reduced_laplacian,
    spanning_tree_count,
)

from conftest import connected_multigraphs


def brute_spanning_trees(G):
    """Count (n-1)-edge subsets that connect every vertex, loops never allowed."""
    n = G.vertex_count
    edges = [e for e in G.edges if not e.is_loop]
    count = 0
    for sub in combinations(edges, n - 1):
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in sub:
            a, b = find(e.tail), find(e.head)
            if a == b:
                ok = False
                break
            parent[a] = b
        count += ok
    return count


def test_triangle_degrees():
    G = build_multigraph(3, [(1, 2), (2, 3), (3, 1)])
    assert G.degrees() == (2, 2, 2)


def test_loop_counts_twice():
    G = build_multigraph(1, [(1, 1)])
    assert G.degree(1) == 2
    assert laplacian(G) == [[0]]


def test_bundle_graph():
    G = build_multigraph(3, [(1, 2), (1, 2), (2, 3), (3, 1)])
    assert G.degrees() == (3, 3, 2)
    assert laplacian(G) == [[3, -2, -1], [-2, 3, -1], [-1, -1, 2]]
    assert spanning_tree_count(G) == 5
    assert len(fundamental_cycles(G)) == 2


def test_triangle_laplacian():
    G = build_multigraph(3, [(1, 2), (2, 3), (3, 1)])
    assert laplacian(G) == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]


@pytest.mark.parametrize("n", [3, 4, 6, 13, 20])
def test_cycle_tree_count(n):
    G = build_multigraph(n, [(i, i % n + 1) for i in range(1, n + 1)])
    assert spanning_tree_count(G) == n


def test_path_has_no_cycles():
    G = build_multigraph(3, [(1, 2), (2, 3)])
    assert len(fundamental_cycles(G)) == 0


def test_bad_endpoint():
    with pytest.raises(GraphError, match="out of range"):
        build_multigraph(3, [(0, 1)])


def test_disconnected_cycles():
    G = build_multigraph(4, [(1, 2), (3, 4)])
    assert not G.is_connected()
    with pytest.raises(DisconnectedGraphError):
        fundamental_cycles(G)


def test_reduced_laplacian_drops_row_and_column():
    G = build_multigraph(3, [(1, 2), (2, 3), (3, 1)])
    assert reduced_laplacian(G) == [[2, -1], [-1, 2]]


@given(connected_multigraphs(max_n=6, max_extra=4))
def test_degree_sum(G):
    assert sum(G.degrees()) == 2 * G.edge_count


@given(connected_multigraphs(max_n=6, max_extra=4))
def test_laplacian_rows_sum_to_zero(G):
    L = laplacian(G)
    assert all(sum(r) == 0 for r in L)
    assert all(L[i][j] == L[j][i] for i in range(len(L)) for j in range(len(L)))


@given(connected_multigraphs(max_n=6, max_extra=3))
def test_matrix_tree_against_enumeration(G):
    assert spanning_tree_count(G) == brute_spanning_trees(G)


@given(connected_multigraphs(max_n=6, max_extra=4))
def test_cycle_rank(G):
    C = fundamental_cycles(G)
    assert len(C) == G.edge_count - G.vertex_count + 1
    for cyc in C.cycles:
        # a closed walk: every vertex is entered as often as it is left
        bal = [0] * (G.vertex_count + 1)
        for eid, d in cyc:
            e = G.edges[eid]
            s, t = (e.tail, e.head) if d > 0 else (e.head, e.tail)
            bal[s] -= 1
            bal[t] += 1
        assert not any(bal)
