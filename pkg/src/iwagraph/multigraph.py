"""Finite multigraphs with loops and parallel edges.

Vertices are 1-indexed everywhere in the public interface.  Edges keep the
order in which they were given; the stored ``tail -> head`` direction is the
orientation used for voltages.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exact.det import det_bareiss_int
from .exact.snf import SparseIntMatrix, det_sparse


class GraphError(ValueError):
    pass


class DisconnectedGraphError(GraphError):
    pass


@dataclass(frozen=True)
class Edge:
    edge_id: int
    tail: int
    head: int

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise GraphError("a multigraph needs at least one vertex")
        n = self.vertex_count
        for i, e in enumerate(self.edges):
            if e.edge_id != i:
                raise GraphError(f"edge ids must be dense, got {e.edge_id} at position {i}")
            for end in (e.tail, e.head):
                if not 1 <= end <= n:
                    raise GraphError(f"edge {i}: vertex index out of range ({end} not in [1, {n}])")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.edges)

    def degree(self, v: int) -> int:
        return sum((e.tail == v) + (e.head == v) for e in self.edges)

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * (self.vertex_count + 1)
        for e in self.edges:
            deg[e.tail] += 1
            deg[e.head] += 1
        return tuple(deg[1:])

    def multiplicity(self, v: int, w: int) -> int:
        return sum(1 for e in self.edges if {e.tail, e.head} == {v, w})

    def incident(self) -> list[list[Edge]]:
        """Incident edges per vertex (index 0 unused), each list sorted by edge id."""
        inc: list[list[Edge]] = [[] for _ in range(self.vertex_count + 1)]
        for e in self.edges:
            inc[e.tail].append(e)
            if not e.is_loop:
                inc[e.head].append(e)
        return inc

    def is_connected(self) -> bool:
        return len(self._reachable_from(1)) == self.vertex_count

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for v in range(1, self.vertex_count + 1):
            if v not in seen:
                comp = sorted(self._reachable_from(v))
                seen.update(comp)
                out.append(comp)
        return out

    def _reachable_from(self, start: int) -> set[int]:
        inc = self.incident()
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for e in inc[v]:
                w = e.head if e.tail == v else e.tail
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen


@dataclass(frozen=True)
class CycleBasis:
    """Fundamental cycles of a BFS spanning tree, one per non-tree edge.

    Each cycle is a closed walk given as ``(edge_id, direction)`` pairs where
    direction is +1 for traversal tail -> head and -1 otherwise.
    """

    tree_edges: tuple[int, ...]
    cycles: tuple[tuple[tuple[int, int], ...], ...]

    def __len__(self) -> int:
        return len(self.cycles)


def build_multigraph(n: int, edge_list: Iterable[Sequence[int]]) -> Multigraph:
    if n < 1:
        raise GraphError("n must be a positive integer")
    edges = tuple(Edge(i, int(t), int(h)) for i, (t, h) in enumerate(edge_list))
    return Multigraph(n, edges)


def laplacian(G: Multigraph) -> list[list[int]]:
    """Integer Laplacian D - A.  Loops cancel: +2 on the degree, +2 on A's diagonal."""
    n = G.vertex_count
    L = [[0] * n for _ in range(n)]
    for e in G.edges:
        if e.is_loop:
            continue
        i, j = e.tail - 1, e.head - 1
        L[i][i] += 1
        L[j][j] += 1
        L[i][j] -= 1
        L[j][i] -= 1
    return L


def reduced_laplacian(G: Multigraph, removed: int = 1) -> list[list[int]]:
    L = laplacian(G)
    k = removed - 1
    return [row[:k] + row[k + 1:] for i, row in enumerate(L) if i != k]


def reduced_laplacian_sparse(G: Multigraph, removed: int = 1) -> SparseIntMatrix:
    """Reduced Laplacian as sparse rows; the removed vertex's row and column are dropped."""
    n = G.vertex_count
    rows: list[dict[int, int]] = [{} for _ in range(n)]
    for e in G.edges:
        if e.is_loop:
            continue
        i, j = e.tail - 1, e.head - 1
        rows[i][i] = rows[i].get(i, 0) + 1
        rows[j][j] = rows[j].get(j, 0) + 1
        rows[i][j] = rows[i].get(j, 0) - 1
        rows[j][i] = rows[j].get(i, 0) - 1
    k = removed - 1

    def col(c):
        return c if c < k else c - 1

    out = tuple({col(c): v for c, v in r.items() if c != k and v} for i, r in enumerate(rows) if i != k)
    return SparseIntMatrix(n - 1, n - 1, out)


def spanning_tree_count(G: Multigraph) -> int:
    """Number of spanning trees via the matrix-tree theorem (exact determinant)."""
    if not G.is_connected():
        raise DisconnectedGraphError("spanning tree count requested for a disconnected graph")
    if G.vertex_count == 1:
        return 1
    if G.vertex_count <= 12:
        return abs(det_bareiss_int(reduced_laplacian(G)))
    return abs(det_sparse(reduced_laplacian_sparse(G)))


def bfs_tree(G: Multigraph) -> tuple[list[int | None], list[int | None]]:
    """BFS from vertex 1 with edge-id tie breaking.

    Returns ``(parent_vertex, parent_edge)`` arrays indexed by vertex.
    """
    inc = G.incident()
    parent: list[int | None] = [None] * (G.vertex_count + 1)
    parent_edge: list[int | None] = [None] * (G.vertex_count + 1)
    seen = {1}
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for e in inc[v]:
            if e.is_loop:
                continue
            w = e.head if e.tail == v else e.tail
            if w not in seen:
                seen.add(w)
                parent[w] = v
                parent_edge[w] = e.edge_id
                queue.append(w)
    if len(seen) != G.vertex_count:
        raise DisconnectedGraphError("graph is not connected")
    return parent, parent_edge


def _path_to_root(v: int, parent, parent_edge, edges) -> list[tuple[int, int]]:
    # walk from v up to the root, recording traversal directions
    out = []
    while parent[v] is not None:
        eid = parent_edge[v]
        e = edges[eid]
        out.append((eid, +1 if e.tail == v else -1))
        v = parent[v]
    return out


def fundamental_cycles(G: Multigraph) -> CycleBasis:
    parent, parent_edge = bfs_tree(G)
    tree = {eid for eid in parent_edge if eid is not None}
    cycles = []
    for e in G.edges:
        if e.edge_id in tree:
            continue
        # e forward (tail -> head), then head -> root -> tail through the tree
        up = _path_to_root(e.head, parent, parent_edge, G.edges)
        down = _path_to_root(e.tail, parent, parent_edge, G.edges)
        # strip the common part near the root
        while up and down and up[-1][0] == down[-1][0]:
            up.pop()
            down.pop()
        back = [(eid, -d) for eid, d in reversed(down)]
        cycles.append(tuple([(e.edge_id, +1)] + up + back))
    return CycleBasis(tuple(sorted(tree)), tuple(cycles))
