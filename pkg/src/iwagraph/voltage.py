"""Voltage assignments in Z^l and the derived covers X_m.

A cover vertex (v, g) with g in (Z/p^m)^l gets the index
``(v - 1) * p^(m l) + rank(g)`` (plus one), where ``rank`` reads g as a
little-endian mixed-radix number with radix p^m in every coordinate.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .multigraph import DisconnectedGraphError, Edge, Multigraph, fundamental_cycles


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class VoltageAssignment:
    """One exponent vector per edge, read on the stored tail -> head orientation."""

    p: int
    l: int
    volts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.l < 1:
            raise ValueError("l must be at least 1")
        for i, v in enumerate(self.volts):
            if len(v) != self.l:
                raise ValueError(f"edge {i}: voltage {v} has length {len(v)}, expected {self.l}")

    @classmethod
    def build(cls, p: int, l: int, volts: Iterable[Sequence[int]]) -> VoltageAssignment:
        return cls(p, l, tuple(tuple(int(x) for x in v) for v in volts))

    def check(self, G: Multigraph):
        if len(self.volts) != G.edge_count:
            raise ValueError(f"{G.edge_count} edges but {len(self.volts)} voltages")

    def voltage(self, edge_id: int, direction: int = 1) -> tuple[int, ...]:
        v = self.volts[edge_id]
        return v if direction > 0 else tuple(-x for x in v)

    def walk_voltage(self, walk: Sequence[tuple[int, int]]) -> tuple[int, ...]:
        tot = [0] * self.l
        for eid, d in walk:
            for i, x in enumerate(self.voltage(eid, d)):
                tot[i] += x
        return tuple(tot)


def group_elements(p: int, m: int, l: int) -> list[tuple[int, ...]]:
    """(Z/p^m)^l in little-endian mixed-radix order."""
    q = p**m
    return [tuple(reversed(t)) for t in product(range(q), repeat=l)]


def group_rank(g: Sequence[int], q: int) -> int:
    r = 0
    for x in reversed(g):
        r = r * q + x % q
    return r


@dataclass(frozen=True)
class DerivedGraph:
    base: Multigraph
    assignment: VoltageAssignment
    level: int
    cover: Multigraph
    labels: tuple[tuple[int, tuple[int, ...]], ...]
    actions: tuple[tuple[int, ...], ...]

    @property
    def group_order(self) -> int:
        return self.assignment.p ** (self.level * self.assignment.l)

    def vertex(self, v: int, g: Sequence[int]) -> int:
        q = self.assignment.p**self.level
        return (v - 1) * self.group_order + group_rank(g, q) + 1

    def label(self, x: int) -> tuple[int, tuple[int, ...]]:
        return self.labels[x - 1]

    def act(self, g: Sequence[int], x: int) -> int:
        """Image of cover vertex x under translation by g."""
        v, h = self.label(x)
        q = self.assignment.p**self.level
        return self.vertex(v, tuple((a + b) % q for a, b in zip(h, g)))


def derived_graph(X: Multigraph, a: VoltageAssignment, m: int) -> DerivedGraph:
    if m < 0:
        raise ValueError("level must be nonnegative")
    a.check(X)
    p, l = a.p, a.l
    q = p**m
    G = group_elements(p, m, l)
    size = len(G)
    labels = tuple((v, g) for v in range(1, X.vertex_count + 1) for g in G)

    def idx(v, g):
        return (v - 1) * size + group_rank(g, q) + 1

    edges = []
    for e in X.edges:
        alpha = a.volts[e.edge_id]
        for g in G:
            h = tuple((x + y) % q for x, y in zip(g, alpha))
            edges.append(Edge(len(edges), idx(e.tail, g), idx(e.head, h)))
    cover = Multigraph(X.vertex_count * size, tuple(edges))
    actions = []
    for i in range(l):
        perm = []
        for v, g in labels:
            h = list(g)
            h[i] = (h[i] + 1) % q
            perm.append(idx(v, h))
        actions.append(tuple(perm))
    return DerivedGraph(X, a, m, cover, labels, tuple(actions))


@dataclass(frozen=True)
class ConnectivityCertificate:
    """Outcome of the cycle-voltage rank test.

    ``cycles`` lists indices of fundamental cycles whose voltages span F_p^l
    when connected; otherwise ``witness`` is a nonzero vector over F_p that is
    orthogonal to every cycle voltage.
    """

    connected: bool
    cycle_voltages: tuple[tuple[int, ...], ...]
    cycles: tuple[int, ...] = ()
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.connected


def tower_is_connected(X: Multigraph, a: VoltageAssignment) -> ConnectivityCertificate:
    if not X.is_connected():
        raise DisconnectedGraphError("base graph is not connected")
    a.check(X)
    p, l = a.p, a.l
    betas = tuple(a.walk_voltage(c) for c in fundamental_cycles(X).cycles)
    # row reduce the l x c matrix over F_p, tracking pivot columns
    rows = [[b[i] % p for b in betas] for i in range(l)]
    ncols = len(betas)
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, l) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(l):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == l:
            break
    if r == l:
        return ConnectivityCertificate(True, betas, tuple(pivots))
    return ConnectivityCertificate(False, betas, tuple(pivots), _left_kernel_vector(betas, l, p))


def _left_kernel_vector(betas, l: int, p: int) -> tuple[int, ...]:
    """Nonzero w in F_p^l with w . beta = 0 for every beta (rank < l assumed)."""
    # kernel of the c x l matrix whose rows are the betas
    rows = [[b[i] % p for i in range(l)] for b in betas]
    pivcol = {}
    r = 0
    for c in range(l):
        k = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivcol[c] = r
        r += 1
    free = next(c for c in range(l) if c not in pivcol)
    w = [0] * l
    w[free] = 1
    for c, i in pivcol.items():
        w[c] = (-rows[i][free]) % p
    return tuple(w)


def edge_multiset(G: Multigraph) -> Counter:
    return Counter((min(e.tail, e.head), max(e.tail, e.head)) for e in G.edges)


def galois_orbit_check(DG: DerivedGraph) -> bool:
    """Generators are commuting automorphisms acting by translation on fibers."""
    p, l, m = DG.assignment.p, DG.assignment.l, DG.level
    q = p**m
    N = DG.cover.vertex_count
    if len(DG.labels) != N or len(set(DG.labels)) != N:
        return False
    fibers = Counter(v for v, _ in DG.labels)
    if any(fibers[v] != q**l for v in range(1, DG.base.vertex_count + 1)):
        return False
    where = {lab: x for x, lab in enumerate(DG.labels, start=1)}
    edges = edge_multiset(DG.cover)
    for i, perm in enumerate(DG.actions):
        if sorted(perm) != list(range(1, N + 1)):
            return False
        for x, y in enumerate(perm, start=1):
            v, g = DG.labels[x - 1]
            h = list(g)
            h[i] = (h[i] + 1) % q
            if where.get((v, tuple(h))) != y:
                return False
        moved = Counter()
        for (s, t), c in edges.items():
            a, b = perm[s - 1], perm[t - 1]
            moved[(min(a, b), max(a, b))] += c
        if moved != edges:
            return False
    for P in DG.actions:
        for Q in DG.actions:
            if any(P[Q[x] - 1] != Q[P[x] - 1] for x in range(N)):
                return False
    return True


def project_cover(DG: DerivedGraph, m: int) -> Multigraph:
    """Quotient of the cover by the subgroup p^m (Z/p^M)^l, as a level-m cover."""
    if m > DG.level:
        raise ValueError("can only project to a lower level")
    p, l = DG.assignment.p, DG.assignment.l
    q = p**m
    size = q**l
    ratio = p ** ((DG.level - m) * l)

    def img(x):
        v, g = DG.label(x)
        return (v - 1) * size + group_rank(g, q) + 1

    # each quotient edge is hit once per element of the subgroup
    counts = Counter()
    for e in DG.cover.edges:
        a, b = img(e.tail), img(e.head)
        counts[(min(a, b), max(a, b))] += 1
    edges = []
    for (a, b), c in sorted(counts.items()):
        if c % ratio:
            raise ValueError("fiber contraction is not uniform")
        for _ in range(c // ratio):
            edges.append(Edge(len(edges), a, b))
    return Multigraph(DG.base.vertex_count * size, tuple(edges))
