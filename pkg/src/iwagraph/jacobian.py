"""Jacobians of the finite covers X_m and quotients J / I J."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .config import DEFAULT_BUDGET, Budget
from .exact.laurent import LaurentPoly
from .exact.snf import SparseIntMatrix, snf_divisors, snf_divisors_mod_pk, snf_p_valuations
from .multigraph import Multigraph, reduced_laplacian_sparse
from .voltage import DerivedGraph, VoltageAssignment, derived_graph, tower_is_connected


class DisconnectedTowerError(ValueError):
    pass


class InfiniteQuotientError(ValueError):
    pass


def vp_int(x: int, p: int) -> int:
    if x == 0:
        raise ZeroDivisionError("valuation of zero")
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class JacobianData:
    level: int
    p: int
    vertex_count: int
    vp: int
    method: str
    # nontrivial invariant factors (exact mode only), as a divisibility chain
    invariant_factors: tuple[int, ...] | None = None
    # p-valuations of the nontrivial p-primary cyclic factors
    p_valuations: tuple[int, ...] = ()
    precision: int | None = None

    @property
    def order(self) -> int | None:
        if self.invariant_factors is None:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "p": self.p,
            "vertices": self.vertex_count,
            "vp": self.vp,
            "method": self.method,
            "invariant_factors": None if self.invariant_factors is None else [str(d) for d in self.invariant_factors],
            "p_valuations": list(self.p_valuations),
            "precision": self.precision,
        }


def _require_tower(X: Multigraph, a: VoltageAssignment):
    cert = tower_is_connected(X, a)
    if not cert:
        raise DisconnectedTowerError(
            f"cycle voltages do not generate Z_{a.p}^{a.l}; witness character {cert.witness}"
        )


def jacobian_of_graph(G: Multigraph, p: int, level: int = 0, method: str = "auto",
                      budget: Budget = DEFAULT_BUDGET) -> JacobianData:
    N = G.vertex_count
    if method == "auto":
        method = "exact-snf" if N <= budget.exact_threshold else "mod-pk"
    if N == 1:
        return JacobianData(level, p, 1, 0, method, () if method == "exact-snf" else None)
    L = reduced_laplacian_sparse(G)
    if method == "exact-snf":
        budget.check_exact(N)
        ed = snf_divisors(L)
        if 0 in ed.divisors:
            raise DisconnectedTowerError("cover is disconnected")
        inv = ed.nontrivial()
        vals = tuple(v for v in (vp_int(d, p) for d in inv) if v)
        return JacobianData(level, p, N, sum(vals), method, inv, vals)
    if method == "mod-pk":
        budget.check_modpk(N)
        res = snf_p_valuations(L, p)
        if res.any_saturated:
            raise DisconnectedTowerError("cover is disconnected")
        vals = tuple(sorted(v for v in res.valuations if v))
        return JacobianData(level, p, N, sum(vals), method, None, vals, res.K)
    raise ValueError(f"unknown method {method!r}")


def jacobian_of_cover(X: Multigraph, a: VoltageAssignment, m: int, method: str = "auto",
                      budget: Budget = DEFAULT_BUDGET) -> JacobianData:
    """Jacobian of the level-m cover from the reduced Laplacian's Smith form."""
    if m == 0:
        if not X.is_connected():
            raise DisconnectedTowerError("base graph is not connected")
    else:
        _require_tower(X, a)
    N = X.vertex_count * a.p ** (m * a.l)
    if method in ("auto", "mod-pk"):
        budget.check_modpk(N)
    else:
        budget.check_exact(N)
    DG = derived_graph(X, a, m)
    return jacobian_of_graph(DG.cover, a.p, m, method, budget)


@dataclass(frozen=True)
class RankIdealSpec:
    """The ideal (p^e, f_1, ..., f_k) of the group ring, f_i Laurent in the tau_i."""

    e: int
    polys: tuple[LaurentPoly, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("the p-power generator needs e >= 1")

    def describe(self) -> str:
        parts = [f"p^{self.e}"]
        for f in self.polys:
            parts.append(f.format() if f and min(f.min_exponents()) < 0 else f.format_T())
        return "(" + ", ".join(parts) + ")"


def galois_matrix_rows(DG: DerivedGraph, g: Sequence[int]) -> list[dict[int, int]]:
    """Transpose of the matrix of translation by g on Div^0 in the coordinates
    D -> (D(w))_{w != 1}.

    Row c lists where basis vector c goes, so stacking these rows with the
    Laplacian rows presents a cokernel.
    """
    N = DG.cover.vertex_count
    # (gD)(w) = D(g^{-1} w); vertex 1 carries D(1) = -sum of the others
    q = DG.assignment.p**DG.level
    ginv = tuple((-x) % q for x in g)
    rows: list[dict[int, int]] = [{} for _ in range(N - 1)]
    for w in range(2, N + 1):
        src = DG.act(ginv, w)
        if src != 1:
            # M[w][src] = 1
            rows[src - 2][w - 2] = rows[src - 2].get(w - 2, 0) + 1
        else:
            for c in range(N - 1):
                rows[c][w - 2] = rows[c].get(w - 2, 0) - 1
    return rows


def _poly_rows(DG: DerivedGraph, f: LaurentPoly) -> list[dict[int, int]]:
    N = DG.cover.vertex_count
    acc: list[dict[int, int]] = [{} for _ in range(N - 1)]
    for exp, c in f.items():
        for r, row in enumerate(galois_matrix_rows(DG, exp)):
            tgt = acc[r]
            for k, v in row.items():
                nv = tgt.get(k, 0) + c * v
                if nv:
                    tgt[k] = nv
                else:
                    tgt.pop(k, None)
    return acc


def rank_ideal(X: Multigraph, a: VoltageAssignment, m: int, I: RankIdealSpec,
               budget: Budget = DEFAULT_BUDGET) -> int:
    """v_p of |J(X_m) / I J(X_m)|."""
    _require_tower(X, a)
    N = X.vertex_count * a.p ** (m * a.l)
    budget.check_modpk(N)
    for f in I.polys:
        if f.nvars != a.l:
            raise ValueError(f"ideal generator {f} has {f.nvars} variables, tower has l={a.l}")
    if N == 1:
        return 0
    DG = derived_graph(X, a, m)
    L = reduced_laplacian_sparse(DG.cover)
    rows = list(L.rows)
    rows += [{i: a.p**I.e} for i in range(N - 1)]
    for f in I.polys:
        rows += _poly_rows(DG, f)
    M = SparseIntMatrix(len(rows), N - 1, tuple(rows))
    # p^e kills the quotient, so precision e + 1 is exact
    res = snf_divisors_mod_pk(M, a.p, I.e + 1)
    if res.any_saturated:
        raise InfiniteQuotientError("quotient J / I J is not finite")
    return sum(res.valuations)


@dataclass(frozen=True)
class FukudaResult:
    level: int
    rank: int
    ranks: tuple[int, ...]


def fukuda_stabilize(X: Multigraph, a: VoltageAssignment, I: RankIdealSpec, m_max: int,
                     budget: Budget = DEFAULT_BUDGET) -> tuple[FukudaResult | None, tuple[int, ...]]:
    """Least m* < m_max with equal ranks at m* and m* + 1, plus all computed ranks."""
    ranks = []
    for m in range(m_max + 1):
        ranks.append(rank_ideal(X, a, m, I, budget))
        if m >= 1 and ranks[m] == ranks[m - 1]:
            return FukudaResult(m - 1, ranks[m], tuple(ranks)), tuple(ranks)
    return None, tuple(ranks)
