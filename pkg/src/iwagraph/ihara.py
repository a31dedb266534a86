"""Characters of (Z/p^m)^l, twisted adjacency matrices and the three-term
Ihara polynomial P_psi(u) = det(I - A_psi u + (D - I) u^2)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Sequence

from .exact.cyclotomic import CyclotomicElem
from .exact.det import det_minor_expansion
from .exact.laurent import LaurentPoly
from .iwasawa import CharSeries, char_det
from .multigraph import GraphError, Multigraph
from .voltage import VoltageAssignment


@dataclass(frozen=True)
class CharacterPsi:
    """tau_i -> zeta^{c_i} for a fixed primitive p^m-th root of unity zeta."""

    p: int
    m: int
    exponents: tuple[int, ...]
    orbit_rep: bool = False

    @property
    def is_trivial(self) -> bool:
        return all(c % self.p**self.m == 0 for c in self.exponents)

    @property
    def order(self) -> int:
        q = self.p**self.m
        g = q
        for c in self.exponents:
            g = gcd(g, c % q)
        return q // g

    def value(self, exponent: Sequence[int]) -> CyclotomicElem:
        """psi(tau^e)."""
        s = sum(a * b for a, b in zip(exponent, self.exponents))
        return CyclotomicElem.root(self.p, self.m, s)

    def apply(self, f: LaurentPoly) -> CyclotomicElem:
        from .exact.cyclotomic import eval_at_root_exponents

        return eval_at_root_exponents(f, self.p, self.m, self.exponents)

    def conjugate(self, u: int) -> CharacterPsi:
        q = self.p**self.m
        return CharacterPsi(self.p, self.m, tuple((u * c) % q for c in self.exponents))


def characters(p: int, m: int, l: int) -> list[CharacterPsi]:
    """All characters of level m in lexicographic order, orbit representatives
    (lexicographically least element of each Galois orbit) flagged."""
    if m < 0:
        raise ValueError("level must be nonnegative")
    q = p**m
    units = [u for u in range(1, q + 1) if u % p] if m else [1]
    tuples = list(product(range(q), repeat=l))
    out = []
    for c in tuples:
        orbit = {tuple((u * x) % q for x in c) for u in units}
        out.append(CharacterPsi(p, m, c, orbit_rep=(c == min(orbit))))
    return out


def twisted_adjacency(X: Multigraph, a: VoltageAssignment, psi: CharacterPsi) -> list[list[CyclotomicElem]]:
    """A_alpha with every voltage pushed through psi; loops add psi + psi^{-1}."""
    if psi.p != a.p:
        raise ValueError("character and tower use different primes")
    a.check(X)
    n = X.vertex_count
    zero = CyclotomicElem.from_int(psi.p, psi.m, 0)
    A = [[zero for _ in range(n)] for _ in range(n)]
    for e in X.edges:
        v = a.volts[e.edge_id]
        fwd = psi.value(v)
        bwd = psi.value([-x for x in v])
        i, j = e.tail - 1, e.head - 1
        if e.is_loop:
            A[i][i] = A[i][i] + fwd + bwd
        else:
            A[i][j] = A[i][j] + fwd
            A[j][i] = A[j][i] + bwd
    return A


class UPoly:
    """Polynomial in u with CyclotomicElem coefficients (low degree first)."""

    __slots__ = ("coeffs", "p", "k")

    def __init__(self, coeffs: Sequence[CyclotomicElem], p: int, k: int):
        c = list(coeffs)
        while c and c[-1].is_zero():
            c.pop()
        self.coeffs = tuple(c)
        self.p = p
        self.k = k

    @classmethod
    def const(cls, x: CyclotomicElem) -> UPoly:
        return cls([x], x.p, x.k)

    def _zero(self) -> CyclotomicElem:
        return CyclotomicElem.from_int(self.p, self.k, 0)

    def _lift(self, other):
        if isinstance(other, UPoly):
            return other
        if isinstance(other, int):
            return UPoly([CyclotomicElem.from_int(self.p, self.k, other)], self.p, self.k)
        if isinstance(other, CyclotomicElem):
            return UPoly([other], self.p, self.k)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self._zero()
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return UPoly([x + y for x, y in zip(a, b)], self.p, self.k)

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-x for x in self.coeffs], self.p, self.k)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return UPoly([], self.p, self.k)
        out = [self._zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return UPoly(out, self.p, self.k)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, u: int) -> CyclotomicElem:
        acc = self._zero()
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def galois(self, t: int) -> UPoly:
        return UPoly([c.galois(t) for c in self.coeffs], self.p, self.k)

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"


def ihara_poly(X: Multigraph, a: VoltageAssignment, psi: CharacterPsi) -> UPoly:
    """Coefficients of P_psi(u) = det(I - A_psi u + (D - I) u^2)."""
    deg = X.degrees()
    if any(d == 1 for d in deg):
        v = deg.index(1) + 1
        raise GraphError(f"vertex {v} has valency 1")
    A = twisted_adjacency(X, a, psi)
    p, k = psi.p, psi.m
    n = X.vertex_count
    one = CyclotomicElem.from_int(p, k, 1)
    zero = CyclotomicElem.from_int(p, k, 0)
    M = []
    for i in range(n):
        row = []
        for j in range(n):
            c0 = one if i == j else zero
            c2 = CyclotomicElem.from_int(p, k, deg[i] - 1) if i == j else zero
            row.append(UPoly([c0, -A[i][j], c2], p, k))
        M.append(row)
    return det_minor_expansion(M, UPoly([], p, k), UPoly([one], p, k))


@dataclass(frozen=True)
class InterpolationRow:
    character: tuple[int, ...]
    lhs: CyclotomicElem
    rhs: CyclotomicElem

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class InterpolationReport:
    level: int
    rows: tuple[InterpolationRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.equal for r in self.rows)


def interpolation_check(X: Multigraph, a: VoltageAssignment, m: int, cs: CharSeries | None = None) -> InterpolationReport:
    """P_psi(1) against psi(det Delta) for every nontrivial character of level m."""
    if cs is None:
        cs = char_det(X, a)
    rows = []
    for psi in characters(a.p, m, a.l):
        if psi.is_trivial:
            continue
        lhs = ihara_poly(X, a, psi)(1)
        rhs = psi.apply(cs.det_raw)
        rows.append(InterpolationRow(psi.exponents, lhs, rhs))
    return InterpolationReport(m, tuple(rows))
