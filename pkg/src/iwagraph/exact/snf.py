"""Smith normal form: exact over Z and p-local over Z/p^K.

Both modes start with sparse elimination on unit pivots.  A unit pivot can be
removed together with its row and column without changing the cokernel, and
Laplacians of covers have plenty of them, so only a small core is left for the
dense stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

IntMatrix = Sequence[Sequence[int]]


@dataclass(frozen=True)
class SparseIntMatrix:
    """Integer matrix stored as one ``{column: value}`` dict per row."""

    nrows: int
    ncols: int
    rows: tuple[dict[int, int], ...]

    @classmethod
    def from_dense(cls, M: IntMatrix) -> SparseIntMatrix:
        m, n = _dims(M)
        return cls(m, n, tuple({j: int(x) for j, x in enumerate(r) if x} for r in M))

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                out[i][j] = x
        return out

    def vstack(self, other: SparseIntMatrix) -> SparseIntMatrix:
        if other.ncols != self.ncols:
            raise ValueError("column counts differ")
        return SparseIntMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)


@dataclass(frozen=True)
class ElementaryDivisors:
    """d_1 | d_2 | ... | d_r with r = min(rows, cols); zeros mark free rank."""

    divisors: tuple[int, ...]
    rank: int

    def nonzero(self) -> tuple[int, ...]:
        return tuple(d for d in self.divisors if d)

    def torsion_order(self) -> int:
        out = 1
        for d in self.divisors:
            if d:
                out *= d
        return out

    def free_rank(self, rows: int) -> int:
        return rows - self.rank

    def nontrivial(self) -> tuple[int, ...]:
        return tuple(d for d in self.divisors if d != 1)


@dataclass(frozen=True)
class LocalDivisors:
    """p-valuations of elementary divisors computed modulo p^K.

    ``saturated[i]`` means the true valuation is at least ``K`` (possibly a
    zero divisor); the stored value is then ``K``.
    """

    p: int
    K: int
    valuations: tuple[int, ...]
    saturated: tuple[bool, ...]

    @property
    def any_saturated(self) -> bool:
        return any(self.saturated)

    def total(self) -> int:
        if self.any_saturated:
            raise ValueError("valuation sum is only a lower bound: some divisors saturated")
        return sum(self.valuations)


class _Sparse:
    """Row dictionaries, column incidence sets and rows bucketed by length.

    ``mod`` is None for exact arithmetic (ints or Fractions), otherwise all
    entries live in Z/mod.
    """

    def __init__(self, M: SparseIntMatrix, modulus: int | None):
        self.mod = modulus
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {j: set() for j in range(M.ncols)}
        self.bylen: dict[int, set[int]] = {}
        for i, row in enumerate(M.rows):
            r = {}
            for j, x in row.items():
                if modulus is not None:
                    x %= modulus
                if x:
                    r[j] = x
                    self.cols[j].add(i)
            self.rows[i] = r
            self.bylen.setdefault(len(r), set()).add(i)

    def _moved(self, i: int, old: int, new: int):
        if old != new:
            self.bylen[old].discard(i)
            self.bylen.setdefault(new, set()).add(i)

    def drop(self, i: int, j: int):
        for c in self.rows[i]:
            self.cols[c].discard(i)
        self.bylen[len(self.rows[i])].discard(i)
        del self.rows[i]
        del self.cols[j]

    def eliminate(self, i: int, j: int, inv):
        """Clear column j using row i, whose entry at j times ``inv`` is 1."""
        mod = self.mod
        prow = self.rows[i]
        for k in list(self.cols[j]):
            if k == i:
                continue
            row = self.rows[k]
            before = len(row)
            f = row[j] * inv
            if mod is not None:
                f %= mod
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if mod is not None:
                    nv %= mod
                if nv:
                    if c not in row:
                        self.cols[c].add(k)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    self.cols[c].discard(k)
            self._moved(k, before, len(row))
        self.drop(i, j)

    def find_pivot(self, is_unit, tries: int = 4) -> tuple[int, int] | None:
        """Markowitz pivot among the first few short rows that hold a unit."""
        best = None
        best_cost = None
        seen = 0
        for L in sorted(self.bylen):
            if L == 0:
                continue
            for i in self.bylen[L]:
                hit = False
                for j, v in self.rows[i].items():
                    if is_unit(v):
                        hit = True
                        cost = (L - 1) * (len(self.cols[j]) - 1)
                        if best_cost is None or cost < best_cost:
                            best, best_cost = (i, j), cost
                            if cost == 0:
                                return best
                if hit:
                    seen += 1
                    if seen >= tries:
                        return best
        return best

    def dense(self) -> list[list[int]]:
        rs = sorted(self.rows)
        cs = sorted(self.cols)
        return [[self.rows[i].get(j, 0) for j in cs] for i in rs]

    def is_zero(self) -> bool:
        return all(not r for r in self.rows.values())


def _as_sparse(M) -> SparseIntMatrix:
    return M if isinstance(M, SparseIntMatrix) else SparseIntMatrix.from_dense(M)


def _dims(M: IntMatrix) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    for r in M:
        if len(r) != cols:
            raise ValueError("ragged matrix")
    return rows, cols


def _dense_snf(A: list[list[int]]) -> list[int]:
    """Diagonal of the Smith form by gcd elimination (small dense inputs)."""
    A = [row[:] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry as pivot
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            a = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // a
                    if q:
                        Ai, At = A[i], A[t]
                        for c in range(t, n):
                            Ai[c] -= q * At[c]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
                        break
            if not done:
                continue
            a = A[t][t]
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // a
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        done = False
                        break
            if not done:
                continue
            # divisibility by the rest of the block
            a = A[t][t]
            for i in range(t + 1, m):
                bad = next((j for j in range(t + 1, n) if A[i][j] % a), None)
                if bad is not None:
                    At, Ai = A[t], A[i]
                    for c in range(t, n):
                        At[c] += Ai[c]
                    done = False
                    break
        diag.append(abs(A[t][t]))
        t += 1
    return diag + [0] * (min(m, n) - len(diag))


def _normalize_chain(ds: list[int]) -> list[int]:
    """Turn a diagonal into a divisibility chain (same cokernel)."""
    nz = sorted(d for d in ds if d)
    zeros = len(ds) - len(nz)
    # repeatedly replace (a, b) by (gcd, lcm) until the chain holds
    changed = True
    while changed:
        changed = False
        for i in range(len(nz)):
            for j in range(i + 1, len(nz)):
                a, b = nz[i], nz[j]
                if b % a:
                    g = gcd(a, b)
                    nz[i], nz[j] = g, a // g * b
                    changed = True
        nz.sort()
    return nz + [0] * zeros


def det_sparse(M: IntMatrix | SparseIntMatrix) -> int:
    """Exact determinant by sparse elimination over Q with Markowitz pivoting.

    Intermediate entries are Schur-complement entries, i.e. ratios of minors,
    so they stay far smaller than in an integer-only elimination.
    """
    M = _as_sparse(M)
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    S = _Sparse(M, None)
    prod = Fraction(1)
    perm = {}
    while S.rows:
        piv = S.find_pivot(bool)
        if piv is None:
            return 0
        i, j = piv
        v = S.rows[i][j]
        prod *= v
        perm[i] = j
        S.eliminate(i, j, Fraction(1, 1) / v)
    assert prod.denominator == 1
    return _perm_sign(perm) * int(prod)


def _perm_sign(perm: dict[int, int]) -> int:
    sign = 1
    seen = set()
    for start in perm:
        if start in seen:
            continue
        length = 0
        x = start
        while x not in seen:
            seen.add(x)
            x = perm[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _snf_mod_d(A: list[list[int]], d: int) -> list[int]:
    """Smith diagonal of a square matrix with |det| = d, working modulo d."""
    n = len(A)
    A = [[x % d for x in row] for row in A]
    diag = []
    for t in range(n):
        # pivot: entry with the smallest gcd against d
        best = None
        for i in range(t, n):
            for j in range(t, n):
                if A[i][j]:
                    g = gcd(A[i][j], d)
                    if best is None or g < best[0]:
                        best = (g, i, j)
                        if g == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            diag.extend([d] * (n - t))
            break
        g, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        # make the pivot equal g using a unit multiple modulo d
        a = A[t][t]
        u = _unit_part_inverse(a, g, d)
        A[t] = [(x * u) % d for x in A[t]]
        a = A[t][t]
        # now a == g (mod d) up to a unit; force divisibility by combining rows/cols
        changed = True
        while changed:
            changed = False
            a = A[t][t]
            for i in range(t + 1, n):
                x = A[i][t]
                if x and x % a:
                    _combine_rows(A, t, i, d)
                    changed = True
            for j in range(t + 1, n):
                x = A[t][j]
                if x and x % a:
                    _combine_cols(A, t, j, d)
                    changed = True
        a = A[t][t]
        for i in range(t + 1, n):
            x = A[i][t]
            if x:
                q = x // a
                Ai, At = A[i], A[t]
                for c in range(t, n):
                    Ai[c] = (Ai[c] - q * At[c]) % d
        for j in range(t + 1, n):
            A[t][j] = 0
        diag.append(gcd(a, d))
    return _normalize_chain(diag)


def _unit_part_inverse(a: int, g: int, d: int) -> int:
    """A unit u mod d with u*a == g (mod d), where g = gcd(a, d)."""
    a1, d1 = a // g, d // g
    u = pow(a1, -1, d1) if d1 > 1 else 1
    # lift u to a unit modulo d
    while gcd(u, d) != 1:
        u += d1
    return u % d


def _combine_rows(A, t, i, d):
    a, b = A[t][t], A[i][t]
    g, x, y = _xgcd(a, b)
    p, q = a // g, b // g
    At, Ai = A[t], A[i]
    A[t] = [(x * u + y * v) % d for u, v in zip(At, Ai)]
    A[i] = [(-q * u + p * v) % d for u, v in zip(At, Ai)]


def _combine_cols(A, t, j, d):
    a, b = A[t][t], A[t][j]
    g, x, y = _xgcd(a, b)
    p, q = a // g, b // g
    for row in A:
        u, v = row[t], row[j]
        row[t] = (x * u + y * v) % d
        row[j] = (-q * u + p * v) % d


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def snf_divisors(M: IntMatrix | SparseIntMatrix) -> ElementaryDivisors:
    """Elementary divisors of an integer matrix, exactly.

    Square nonsingular input: with d = |det M| the lattice dZ^n lies in the
    column span, so the cokernel can be computed over Z/d, where entries stay
    bounded.  Other shapes go through unit-pivot elimination and a dense
    gcd-based reduction.
    """
    M = _as_sparse(M)
    if M.nrows == 0 or M.ncols == 0:
        return ElementaryDivisors((), 0)
    if M.nrows == M.ncols:
        d = abs(det_sparse(M))
        if d:
            divisors = tuple(_snf_nonsingular(M, d))
            return ElementaryDivisors(divisors, len(divisors))
    S = _Sparse(M, None)
    ones = 0
    while True:
        piv = S.find_pivot(lambda v: v == 1 or v == -1)
        if piv is None:
            break
        i, j = piv
        S.eliminate(i, j, S.rows[i][j])
        ones += 1
    core = S.dense()
    rest = _normalize_chain(_dense_snf(core)) if core and core[0] else [0] * min(len(core), len(core[0]) if core else 0)
    divisors = tuple([1] * ones + rest)
    rank = sum(1 for x in divisors if x)
    return ElementaryDivisors(divisors, rank)


def _snf_nonsingular(M: SparseIntMatrix, d: int) -> list[int]:
    if d == 1:
        return [1] * M.nrows
    S = _Sparse(M, d)
    ones = 0
    while S.rows:
        piv = S.find_pivot(lambda v: gcd(v, d) == 1)
        if piv is None:
            break
        i, j = piv
        S.eliminate(i, j, pow(S.rows[i][j], -1, d))
        ones += 1
    core = S.dense()
    rest = _snf_mod_d(core, d) if core else []
    out = [1] * ones + rest
    assert _prod(out) == d, "elementary divisors do not multiply to the determinant"
    return out


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def snf_divisors_mod_pk(M: IntMatrix | SparseIntMatrix, p: int, K: int) -> LocalDivisors:
    """p-valuations of the elementary divisors by elimination over Z/p^K."""
    if K < 1:
        raise ValueError("K must be positive")
    M = _as_sparse(M)
    size = min(M.nrows, M.ncols)
    if size == 0:
        return LocalDivisors(p, K, (), ())
    S = _Sparse(M, p**K)
    vals: list[int] = []
    offset = 0
    k = K
    while S.rows and S.cols:
        piv = S.find_pivot(lambda v: v % p != 0)
        if piv is None:
            if S.is_zero() or k == 1:
                break
            # everything is divisible by p: scale down
            k -= 1
            offset += 1
            S.mod = p**k
            for row in S.rows.values():
                for c in row:
                    row[c] //= p
            continue
        i, j = piv
        inv = pow(S.rows[i][j], -1, S.mod)
        S.eliminate(i, j, inv)
        vals.append(offset)
    sat = [False] * len(vals) + [True] * (size - len(vals))
    vals += [K] * (size - len(vals))
    return LocalDivisors(p, K, tuple(vals), tuple(sat))


def snf_p_valuations(M: IntMatrix | SparseIntMatrix, p: int, zero_divisors: int = 0, K0: int = 8, step: int = 4,
                     K_max: int = 1 << 16) -> LocalDivisors:
    """Adaptive precision: raise K until only ``zero_divisors`` entries saturate."""
    K = K0
    while True:
        res = snf_divisors_mod_pk(M, p, K)
        if sum(res.saturated) <= zero_divisors or K >= K_max:
            return res
        K += step
