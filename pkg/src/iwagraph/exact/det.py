"""Exact determinants over commutative rings."""

from __future__ import annotations

from typing import Any, Sequence

from .laurent import LaurentPoly


def _check_square(M: Sequence[Sequence[Any]]) -> int:
    n = len(M)
    for row in M:
        if len(row) != n:
            raise ValueError("determinant of a non-square matrix")
    return n


def det_bareiss_int(M: Sequence[Sequence[int]]) -> int:
    n = _check_square(M)
    if n == 0:
        return 1
    A = [[int(x) for x in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def det_bareiss(M: Sequence[Sequence[Any]], zero, one, div) -> Any:
    """Bareiss elimination for any integral domain with an exact division ``div``."""
    n = _check_square(M)
    if n == 0:
        return one
    A = [list(row) for row in M]
    sign = 1
    prev = one
    for k in range(n - 1):
        if A[k][k] == zero:
            for i in range(k + 1, n):
                if A[i][k] != zero:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return zero
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            for j in range(k + 1, n):
                A[i][j] = div(akk * A[i][j] - aik * A[k][j], prev)
        prev = akk
    d = A[n - 1][n - 1]
    return d if sign == 1 else -d


def det_minor_expansion(M: Sequence[Sequence[Any]], zero, one) -> Any:
    """Laplace expansion along columns, memoized on the set of used rows.

    Needs only ring operations, so it works where no exact division exists.
    Cost is O(2^n * n) ring multiplications.
    """
    n = _check_square(M)
    if n == 0:
        return one
    # f[mask] = det of the minor on rows in mask and the first popcount(mask) columns
    f = {0: one}
    for col in range(n):
        g = {}
        for mask, val in f.items():
            if val == zero:
                continue
            for r in range(n):
                if mask >> r & 1:
                    continue
                entry = M[r][col]
                if entry != zero:
                    above = bin(mask & ((1 << r) - 1)).count("1")
                    term = val * entry
                    # the row r is inserted after `above` used rows; col is the last column
                    if (col - above) % 2:
                        term = -term
                    nm = mask | (1 << r)
                    g[nm] = g[nm] + term if nm in g else term
        f = g
    return f.get((1 << n) - 1, zero)


def det_cofactor(M: Sequence[Sequence[Any]], zero, one) -> Any:
    """Plain recursive cofactor expansion (test oracle, tiny sizes only)."""
    n = _check_square(M)
    if n == 0:
        return one
    if n == 1:
        return M[0][0]
    total = zero
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det_cofactor(minor, zero, one)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_fraction_free(M: Sequence[Sequence[Any]]):
    """Exact determinant, dispatching on the entry ring.

    Integers and Laurent polynomials use Bareiss elimination; other rings
    (cyclotomic integers, polynomials over them) fall back to minor expansion.
    """
    n = _check_square(M)
    entries = [x for row in M for x in row]
    if all(isinstance(x, int) for x in entries):
        return det_bareiss_int(M)
    if any(isinstance(x, LaurentPoly) for x in entries):
        nv = next(x.nvars for x in entries if isinstance(x, LaurentPoly))
        A = [[x if isinstance(x, LaurentPoly) else LaurentPoly.const(int(x), nv) for x in row] for row in M]
        zero, one = LaurentPoly.zero(nv), LaurentPoly.one(nv)
        if n == 0:
            return one
        return det_bareiss(A, zero, one, lambda a, b: a.exact_div(b))
    sample = next(x for x in entries if not isinstance(x, int))
    zero = sample * 0
    one = zero + 1
    A = [[x if not isinstance(x, int) else zero + x for x in row] for row in M]
    return det_minor_expansion(A, zero, one)
