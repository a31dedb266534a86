"""Multiplicity of the primes (tau_1^a tau_2^b - 1) in F_p[[T_1, T_2]]."""

from __future__ import annotations

from math import gcd

from .laurent import LaurentPoly


def unimodular_completion(a: int, b: int) -> list[list[int]]:
    """An integer matrix with first row (a, b) and determinant 1."""
    if gcd(a, b) != 1:
        raise ValueError(f"direction ({a}, {b}) is not primitive")
    # find c, d with a d - b c = 1
    g, x, y = _xgcd(a, b)
    # a x + b y = g = +-1
    if g < 0:
        x, y = -x, -y
    return [[a, b], [-y, x]]


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _inverse_2x2(M: list[list[int]]) -> list[list[int]]:
    (a, b), (c, d) = M
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return [[d * det, -b * det], [-c * det, a * det]]


def is_canonical_direction(a: int, b: int) -> bool:
    return b > 0 or (b == 0 and a == 1)


def prime_multiplicity_mod_p(g: LaurentPoly, direction: tuple[int, int], p: int) -> int:
    """Order of g mod p along the prime generated by tau_1^a tau_2^b - 1.

    The monomial substitution sigma = tau M^{-1} with first row of M equal to
    (a, b) turns the prime into sigma_1 - 1; after that the answer is the
    lowest power of S_1 = sigma_1 - 1 present in the expansion over F_p.
    """
    a, b = direction
    if g.nvars != 2:
        raise ValueError("two variables expected")
    if gcd(a, b) != 1:
        raise ValueError(f"direction ({a}, {b}) is not primitive")
    if a % p == 0 and b % p == 0:
        raise ValueError(f"direction ({a}, {b}) vanishes modulo {p}")
    if not is_canonical_direction(a, b):
        raise ValueError(f"direction ({a}, {b}) is not in canonical sign form")
    gp = g.mod(p)
    if gp.is_zero():
        raise ValueError("polynomial vanishes modulo p")
    M = unimodular_completion(a, b)
    h = gp.transform_exponents(_inverse_2x2(M)).canonicalize()
    coeffs = {k: c % p for k, c in h.T_coeffs().items() if c % p}
    return min(k[0] for k in coeffs)


def primitive_directions(bound: int, p: int) -> list[tuple[int, int]]:
    """Canonical primitive (a, b) with |a|, |b| <= bound, not both divisible by p."""
    out = []
    for b in range(0, bound + 1):
        for a in range(-bound, bound + 1):
            if not is_canonical_direction(a, b):
                continue
            if gcd(a, b) != 1 or (a % p == 0 and b % p == 0):
                continue
            out.append((a, b))
    return out
