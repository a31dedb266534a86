"""Exact arithmetic in Z[zeta_{p^k}].

Elements are coefficient vectors in the power basis 1, zeta, ..., zeta^(phi-1)
with phi = phi(p^k).  Valuations are normalized by v_p(p) = 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .laurent import LaurentPoly


def totient_pk(p: int, k: int) -> int:
    return 1 if k == 0 else (p - 1) * p ** (k - 1)


def _fold_cyclic(v: np.ndarray, N: int) -> np.ndarray:
    """Reduce a coefficient vector modulo x^N - 1."""
    if len(v) <= N:
        out = np.zeros(N, dtype=v.dtype)
        out[: len(v)] = v
        return out
    pad = (-len(v)) % N
    if pad:
        v = np.concatenate([v, np.zeros(pad, dtype=v.dtype)])
    return v.reshape(-1, N).sum(axis=0)


def _fold_phi(v: np.ndarray, p: int, k: int) -> np.ndarray:
    """Reduce a length-p^k vector (exponents mod p^k) modulo Phi_{p^k}."""
    if k == 0:
        return np.array([v.sum()], dtype=v.dtype)
    q = p ** (k - 1)
    V = v.reshape(p, q).copy()
    V[: p - 1] -= V[p - 1]
    return V[: p - 1].reshape(-1)


def _as_object(v) -> np.ndarray:
    a = np.empty(len(v), dtype=object)
    a[:] = [int(x) for x in v]
    return a


class CyclotomicElem:
    __slots__ = ("p", "k", "coeffs", "_hash")

    def __init__(self, p: int, k: int, coeffs: Sequence[int]):
        n = totient_pk(p, k)
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != n:
            raise ValueError(f"level {k} over p={p} needs {n} coefficients, got {len(coeffs)}")
        self.p = p
        self.k = k
        self.coeffs = coeffs
        self._hash = None

    # construction

    @classmethod
    def from_int(cls, p: int, k: int, c: int) -> CyclotomicElem:
        v = [0] * totient_pk(p, k)
        v[0] = c
        return cls(p, k, v)

    @classmethod
    def from_cyclic(cls, p: int, k: int, v) -> CyclotomicElem:
        """Element sum v[i] zeta^i for a vector indexed by exponents mod p^k."""
        arr = _as_object(v) if not isinstance(v, np.ndarray) else v
        return cls(p, k, _fold_phi(_fold_cyclic(arr, p**k), p, k).tolist())

    @classmethod
    def from_exponent_terms(cls, p: int, k: int, terms: Iterable[tuple[int, int]]) -> CyclotomicElem:
        """Element sum c zeta^e for (e, c) pairs; exponents taken mod p^k."""
        N = p**k
        v = [0] * N
        for e, c in terms:
            v[e % N] += c
        return cls.from_cyclic(p, k, _as_object(v))

    @classmethod
    def root(cls, p: int, k: int, e: int = 1) -> CyclotomicElem:
        """zeta_{p^k}^e."""
        return cls.from_exponent_terms(p, k, [(e, 1)])

    @property
    def phi(self) -> int:
        return len(self.coeffs)

    @property
    def conductor(self) -> int:
        return self.p**self.k

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def cyclic_vector(self) -> np.ndarray:
        v = np.zeros(self.conductor, dtype=object)
        v[: self.phi] = self.coeffs
        return v

    def root_exponent(self) -> int | None:
        """e with self == zeta^e, or None when self is not a p^k-th root of unity."""
        for e in _root_candidates(self):
            if CyclotomicElem.root(self.p, self.k, e) == self:
                return e
        return None

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, CyclotomicElem):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            if other.k == self.k:
                return self, other
            K = max(self.k, other.k)
            return self.lift(K), other.lift(K)
        if isinstance(other, int):
            return self, CyclotomicElem.from_int(self.p, self.k, other)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CyclotomicElem(a.p, a.k, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElem(self.p, self.k, [-x for x in self.coeffs])

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CyclotomicElem(a.p, a.k, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicElem(self.p, self.k, [other * x for x in self.coeffs])
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if a.k == 0:
            return CyclotomicElem(a.p, 0, [a.coeffs[0] * b.coeffs[0]])
        prod = np.convolve(_as_object(a.coeffs), _as_object(b.coeffs))
        return CyclotomicElem.from_cyclic(a.p, a.k, prod)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            e = self.root_exponent()
            if e is None:
                raise ValueError("only roots of unity are inverted here")
            return CyclotomicElem.root(self.p, self.k, -e * -n)
        out = CyclotomicElem.from_int(self.p, self.k, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_integer() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicElem) or other.p != self.p:
            return NotImplemented
        if other.k != self.k:
            K = max(self.k, other.k)
            return self.lift(K).coeffs == other.lift(K).coeffs
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            # canonical at the smallest level containing the element
            self._hash = hash((self.p, self.descend().k, self.descend().coeffs))
        return self._hash

    def lift(self, K: int) -> CyclotomicElem:
        """Same element viewed in Z[zeta_{p^K}], K >= k."""
        if K == self.k:
            return self
        if K < self.k:
            raise ValueError("cannot lift to a lower level")
        step = self.p ** (K - self.k)
        return CyclotomicElem.from_exponent_terms(
            self.p, K, [(i * step, c) for i, c in enumerate(self.coeffs) if c]
        )

    def descend(self) -> CyclotomicElem:
        """Smallest level representation (for hashing and display)."""
        x = self
        while x.k > 0:
            # elements of the level below have only exponents divisible by p
            if x.k == 1:
                if x.is_integer():
                    x = CyclotomicElem(x.p, 0, [x.coeffs[0]])
                    continue
                break
            if any(c for i, c in enumerate(x.coeffs) if i % x.p):
                break
            x = CyclotomicElem(x.p, x.k - 1, x.coeffs[:: x.p])
        return x

    def galois(self, u: int) -> CyclotomicElem:
        """Image under zeta -> zeta^u, u a unit mod p."""
        if u % self.p == 0:
            raise ValueError("Galois exponent must be prime to p")
        return CyclotomicElem.from_exponent_terms(
            self.p, self.k, [(i * u, c) for i, c in enumerate(self.coeffs) if c]
        )

    # norm and valuation

    def norm(self) -> int:
        """Norm down to Q, computed one step of the cyclotomic tower at a time."""
        p, k = self.p, self.k
        if k == 0:
            return self.coeffs[0]
        N = p**k
        v = self.cyclic_vector()
        if k == 1:
            units = range(2, p)
        else:
            q = p ** (k - 1)
            units = [1 + j * q for j in range(1, p)]
        prod = v
        for u in units:
            conj = np.zeros(N, dtype=object)
            idx = (np.arange(N) * u) % N
            conj[idx] = v
            prod = _fold_cyclic(np.convolve(prod, conj), N)
        red = _fold_phi(prod, p, k)
        below = red[::p]
        if any(c for i, c in enumerate(red) if i % p) or (k == 1 and any(red[1:])):
            raise ArithmeticError("relative norm escaped the subfield")
        if k == 1:
            return int(red[0])
        return CyclotomicElem(p, k - 1, below.tolist()).norm()

    def pi_order(self) -> int:
        """Valuation at the prime (1 - zeta) above p."""
        if self.is_zero():
            raise ZeroDivisionError("valuation of zero")
        p = self.p
        if self.k == 0:
            return _vp_int(self.coeffs[0], p)
        nz = [c for c in self.coeffs if c]
        t = min(_vp_int(c, p) for c in nz)
        scale = p**t
        red = np.array([(c // scale) % p for c in self.coeffs], dtype=np.int64)
        order = 0
        while int(red.sum()) % p == 0:
            red = (np.cumsum(red[::-1])[::-1] % p)[1:]
            order += 1
        return t * self.phi + order

    def vp(self) -> Fraction:
        return Fraction(self.pi_order(), self.phi)

    def __repr__(self):
        return f"CyclotomicElem(p={self.p}, k={self.k}, {list(self.coeffs)})"

    def __str__(self):
        if self.k == 0 or self.is_integer():
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self) -> dict:
        return {"p": self.p, "level": self.k, "coeffs": list(self.coeffs)}


def _root_candidates(x: CyclotomicElem) -> list[int]:
    nz = [i for i, c in enumerate(x.coeffs) if c]
    if len(nz) == 1 and x.coeffs[nz[0]] == 1:
        return [nz[0]]
    if x.k >= 1 and len(nz) == x.p - 1 and all(x.coeffs[i] == -1 for i in nz):
        q = x.p ** (x.k - 1)
        return [(x.p - 1) * q + nz[0]]
    return []


def _vp_int(c: int, p: int) -> int:
    if c == 0:
        raise ZeroDivisionError("valuation of zero")
    c = abs(c)
    k = 0
    while c % p == 0:
        c //= p
        k += 1
    return k


def cyclo_vp(e: CyclotomicElem) -> Fraction:
    """p-adic valuation with v_p(p) = 1; equals v_p(Norm(e)) / phi(p^k)."""
    return e.vp()


def eval_at_root_exponents(f: LaurentPoly, p: int, k: int, exps: Sequence[int]) -> CyclotomicElem:
    """f evaluated at tau_i = zeta_{p^k}^{exps[i]}."""
    N = p**k
    v = [0] * N
    for e, c in f.items():
        v[sum(a * b for a, b in zip(e, exps)) % N] += c
    bound = sum(abs(c) for _, c in f.items())
    if bound < 2**60:
        arr = np.array(v, dtype=np.int64)
    else:
        arr = _as_object(v)
    red = _fold_phi(arr, p, k)
    return CyclotomicElem(p, k, red.tolist())


def laurent_eval_cyclotomic(f: LaurentPoly, zs: Sequence[CyclotomicElem]) -> CyclotomicElem:
    """Evaluate f at roots of unity of p-power order, coerced to a common conductor."""
    if len(zs) != f.nvars:
        raise ValueError(f"need {f.nvars} roots, got {len(zs)}")
    primes = {z.p for z in zs}
    if len(primes) != 1:
        raise ValueError("roots of unity over inconsistent primes")
    (p,) = primes
    K = max(z.k for z in zs)
    exps = []
    for z in zs:
        e = z.root_exponent()
        if e is None:
            raise ValueError(f"{z!r} is not a root of unity")
        exps.append(e * p ** (K - z.k))
    return eval_at_root_exponents(f, p, K, exps)


@lru_cache(maxsize=None)
def cyclotomic_poly_pk(p: int, k: int) -> tuple[int, ...]:
    """Coefficients of Phi_{p^k}(x), low degree first."""
    if k == 0:
        return (-1, 1)
    q = p ** (k - 1)
    out = [0] * ((p - 1) * q + 1)
    for t in range(p):
        out[t * q] = 1
    return tuple(out)
