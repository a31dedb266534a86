"""Laurent polynomials in l variables with arbitrary-precision integer coefficients.

The variables stand for the group elements tau_i of Z_p^l; the Iwasawa
variables are T_i = tau_i - 1.  Integer exponents only, so every value here is
exact.
"""

from __future__ import annotations

from math import comb, gcd
from typing import Callable, Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class LaurentPoly:
    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int] | None = None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                if c:
                    clean[tuple(int(x) for x in e)] = int(c)
        self._terms = clean
        self._hash = None

    # construction

    @classmethod
    def zero(cls, nvars: int) -> LaurentPoly:
        return cls(nvars)

    @classmethod
    def const(cls, c: int, nvars: int) -> LaurentPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> LaurentPoly:
        return cls.const(1, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: int = 1) -> LaurentPoly:
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def gen(cls, i: int, nvars: int) -> LaurentPoly:
        """The variable tau_{i+1} (0-based index)."""
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(e)

    @classmethod
    def T(cls, i: int, nvars: int) -> LaurentPoly:
        """The Iwasawa variable T_{i+1} = tau_{i+1} - 1."""
        return cls.gen(i, nvars) - 1

    @classmethod
    def from_T_coeffs(cls, coeffs: Mapping[Exponent, int], nvars: int) -> LaurentPoly:
        """Build sum c_k T^k with T_i = tau_i - 1."""
        out = cls.zero(nvars)
        Ts = [cls.T(i, nvars) for i in range(nvars)]
        for k, c in coeffs.items():
            term = cls.const(c, nvars)
            for i, ki in enumerate(k):
                term = term * Ts[i] ** ki
            out = out + term
        return out

    # basic access

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exponent, int]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def min_exponents(self) -> Exponent:
        return tuple(min(e[i] for e in self._terms) for i in range(self.nvars))

    def max_exponents(self) -> Exponent:
        return tuple(max(e[i] for e in self._terms) for i in range(self.nvars))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.nvars, 0)

    # arithmetic

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPoly(self.nvars, {tuple(x * k for x in e): c ** (-k)})
        result = LaurentPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other, self.nvars)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def shift(self, v: Sequence[int]) -> LaurentPoly:
        """Multiply by the monomial tau^v."""
        return LaurentPoly(
            self.nvars, {tuple(a + b for a, b in zip(e, v)): c for e, c in self._terms.items()}
        )

    def scale(self, c: int) -> LaurentPoly:
        return LaurentPoly(self.nvars, {e: c * x for e, x in self._terms.items()})

    def exact_div(self, other: LaurentPoly | int) -> LaurentPoly:
        """Quotient q with self == q * other; ValueError when it does not exist."""
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            out = {}
            for e, c in self._terms.items():
                q, r = divmod(c, other)
                if r:
                    raise ValueError("not exactly divisible")
                out[e] = q
            return LaurentPoly(self.nvars, out)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.nvars)
        if len(other._terms) == 1:
            ((e, c),) = other._terms.items()
            return self.shift(tuple(-x for x in e)).exact_div(c)
        # quotient exponents are confined to a box (Newton polytopes add)
        lo = tuple(a - b for a, b in zip(self.min_exponents(), other.min_exponents()))
        hi = tuple(a - b for a, b in zip(self.max_exponents(), other.max_exponents()))
        lead_e, lead_c = max(other._terms.items())
        rem = dict(self._terms)
        quot: dict[Exponent, int] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            d = tuple(a - b for a, b in zip(e, lead_e))
            if any(x < l or x > h for x, l, h in zip(d, lo, hi)):
                raise ValueError("not exactly divisible")
            qc, r = divmod(c, lead_c)
            if r:
                raise ValueError("not exactly divisible")
            quot[d] = qc
            for eb, cb in other._terms.items():
                t = tuple(a + b for a, b in zip(d, eb))
                v = rem.get(t, 0) - qc * cb
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return LaurentPoly(self.nvars, quot)

    def divides(self, other: LaurentPoly) -> bool:
        try:
            other.exact_div(self)
        except ValueError:
            return False
        return True

    # integer content and reduction

    def content(self) -> int:
        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        return g

    def p_content_valuation(self, p: int) -> int:
        if not self._terms:
            raise ValueError("valuation of zero polynomial")
        return min(_vp_int(c, p) for c in self._terms.values())

    def mod(self, p: int) -> LaurentPoly:
        """Coefficients reduced to [0, p); the result is read modulo p."""
        return LaurentPoly(self.nvars, {e: c % p for e, c in self._terms.items()})

    def canonicalize(self) -> LaurentPoly:
        """Representative of the class under units +-tau^v.

        Every variable's minimum exponent becomes 0 and the coefficient of the
        lexicographically smallest exponent is positive.
        """
        if self.is_zero():
            raise ValueError("zero polynomial has no canonical associate")
        f = self.shift(tuple(-x for x in self.min_exponents()))
        if min(f._terms.items())[1] < 0:
            f = -f
        return f

    def is_associate(self, other: LaurentPoly) -> bool:
        return self.canonicalize() == other.canonicalize()

    def transform_exponents(self, A: Sequence[Sequence[int]]) -> LaurentPoly:
        """Substitute monomials: tau^e -> tau^(e A) for an integer matrix A (l x l)."""
        l = self.nvars
        out: dict[Exponent, int] = {}
        for e, c in self._terms.items():
            f = tuple(sum(e[j] * A[j][i] for j in range(l)) for i in range(l))
            out[f] = out.get(f, 0) + c
        return LaurentPoly(l, out)

    def T_coeffs(self) -> dict[Exponent, int]:
        """Coefficients of the expansion in T_i = tau_i - 1.

        Requires nonnegative exponents (canonicalize first).
        """
        if self._terms and min(self.min_exponents()) < 0:
            raise ValueError("T-expansion needs nonnegative exponents; canonicalize first")
        out: dict[Exponent, int] = {}
        for e, c in self._terms.items():
            partial = {(): c}
            for ei in e:
                nxt = {}
                for k, v in partial.items():
                    for j in range(ei + 1):
                        key = k + (j,)
                        nxt[key] = nxt.get(key, 0) + v * comb(ei, j)
                partial = nxt
            for k, v in partial.items():
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def evaluate(self, values: Sequence, one, inverse: Callable | None = None):
        """Generic substitution tau_i -> values[i] in any commutative ring.

        ``inverse`` maps a value to its inverse and is needed for negative
        exponents.
        """
        total = one * 0
        for e, c in self._terms.items():
            term = one * c
            for v, k in zip(values, e):
                if k >= 0:
                    term = term * _power(v, k, one)
                else:
                    if inverse is None:
                        raise ValueError("negative exponent needs an inverse map")
                    term = term * _power(inverse(v), -k, one)
            total = total + term
        return total

    def at_one(self) -> int:
        """Value at tau = (1, ..., 1), i.e. T = 0."""
        return sum(self._terms.values())

    # display / serialization

    def to_pairs(self) -> list[list]:
        return [[list(e), c] for e, c in self.items()]

    @classmethod
    def from_pairs(cls, nvars: int, pairs: Iterable) -> LaurentPoly:
        out: dict[Exponent, int] = {}
        for e, c in pairs:
            e = tuple(e)
            out[e] = out.get(e, 0) + c
        return cls(nvars, out)

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        if names is None:
            names = ["tau"] if self.nvars == 1 else [f"tau{i + 1}" for i in range(self.nvars)]
        return _format_terms(sorted(self._terms.items(), reverse=True), names)

    def format_T(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = ["T"] if self.nvars == 1 else [f"T{i + 1}" for i in range(self.nvars)]
        coeffs = self.T_coeffs()
        if not coeffs:
            return "0"
        return _format_terms(sorted(coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])), names)

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {dict(self.items())})"

    def __str__(self):
        return self.format()


def _power(v, k, one):
    out = one
    for _ in range(k):
        out = out * v
    return out


def _vp_int(c: int, p: int) -> int:
    if c == 0:
        raise ValueError("valuation of zero")
    c = abs(c)
    k = 0
    while c % p == 0:
        c //= p
        k += 1
    return k


def _format_terms(items, names) -> str:
    parts = []
    for e, c in items:
        mono = "*".join(
            (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k != 0
        )
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s
