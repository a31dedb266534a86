"""Analytic side of the tower: voltage Laplacian, its determinant over the
group ring, root-of-unity valuation sums, and growth invariants.

The level-m count used throughout is

    p^(m l) * kappa(X_m) = kappa(X_0) * prod_{zeta != 1} det(Delta(zeta - 1)),

so that v_p|J(X_m)| = sum_zeta v_p(det) + v_p(kappa_0) - m l.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .config import DEFAULT_BUDGET, Budget, BudgetExceeded
from .exact.cyclotomic import eval_at_root_exponents, totient_pk
from .exact.det import det_fraction_free
from .exact.laurent import LaurentPoly
from .exact.localprime import prime_multiplicity_mod_p, primitive_directions
from .jacobian import DisconnectedTowerError, jacobian_of_cover, vp_int
from .multigraph import Multigraph, spanning_tree_count
from .voltage import VoltageAssignment, derived_graph, tower_is_connected


class CharSeriesError(ArithmeticError):
    pass


class FitError(ValueError):
    def __init__(self, message: str, residuals: list | None = None):
        super().__init__(message)
        self.residuals = residuals or []


class OracleMismatchError(AssertionError):
    pass


# voltage Laplacian and its determinant


def voltage_laplacian(X: Multigraph, a: VoltageAssignment) -> list[list[LaurentPoly]]:
    """(D - A_alpha)^t over the Laurent ring in tau_1..tau_l."""
    a.check(X)
    n, l = X.vertex_count, a.l
    zero = LaurentPoly.zero(l)
    A = [[zero for _ in range(n)] for _ in range(n)]
    deg = X.degrees()
    for e in X.edges:
        mono = LaurentPoly.monomial(a.volts[e.edge_id])
        inv = LaurentPoly.monomial([-x for x in a.volts[e.edge_id]])
        i, j = e.tail - 1, e.head - 1
        if e.is_loop:
            A[i][i] = A[i][i] + mono + inv
        else:
            A[i][j] = A[i][j] + mono
            A[j][i] = A[j][i] + inv
    M = [[(LaurentPoly.const(deg[i], l) if i == j else zero) - A[i][j] for j in range(n)] for i in range(n)]
    return [list(col) for col in zip(*M)]


@dataclass(frozen=True)
class CharSeries:
    l: int
    p: int | None
    det_raw: LaurentPoly
    det_canonical: LaurentPoly
    char_J: LaurentPoly | None = None

    def to_json(self) -> dict:
        out = {
            "l": self.l,
            "det_raw": self.det_raw.to_pairs(),
            "det_canonical": self.det_canonical.to_pairs(),
            "det_canonical_T": self.det_canonical.format_T(),
        }
        if self.char_J is not None:
            out["char_J"] = self.char_J.to_pairs()
            out["char_J_T"] = self.char_J.format_T()
        return out


def char_det(X: Multigraph, a: VoltageAssignment) -> CharSeries:
    cert = tower_is_connected(X, a)
    if not cert:
        raise DisconnectedTowerError(f"tower is not connected; witness {cert.witness}")
    det_raw = det_fraction_free(voltage_laplacian(X, a))
    if det_raw.at_one() != 0:
        raise CharSeriesError(f"det at tau = 1 is {det_raw.at_one()}, expected 0")
    canon = det_raw.canonicalize()
    char_J = None
    if a.l == 1:
        try:
            char_J = canon.exact_div(LaurentPoly.T(0, 1))
        except ValueError as exc:
            raise CharSeriesError("T does not divide the determinant") from exc
    return CharSeries(a.l, a.p, det_raw, canon, char_J)


def multi_edge_sums(volts: Iterable[Sequence[int]], l: int) -> tuple[LaurentPoly, LaurentPoly]:
    """x = -sum alpha(e_i) and y = -sum alpha(e_i)^{-1} for a bundle of parallel edges."""
    x = LaurentPoly.zero(l)
    y = LaurentPoly.zero(l)
    for v in volts:
        x = x - LaurentPoly.monomial(v)
        y = y - LaurentPoly.monomial([-c for c in v])
    return x, y


def closed_form_cycle_det(n: int, a: int, x: LaurentPoly, y: LaurentPoly, as_printed: bool = False) -> LaurentPoly:
    """Determinant of the voltage Laplacian of an n-cycle whose edge x_1 x_2 is
    replaced by a - 1 parallel edges, from the Schur-complement reduction.

    The reduction eliminates the n - 2 vertices x_3..x_n, so the path length
    entering the formula is n - 2.  ``as_printed=True`` returns the variant
    with n in place of n - 2, kept for comparison; it is off on every bundle
    whose voltages make the answer depend on n.
    """
    if n < 3:
        raise ValueError("the cycle needs at least three vertices")
    k = n if as_printed else n - 2
    inner = ((k + 1) * y - 1) * x - y + (-(a**2) + 2 * a - 1) * k + (1 - a**2)
    return -inner


def cycle_family(n: int, bundle: Sequence[Sequence[int]], p: int) -> tuple[Multigraph, VoltageAssignment]:
    """The n-cycle x_1..x_n with the edge x_1 x_2 replaced by len(bundle)
    parallel edges carrying the given voltages (all others trivial)."""
    from .multigraph import build_multigraph

    if n < 3:
        raise ValueError("the cycle needs at least three vertices")
    l = len(bundle[0])
    edges = [(1, 2)] * len(bundle) + [(i, i + 1) for i in range(2, n)] + [(n, 1)]
    volts = [tuple(v) for v in bundle] + [(0,) * l] * (n - 1)
    return build_multigraph(n, edges), VoltageAssignment.build(p, l, volts)


# root-of-unity sums


def orbit_representatives(p: int, k: int, l: int) -> list[tuple[int, ...]]:
    """Exponent vectors c in (Z/p^k)^l of exact order p^k whose first unit
    coordinate is 1: one per Galois orbit of characters of that order."""
    if k == 0:
        return [(0,) * l]
    q = p**k
    reps = []
    for i in range(l):
        def rec(prefix, pos):
            if pos == l:
                reps.append(tuple(prefix))
                return
            if pos < i:
                choices = range(0, q, p)
            elif pos == i:
                choices = (1,)
            else:
                choices = range(q)
            for c in choices:
                rec(prefix + [c], pos + 1)

        rec([], 0)
    return reps


def orbit_count(p: int, m: int, l: int) -> int:
    return sum(len(orbit_representatives(p, k, l)) if k else 0 for k in range(1, m + 1)) if m else 0


@dataclass(frozen=True)
class OrbitTerm:
    level: int
    exponents: tuple[int, ...]
    weight: int
    pi_order: int

    @property
    def vp_total(self) -> Fraction:
        """Sum of v_p over the whole orbit (integer: weight * pi_order / weight)."""
        return Fraction(self.pi_order)


@dataclass(frozen=True)
class AnalyticLevel:
    level: int
    raw_sum: int
    vp_kappa0: int
    correction: int
    vp: int
    terms: tuple[OrbitTerm, ...] = field(default=(), repr=False)

    @property
    def uncorrected(self) -> int:
        return self.raw_sum + self.vp_kappa0

    def to_json(self, with_terms: bool = False) -> dict:
        out = {
            "level": self.level,
            "zeta_sum": self.raw_sum,
            "vp_kappa0": self.vp_kappa0,
            "correction": self.correction,
            "uncorrected": self.uncorrected,
            "vp": self.vp,
        }
        if with_terms:
            out["orbits"] = [
                {"level": t.level, "exponents": list(t.exponents), "weight": t.weight,
                 "vp": str(Fraction(t.pi_order, t.weight))}
                for t in self.terms
            ]
        return out


def analytic_level(X: Multigraph, a: VoltageAssignment, m: int, cs: CharSeries | None = None,
                   budget: Budget = DEFAULT_BUDGET) -> AnalyticLevel:
    if m < 0:
        raise ValueError("level must be nonnegative")
    if cs is None:
        cs = char_det(X, a)
    p, l = a.p, a.l
    if orbit_count(p, m, l) > budget.max_orbits:
        raise BudgetExceeded(f"level {m} needs more than {budget.max_orbits} orbit evaluations")
    kappa0 = spanning_tree_count(X)
    terms = []
    raw = 0
    for k in range(1, m + 1):
        phi = totient_pk(p, k)
        for c in orbit_representatives(p, k, l):
            val = eval_at_root_exponents(cs.det_raw, p, k, c)
            if val.is_zero():
                raise DisconnectedTowerError(f"determinant vanishes at the character {c} of order {p}^{k}")
            # the orbit has phi elements of equal valuation pi_order / phi each
            o = val.pi_order()
            terms.append(OrbitTerm(k, c, phi, o))
            raw += o
    v0 = vp_int(kappa0, p)
    vp = raw + v0 - m * l
    if vp < 0:
        raise CharSeriesError(f"negative valuation {vp} at level {m}")
    return AnalyticLevel(m, raw, v0, -m * l, vp, tuple(terms))


def analytic_vp_level(X: Multigraph, a: VoltageAssignment, m: int, cs: CharSeries | None = None,
                      budget: Budget = DEFAULT_BUDGET) -> int:
    """v_p|J(X_m)| from the determinant at p-power roots of unity."""
    return analytic_level(X, a, m, cs, budget).vp


@dataclass(frozen=True)
class TreeIdentity:
    level: int
    lhs: int
    rhs: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def tree_identity_check(X: Multigraph, a: VoltageAssignment, m: int, cs: CharSeries | None = None,
                        budget: Budget = DEFAULT_BUDGET) -> TreeIdentity:
    """p^(ml) kappa(X_m) against kappa(X_0) times the product of orbit norms."""
    if cs is None:
        cs = char_det(X, a)
    p, l = a.p, a.l
    N = X.vertex_count * p ** (m * l)
    budget.check_exact(N)
    kappa_m = spanning_tree_count(derived_graph(X, a, m).cover)
    rhs = spanning_tree_count(X)
    for k in range(1, m + 1):
        for c in orbit_representatives(p, k, l):
            rhs *= eval_at_root_exponents(cs.det_raw, p, k, c).norm()
    return TreeIdentity(m, p ** (m * l) * kappa_m, rhs)


# growth data


@dataclass(frozen=True)
class GrowthRow:
    m: int
    vp: int | None
    method: str
    skipped: str | None = None


@dataclass(frozen=True)
class GrowthTable:
    p: int
    l: int
    rows: tuple[GrowthRow, ...]

    def values(self, method: str | None = None) -> dict[int, int]:
        """m -> vp over computed rows (either method when None)."""
        out = {}
        for r in self.rows:
            if r.vp is not None and (method is None or r.method == method):
                out.setdefault(r.m, r.vp)
        return out

    def mismatches(self) -> list[tuple[int, int, int]]:
        snf, ana = self.values("snf"), self.values("analytic")
        return [(m, snf[m], ana[m]) for m in sorted(snf) if m in ana and snf[m] != ana[m]]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "l": self.l,
            "rows": [{"m": r.m, "vp": r.vp, "method": r.method, "skipped": r.skipped} for r in self.rows],
        }


def growth_table(X: Multigraph, a: VoltageAssignment, M: int, methods: Sequence[str] = ("snf", "analytic"),
                 budget: Budget = DEFAULT_BUDGET, check: bool = True) -> GrowthTable:
    for meth in methods:
        if meth not in ("snf", "analytic"):
            raise ValueError(f"unknown method {meth!r}")
    cs = char_det(X, a) if "analytic" in methods else None
    rows = []
    for m in range(M + 1):
        for meth in methods:
            try:
                if meth == "snf":
                    vp = jacobian_of_cover(X, a, m, budget=budget).vp
                else:
                    vp = analytic_vp_level(X, a, m, cs, budget)
                rows.append(GrowthRow(m, vp, meth))
            except BudgetExceeded as exc:
                rows.append(GrowthRow(m, None, meth, str(exc)))
    table = GrowthTable(a.p, a.l, tuple(rows))
    if check and table.mismatches():
        raise OracleMismatchError(f"snf and analytic values differ: {table.mismatches()}")
    return table


# invariants


@dataclass(frozen=True)
class IwasawaInvariants:
    l: int
    p: int
    mu: int | None = None
    lam: int | None = None
    nu: int | None = None
    m_stable: int | None = None
    m0: int | None = None
    l0: int | None = None
    greenberg: Mapping[str, Fraction] | None = None
    l0_primes: tuple[tuple[tuple[int, int], int], ...] = ()

    def to_json(self) -> dict:
        out: dict = {"l": self.l, "p": self.p}
        if self.l == 1:
            out.update(mu=self.mu, lambda_=self.lam, nu=self.nu, m_stable=self.m_stable)
            out["lambda"] = out.pop("lambda_")
        else:
            out.update(m0=self.m0, l0=self.l0,
                       l0_primes=[{"direction": list(d), "multiplicity": k} for d, k in self.l0_primes])
        if self.greenberg is not None:
            out["greenberg"] = {k: str(v) for k, v in self.greenberg.items()}
        return out


def _T_content(f: LaurentPoly, p: int) -> tuple[int, dict]:
    coeffs = f.T_coeffs()
    return min(vp_int(c, p) for c in coeffs.values()), coeffs


def mu_lambda(char_J: LaurentPoly, p: int) -> tuple[int, int]:
    mu, coeffs = _T_content(char_J, p)
    lam = min(k[0] for k, c in coeffs.items() if vp_int(c, p) == mu)
    return mu, lam


def invariants_l1(cs: CharSeries, growth: GrowthTable | None = None, p: int | None = None) -> IwasawaInvariants:
    if cs.l != 1 or cs.char_J is None:
        raise ValueError("one-variable invariants need l = 1")
    p = p if p is not None else (growth.p if growth is not None else cs.p)
    if p is None:
        raise ValueError("prime not given")
    mu, lam = mu_lambda(cs.char_J, p)
    nu = m_stable = None
    if growth is not None:
        data = growth.values()
        ms = sorted(data)
        resid = [(m, data[m] - mu * p**m - lam * m) for m in ms]
        for start in range(len(ms)):
            tail = resid[start:]
            if len(tail) >= 2 and len({r for _, r in tail}) == 1:
                nu, m_stable = tail[0][1], tail[0][0]
                break
        else:
            if len(ms) >= 2:
                raise FitError(f"growth rows do not follow mu={mu}, lambda={lam} on any tail", resid)
    return IwasawaInvariants(1, p, mu=mu, lam=lam, nu=nu, m_stable=m_stable)


def reduced_G(cs: CharSeries, p: int) -> tuple[int, LaurentPoly]:
    """(m0, G bar) with det_canonical = p^m0 G and G bar = G mod p."""
    m0, _ = _T_content(cs.det_canonical, p)
    G = cs.det_canonical.exact_div(p**m0)
    return m0, G.mod(p)


def invariants_l2(cs: CharSeries, p: int | None = None) -> IwasawaInvariants:
    if cs.l != 2:
        raise ValueError(f"l0 extraction is implemented for l = 2 only (got l = {cs.l})")
    p = p if p is not None else cs.p
    m0, Gbar = reduced_G(cs, p)
    degree = max((sum(k) for k, c in Gbar.T_coeffs().items() if c % p), default=0)
    hits = []
    for d in primitive_directions(degree, p):
        k = prime_multiplicity_mod_p(Gbar, d, p)
        if k:
            hits.append((d, k))
    return IwasawaInvariants(2, p, m0=m0, l0=sum(k for _, k in hits), l0_primes=tuple(hits))


# polynomial growth fit

_BASES = {
    1: (("c10", lambda p, m: p**m), ("c01", lambda p, m: m), ("c00", lambda p, m: 1)),
    2: (
        ("c20", lambda p, m: p ** (2 * m)),
        ("c11", lambda p, m: m * p**m),
        ("c10", lambda p, m: p**m),
        ("c01", lambda p, m: m),
        ("c00", lambda p, m: 1),
    ),
}


@dataclass(frozen=True)
class GreenbergFit:
    l: int
    p: int
    coeffs: Mapping[str, Fraction]
    m_stable: int
    residuals: tuple[tuple[int, Fraction], ...]

    def predict(self, m: int) -> Fraction:
        return sum((self.coeffs[name] * f(self.p, m) for name, f in _BASES[self.l]), Fraction(0))


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of an overdetermined consistent system, else None."""
    rows = [r[:] + [v] for r, v in zip(A, b)]
    n = len(A[0]) if A else 0
    piv_cols = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if k is None:
            return None
        rows[r], rows[k] = rows[k], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][n] != 0 for i in range(r, len(rows))):
        return None
    return [rows[i][n] for i in range(n)]


def greenberg_fit(growth: GrowthTable | Mapping[int, int], l: int, p: int | None = None,
                  constraints: Mapping[str, int | Fraction] | None = None) -> GreenbergFit:
    """Exact fit of vp(m) by the growth polynomial on the earliest exact window."""
    if l not in _BASES:
        raise ValueError(f"no growth basis for l = {l}")
    if isinstance(growth, GrowthTable):
        data = growth.values()
        p = growth.p if p is None else p
    else:
        data = dict(growth)
    if p is None:
        raise ValueError("prime not given")
    constraints = {k: Fraction(v) for k, v in (constraints or {}).items()}
    basis = _BASES[l]
    names = [n for n, _ in basis]
    for k in constraints:
        if k not in names:
            raise ValueError(f"unknown coefficient {k!r}")
    free = [(n, f) for n, f in basis if n not in constraints]
    ms = sorted(data)
    best_resid: list = []
    for start in range(len(ms)):
        window = ms[start:]
        if len(window) < len(free) + 1:
            break
        A = [[Fraction(f(p, m)) for _, f in free] for m in window]
        b = [Fraction(data[m]) - sum((constraints[n] * f(p, m) for n, f in basis if n in constraints), Fraction(0))
             for m in window]
        sol = _solve_exact(A, b)
        if sol is None:
            continue
        coeffs = dict(constraints)
        coeffs.update({n: v for (n, _), v in zip(free, sol)})
        ordered = {n: coeffs[n] for n in names}
        fit = GreenbergFit(l, p, ordered, window[0], ())
        resid = tuple((m, Fraction(data[m]) - fit.predict(m)) for m in ms)
        return GreenbergFit(l, p, ordered, window[0], resid)
    raise FitError("no window of the growth rows is fit exactly", best_resid)
