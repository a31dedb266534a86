"""Reference values for the cycle-with-bundle family, checked end to end.

Every expected value here was computed independently of the code path that
is being checked (hand calculation, Smith form oracle, or a second
determinant route) and is stored literally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .exact.laurent import LaurentPoly
from .ihara import interpolation_check
from .iwasawa import (
    analytic_vp_level,
    char_det,
    cycle_family,
    greenberg_fit,
    invariants_l1,
    invariants_l2,
    mu_lambda,
    tree_identity_check,
)
from .jacobian import RankIdealSpec, fukuda_stabilize, jacobian_of_cover, rank_ideal

T1 = LaurentPoly.T(0, 1)
T2, S2 = LaurentPoly.T(0, 2), LaurentPoly.T(1, 2)

TAU = ((1,),)
TAU_ONE = ((1,), (0,))
TAU_SIGMA = ((1, 0), (0, 1))


@dataclass(frozen=True)
class GoldenRow:
    name: str
    expected: str
    observed: str
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": self.expected, "observed": self.observed, "passed": self.passed}


def _det_forms() -> list[tuple[str, tuple, Callable[[int], LaurentPoly]]]:
    T = T1
    return [
        ("t", TAU, lambda n: T**2),
        ("t,1", TAU_ONE, lambda n: n * T**2),
        ("t,t", ((1,), (1,)), lambda n: 2 * T**2),
        ("t,t2", ((1,), (2,)), lambda n: T**2 * (T**2 + (n + 4) * T + (n + 4))),
        ("t,t,t", ((1,), (1,), (1,)), lambda n: 3 * T**2),
        ("t,1,1", ((1,), (0,), (0,)), lambda n: (2 * n - 1) * T**2),
        ("t,t,1", ((1,), (1,), (0,)), lambda n: 2 * n * T**2),
    ]


def bivariate_form(n: int) -> LaurentPoly:
    T, S = T2, S2
    return n * (T - S) ** 2 + 2 * S * T + S * T**2 + S**2 * T


def _row(name, expected, observed) -> GoldenRow:
    return GoldenRow(name, str(expected), str(observed), expected == observed)


def golden_rows() -> list[GoldenRow]:
    rows: list[GoldenRow] = []

    # growth of the triangle with one tau edge
    for p, M, want in ((2, 3, (0, 1, 2, 3)), (3, 2, (1, 2, 3))):
        X, a = cycle_family(3, TAU, p)
        snf = tuple(jacobian_of_cover(X, a, m).vp for m in range(M + 1))
        ana = tuple(analytic_vp_level(X, a, m) for m in range(M + 1))
        rows.append(_row(f"triangle/t p={p} vp snf m<={M}", want, snf))
        rows.append(_row(f"triangle/t p={p} vp analytic m<={M}", want, ana))

    for p, want in ((2, 12), (3, 27)):
        X, a = cycle_family(3, TAU, p)
        ti = tree_identity_check(X, a, 1)
        rows.append(_row(f"triangle/t p={p} m=1 tree identity", (want, want), (ti.lhs, ti.rhs)))

    # determinants of the bundle family against literal closed forms
    for name, bundle, form in _det_forms():
        for n in (3, 4, 5, 6):
            X, a = cycle_family(n, bundle, 2)
            got = char_det(X, a).det_canonical
            want = form(n).canonicalize()
            rows.append(_row(f"det C{n}[{name}]", want.format_T(), got.format_T()))
    for n in (3, 4, 5):
        X, a = cycle_family(n, TAU_SIGMA, 5)
        got = char_det(X, a).det_canonical
        rows.append(_row(f"det C{n}[t,s]", bivariate_form(n).canonicalize().format_T(["T", "S"]),
                         got.format_T(["T", "S"])))

    # one-variable invariants
    X, a = cycle_family(3, TAU_ONE, 5)
    cs = char_det(X, a)
    inv = invariants_l1(cs, _growth(X, a, 2), 5)
    rows.append(_row("C3[t,1] p=5 (mu, lambda, nu)", (0, 1, 1), (inv.mu, inv.lam, inv.nu)))
    for p, r in ((2, 3), (3, 2), (5, 2)):
        X, a = cycle_family(p**r, TAU_ONE, p)
        rows.append(_row(f"C{p ** r}[t,1] p={p} (mu, lambda)", (r, 1), mu_lambda(char_det(X, a).char_J, p)))
    for n in (3, 4, 5):
        X, a = cycle_family(n, TAU, 3)
        rows.append(_row(f"C{n}[t] p=3 lambda", 1, invariants_l1(char_det(X, a), p=3).lam))

    # two-variable invariants and the growth fit
    for n, l0 in ((3, 0), (5, 2)):
        X, a = cycle_family(n, TAU_SIGMA, 5)
        cs = char_det(X, a)
        inv = invariants_l2(cs, 5)
        rows.append(_row(f"C{n}[t,s] p=5 (m0, l0)", (0, l0), (inv.m0, inv.l0)))
        data = {m: analytic_vp_level(X, a, m, cs) for m in range(6)}
        fit = greenberg_fit({m: v for m, v in data.items() if m <= 4}, 2, 5, {"c20": 0})
        rows.append(_row(f"C{n}[t,s] p=5 fitted c11", l0, fit.coeffs["c11"]))
        rows.append(_row(f"C{n}[t,s] p=5 fit predicts m=5", data[5], fit.predict(5)))

    # character sums against the Ihara polynomial
    for n, bundle, p, want in ((3, TAU, 2, 4), (3, TAU, 3, 3), (3, TAU_ONE, 2, 12)):
        X, a = cycle_family(n, bundle, p)
        rep = interpolation_check(X, a, 1)
        vals = tuple(sorted({int(str(r.lhs)) for r in rep.rows}))
        rows.append(_row(f"C{n}[{_name(bundle)}] p={p} P(1) at level 1", ((want,), True), (vals, rep.passed)))

    # stabilization of J / (3, T) J
    X, a = cycle_family(3, TAU, 3)
    I = RankIdealSpec(1, (T1,))
    res, _ = fukuda_stabilize(X, a, I, 3)
    later = tuple(rank_ideal(X, a, m, I) for m in (2, 3))
    rows.append(_row("triangle/t p=3 I=(3,T) stabilization", (0, 1, (1, 1)),
                     (res.level if res else None, res.rank if res else None, later)))
    return rows


def _name(bundle) -> str:
    names = {TAU: "t", TAU_ONE: "t,1"}
    return names.get(tuple(bundle), "?")


def _growth(X, a, M):
    from .iwasawa import growth_table

    return growth_table(X, a, M)
