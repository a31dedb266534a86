"""Acceptance criteria, each checked exactly as stated.

Every test records one PASS/FAIL line (see the terminal summary).  Criteria
3, 4 and 5 quote closed forms and invariants whose stated values disagree
with exact computation; they are implemented literally and expected to fail.
"""

import random

import pytest

from iwagraph.corpus import corpus
from iwagraph.exact.cyclotomic import CyclotomicElem, cyclo_vp, totient_pk
from iwagraph.exact.laurent import LaurentPoly
from iwagraph.exact.snf import snf_divisors
from iwagraph.ihara import interpolation_check
from iwagraph.iwasawa import (
    analytic_vp_level,
    char_det,
    closed_form_cycle_det,
    cycle_family,
    greenberg_fit,
    invariants_l2,
    multi_edge_sums,
    mu_lambda,
    tree_identity_check,
)
from iwagraph.jacobian import RankIdealSpec, fukuda_stabilize, jacobian_of_cover, rank_ideal

from conftest import record

T = LaurentPoly.T(0, 1)
T2, S2 = LaurentPoly.T(0, 2), LaurentPoly.T(1, 2)


@pytest.fixture(scope="module")
def corpus_rows():
    """(tower, m, smith-form vp, analytic vp, tree identity, invariant factors, det(1))."""
    rows = []
    for tw in corpus():
        X, a = tw.build()
        cs = char_det(X, a)
        for m in tw.levels():
            J = jacobian_of_cover(X, a, m)
            ti = tree_identity_check(X, a, m, cs)
            rows.append((tw, m, J.vp, analytic_vp_level(X, a, m, cs), ti, J.invariant_factors,
                         cs.det_raw.at_one()))
    return rows


def test_criterion_1_oracle_equivalence(corpus_rows):
    bad = [(tw.label, m, s, an) for tw, m, s, an, *_ in corpus_rows if s != an]
    towers = len({r[0] for r in corpus_rows})
    record(1, not bad, f"{len(corpus_rows)} levels on {towers} towers; mismatches: {bad[:5]}")
    assert not bad


def test_criterion_2_tree_identity(corpus_rows):
    bad = [(tw.label, m) for tw, m, _, _, ti, *_ in corpus_rows if not ti.equal]
    X, a = cycle_family(3, ((1,),), 2)
    s2 = tree_identity_check(X, a, 1)
    X, a = cycle_family(3, ((1,),), 3)
    s3 = tree_identity_check(X, a, 1)
    spots = (s2.lhs, s2.rhs, s3.lhs, s3.rhs) == (12, 12, 27, 27)
    ok = not bad and spots
    record(2, ok, f"{len(corpus_rows)} exact identities, failures {bad[:5]}; "
                  f"spot p=2: {s2.lhs}={s2.rhs}, p=3: {s3.lhs}={s3.rhs}")
    assert ok


def _stated_forms():
    """(label, bundle, n -> stated polynomial) for the one-variable family."""
    out = [
        ("{t}", ((1,),), lambda n: T**2),
        ("{t,1}", ((1,), (0,)), lambda n: (n + 2) * T**2),
        ("{t,t}", ((1,), (1,)), lambda n: 2 * T**2),
        ("{t,t^2}", ((1,), (2,)), lambda n: T**2 * (T**2 + (6 + n) * T + 6 + n)),
    ]
    for a in (2, 3, 4):
        out.append((f"all t, a={a}", ((1,),) * (a - 1), lambda n, a=a: (a - 1) * T**2))
    for a in (3, 4):
        for b in range(1, a):
            bundle = ((1,),) * b + ((0,),) * (a - 1 - b)
            out.append((f"b of t, a={a} b={b}", bundle,
                        lambda n, a=a, b=b: T**2 * ((a * b - b * b - b) * n + a * b - b * b)))
    return out


def test_criterion_3_closed_forms():
    failures, checked = [], 0
    for label, bundle, form in _stated_forms():
        for n in (3, 4, 5, 6):
            got = char_det(*cycle_family(n, bundle, 2)).det_canonical
            checked += 1
            if got != form(n).canonicalize():
                failures.append(f"{label} n={n}: got {got.format_T()}")
    for n in (3, 4, 5, 6):
        got = char_det(*cycle_family(n, ((1, 0), (0, 1)), 5)).det_canonical
        stated = (n + 2) * (T2 - S2) ** 2 + 2 * S2 * T2 + S2 * T2**2 + S2**2 * T2
        checked += 1
        if got != stated.canonicalize():
            failures.append(f"{{t,s}} n={n}: got {got.format_T(['T', 'S'])}")
    record(3, not failures, f"{checked - len(failures)}/{checked} forms match; first failures: {failures[:3]}")
    assert not failures


def test_criterion_4_invariants_l1():
    notes, ok = [], True
    X, a = cycle_family(3, ((1,), (0,)), 5)
    cs = char_det(X, a)
    mu, lam = mu_lambda(cs.char_J, 5)
    notes.append(f"n=3 p=5: char_J={cs.char_J.format_T()} mu={mu} lambda={lam} (stated 1, 1)")
    ok &= (mu, lam) == (1, 1)
    rows = {m: jacobian_of_cover(X, a, m).vp for m in (1, 2)}
    nus = {m: v - 5**m - m for m, v in rows.items()}
    notes.append(f"rows {rows} give nu {sorted(set(nus.values()))}")
    ok &= len(set(nus.values())) == 1
    for p, r in ((2, 3), (3, 2), (5, 2)):
        n = p**r - 2
        mu_r = mu_lambda(char_det(*cycle_family(n, ((1,), (0,)), p)).char_J, p)[0]
        notes.append(f"n={n} p={p}: mu={mu_r} (stated {r})")
        ok &= mu_r == r
    record(4, ok, "; ".join(notes))
    assert ok


def test_criterion_5_nontrivial_l0():
    X, a = cycle_family(3, ((1, 0), (0, 1)), 5)
    cs = char_det(X, a)
    inv = invariants_l2(cs, 5)
    data = {m: analytic_vp_level(X, a, m, cs) for m in range(6)}
    oracle = {m: jacobian_of_cover(X, a, m).vp for m in (0, 1)}
    fit = greenberg_fit({m: data[m] for m in range(5)}, 2, 5, {"c20": 0})
    c11 = fit.coeffs["c11"]
    resid5 = data[5] - fit.predict(5)
    ok = inv.m0 == 0 and inv.l0 == 2 and c11 == 2 and resid5 == 0 and all(oracle[m] == data[m] for m in oracle)
    record(5, ok, f"m0={inv.m0} (stated 0), l0={inv.l0} (stated 2), fitted c11={c11} (stated 2), "
                  f"residual at m=5: {resid5}; oracle rows agree: {all(oracle[m] == data[m] for m in oracle)}")
    assert ok


def test_criterion_6_interpolation():
    bad, count = [], 0
    for tw in corpus():
        X, a = tw.build()
        cs = char_det(X, a)
        for m in (1, 2):
            rep = interpolation_check(X, a, m, cs)
            count += len(rep.rows)
            if not rep.passed:
                bad.append((tw.label, m))
    X, a = cycle_family(3, ((1,),), 2)
    spot = interpolation_check(X, a, 1).rows[0]
    ok = not bad and spot.lhs == 4 and spot.rhs == 4
    record(6, ok, f"{count} characters checked, failures {bad[:5]}; spot P(1)={spot.lhs}, psi(det)={spot.rhs}")
    assert ok


def test_criterion_7_fukuda():
    X, a = cycle_family(3, ((1,),), 3)
    I = RankIdealSpec(1, (T,))
    res, ranks = fukuda_stabilize(X, a, I, 3)
    later = [rank_ideal(X, a, m, I) for m in (2, 3)]
    ok = res is not None and (res.level, res.rank) == (0, 1) and later == [1, 1]
    record(7, ok, f"m*={res.level if res else None}, rank={res.rank if res else None}, ranks at m=2,3: {later}")
    assert ok


def _random_elem(rng, p, k):
    return CyclotomicElem(p, k, [rng.randint(-5, 5) for _ in range(totient_pk(p, k))])


def test_criterion_8_property_suites(corpus_rows):
    notes, ok = [], True

    by_tower = {}
    for tw, m, s, *_ in corpus_rows:
        by_tower.setdefault(tw, []).append(s)
    mono = [tw.label for tw, vs in by_tower.items() if vs != sorted(vs)]
    notes.append(f"monotone vp on {len(by_tower)} towers: {not mono}")
    ok &= not mono

    nonzero = [tw.label for tw, *_, d1 in corpus_rows if d1 != 0]
    notes.append(f"det(1)=0: {not nonzero}")
    ok &= not nonzero

    rng = random.Random(20240611)
    chains = [r[5] for r in corpus_rows if r[5] is not None]
    for _ in range(300):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        chains.append(snf_divisors([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]).divisors)
    broken = [c for c in chains if any((x == 0 and y != 0) or (x and y % x) for x, y in zip(c, c[1:]))]
    notes.append(f"divisibility chains ({len(chains)}): {not broken}")
    ok &= not broken

    levels = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)]
    bad = 0
    for i in range(1200):
        p, k = levels[i % len(levels)]
        x, y = _random_elem(rng, p, k), _random_elem(rng, p, k)
        if x.is_zero() or y.is_zero():
            continue
        if (x * y).norm() != x.norm() * y.norm() or cyclo_vp(x * y) != cyclo_vp(x) + cyclo_vp(y):
            bad += 1
    notes.append(f"cyclotomic norm/valuation on 1200 pairs: {bad} failures")
    ok &= bad == 0

    disagree = []
    for _, bundle, _ in _stated_forms():
        for n in (3, 4, 5, 6):
            x, y = multi_edge_sums(bundle, 1)
            stated = closed_form_cycle_det(n, len(bundle) + 1, x, y, as_printed=True)
            if stated.canonicalize() != char_det(*cycle_family(n, bundle, 2)).det_canonical:
                disagree.append((len(bundle) + 1, bundle, n))
    notes.append(f"stated closed form vs general determinant: {len(disagree)} disagreements")
    ok &= not disagree
    record(8, ok, "; ".join(notes))
    assert ok
