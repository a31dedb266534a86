"""Command line front end: ``iwagraph <command> TOWER.json [options]``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error,
3 a size budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Sequence

from .config import DEFAULT_BUDGET, Budget, BudgetExceeded
from .exact.laurent import LaurentPoly
from .ihara import characters, ihara_poly, interpolation_check
from .iwasawa import (
    CharSeriesError,
    FitError,
    OracleMismatchError,
    analytic_level,
    char_det,
    greenberg_fit,
    growth_table,
    invariants_l1,
    invariants_l2,
    tree_identity_check,
)
from .jacobian import (
    DisconnectedTowerError,
    InfiniteQuotientError,
    RankIdealSpec,
    fukuda_stabilize,
    jacobian_of_cover,
)
from .multigraph import GraphError
from .towerfile import TowerFileError, TowerSpec, parse_tower_file, write_tower_file
from .voltage import derived_graph, tower_is_connected

SCHEMA = "iwagraph/1"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(args, doc: dict, text: str):
    if args.json:
        doc = {"schema": SCHEMA, "command": args.command, **doc}
        print(json.dumps(doc, indent=2, sort_keys=False, default=str))
    else:
        print(text)


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(map(str, header))] + [[("-" if c is None else str(c)) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _load(args) -> TowerSpec:
    spec = parse_tower_file(args.tower)
    # level 0 is the base graph itself, which the library checks on its own
    if not args.allow_disconnected and getattr(args, "level", None) != 0:
        try:
            cert = tower_is_connected(spec.graph, spec.assignment)
        except GraphError as exc:
            raise UsageError(str(exc)) from None
        if not cert:
            raise UsageError(
                f"tower is disconnected: cycle voltages miss the character {list(cert.witness)} "
                "(pass --allow-disconnected to continue)"
            )
    return spec


def _names(l: int) -> list[str]:
    return ["T"] if l == 1 else (["T", "S"] if l == 2 else [f"T{i + 1}" for i in range(l)])


# commands


def cmd_jacobian(args, budget):
    spec = _load(args)
    jd = jacobian_of_cover(spec.graph, spec.assignment, args.level, args.method, budget)
    text = [f"level {jd.level}: {jd.vertex_count} vertices, v_{jd.p}|J| = {jd.vp} ({jd.method})"]
    if jd.invariant_factors is not None:
        text.append("invariant factors: " + (", ".join(map(str, jd.invariant_factors)) or "(trivial)"))
    text.append(f"{jd.p}-part: " + (" x ".join(f"Z/{jd.p}^{v}" for v in jd.p_valuations) or "trivial"))
    _emit(args, jd.to_json(), "\n".join(text))
    return EXIT_OK


def cmd_derived(args, budget):
    spec = _load(args)
    N = spec.n * spec.p ** (args.level * spec.l)
    budget.check_modpk(N)
    DG = derived_graph(spec.graph, spec.assignment, args.level)
    zero = replace(spec.assignment, volts=tuple((0,) * spec.l for _ in DG.cover.edges))
    label = f"level {args.level} cover" + (f" of {spec.label}" if spec.label else "")
    out = TowerSpec(spec.p, spec.l, DG.cover, zero, label, DG.labels)
    if args.out:
        write_tower_file(out, args.out)
    doc = {
        "level": args.level,
        "vertices": DG.cover.vertex_count,
        "edges": DG.cover.edge_count,
        "labels": [[v, list(g)] for v, g in DG.labels],
        "out": args.out,
    }
    _emit(args, doc, f"level {args.level} cover: {DG.cover.vertex_count} vertices, "
                     f"{DG.cover.edge_count} edges" + (f", written to {args.out}" if args.out else ""))
    return EXIT_OK


def cmd_det(args, budget):
    spec = _load(args)
    cs = char_det(spec.graph, spec.assignment)
    names = _names(spec.l)
    text = [f"det (tau)      = {cs.det_raw.format()}", f"det canonical  = {cs.det_canonical.format_T(names)}"]
    if cs.char_J is not None:
        text.append(f"char series    = {cs.char_J.format_T(names)}")
    _emit(args, cs.to_json(), "\n".join(text))
    return EXIT_OK


def cmd_invariants(args, budget):
    spec = _load(args)
    X, a = spec.graph, spec.assignment
    cs = char_det(X, a)
    if spec.l == 1:
        growth = growth_table(X, a, args.max_level, ("analytic",), budget) if args.max_level is not None else None
        inv = invariants_l1(cs, growth, spec.p)
        text = f"mu = {inv.mu}, lambda = {inv.lam}"
        if inv.nu is not None:
            text += f", nu = {inv.nu} (exact from m = {inv.m_stable})"
        _emit(args, inv.to_json(), text)
        return EXIT_OK
    if spec.l == 2:
        inv = invariants_l2(cs, spec.p)
        doc = inv.to_json()
        text = [f"m0 = {inv.m0}, l0 = {inv.l0}"]
        for d, k in inv.l0_primes:
            text.append(f"  prime tau^{d} - 1: multiplicity {k}")
        if args.max_level is not None:
            growth = growth_table(X, a, args.max_level, ("analytic",), budget)
            try:
                fit = greenberg_fit(growth, 2, spec.p, {"c20": inv.m0})
            except FitError as exc:
                text.append(f"growth fit failed: {exc}")
                _emit(args, doc, "\n".join(text))
                return EXIT_FAIL
            doc["greenberg"] = {k: str(v) for k, v in fit.coeffs.items()}
            doc["greenberg_m_stable"] = fit.m_stable
            text.append("growth polynomial: " + ", ".join(f"{k} = {v}" for k, v in fit.coeffs.items())
                        + f" (exact from m = {fit.m_stable})")
        _emit(args, doc, "\n".join(text))
        return EXIT_OK
    raise UsageError(f"invariants are available for l = 1 and l = 2 only (got l = {spec.l})")


def cmd_growth(args, budget):
    spec = _load(args)
    methods = {"snf": ("snf",), "analytic": ("analytic",), "both": ("snf", "analytic")}[args.method]
    try:
        table = growth_table(spec.graph, spec.assignment, args.max_level, methods, budget)
        status = EXIT_OK
    except OracleMismatchError:
        table = growth_table(spec.graph, spec.assignment, args.max_level, methods, budget, check=False)
        status = EXIT_FAIL
    rows = [(r.m, r.method, r.vp if r.vp is not None else "skipped") for r in table.rows]
    doc = table.to_json()
    doc["mismatches"] = [list(x) for x in table.mismatches()]
    text = _table(("m", "method", "vp"), rows)
    if status:
        text += "\nMISMATCH: " + ", ".join(f"m={m}: snf {s} != analytic {t}" for m, s, t in table.mismatches())
    _emit(args, doc, text)
    return status


def cmd_verify(args, budget):
    spec = _load(args)
    X, a = spec.graph, spec.assignment
    cs = char_det(X, a)
    rows, docs, ok = [], [], True
    for m in range(args.max_level + 1):
        try:
            snf = jacobian_of_cover(X, a, m, budget=budget).vp
        except BudgetExceeded as exc:
            rows.append((m, "skipped", "-", "-", "-"))
            docs.append({"m": m, "skipped": str(exc)})
            continue
        lev = analytic_level(X, a, m, cs, budget)
        tree = None
        N = X.vertex_count * a.p ** (m * a.l)
        if N <= budget.exact_threshold:
            tree = tree_identity_check(X, a, m, cs, budget).equal
        good = snf == lev.vp and tree is not False
        ok &= good
        rows.append((m, snf, lev.vp, "-" if tree is None else tree, "ok" if good else "FAIL"))
        docs.append({"m": m, "snf": snf, "analytic": lev.to_json(with_terms=args.verbose), "tree_identity": tree,
                     "passed": good})
    _emit(args, {"rows": docs, "passed": ok},
          _table(("m", "snf", "analytic", "tree identity", "status"), rows))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ihara(args, budget):
    spec = _load(args)
    X, a = spec.graph, spec.assignment
    rep = interpolation_check(X, a, args.level)
    rows, docs = [], []
    for r in rep.rows:
        rows.append((tuple(r.character), r.lhs, r.rhs, "ok" if r.equal else "FAIL"))
        docs.append({"character": list(r.character), "P(1)": r.lhs.to_json(), "psi(det)": r.rhs.to_json(),
                     "equal": r.equal})
    doc = {"level": args.level, "rows": docs, "passed": rep.passed}
    if args.poly:
        polys = {}
        for psi in characters(a.p, args.level, a.l):
            if psi.orbit_rep:
                P = ihara_poly(X, a, psi)
                polys[str(list(psi.exponents))] = [c.to_json() for c in P.coeffs]
        doc["polynomials"] = polys
    _emit(args, doc, _table(("character", "P(1)", "psi(det)", "status"), rows))
    return EXIT_OK if rep.passed else EXIT_FAIL


def parse_ideal(text: str, p: int, l: int) -> RankIdealSpec:
    """Generators separated by commas, e.g. ``(3, T)`` or ``25, T*S + t - 1``.

    Exactly one generator must be a power p^e with e >= 1; the others are
    Laurent polynomials in T, S (= tau - 1, sigma - 1) or t, s (= tau, sigma),
    or T1.., t1.. when l > 2.
    """
    import sympy

    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts = [q.strip() for q in body.split(",") if q.strip()]
    if not parts:
        raise UsageError("empty ideal")
    tau = sympy.symbols(" ".join(f"tau{i}" for i in range(l)), seq=True)
    local = {}
    for i in range(l):
        local[f"T{i + 1}"] = tau[i] - 1
        local[f"t{i + 1}"] = tau[i]
    local["T"], local["t"] = tau[0] - 1, tau[0]
    if l >= 2:
        local["S"], local["s"] = tau[1] - 1, tau[1]
    e = None
    polys = []
    for q in parts:
        try:
            expr = sympy.expand(sympy.sympify(q.replace("^", "**"), locals=local))
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise UsageError(f"cannot parse ideal generator {q!r}: {exc}") from None
        if expr.free_symbols - set(tau):
            raise UsageError(f"unknown symbol(s) in {q!r}: {sorted(map(str, expr.free_symbols - set(tau)))}")
        if expr.is_Integer:
            v = abs(int(expr))
            k = 0
            while v > 1 and v % p == 0:
                v //= p
                k += 1
            if v == 1 and k >= 1 and e is None:
                e = k
                continue
        polys.append(_to_laurent(expr, tau))
    if e is None:
        raise UsageError(f"the ideal needs a generator {p}^e with e >= 1")
    return RankIdealSpec(e, tuple(polys))


def _to_laurent(expr, tau) -> LaurentPoly:
    import sympy

    terms = {}
    for term, coeff in expr.as_coefficients_dict().items():
        if not coeff.is_Integer:
            raise UsageError(f"non-integer coefficient in {expr}")
        powers = term.as_powers_dict()
        exp = []
        for x in tau:
            k = sympy.sympify(powers.get(x, 0))
            if not k.is_Integer:
                raise UsageError(f"non-integer exponent in {expr}")
            exp.append(int(k))
        extra = [b for b in powers if b not in tau and b != 1]
        if extra:
            raise UsageError(f"unsupported term {term}")
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + int(coeff)
    return LaurentPoly(len(tau), terms)


def cmd_fukuda(args, budget):
    spec = _load(args)
    I = parse_ideal(args.ideal, spec.p, spec.l)
    res, ranks = fukuda_stabilize(spec.graph, spec.assignment, I, args.max_level, budget)
    doc = {"ideal": I.describe(), "ranks": list(ranks), "stable_level": res.level if res else None,
           "stable_rank": res.rank if res else None}
    text = _table(("m", "rank"), list(enumerate(ranks)))
    if res:
        text += f"\nstable from m* = {res.level} with rank {res.rank}"
    else:
        text += f"\nno stabilization up to m = {args.max_level}"
    _emit(args, doc, text)
    return EXIT_OK if res else EXIT_FAIL


def cmd_examples(args, budget):
    from .goldens import golden_rows

    rows = golden_rows()
    ok = all(r.passed for r in rows)
    table = _table(("check", "expected", "observed", "status"),
                   [(r.name, r.expected, r.observed, "pass" if r.passed else "FAIL") for r in rows])
    table += f"\n{sum(r.passed for r in rows)}/{len(rows)} passed"
    _emit(args, {"rows": [r.to_json() for r in rows], "passed": ok}, table)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "jacobian": cmd_jacobian,
    "derived": cmd_derived,
    "det": cmd_det,
    "invariants": cmd_invariants,
    "growth": cmd_growth,
    "verify": cmd_verify,
    "ihara": cmd_ihara,
    "fukuda": cmd_fukuda,
    "examples": cmd_examples,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine-readable document")
    common.add_argument("--max-vertices", type=int, default=None,
                        help="largest cover to build (default 5000 exact, 50000 p-local)")
    tower = argparse.ArgumentParser(add_help=False, parents=[common])
    tower.add_argument("tower", help="tower file (JSON)")
    tower.add_argument("--allow-disconnected", action="store_true")

    ap = _Parser(prog="iwagraph", description="Spanning tree growth in Z_p^l voltage towers.")
    sub = ap.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("jacobian", parents=[tower], help="sandpile group of the level-m cover")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--method", choices=("auto", "exact-snf", "mod-pk"), default="auto")
    s = sub.add_parser("derived", parents=[tower], help="build the level-m cover")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--out", default=None)
    sub.add_parser("det", parents=[tower], help="determinant of the voltage Laplacian")
    s = sub.add_parser("invariants", parents=[tower], help="mu/lambda/nu or m0/l0")
    s.add_argument("--max-level", type=int, default=None, help="fit growth rows up to this level")
    s = sub.add_parser("growth", parents=[tower], help="v_p|J(X_m)| for m = 0..M")
    s.add_argument("--max-level", type=int, required=True)
    s.add_argument("--method", choices=("snf", "analytic", "both"), default="both")
    s = sub.add_parser("verify", parents=[tower], help="Smith form against root-of-unity sums")
    s.add_argument("--max-level", type=int, required=True)
    s.add_argument("--verbose", action="store_true", help="include per-orbit terms in --json output")
    s = sub.add_parser("ihara", parents=[tower], help="check P_psi(1) = psi(det) at level m")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--poly", action="store_true", help="include P_psi(u) for orbit representatives")
    s = sub.add_parser("fukuda", parents=[tower], help="ranks of J / I J until they stabilize")
    s.add_argument("--ideal", required=True)
    s.add_argument("--max-level", type=int, required=True)
    sub.add_parser("examples", parents=[common], help="run the built-in reference suite")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    budget = DEFAULT_BUDGET
    if args.max_vertices is not None:
        budget = Budget(
            exact_threshold=min(budget.exact_threshold, args.max_vertices),
            max_exact_vertices=args.max_vertices,
            max_modpk_vertices=args.max_vertices,
        )
    for name in ("level", "max_level"):
        if getattr(args, name, None) is not None and getattr(args, name) < 0:
            print(f"iwagraph: error: --{name.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, budget)
    except BudgetExceeded as exc:
        print(f"iwagraph: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (TowerFileError, UsageError, GraphError, FileNotFoundError) as exc:
        print(f"iwagraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DisconnectedTowerError, InfiniteQuotientError, CharSeriesError, FitError) as exc:
        print(f"iwagraph: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"iwagraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
