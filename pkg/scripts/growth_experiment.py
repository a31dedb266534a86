"""Print v_p|J(X_m)| for a tower by Smith form and by the analytic sum, then fit.

    python scripts/growth_experiment.py towers/c3_t1_p5.json --max-level 2
"""

import argparse

from iwagraph.iwasawa import FitError, char_det, greenberg_fit, growth_table, invariants_l1
from iwagraph.towerfile import parse_tower_file


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("tower")
    ap.add_argument("--max-level", type=int, default=2)
    args = ap.parse_args()
    spec = parse_tower_file(args.tower)
    X, a = spec.graph, spec.assignment
    table = growth_table(X, a, args.max_level, methods=("snf", "analytic"))
    snf, ana = table.values("snf"), table.values("analytic")
    print(f"{'m':>3} {'snf':>6} {'analytic':>9}")
    for m in range(args.max_level + 1):
        print(f"{m:>3} {snf.get(m, '-'):>6} {ana.get(m, '-'):>9}")
    if table.mismatches():
        print("mismatches:", table.mismatches())
    cs = char_det(X, a)
    names = ["T"] if spec.l == 1 else ["T", "S"]
    print("char series:", (cs.char_J or cs.det_canonical).format_T(names))
    if spec.l == 1:
        inv = invariants_l1(cs, table, spec.p)
        print(f"mu={inv.mu} lambda={inv.lam} nu={inv.nu}")
    else:
        try:
            fit = greenberg_fit(ana, spec.l, spec.p)
        except FitError as exc:
            print("no exact fit:", exc)
        else:
            print("fit:", fit.coeffs, "stable from m =", fit.m_stable)


if __name__ == "__main__":
    main()
