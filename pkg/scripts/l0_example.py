"""Two-variable invariants of a cycle whose first edge is doubled with voltages t and s.

    python scripts/l0_example.py --n 5 --p 5 --max-level 5
"""

import argparse

from iwagraph.iwasawa import analytic_vp_level, char_det, cycle_family, greenberg_fit, invariants_l2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--max-level", type=int, default=5)
    args = ap.parse_args()
    if args.max_level < 5:
        ap.error("the fit needs levels 0..4 plus one level to predict")
    X, a = cycle_family(args.n, ((1, 0), (0, 1)), args.p)
    cs = char_det(X, a)
    inv = invariants_l2(cs, args.p)
    print("det:", cs.det_canonical.format_T(["T", "S"]))
    print(f"m0={inv.m0} l0={inv.l0}")
    data = {m: analytic_vp_level(X, a, m, cs) for m in range(args.max_level + 1)}
    print("v_p by level:", data)
    fit = greenberg_fit({m: v for m, v in data.items() if m < args.max_level}, 2, args.p, {"c20": inv.m0})
    print("fit:", fit.coeffs)
    print(f"predicted m={args.max_level}: {fit.predict(args.max_level)}, actual {data[args.max_level]}")


if __name__ == "__main__":
    main()
