"""Compare the cycle-with-bundle closed form against the general determinant.

The form with size parameter n (as_printed) and the form with n - 2 are both
shown; only the second matches the determinant.

    python scripts/closed_form_check.py
"""

from iwagraph.corpus import BUNDLES_L1
from iwagraph.iwasawa import char_det, closed_form_cycle_det, cycle_family, multi_edge_sums


def main():
    print(f"{'bundle':<8} {'n':>2}  {'general':<28} {'n form':<8} {'n-2 form':<8}")
    for name, bundle in BUNDLES_L1.items():
        x, y = multi_edge_sums(bundle, 1)
        for n in (3, 4, 5, 6):
            general = char_det(*cycle_family(n, bundle, 2)).det_canonical
            a = len(bundle) + 1
            printed = closed_form_cycle_det(n, a, x, y, as_printed=True).canonicalize() == general
            fixed = closed_form_cycle_det(n, a, x, y).canonicalize() == general
            print(f"{name:<8} {n:>2}  {general.format_T():<28} {str(printed):<8} {str(fixed):<8}")


if __name__ == "__main__":
    main()
