"""Tabulate where the displayed h^1, h^2 closed forms and the corrected ones disagree with the engine."""

import argparse
from collections import Counter

from qsteenrod.localization import INSERTION_PAIRS, h_expansion_closed_form, structure_constant_s1
from qsteenrod.poly_series import format_series


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()

    for p in args.primes:
        tally = Counter()
        for d in range(1, 2 * p + 1):
            branch = "p|d" if d % p == 0 else "p!|d"
            for pair in INSERTION_PAIRS:
                engine = structure_constant_s1(p, d, *pair, 2)
                for order in (1, 2):
                    want = engine.h_coefficient(order)
                    printed = h_expansion_closed_form(p, d, *pair, order, as_printed=True)
                    corrected = h_expansion_closed_form(p, d, *pair, order, as_printed=False)
                    key = (order, branch, f"{pair[0]},{pair[1]}")
                    tally[key + ("total",)] += 1
                    if printed != want:
                        tally[key + ("printed",)] += 1
                        if args.verbose:
                            print(f"p={p} d={d} {key}: engine {format_series(want)} | printed {format_series(printed)}")
                    if corrected != want:
                        tally[key + ("corrected",)] += 1
        print(f"p = {p}")
        print(f"  {'order':<6}{'branch':<7}{'pair':<6}{'printed bad':>12}{'corrected bad':>15}")
        for key in sorted({k[:3] for k in tally}):
            tot = tally[key + ("total",)]
            print(f"  h^{key[0]:<4}{key[1]:<7}{key[2]:<6}{tally[key + ('printed',)]:>8}/{tot:<3}"
                  f"{tally[key + ('corrected',)]:>11}/{tot}")


if __name__ == "__main__":
    main()
