"""Compare the h = mu t specialization of the q^d and q^(d+p) matrices for every mu."""

import argparse

from qsteenrod.connection import steenrod_matrix, to_stable_basis
from qsteenrod.poly_series import substitute_h


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--periods", type=int, default=2, help="compare d with d + k p for k up to this")
    ap.add_argument("--stable", action="store_true", help="work in the stable basis")
    args = ap.parse_args()

    bad = 0
    for p in args.primes:
        q_max = (args.periods + 1) * p
        M = steenrod_matrix(p, q_max, None)
        if args.stable:
            M = to_stable_basis(M)
        for mu in range(p):
            spec = M.map(lambda s, mu=mu: substitute_h(s, mu))
            for d in range(1, p + 1):
                base = spec.map(lambda s, d=d: s.select("q", d))
                for k in range(1, args.periods + 1):
                    other = spec.map(lambda s, e=d + k * p: s.select("q", e))
                    if base != other:
                        bad += 1
                        print(f"p={p} mu={mu}: q^{d} and q^{d + k * p} differ")
        print(f"p={p}: checked mu in [0, {p}), d in [1, {p}], {args.periods} periods")
    print("all periodic" if not bad else f"{bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
