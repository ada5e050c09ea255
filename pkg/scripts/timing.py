"""Wall time of each registered check and of the engine at growing truncation."""

import argparse
import time

from qsteenrod.connection import steenrod_pairings
from qsteenrod.harness import REGISTRY, run_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=None)
    ap.add_argument("--engine", type=int, nargs="*", default=[3, 5, 7], help="primes for the engine scan")
    args = ap.parse_args()

    for check_id in REGISTRY.ids():
        r = run_check(check_id, args.primes)
        print(f"{check_id:<34}{r.status:<6}{r.wall_time:8.2f}s")
    print()
    for p in args.engine:
        for mult in (1, 2, 3, 4):
            t0 = time.perf_counter()
            steenrod_pairings(p, mult * p, 4)
            print(f"engine p={p} q_max={mult * p:<3} h_max=4 {time.perf_counter() - t0:8.2f}s")


if __name__ == "__main__":
    main()
