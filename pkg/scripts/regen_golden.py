"""Rewrite the golden regression fixtures. Only run this after an intended change to the engine."""

import argparse

from qsteenrod import golden


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--root", default=str(golden.DEFAULT_ROOT))
    ap.add_argument("--key", type=int, nargs=3, action="append", metavar=("P", "Q_MAX", "H_MAX"),
                    help="fixture key; defaults to the standard set")
    args = ap.parse_args()
    for key in args.key or golden.DEFAULT_KEYS:
        print(golden.write_golden(args.root, *key))


if __name__ == "__main__":
    main()
