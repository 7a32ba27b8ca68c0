"""Dimensions of truncated trace spaces for cyclic quivers, against n + floor(L/n)."""

import argparse

from merolib.quiverhh import Quiver, trace_space


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--max-len", type=int, default=12)
    args = ap.parse_args()
    print("n\\L " + "".join(f"{L:>4}" for L in range(args.max_len + 1)))
    mismatches = 0
    for n in range(1, args.max_n + 1):
        dims = [trace_space(Quiver.cyclic(n), L).dim for L in range(args.max_len + 1)]
        mismatches += sum(d != n + L // n for L, d in enumerate(dims))
        print(f"{n:>3} " + "".join(f"{d:>4}" for d in dims))
    print(f"mismatches against n + floor(L/n): {mismatches}")


if __name__ == "__main__":
    main()
