"""Point counts of braid varieties over small fields and the fitted torus exponent.

    python scripts/braid_counts.py --primes 2,3,5 --json out.json
"""

import argparse
import json

from merolib.braidvar import BraidWord, NotFullDemazure, count_points, demazure, fit_torus_exponent, variety_presentation
from merolib.suite import braid_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default="2,3,5")
    ap.add_argument("--word", action="append", help="extra words as STRANDS:LETTERS, e.g. 2:1,1,1")
    ap.add_argument("--json")
    args = ap.parse_args()
    primes = [int(p) for p in args.primes.split(",")]
    words = braid_corpus()
    for spec in args.word or []:
        n, _, letters = spec.partition(":")
        words.append(BraidWord.parse(int(n), letters))

    rows = []
    print(f"{'strands':>7}  {'word':<14} {'demazure':<10}" + "".join(f"{'q=' + str(q):>8}" for q in primes) + "   a")
    for w in words:
        row = {"strands": w.strands, "word": str(w), "demazure": str(demazure(w))}
        try:
            pres = variety_presentation(w)
        except NotFullDemazure:
            row["rejected"] = True
            rows.append(row)
            print(f"{w.strands:>7}  {str(w):<14} {row['demazure']:<10}  rejected (not w0)")
            continue
        counts = {q: count_points(pres, q) for q in primes}
        row["counts"] = counts
        row["torus_exponent"] = fit_torus_exponent(counts)
        rows.append(row)
        a = "-" if row["torus_exponent"] is None else row["torus_exponent"]
        print(f"{w.strands:>7}  {str(w):<14} {row['demazure']:<10}" + "".join(f"{counts[q]:>8}" for q in primes) + f"   {a}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
