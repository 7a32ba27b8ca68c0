"""Orbit census of the rescaling action on the Hopf-link variety over F_q."""

import argparse

from merolib.exactalg import is_prime
from merolib.holonomy import hopf_orbit_census


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-q", type=int, default=13)
    args = ap.parse_args()
    print(f"{'q':>3} {'total':>6} {'q^2-q+1':>8} {'free':>5} {'O_x':>4} {'O_y':>4} {'O_0':>4}  alphas")
    for q in filter(is_prime, range(2, args.max_q + 1)):
        c = hopf_orbit_census(q)
        print(
            f"{q:>3} {c['total']:>6} {q * q - q + 1:>8} {c['free_alpha_orbits']['count']:>5}"
            f" {c['orbit_x']['count']:>4} {c['orbit_y']['count']:>4} {c['fixed_point']['count']:>4}  {c['alphas']}"
        )


if __name__ == "__main__":
    main()
