"""Log-log slopes of the asymptotic remainder along rays in the hbar plane."""
import argparse
import math
from fractions import Fraction

from pmstar import star
from pmstar.algebra import parse_function


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--f", default="w")
    ap.add_argument("--g", default="z")
    ap.add_argument("--at", default="1/2;1/3")
    ap.add_argument("--count", type=int, default=7)
    args = ap.parse_args()
    f, g = parse_function(args.f), parse_function(args.g)
    p = tuple(Fraction(x) for x in args.at.split(";"))
    print("N,angle,slope")
    for N in range(3):
        for ang in (0.0, math.pi / 2, -math.pi / 2, 0.99 * 3 * math.pi / 4):
            rem = star.asymptotic_remainders(f, g, p, N, star.ray_hbars(ang, count=args.count))
            print(f"{N},{ang:.4f},{star.loglog_slope(rem):.4f}")


if __name__ == "__main__":
    main()
