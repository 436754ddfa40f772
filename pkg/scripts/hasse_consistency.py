"""Solve every certified torsor a x^2 + b y^2 = 1 in a box and report
any that the bounded solver cannot finish."""
import argparse
import sys
import time

from conic_descent.arith import PlaceSet, sqfree
from conic_descent.torsor import HASSE, ConicTorsor, adelic_report, hasse_certificate, solve


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--bound", type=int, default=60, help="|a|, |b| <= bound")
    ap.add_argument("--s0", default="inf,2")
    ap.add_argument("--effort", type=int, default=10**6)
    args = ap.parse_args()

    s0 = PlaceSet.of(args.s0.split(","))
    certified = solved = 0
    misses = []
    t0 = time.perf_counter()
    for a in range(-args.bound, args.bound + 1):
        for b in range(-args.bound, args.bound + 1):
            if a == 0 or b == 0 or sqfree(a) != a or sqfree(b) != b or sqfree(-a * b) == 1:
                continue
            z = ConicTorsor(a, b, s0)
            if not z.coprime() or not z.torus().assumption_holds():
                continue
            if not adelic_report(z).soluble or hasse_certificate(z).status != HASSE:
                continue
            certified += 1
            res = solve(z, args.effort)
            if res.found and z.satisfies(res.x, res.y):
                solved += 1
            else:
                misses.append((a, b))
    print(f"certified {certified}, solved {solved} in {time.perf_counter() - t0:.1f} s")
    for a, b in misses:
        print(f"  unsolved: {a} x^2 + {b} y^2 = 1")
    return 1 if misses else 0


if __name__ == "__main__":
    sys.exit(main())
