"""Walk through the example surface (t+4s)(2t+5s) x^2 + (3t+2s)(5t+s) y^2 = 1.

Checks every theorem variant, solves the fiber over (49, -97), finds the
smallest point by height and runs one descent step on the fiber Selmer group.
"""
import argparse

from conic_descent.pencil import (
    VARIANTS, Pencil, SearchConfig, admissible_pairs, fiber, fiber_weak_dual_selmer,
    find_integral_point, suitable_stub, theorem_check, verify_point,
)
from conic_descent.torsor import adelic_report, solve


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--height", type=int, default=8)
    args = ap.parse_args()

    P = Pencil(((1, 4), (2, 5), (3, 2), (5, 1)), {0, 1}, 1, 1, ["inf", 2])
    print("Delta:", [P.delta(i, j) for i in range(4) for j in range(i + 1, 4)])
    for v in VARIANTS:
        rep = theorem_check(P, v)
        failed = [h.name for h in rep.hypotheses if not h.holds]
        print(f"{v:12s} {'holds' if rep.holds else 'fails: ' + ', '.join(failed)}")

    z = fiber(P, 49, -97)
    print(f"fiber (49,-97): {z.a} x^2 + {z.b} y^2 = 1, adelic point: {adelic_report(z).soluble}")
    sol = solve(z)
    print(f"  solve -> {sol.status} ({sol.x}, {sol.y}),",
          "verified" if verify_point(P, 49, -97, sol.x, sol.y) else "NOT verified")

    hit = find_integral_point(P, SearchConfig(args.height))
    print(f"smallest point by height: (t,s,x,y) = ({hit.t}, {hit.s}, {hit.result.x}, "
          f"{hit.result.y}); fibers tried {hit.stats}")

    ss = suitable_stub(P)
    print("stub places:", ss.stub.places.to_json())
    for pr in admissible_pairs(P, ss.stub, 2):
        fs = fiber_weak_dual_selmer(P, pr, ss.stub)
        print(f"admissible ({pr.t}, {pr.s}) new primes {pr.u}: weak dual rank "
              f"{fs.weak_dual.rank}, routes agree: {fs.agree}")


if __name__ == "__main__":
    main()
