"""Survey random pencils: how often do the explicit conditions, condition D
and each theorem variant hold?"""
import argparse
import random
import sys
from collections import Counter
from math import gcd

from conic_descent.pencil import (
    VARIANTS, Pencil, ShapeError, condition_D, lemma_explicit_conditions, theorem_check,
    vertical_brauer_basis,
)


def draw(rng: random.Random, coeff: int, ab: int) -> Pencil:
    forms = []
    while len(forms) < 4:
        c, d = rng.randint(-coeff, coeff), rng.randint(-coeff, coeff)
        if (c, d) == (0, 0) or gcd(c, d) != 1:
            continue
        if any(c * d2 - c2 * d == 0 for c2, d2 in forms):
            continue
        forms.append((c, d))
    a = rng.choice([x for x in range(-ab, ab + 1) if x])
    b = rng.choice([x for x in range(-ab, ab + 1) if x])
    return Pencil(tuple(forms), set(rng.sample(range(4), 2)), a, b, ["inf", 2])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--coeff", type=int, default=10)
    ap.add_argument("--ab", type=int, default=5)
    ap.add_argument("--uncond", action="store_true", help="also run main_uncond (slow)")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tally: Counter = Counter()
    chain_breaks = 0
    variants = VARIANTS if args.uncond else VARIANTS[:3]
    for _ in range(args.count):
        P = draw(rng, args.coeff, args.ab)
        ec = lemma_explicit_conditions(P)
        cd = condition_D(P).holds
        minimal = vertical_brauer_basis(P).basis == (P.full,)
        tally["cond1"] += ec.cond1
        tally["cond2"] += ec.cond2
        tally["condition_D"] += cd
        tally["minimal_brauer"] += minimal
        if ec.cond1 and not (ec.cond2 and cd and minimal):
            chain_breaks += 1
        for v in variants:
            try:
                tally[v] += theorem_check(P, v).holds
            except ShapeError:
                tally[v + " (shape)"] += 1
    print(f"{args.count} pencils, coefficients up to {args.coeff}, |a|,|b| <= {args.ab}")
    for k, n in sorted(tally.items()):
        print(f"  {k:20s} {n:5d}  {100 * n / args.count:5.1f}%")
    print(f"  cond1 without the rest of the chain: {chain_breaks}")
    return 1 if chain_breaks else 0


if __name__ == "__main__":
    sys.exit(main())
