"""The group G, its subgroups G_i, G^i, G_D, G^D, Condition (D), the
explicit sufficient conditions and the vertical Brauer group."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from ..arith import sqfree
from ..f2 import F2Subspace, preimage, rref
from .model import FormalClass, Pencil, class_labels, class_vectors

__all__ = [
    "in_G_i", "compute_G_i", "compute_GD", "compute_GDhat", "ConditionD", "condition_D",
    "ExplicitConditions", "lemma_explicit_conditions", "vertical_brauer_basis",
]


def in_G_i(P: Pencil, x: FormalClass, i: int, hat: bool = False) -> bool:
    if x.size % 2:
        return False
    D = P.Dhat(x.J, i) if hat else P.D(x.J, i)
    return sqfree(x.c * D) in (1, P.aDA[i])


def compute_G_i(P: Pencil, i: int, hat: bool = False) -> set[FormalClass]:
    """All of G_i (or G^i): two classes c per even J, pinned at index i."""
    out = set()
    for J in P.even_subsets():
        D = P.Dhat(J, i) if hat else P.D(J, i)
        for target in (1, P.aDA[i]):
            out.add(FormalClass(target * D, J))
    return out


def _intersection(P: Pencil, hat: bool) -> set[FormalClass]:
    # pivot on the first index, then check the remaining ones
    return {x for x in compute_G_i(P, 0, hat)
            if all(in_G_i(P, x, i, hat) for i in range(1, P.size))}


def compute_GD(P: Pencil) -> set[FormalClass]:
    return _intersection(P, hat=False)


def compute_GDhat(P: Pencil) -> set[FormalClass]:
    return _intersection(P, hat=True)


def _expected(P: Pencil) -> tuple[set, set]:
    one = FormalClass(1, 0)
    ga = FormalClass(P.a, P.A)
    gd = FormalClass(P.d, P.full)
    low = {one, ga, gd, ga * gd}
    high = {one, FormalClass(-P.d, P.full)}
    return low, high


@dataclass(frozen=True)
class ConditionD:
    holds: bool
    GD: tuple
    GDhat: tuple
    witness: Optional[FormalClass] = None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "G_D": [x.to_json() for x in self.GD],
            "G^D": [x.to_json() for x in self.GDhat],
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def condition_D(P: Pencil) -> ConditionD:
    low, high = compute_GD(P), compute_GDhat(P)
    exp_low, exp_high = _expected(P)
    # the expected generators always lie in the groups
    assert exp_low <= low and exp_high <= high, "forced elements missing"
    extra = sorted(low - exp_low) + sorted(high - exp_high)
    return ConditionD(not extra, tuple(sorted(low)), tuple(sorted(high)),
                      extra[0] if extra else None)


@dataclass(frozen=True)
class ExplicitConditions:
    cond1: bool
    cond2: bool
    rank1: int
    target1: int
    witness2: Optional[int] = None  # a failing subset J (bitmask)

    def to_json(self) -> dict:
        return {"cond1": self.cond1, "cond2": self.cond2, "rank": self.rank1,
                "max_rank": self.target1,
                "cond2_witness": None if self.witness2 is None else
                [i + 1 for i in range(64) if self.witness2 >> i & 1]}


def lemma_explicit_conditions(P: Pencil) -> ExplicitConditions:
    n = P.size
    deltas = [P.delta(i, j) for i, j in combinations(range(n), 2)]
    vals = [-1] + deltas + [P.a, P.b]
    vecs = class_vectors(vals, class_labels(vals))
    ab = rref(vecs[-2:])
    rank = len(rref(vecs)) - len(ab)
    target = 1 + n * (n - 1) // 2
    witness = None
    for J in P.even_subsets():
        if J in (0, P.full):
            continue
        vals = [P.a * P.D_value(J, i) for i in range(n)]
        if len(rref(class_vectors(vals))) != n - 1:
            witness = J
            break
    return ExplicitConditions(rank == target, witness is None, rank, target, witness)


def vertical_brauer_basis(P: Pencil) -> F2Subspace:
    """eps with prod (a D^A_i)^eps_i a square; contains the all-ones vector."""
    vecs = class_vectors(P.aDA)
    dim = len(class_labels(P.aDA))
    ker = preimage(vecs, dim, F2Subspace.zero(dim))
    if P.full not in ker:
        raise AssertionError("product of all a D^A_i is not a square")
    return ker.with_labels(tuple(range(1, P.size + 1)))
