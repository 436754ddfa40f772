"""One refinement step: add a witness place that shrinks the weak dual Selmer group.

Given a suitable stub over T, an admissible pair and an extra element x of
the fiber weak dual Selmer group, a prime w is chosen by a Chebotarev-style
scan and a local point at w is appended to the stub. The group recomputed
over T + {w} is then compared with the old one inside J^{T+w}.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..arith import is_local_square, sqfree
from ..f2 import F2Subspace, bits, rref
from .admissible import AdmissiblePair, FiberSelmer, admissible_pairs, fiber_weak_dual_selmer
from .brauer import AdelicStub, LocalPoint, find_witness_prime, lemma_fiber_test
from .model import Pencil, bad_places
from .stub import _uniformizer_point, suitability

__all__ = ["RefineStep", "as_formal", "main_step", "embed"]


def as_formal(P: Pencil, labels: tuple, x: int) -> tuple[int, int]:
    """Vector in J^T (or J_T) -> (c, J)."""
    nc = len(labels) - P.size
    c = 1
    for k in bits(x & ((1 << nc) - 1)):
        c *= labels[k]
    return sqfree(c), x >> nc


def embed(sub: F2Subspace, old: tuple, new: tuple) -> F2Subspace:
    """Push a subspace of the J-space over `old` labels into the one over `new`."""
    pos = [new.index(l) for l in old]
    vecs = []
    for v in sub.basis:
        out = 0
        for k in bits(v):
            out |= 1 << pos[k]
        vecs.append(out)
    return F2Subspace(len(new), rref(vecs), new)


def _class_not_in(P: Pencil, c: int, i: int) -> bool:
    return sqfree(c) not in (1, sqfree(P.aDA[i]))


@dataclass(frozen=True)
class RefineStep:
    w: int
    index: int
    x: tuple  # (c, J) excluded at w
    x_strict: tuple  # (c', J') from the strict side
    stub: AdelicStub
    pair: AdmissiblePair
    before: FiberSelmer
    after: FiberSelmer

    @property
    def strictly_smaller(self) -> bool:
        old = embed(self.before.weak_dual, self.before.labels, self.after.labels)
        return self.after.weak_dual <= old and self.after.weak_dual != old

    def to_json(self) -> dict:
        return {"w": self.w, "form": self.index + 1,
                "rank_before": self.before.weak_dual.rank,
                "rank_after": self.after.weak_dual.rank,
                "strictly_smaller": self.strictly_smaller}


def main_step(P: Pencil, stub: AdelicStub, before: FiberSelmer, x: int | None = None) -> RefineStep:
    """Extend the stub by one place w so that x leaves the weak dual Selmer group."""
    labels = before.labels
    nc = len(labels) - P.size
    gen_c = sqfree(-P.d)
    gen = (P.full << nc) | _class_bits(gen_c, labels[:nc])
    gen_strict = (P.full << nc) | _class_bits(sqfree(P.d), labels[:nc])
    a_strict = (P.A << nc) | _class_bits(sqfree(P.a), labels[:nc])
    if x is None:
        cands = [e for e in before.weak_dual.elements() if e not in (0, gen)]
        if not cands:
            raise ValueError("weak dual Selmer group is already generated by [-d][p_I]")
        x = min(cands)
    if x in (0, gen) or x not in before.weak_dual:
        raise ValueError("x must be a weak dual Selmer element other than 0 and [-d][p_I]")
    forced = F2Subspace(before.strict.dim, rref([a_strict, gen_strict]))
    xs = [e for e in before.strict.elements() if e not in forced]
    if not xs:
        raise AssertionError("strict Selmer group has no element beyond the forced ones")
    c, J = as_formal(P, labels, x)
    choice = _choose_index(P, c, J, [as_formal(P, labels, e) for e in sorted(xs)])
    if choice is None:
        raise AssertionError("no index separates x and a strict element; Condition (D) fails")
    i_x, (c, J), (c2, J2), cons = choice
    excl = set(stub.places.primes) | set(bad_places(P).primes) | set(before.image_labels[1:])
    w = find_witness_prime(cons, excl)
    pt = _uniformizer_point(P, i_x, w)
    if bin(J).count("1") % 2 == 1:
        # rescale by a unit so that c p_J(t_w, s_w) is a non-square unit
        if is_local_square(c * P.p_set(J, pt.t, pt.s), w):
            u = next(k for k in range(2, w) if not is_local_square(k, w))
            pt = LocalPoint(w, u * pt.t, u * pt.s)
    if not lemma_fiber_test(P, w, pt.t, pt.s):
        raise AssertionError("no Z_w point above the witness")
    new_stub = stub.extended([pt])
    flags = suitability(P, new_stub)
    if not all(flags[k] for k in ("1_nonzero", "2_valuation", "3_two", "4_split", "5_brauer")):
        raise AssertionError(f"extended stub is not suitable: {flags}")
    pair = admissible_pairs(P, new_stub, 1)[0]
    after = fiber_weak_dual_selmer(P, pair, new_stub)
    return RefineStep(w, i_x, (c, J), (c2, J2), new_stub, pair, before, after)


def _choose_index(P: Pencil, c: int, J: int, strict: list):
    """First (i_x, x, x', constraints) with i_x outside J and J' as the witness step needs."""
    n = P.size
    even = bin(J).count("1") % 2 == 0
    for i in range(n):
        cx, Jx = c, J
        if even:
            if not _class_not_in(P, cx * P.Dhat(Jx, i), i):
                continue
            if Jx >> i & 1:
                cx, Jx = sqfree(-P.d * cx), Jx ^ P.full
        elif Jx >> i & 1:
            continue
        for c2, J2 in strict:
            if J2 >> i & 1:
                c2, J2 = sqfree(P.d * c2), J2 ^ P.full
            if not _class_not_in(P, c2 * P.D(J2, i), i):
                continue
            cons = [(P.aDA[i], True), (c2 * P.D(J2, i), False)]
            if even:
                cons.append((cx * P.Dhat(Jx, i), False))
            return i, (cx, Jx), (c2, J2), cons
    return None


def _class_bits(c: int, labels: tuple) -> int:
    out = 0
    if c < 0:
        out |= 1
        c = -c
    for k, p in enumerate(labels[1:], start=1):
        if c % p == 0:
            out |= 1 << k
            c //= p
    if c != 1:
        raise ValueError("class not supported on the labels")
    return out
