"""Bounded search for suitable partial adelic points.

Local points are sampled on a finite grid at each place, grouped by the
data that matters globally (the vector of local A_i values and whether
-d p_I is a local square), and one representative per group is chosen by
dynamic programming so that the A_i sums are orthogonal to the vertical
Brauer group.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..arith import (
    INF, PlaceSet, is_local_square, is_prime, local_conic_soluble,
    valuation,
)
from ..descent import HypothesisError
from ..f2 import parity
from .brauer import (
    AdelicStub, LocalPoint, A_vector, _sum_vector, lemma_fiber_test,
    reduction_twist,
)
from .groups import compute_G_i, compute_GD, vertical_brauer_basis
from .model import Pencil, bad_places

__all__ = [
    "Candidate", "local_candidates", "find_stub", "Witness", "build_S_D", "suitability",
    "SuitableStub", "suitable_stub", "T0_places",
]


@dataclass(frozen=True)
class Candidate:
    point: LocalPoint
    avec: int
    split: bool
    weight: int  # total valuation of the p_i, used to keep congruences small


def _real_samples(P: Pencil) -> list[tuple[int, int]]:
    roots = sorted({Fraction(-d, c) for c, d in P.forms if c != 0})
    xs = []
    if roots:
        xs = [roots[0] - 1, roots[-1] + 1]
        xs += [(u + w) / 2 for u, w in zip(roots, roots[1:])]
    else:
        xs = [Fraction(0)]
    pts = []
    for x in xs:
        pts.append((x.numerator, x.denominator))
        pts.append((-x.numerator, -x.denominator))
    if all(c != 0 for c, _ in P.forms):
        pts += [(1, 0), (-1, 0)]
    return pts


def _finite_samples(v: int) -> list[tuple[int, int]]:
    if v == 2:
        k = 6
    elif v < 50:
        k = 2
    else:
        k = 1
    mod = v ** k
    pts = [(1, s) for s in range(mod)] + [(v * t, 1) for t in range(mod // v)]
    if k == 1:
        # a few lifts so that valuations above one are reachable
        pts += [(1, s + v * j) for s in range(v) for j in range(1, 4)]
    return pts


def local_candidates(P: Pencil, v, keep_all: bool = False) -> list[Candidate]:
    """Sampled local points over v meeting the local suitability clauses."""
    in_s0 = v in P.s0
    pts = _real_samples(P) if v is INF else _finite_samples(v)
    best: dict = {}
    out = []
    for t, s in pts:
        val = P.p_set(P.full, t, s)
        if val == 0:
            continue
        dp = P.d * val
        if v is INF:
            weight = 0
        else:
            weight = sum(valuation(P.p(i, t, s), v) for i in range(P.size))
        if not in_s0:
            e = valuation(dp, v)
            if e > 1 or (v == 2 and e != 1):
                continue
        fa, fb = P.a * P.p_set(P.A, t, s), P.b * P.p_set(P.B, t, s)
        if not local_conic_soluble(fa, fb, v, integral=not in_s0):
            continue
        pt = LocalPoint(v, t, s)
        cand = Candidate(pt, A_vector(P, pt), in_s0 and is_local_square(-dp, v), weight)
        key = (cand.avec, cand.split)
        if keep_all:
            out.append(cand)
        elif key not in best or weight < best[key].weight:
            best[key] = cand
    return out if keep_all else sorted(best.values(), key=lambda c: (c.avec, c.split))


def find_stub(P: Pencil, places: Optional[PlaceSet] = None, need_split: int = 2,
              need_orthogonal: bool = True) -> Optional[AdelicStub]:
    """Choose local points over S0 and S_bad; None if the search fails."""
    places = places or (P.s0 | bad_places(P))
    basis = vertical_brauer_basis(P).basis
    # state: (sum of A vectors, min(split count, need_split)) -> (weight, choice list)
    states: dict = {(0, 0): (0, ())}
    for v in places:
        cands = local_candidates(P, v)
        if not cands:
            return None
        nxt: dict = {}
        for (acc, sp), (w, chosen) in states.items():
            for c in cands:
                key = (acc ^ c.avec, min(sp + c.split, need_split))
                val = (w + c.weight, chosen + (c.point,))
                if key not in nxt or val[0] < nxt[key][0]:
                    nxt[key] = val
        states = nxt

    def ok(acc, sp):
        if sp < need_split:
            return False
        return not need_orthogonal or all(parity(e & acc) == 0 for e in basis)

    good = [(acc != 0, w, acc, chosen) for (acc, sp), (w, chosen) in states.items() if ok(acc, sp)]
    if not good:
        return None
    good.sort(key=lambda g: g[:3])
    return AdelicStub(good[0][3], P.s0)


# ------------------------------------------------------ S_D witness places

@dataclass(frozen=True)
class Witness:
    place: int
    index: int  # the form whose zero the local point reduces to
    point: LocalPoint
    kills: tuple  # FormalClass elements excluded at this place

    def to_json(self) -> dict:
        return {"place": self.place, "form": self.index + 1,
                "t": self.point.t, "s": self.point.s,
                "kills": [x.to_json() for x in self.kills]}


def _uniformizer_point(P: Pencil, i: int, w: int) -> LocalPoint:
    t, s = P.root(i)
    c, d = P.forms[i]
    if c % w:
        t += w  # p_i = c w
    else:
        s += w  # p_i = d w
    assert valuation(P.p(i, t, s), w) == 1
    return LocalPoint(w, t, s)


def build_S_D(P: Pencil, exclude: PlaceSet | None = None) -> list[Witness]:
    """Witness places for every x in some G_i but not in G_D.

    Primes are scanned upward; each accepted prime w is attached to the form
    j that excludes the most outstanding classes, i.e. a D^A_j is a square at
    w while c D^J_j is not."""
    gd = compute_GD(P)
    todo = set()
    for i in range(P.size):
        todo |= compute_G_i(P, i) - gd
    exclude = set((exclude or PlaceSet(False, ())).primes) | set(bad_places(P).primes)
    exclude |= set(P.s0.primes)
    out = []
    w = 3
    while todo:
        w += 2
        if not is_prime(w) or w in exclude:
            continue
        best = None
        for j in range(P.size):
            if P.aDA[j] % w == 0 or not is_local_square(P.aDA[j], w):
                continue
            killed = tuple(sorted(x for x in todo
                                  if not is_local_square(x.c * P.D(x.J, j), w)))
            if killed and (best is None or len(killed) > len(best[1])):
                best = (j, killed)
        if best is None:
            continue
        j, killed = best
        pt = _uniformizer_point(P, j, w)
        if not lemma_fiber_test(P, w, pt.t, pt.s):
            raise AssertionError("witness fiber has no integral point")
        out.append(Witness(w, j, pt, killed))
        todo -= set(killed)
    return out


# ----------------------------------------------------------- suitability

def T0_places(P: Pencil, stub: AdelicStub) -> PlaceSet:
    """S0 together with the places where val_v(d p_I(t_v, s_v)) = 1."""
    extra = [pt.place for pt in stub.points if pt.place not in P.s0
             and valuation(P.d * P.p_set(P.full, pt.t, pt.s), pt.place) == 1]
    return P.s0 | PlaceSet.of(extra)


def suitability(P: Pencil, stub: AdelicStub, witnesses: list[Witness] = ()) -> dict:
    """Clauses (1)-(6) of suitability, one boolean each."""
    flags = {}
    vals = {pt.place: P.d * P.p_set(P.full, pt.t, pt.s) for pt in stub.points}
    flags["1_nonzero"] = all(x != 0 for x in vals.values())
    off = [pt for pt in stub.points if pt.place not in P.s0]
    flags["2_valuation"] = flags["1_nonzero"] and all(
        valuation(vals[pt.place], pt.place) <= 1 for pt in off)
    flags["3_two"] = 2 in P.s0 or 2 not in stub.places or (
        flags["1_nonzero"] and valuation(vals[2], 2) == 1)
    split = [v for v in P.s0 if v in stub.places and vals[v] != 0
             and is_local_square(-vals[v], v)]
    flags["4_split"] = len(split) >= 2
    flags["5_brauer"] = flags["1_nonzero"] and _sum_vector(P, stub) == 0
    ok6 = True
    for wit in witnesses:
        if wit.place not in stub.places:
            ok6 = False
            continue
        pt = stub.at(wit.place)
        ok6 &= (pt.t - wit.point.t) % wit.place == 0 and (pt.s - wit.point.s) % wit.place == 0 \
            and valuation(P.p(wit.index, pt.t, pt.s), wit.place) == 1
    flags["6_witnesses"] = ok6
    return flags


@dataclass(frozen=True)
class SuitableStub:
    stub: AdelicStub
    twist: int
    witnesses: tuple
    flags: dict = field(compare=False)

    @property
    def T(self) -> PlaceSet:
        return self.stub.places

    @property
    def suitable(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> dict:
        return {"T": self.T.to_json(), "twist": self.twist,
                "points": [p.to_json() for p in self.stub.points],
                "witnesses": [w.to_json() for w in self.witnesses],
                "flags": dict(sorted(self.flags.items()))}


def suitable_stub(P: Pencil, with_witnesses: bool = True,
                  extra_places: PlaceSet | None = None) -> SuitableStub:
    """Stub over S0 + S_bad, twisted to kill each A_i, then S_D appended."""
    places = P.s0 | bad_places(P)
    if extra_places:
        places = places | extra_places
    stub = find_stub(P, places)
    if stub is None:
        raise HypothesisError("no local points meeting clauses (1)-(4) and Br_vert orthogonality")
    q = reduction_twist(P, stub)
    stub = stub.scaled(q)
    wits = build_S_D(P, stub.places) if with_witnesses else []
    stub = stub.extended(w.point for w in wits)
    flags = suitability(P, stub, wits)
    return SuitableStub(stub, q, tuple(wits), flags)
