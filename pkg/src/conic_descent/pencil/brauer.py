"""Partial adelic points, the vertical classes A_i and Chebotarev witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from ..arith import (
    INF, PlaceSet, hilbert, is_local_square, is_prime, legendre, local_conic_soluble,
    place_key, sqfree,
)
from ..descent import HypothesisError
from ..f2 import parity
from .groups import vertical_brauer_basis
from .model import Pencil, bad_places, class_labels, class_vectors

__all__ = [
    "LocalPoint", "AdelicStub", "A_vector", "brauer_pairing", "find_witness_prime",
    "reduction_twist", "lemma_fiber_test", "InconsistentConstraints",
]


class InconsistentConstraints(ValueError):
    pass


@dataclass(frozen=True)
class LocalPoint:
    """(t_v, s_v) over a place; the fiber above it is known to be soluble.

    Over S0 the fiber has a Q_v-point, elsewhere a Z_v-point. The conic
    coordinates are not stored, only the certified solubility."""
    place: object
    t: int
    s: int
    x: Optional[object] = None
    y: Optional[object] = None

    def scaled(self, q: int) -> "LocalPoint":
        return replace(self, t=q * self.t, s=q * self.s)

    def to_json(self) -> dict:
        return {"place": str(self.place), "t": self.t, "s": self.s}


@dataclass(frozen=True)
class AdelicStub:
    points: tuple  # LocalPoint per place, sorted by place
    s0: PlaceSet
    flags: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = tuple(sorted(self.points, key=lambda p: place_key(p.place)))
        if len({p.place for p in pts}) != len(pts):
            raise ValueError("two local points at one place")
        object.__setattr__(self, "points", pts)

    @property
    def places(self) -> PlaceSet:
        return PlaceSet.of(p.place for p in self.points)

    def at(self, v) -> LocalPoint:
        for p in self.points:
            if p.place == v:
                return p
        raise KeyError(v)

    def scaled(self, q: int) -> "AdelicStub":
        return AdelicStub(tuple(p.scaled(q) for p in self.points), self.s0)

    def extended(self, pts: Iterable[LocalPoint]) -> "AdelicStub":
        return AdelicStub(self.points + tuple(pts), self.s0)

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points], "flags": dict(self.flags)}


def A_vector(P: Pencil, pt: LocalPoint) -> int:
    """Bit i is <a D^A_i, p_i(t_v, s_v)>_v."""
    out = 0
    for i in range(P.size):
        val = P.p(i, pt.t, pt.s)
        if val == 0:
            raise ValueError(f"p_{i + 1} vanishes at the point over {pt.place}")
        if hilbert(P.aDA[i], val, pt.place):
            out |= 1 << i
    return out


def _sum_vector(P: Pencil, stub: AdelicStub) -> int:
    total = 0
    for pt in stub.points:
        total ^= A_vector(P, pt)
    return total


def brauer_pairing(P: Pencil, stub: AdelicStub, eps: int) -> int:
    """Sum over the stub of sum_i eps_i <a D^A_i, p_i(t_v, s_v)>_v."""
    return parity(_sum_vector(P, stub) & eps)


def find_witness_prime(constraints: Sequence[tuple[int, bool]], exclude: Iterable[int] = (),
                       start: int = 3) -> int:
    """Least odd prime w with each class a square (True) or not (False) mod w."""
    cls = [sqfree(c) for c, _ in constraints]
    want = [0 if sq else 1 for _, sq in constraints]
    vecs = class_vectors(cls, class_labels(cls))
    # the requested pattern must be a character on the span
    rows: list[tuple[int, int]] = []
    for v, b in zip(vecs, want):
        for r, rb in rows:
            if v ^ r < v:
                v, b = v ^ r, b ^ rb
        if v == 0:
            if b:
                raise InconsistentConstraints("requested symbols contradict a relation")
            continue
        rows.append((v, b))
        rows.sort(reverse=True)
    exclude = set(exclude)
    w = max(start, 3)
    while True:
        if is_prime(w) and w not in exclude and all(c % w for c in cls):
            if all((legendre(c, w) == 1) == (b == 0) for c, b in zip(cls, want)):
                return w
        w += 1 if w == 2 else 2


def reduction_twist(P: Pencil, stub: AdelicStub) -> int:
    """A prime q (or 1) making every A_i sum to zero after t, s -> q t, q s."""
    b = _sum_vector(P, stub)
    if b == 0:
        return 1
    for eps in vertical_brauer_basis(P).elements():
        if parity(eps & b):
            raise HypothesisError(f"stub is not orthogonal to the vertical class eps={eps:b}")
    cons = [(P.aDA[i], not (b >> i & 1)) for i in range(P.size)]
    excl = [v for v in stub.places.primes]
    q = find_witness_prime(cons, excl)
    if _sum_vector(P, stub.scaled(q)) != 0:
        raise HypothesisError("twist failed: the stub misses a place where A_i ramifies")
    return q


def lemma_fiber_test(P: Pencil, v: int, t: int, s: int) -> bool:
    """Z_v-solubility of the fiber over a point reducing to a zero of p_i."""
    if v is INF or not is_prime(v):
        raise ValueError("v must be a finite prime")
    if v in P.s0 or v in bad_places(P):
        raise ValueError(f"{v} lies in S0 or S_bad")
    if t % v == 0 and s % v == 0:
        raise ValueError("one of t, s must be a v-unit")
    zeros = [i for i in range(P.size) if P.p(i, t, s) % v == 0]
    if not zeros:
        raise ValueError(f"no p_i vanishes mod {v} at {(t, s)}")
    i = zeros[0]
    answer = is_local_square(P.aDA[i], v)
    if P.p_set(P.full, t, s) != 0:
        oracle = local_conic_soluble(P.a * P.p_set(P.A, t, s), P.b * P.p_set(P.B, t, s),
                                     v, integral=True)
        if oracle != answer:
            raise AssertionError(f"fiber test disagrees with Hensel search at {v}")
    return answer
