"""Decidable hypothesis checks for the four integral-point theorems.

Every variant returns a TheoremReport listing each hypothesis with a
boolean and, on failure, a witness. Shape mismatches (wrong number of
forms, 2 missing from S0, ...) raise ShapeError instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from ..arith import INF, factorize, is_prime, local_conic_soluble, sqfree, valuation
from ..f2 import bits, nullspace
from ..torsor import _s0_part
from .brauer import brauer_pairing
from .groups import condition_D, lemma_explicit_conditions, vertical_brauer_basis
from .model import Pencil, bad_places, class_vectors
from .stub import _finite_samples, find_stub, local_candidates

__all__ = ["ShapeError", "Hypothesis", "TheoremReport", "theorem_check", "VARIANTS"]

VARIANTS = ("main_intro", "main_2", "main_3", "main_uncond")


class ShapeError(ValueError):
    """The pencil does not have the shape the theorem is stated for."""


@dataclass(frozen=True)
class Hypothesis:
    name: str
    holds: bool
    witness: Any = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class TheoremReport:
    variant: str
    hypotheses: tuple
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    def __getitem__(self, name: str) -> Hypothesis:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"variant": self.variant, "all_hold": self.holds,
                "hypotheses": {h.name: h.to_json() for h in self.hypotheses},
                **self.extra}


def _pairs(P: Pencil):
    return list(combinations(range(P.size), 2))


def delta_table(P: Pencil) -> dict:
    """Delta_{i,j} under both sign conventions, 1-based keys."""
    return {f"{i + 1},{j + 1}": {"c_i d_j - c_j d_i": P.delta(i, j),
                                 "c_j d_i - c_i d_j": -P.delta(i, j)}
            for i, j in _pairs(P)}


def _independence(P: Pencil) -> Hypothesis:
    """[-1] and the [Delta_{i,j}], i < j, are distinct and independent."""
    names = ["-1"] + [f"Delta_{i + 1}{j + 1}" for i, j in _pairs(P)]
    vals = [-1] + [P.delta(i, j) for i, j in _pairs(P)]
    vecs = class_vectors(vals)
    rel = nullspace(_transpose(vecs), len(vecs))
    if not rel:
        return Hypothesis("independence", True)
    witness = [names[k] for k in bits(min(rel))]
    return Hypothesis("independence", False, {"relation": witness})


def _transpose(vecs: list[int]) -> list[int]:
    # columns of the class matrix become rows, so the nullspace gives relations
    width = max((v.bit_length() for v in vecs), default=0)
    rows = []
    for b in range(width):
        r = 0
        for k, v in enumerate(vecs):
            if v >> b & 1:
                r |= 1 << k
        rows.append(r)
    return rows


def _cond1(P: Pencil) -> Hypothesis:
    ec = lemma_explicit_conditions(P)
    return Hypothesis("explicit_condition_1", ec.cond1,
                      None if ec.cond1 else {"rank": ec.rank1, "max_rank": ec.target1})


def _local_point(P: Pencil, v: int, bounded: bool) -> list | None:
    """(t_v, s_v) with a Z_v-point on the fiber; if bounded also val_v(d p_I) <= 1."""
    for t, s in _finite_samples(v):
        val = P.p_set(P.full, t, s)
        if val == 0:
            continue
        if bounded and valuation(P.d * val, v) > 1:
            continue
        if local_conic_soluble(P.a * P.p_set(P.A, t, s), P.b * P.p_set(P.B, t, s),
                               v, integral=True):
            return [t, s]
    return None


def _local_points(P: Pencil, places: list[int], bounded: bool, name: str) -> Hypothesis:
    found, missing = {}, []
    for v in places:
        pt = _local_point(P, v, bounded)
        if pt is None:
            missing.append(v)
        else:
            found[str(v)] = pt
    if missing:
        return Hypothesis(name, False, {"no_point_at": missing})
    return Hypothesis(name, True, {"points": found} if found else None)


def _need_two(P: Pencil) -> None:
    if 2 not in P.s0:
        raise ShapeError("S0 must contain 2")


def _check_intro(P: Pencil) -> list[Hypothesis]:
    if P.size != 4 or P.n != 1 or P.m != 1:
        raise ShapeError("needs four forms split two and two")
    if P.a != 1 or P.b != 1:
        raise ShapeError("needs a = b = 1")
    _need_two(P)
    return [Hypothesis("delta_nonzero", True), _independence(P)]


def _check_2(P: Pencil) -> list[Hypothesis]:
    _need_two(P)
    primes = sorted({v for v in range(3, P.size) if is_prime(v)}
                    | set(_primes_of_d(P)))
    primes = [v for v in primes if v not in P.s0]
    return [Hypothesis("delta_nonzero", True), _cond1(P),
            _local_points(P, primes, True, "local_points_small_or_dividing_d")]


def _check_3(P: Pencil) -> list[Hypothesis]:
    _need_two(P)
    if P.size > 4:
        raise ShapeError("needs at most four forms")
    for name, x in (("a", P.a), ("b", P.b)):
        _, rest = _s0_part(x, P.s0)
        if sqfree(rest) != rest:
            raise ShapeError(f"{name} must be square-free away from S0")
    bad = [p for p in (3, 5) if p not in P.s0 and P.d % p == 0]
    h35 = Hypothesis("d_prime_to_3_5", not bad, {"divides_d": bad} if bad else None,
                     note="read as: 3 and 5, when outside S0, do not divide d")
    primes = [v for v in _primes_of_d(P) if v not in P.s0]
    return [Hypothesis("delta_nonzero", True), _cond1(P), h35,
            _local_points(P, primes, False, "integral_points_dividing_d")]


def _check_uncond(P: Pencil) -> list[Hypothesis]:
    cd = condition_D(P)
    hyps = [Hypothesis("delta_nonzero", True),
            Hypothesis("condition_D", cd.holds, None if cd.holds else cd.to_json())]
    stub = find_stub(P, need_orthogonal=False)
    if stub is None:
        hyps.append(Hypothesis("adelic_point_clauses_1_2", False,
                               {"places": [str(v) for v in P.s0 | bad_places(P)
                                           if not local_candidates(P, v)]}))
        hyps.append(Hypothesis("brauer_orthogonal", False, note="no stub to test"))
        return hyps
    hyps.append(Hypothesis("adelic_point_clauses_1_2", True,
                           {"points": [p.to_json() for p in stub.points]}))
    basis = vertical_brauer_basis(P)
    # an orthogonal stub may need a different choice of local points
    ortho = find_stub(P)
    if ortho is None:
        bad = [format(e, f"0{P.size}b")[::-1] for e in basis.basis
               if brauer_pairing(P, stub, e)]
        hyps.append(Hypothesis("brauer_orthogonal", False, {"eps": bad}))
    else:
        assert all(brauer_pairing(P, ortho, e) == 0 for e in basis.basis)
        hyps.append(Hypothesis("brauer_orthogonal", True,
                               {"basis_rank": basis.rank,
                                "points": [p.to_json() for p in ortho.points]}))
    return hyps


def _primes_of_d(P: Pencil) -> list[int]:
    return sorted(factorize(P.d)[1])


_CHECKS = {"main_intro": _check_intro, "main_2": _check_2, "main_3": _check_3,
           "main_uncond": _check_uncond}


def theorem_check(P: Pencil, variant: str) -> TheoremReport:
    if variant not in _CHECKS:
        raise ValueError(f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}")
    if INF not in P.s0:
        raise ShapeError("S0 must contain the real place")
    hyps = _CHECKS[variant](P)
    extra = {"delta": delta_table(P), "s0": P.s0.to_json()}
    return TheoremReport(variant, tuple(hyps), extra)
