"""Admissible pairs and the weak dual Selmer group of their fibers.

The weak dual Selmer subgroup of J^T is computed twice:

* route A evaluates J^T at (t, s) and runs the general descent over
  T0(t,s) inside T(t,s) with the parity set {u_i};
* route B uses only the stub's local classes over T and the residues r_i
  at the places u_i, through the D-hat classes.

The two must agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

from ..arith import (
    INF, PlaceSet, hilbert, is_local_square, is_prime, valuation,
)
from ..descent import class_to_vector, local_coords, local_pairing, strict_weak_for
from ..f2 import F2Subspace, nullspace, preimage, rref, span
from ..torsor import _s0_part, adelic_report
from .brauer import AdelicStub
from .model import Pencil, fiber
from .stub import T0_places

__all__ = [
    "AdmissiblePair", "NotAdmissible", "is_admissible", "admissible_pairs",
    "FiberSelmer", "fiber_weak_dual_selmer", "j_labels",
]


@dataclass(frozen=True)
class AdmissiblePair:
    t: int
    s: int
    u: tuple  # u_i per form
    r: tuple  # r_i with (t, s) = (r_i d_i, -r_i c_i) mod u_i

    def __bool__(self):
        return True

    def to_json(self) -> dict:
        return {"t": self.t, "s": self.s, "u": list(self.u), "r": list(self.r)}


@dataclass(frozen=True)
class NotAdmissible:
    reason: str
    place: object = None

    def __bool__(self):
        return False


def _strip(n: int, primes) -> int:
    n = abs(n)
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def _sqfree_over(n: int, primes) -> int:
    """Square-free part of n when every prime factor is among primes."""
    out = -1 if n < 0 else 1
    n = abs(n)
    for p in primes:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e & 1:
            out *= p
    if n != 1:
        raise ValueError("n has a prime factor outside the given set")
    return out


def _residue(P: Pencil, i: int, t: int, s: int, u: int) -> int:
    c, d = P.forms[i]
    r = t * pow(d, -1, u) % u if d % u else (-s * pow(c, -1, u)) % u
    assert (t - r * d) % u == 0 and (s + r * c) % u == 0
    return r


def is_admissible(P: Pencil, stub: AdelicStub, t: int, s: int,
                  check_fiber: bool = True) -> Union[AdmissiblePair, NotAdmissible]:
    T = stub.places
    if P.p_set(P.full, t, s) == 0:
        return NotAdmissible("degenerate fiber")
    if _s0_part(math.gcd(t, s), P.s0)[1] != 1:
        return NotAdmissible("t, s are not S0-coprime")
    # (1) local classes agree with the stub over T
    for pt in stub.points:
        v = pt.place
        for i in range(P.size):
            here, there = P.p(i, t, s), P.p(i, pt.t, pt.s)
            if not is_local_square(here * there, v):
                return NotAdmissible(f"class of p_{i + 1} differs", v)
        if v not in P.s0:
            # equal valuations keep -d p_I(t,s) within the base assumption
            e1 = valuation(P.d * P.p_set(P.full, t, s), v)
            e2 = valuation(P.d * P.p_set(P.full, pt.t, pt.s), v)
            if e1 != e2:
                return NotAdmissible("valuation of d p_I differs", v)
    # (2) one new prime per form, with exponent one
    us, rs = [], []
    for i in range(P.size):
        rest = _strip(P.p(i, t, s), T.primes)
        if rest == 1:
            return NotAdmissible(f"p_{i + 1} is a T-unit")
        if not is_prime(rest):
            return NotAdmissible(f"p_{i + 1} has more than one prime outside T")
        us.append(rest)
        rs.append(_residue(P, i, t, s, rest))
    if len(set(us)) != len(us):
        return NotAdmissible("two forms share their new prime")
    # (3) the fiber is adelically soluble
    if check_fiber:
        rep = adelic_report(fiber(P, t, s), support=set(T.primes) | set(us))
        if not rep.soluble:
            return NotAdmissible("fiber has no S0-integral adelic point", rep.first_failure)
    return AdmissiblePair(t, s, tuple(us), tuple(rs))


# ------------------------------------------------------------------ search

def _crt(congr: list[tuple[int, int, int]]) -> tuple[int, int, int]:
    t0, s0, M = 0, 0, 1
    for t, s, m in congr:
        inv = pow(M, -1, m)
        t0 += M * ((t - t0) * inv % m)
        s0 += M * ((s - s0) * inv % m)
        M *= m
    return t0 % M, s0 % M, M


def _shells(radius: int) -> Iterator[tuple[int, int]]:
    yield 0, 0
    for r in range(1, radius + 1):
        for x in range(-r, r + 1):
            yield x, -r
            yield x, r
        for y in range(-r + 1, r):
            yield -r, y
            yield r, y


_PRIMORIAL = math.prod(p for p in range(3, 2000) if is_prime(p))


def admissible_pairs(P: Pencil, stub: AdelicStub, count: int = 2,
                     radius: int = 400) -> list[AdmissiblePair]:
    """Search the residue class fixed by the stub for admissible pairs.

    (t, s) is pinned modulo v^(e+1) (v odd) or 2^(e+3) at each finite place
    of T, where e is the largest valuation of a p_i at the stub point; this
    fixes every local class. The real place fixes the signs of the p_i."""
    T = stub.places
    congr = []
    for pt in stub.points:
        v = pt.place
        if v is INF:
            continue
        e = max(valuation(P.p(i, pt.t, pt.s), v) for i in range(P.size))
        m = v ** (e + (3 if v == 2 else 1))
        congr.append((pt.t % m, pt.s % m, m))
    t0, s0, M = _crt(congr)
    real = stub.at(INF)
    signs = [P.p(i, real.t, real.s) > 0 for i in range(P.size)]
    tparts = [math.prod(v ** valuation(P.p(i, pt.t, pt.s), v)
                        for pt in stub.points if pt.place is not INF for v in [pt.place])
              for i in range(P.size)]
    excl = math.prod(T.primes)
    found = []
    for x, y in _shells(radius):
        t, s = t0 + M * x, s0 + M * y
        vals = [P.p(i, t, s) for i in range(P.size)]
        if any((w > 0) != sg for w, sg in zip(vals, signs)):
            continue
        rests = [abs(w) // tp for w, tp in zip(vals, tparts)]
        if any(math.gcd(r, _PRIMORIAL) != 1 and r >= 2000 for r in rests):
            continue
        if not all(is_prime(r) and excl % r for r in rests):
            continue
        res = is_admissible(P, stub, t, s)
        if res:
            found.append(res)
            if len(found) >= count:
                break
    return found


# ------------------------------------------------------ weak dual Selmer

def j_labels(T: PlaceSet, n: int) -> tuple:
    return (-1,) + T.primes + tuple(f"p{i + 1}" for i in range(n))


@dataclass(frozen=True)
class FiberSelmer:
    labels: tuple  # basis of J^T: -1, primes of T, p_1..p_n
    weak_dual: F2Subspace  # route B
    via_descent: F2Subspace  # route A, pulled back to J^T
    image: F2Subspace  # route A inside I^{T(t,s)}
    image_labels: tuple
    T0: PlaceSet
    strict: F2Subspace  # strict Selmer group of the fiber, pulled back to J_T

    @property
    def agree(self) -> bool:
        return self.weak_dual == self.via_descent

    def to_json(self) -> dict:
        return {
            "labels": [str(l) for l in self.labels],
            "basis": self.weak_dual.with_labels(self.labels).labeled_basis(),
            "rank": self.weak_dual.rank,
            "strict_basis": self.strict.with_labels(self.labels).labeled_basis(),
            "routes_agree": self.agree,
            "T0": self.T0.to_json(),
        }


def _basis_classes(P: Pencil, T: PlaceSet) -> list[tuple[int, int]]:
    """(c, J) for each basis vector of J^T."""
    out = [(-1, 0)] + [(p, 0) for p in T.primes]
    return out + [(1, 1 << i) for i in range(P.size)]


def _route_b(P: Pencil, stub: AdelicStub, pair: AdmissiblePair, T0: PlaceSet) -> F2Subspace:
    basis = _basis_classes(P, stub.places)
    dim = len(basis)
    rows = []
    # clause (1): local conditions over T from the stub's classes alone
    for pt in stub.points:
        v = pt.place
        dp = -P.d * P.p_set(P.full, pt.t, pt.s)
        pv = local_pairing(v)
        if v in T0:
            w_up = span([local_coords(dp, v)], pv.dim_left)
        else:
            w_up = span([0b01], pv.dim_left)  # unramified classes at odd v
        w_down = nullspace([pv.left_image(w) for w in w_up.basis], pv.dim_left)
        coords = []
        for c, J in basis:
            val = c * P.p_set(J, pt.t, pt.s)
            coords.append(local_coords(val, v))
        for w in w_down:
            row = 0
            for k, x in enumerate(coords):
                if pv(w, x):
                    row |= 1 << k
            rows.append(row)
    # clause (2): the symbol at u_i is the same for every form. p_i(t,s) is
    # u_i times a u_i-unit and the other entry is a unit, so the symbol is
    # the Legendre symbol of c r_i^|J| Dhat^J_i at u_i
    sym = []
    for i in range(P.size):
        u, r = pair.u[i], pair.r[i]
        row = 0
        for k, (c, J) in enumerate(basis):
            val = c * r ** bin(J).count("1") * P.D_value(J, i, hat=True)
            if hilbert(u, val, u):
                row |= 1 << k
        sym.append(row)
    rows.extend(sym[0] ^ r for r in sym[1:])
    return F2Subspace(dim, rref(nullspace(rows, dim)))


def fiber_weak_dual_selmer(P: Pencil, pair: AdmissiblePair, stub: AdelicStub) -> FiberSelmer:
    T = stub.places
    n = P.size
    if not is_admissible(P, stub, pair.t, pair.s, check_fiber=False):
        raise ValueError("pair is not admissible for this stub")
    labels = j_labels(T, n)
    T0 = T0_places(P, stub)
    u_set = PlaceSet(False, tuple(sorted(pair.u)))
    # route A: general descent over T0(t,s) inside T(t,s), parity set {u_i}
    dfib = _sqfree_over(-P.d * P.p_set(P.full, pair.t, pair.s), T.primes + pair.u)
    rep = strict_weak_for(dfib, T0 | u_set, u_set, T | u_set)
    img_labels = rep.labels
    images = [class_to_vector(c * P.p_set(J, pair.t, pair.s), img_labels)
              for c, J in _basis_classes(P, T)]
    if len(rref(images)) != len(images):
        raise AssertionError("evaluation J^T -> I^T(t,s) is not injective")
    pulled = preimage(images, len(img_labels), rep.weak_dual_selmer)
    strict = preimage(images, len(img_labels), rep.strict_selmer)
    route_b = _route_b(P, stub, pair, T0)
    out = FiberSelmer(labels, route_b.with_labels(labels), pulled.with_labels(labels),
                      rep.weak_dual_selmer, img_labels, T0, strict.with_labels(labels))
    if not out.agree:
        raise AssertionError("weak dual Selmer routes disagree")
    gen = class_to_vector(-P.d, labels[:1 + len(T.primes)]) | (((1 << n) - 1) << (1 + len(T.primes)))
    if gen not in out.weak_dual:
        raise AssertionError("[-d][p_I] missing from the weak dual Selmer group")
    return out
