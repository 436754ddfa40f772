"""2-descent on the norm-one torus x^2 - d*y^2 = 1 over Z_{S0}.

Every group lives in the abstract space I_{S'} = <-1, p : p in S' finite>,
with coordinate 0 for -1 and coordinate k for the k-th finite prime of S'.
Local spaces Q_v*/Q_v*^2 use the bases
    inf: [-1];  odd p: [u], [p] (u the least non-residue);  2: [-1], [5], [2].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import f2
from .arith import (
    INF, PlaceSet, factorize, hilbert, is_local_square, legendre,
    sqfree, valuation,
)
from .f2 import F2Pairing, F2Subspace

__all__ = [
    "NormOneTorus", "LocalCondition", "SelmerReport", "DescentSetup",
    "enlarge_base", "local_conditions", "selmer_group", "strict_weak_selmer",
    "local_basis", "local_coords", "splits_in", "class_to_vector",
    "vector_to_class", "HypothesisError",
]


class HypothesisError(ValueError):
    """An input violates a standing hypothesis (e.g. val_v(d) <= 1)."""


# -------------------------------------------------------------- local spaces

@lru_cache(maxsize=None)
def _nonresidue(p: int) -> int:
    u = 2
    while legendre(u, p) != -1:
        u += 1
    return u


def local_basis(v) -> tuple[int, ...]:
    """Rational representatives of the chosen basis of Q_v*/Q_v*^2."""
    if v is INF:
        return (-1,)
    if v == 2:
        return (-1, 5, 2)
    return (_nonresidue(v), v)


def local_dim(v) -> int:
    return 1 if v is INF else (3 if v == 2 else 2)


_MOD8 = {1: 0b000, 7: 0b001, 5: 0b010, 3: 0b011}


def local_coords(q, v) -> int:
    """Coordinates of the class of q in Q_v*/Q_v*^2."""
    if q == 0:
        raise ValueError("zero has no local class")
    if v is INF:
        return 1 if q < 0 else 0
    q = Fraction(q)
    k = valuation(q, v)
    r = q / Fraction(v) ** k
    u = r.numerator * r.denominator
    if v == 2:
        return _MOD8[u % 8] | ((k & 1) << 2)
    return (1 if legendre(u, v) == -1 else 0) | ((k & 1) << 1)


@lru_cache(maxsize=None)
def local_pairing(v) -> F2Pairing:
    reps = local_basis(v)
    rows = []
    for x in reps:
        r = 0
        for j, y in enumerate(reps):
            r |= hilbert(x, y, v) << j
        rows.append(r)
    return F2Pairing(tuple(rows), len(reps), len(reps))


def _unramified(v) -> int:
    # image of local units; only used off S, where v is odd
    if v is INF or v == 2:
        raise ValueError("unramified classes requested at inf or 2")
    return 0b01


@dataclass(frozen=True)
class LocalCondition:
    place: object
    w_up: F2Subspace
    w_down: F2Subspace

    def __post_init__(self):
        pair = local_pairing(self.place)
        if f2.orthogonal_complement(self.w_up, pair, "right") != self.w_down:
            raise AssertionError(f"local conditions at {self.place} are not orthogonal")


# --------------------------------------------------------------------- torus

@dataclass(frozen=True)
class NormOneTorus:
    """The group scheme x^2 - d*y^2 = 1 over Z_{S0}."""
    d: int
    s0: PlaceSet
    strict: bool = False

    def __post_init__(self):
        if not isinstance(self.s0, PlaceSet):
            object.__setattr__(self, "s0", PlaceSet.of(self.s0))
        if self.d == 0:
            raise ValueError("d must be nonzero")
        if sqfree(self.d) == 1:
            raise ValueError("d is a square; the torus is split")
        if not self.s0.has_inf:
            raise ValueError("S0 must contain the real place")
        if self.strict and self.violations():
            raise HypothesisError(f"base assumption fails at {self.violations()}")

    def violations(self) -> list:
        """Finite places outside S0 where val_v(d) <= 1 (=1 at 2) fails."""
        bad = []
        _, fac = factorize(self.d)
        for p, e in fac.items():
            if p not in self.s0 and e > 1:
                bad.append(p)
        if 2 not in self.s0 and fac.get(2, 0) != 1 and 2 not in bad:
            bad.append(2)
        return sorted(bad)

    def assumption_holds(self) -> bool:
        return not self.violations()


def enlarge_base(t: NormOneTorus) -> PlaceSet:
    """S0 together with the ramified places and 2."""
    ram = [p for p, e in factorize(t.d)[1].items() if e & 1 and p != 2]
    return t.s0 | PlaceSet(True, tuple(ram) + (2,))


def splits_in(a, d, v) -> bool:
    """Does every place w of Q(sqrt d) over v split in K(sqrt a)?"""
    if is_local_square(d, v):
        return is_local_square(a, v)
    return is_local_square(a, v) or is_local_square(Fraction(a) * d, v)


# ------------------------------------------------------------ class vectors

def class_to_vector(q, labels: tuple) -> int:
    """I_{S'} coordinates of a rational supported on S'."""
    q = Fraction(q)
    x = 1 if q < 0 else 0
    primes = labels[1:]
    rest = abs(q)
    for k, p in enumerate(primes, start=1):
        e = valuation(rest, p)
        if e:
            rest /= Fraction(p) ** e
            if e & 1:
                x |= 1 << k
    if rest != 1 and sqfree(rest) != 1:
        raise ValueError(f"{q} is not supported on {labels}")
    return x


def vector_to_class(x: int, labels: tuple) -> int:
    r = 1
    for k in f2.bits(x):
        r *= labels[k]
    return r


# ------------------------------------------------------------- descent core

@dataclass
class DescentSetup:
    """Local spaces and localization for the torus d over S inside S'."""
    d: int
    s: PlaceSet
    s_prime: Optional[PlaceSet] = None
    places: list = field(init=False)
    labels: tuple = field(init=False)

    def __post_init__(self):
        if self.s_prime is None:
            self.s_prime = self.s
        if not self.s <= self.s_prime:
            raise ValueError("S' must contain S")
        if INF not in self.s or 2 not in self.s:
            raise ValueError("S must contain inf and 2")
        self.places = list(self.s_prime)
        self.labels = (-1,) + self.s_prime.primes
        self.offsets = {}
        n = 0
        for v in self.places:
            self.offsets[v] = n
            n += local_dim(v)
        self.dim_v = n
        self.dim_i = len(self.labels)
        # localization of each basis element of I
        self.loc = [self.localize(q) for q in self.labels]
        rows = []
        for v in self.places:
            pv = local_pairing(v)
            off = self.offsets[v]
            rows.extend(r << off for r in pv.rows)
        self.pairing = F2Pairing(tuple(rows), n, n)
        self.conditions = []
        up, down = [], []
        for v in self.places:
            pv = local_pairing(v)
            dim = local_dim(v)
            if v in self.s:
                gen = local_coords(self.d, v)
                wu = f2.span([gen] if gen else [], dim)
            else:
                wu = f2.span([_unramified(v)], dim)
            wd = f2.orthogonal_complement(wu, pv, "right")
            self.conditions.append(LocalCondition(v, wu, wd))
            up.extend(b << self.offsets[v] for b in wu.basis)
            down.extend(b << self.offsets[v] for b in wd.basis)
        self.w_up = f2.span(up, n)
        self.w_down = f2.span(down, n)
        self.image = f2.span(self.loc, n)
        self.full_i = F2Subspace.full(self.dim_i, self.labels)
        # I x V^ pairing and its transpose V x I^
        self.pair_iv = F2Pairing(tuple(self.pairing.left_image(x) for x in self.loc),
                                 self.dim_i, n)
        self.pair_vi = self.pair_iv.transpose()

    def localize(self, q) -> int:
        x = 0
        for v in self.places:
            x |= local_coords(q, v) << self.offsets[v]
        return x

    def to_i(self, sub: F2Subspace) -> F2Subspace:
        """Pull a subspace of loc(I) back to I coordinates."""
        if not sub <= self.image:
            raise AssertionError("subspace is not in the image of localization")
        return f2.preimage(self.loc, self.dim_v, sub).with_labels(self.labels)

    def tate_poitou_holds(self) -> bool:
        comp = f2.orthogonal_complement(self.image, self.pairing, "left")
        return comp == self.image and 2 * self.image.rank == self.dim_v

    def groups(self, w_down: F2Subspace, w_up: F2Subspace) -> tuple[F2Subspace, F2Subspace]:
        """(I ∩ W_down, I ∩ W_up), each computed three ways and compared."""
        sel = [
            f2.preimage(self.loc, self.dim_v, w_down),
            f2.left_kernel(self.pair_iv, self.full_i, w_up),
            self.to_i(f2.left_kernel(self.pair_vi, w_down, self.full_i)),
        ]
        dual = [
            f2.preimage(self.loc, self.dim_v, w_up),
            self.to_i(f2.right_kernel(self.pair_iv, self.full_i, w_up)),
            f2.right_kernel(self.pair_vi, w_down, self.full_i),
        ]
        sel = [g.with_labels(self.labels) for g in sel]
        dual = [g.with_labels(self.labels) for g in dual]
        if not (sel[0] == sel[1] == sel[2]):
            raise AssertionError(f"Selmer characterizations disagree: {sel}")
        if not (dual[0] == dual[1] == dual[2]):
            raise AssertionError(f"dual Selmer characterizations disagree: {dual}")
        return sel[0], dual[0]

    def parity_functional(self, s1: PlaceSet) -> int:
        mask = 0
        for v in s1:
            if v is INF:
                raise ValueError("S1 cannot contain the real place")
            mask |= (0b100 if v == 2 else 0b10) << self.offsets[v]
        return mask

    def split_places(self) -> list:
        # places of S' outside S carry the unramified W^v whether or not they split
        return [v for v in self.places if v in self.s and is_local_square(self.d, v)]


@dataclass(frozen=True)
class SelmerReport:
    s: PlaceSet
    labels: tuple
    selmer: F2Subspace
    dual_selmer: F2Subspace
    split_places: tuple
    d: int
    s1: Optional[PlaceSet] = None
    strict_selmer: Optional[F2Subspace] = None
    weak_dual_selmer: Optional[F2Subspace] = None

    def __post_init__(self):
        if self.selmer.rank - self.dual_selmer.rank != len(self.split_places):
            raise AssertionError("rank identity dim Sel - dim Sel^ = |S_split| fails")
        if class_to_vector(self.d, self.labels) not in self.dual_selmer:
            raise AssertionError("[d] is not in the dual Selmer group")
        if self.strict_selmer is not None and self.s1:
            lo, hi = self.strict_selmer, self.weak_dual_selmer
            if lo.rank - hi.rank != len(self.split_places) - 1:
                raise AssertionError("strict/weak rank identity fails")
            if not (lo <= self.selmer and self.dual_selmer <= hi):
                raise AssertionError("strict/weak inclusions fail")
            codim = (self.selmer.rank - lo.rank) + (hi.rank - self.dual_selmer.rank)
            if codim != 1:
                raise AssertionError("strict/weak codimension is not exactly one")

    def class_of(self, x: int) -> int:
        return vector_to_class(x, self.labels)

    def classes(self, sub: F2Subspace) -> list[int]:
        return sorted(self.class_of(x) for x in sub.elements())


def local_conditions(t: NormOneTorus, s: Optional[PlaceSet] = None) -> list[LocalCondition]:
    s = s or enlarge_base(t)
    return DescentSetup(t.d, s).conditions


def selmer_group(t: NormOneTorus, s_prime: Optional[PlaceSet] = None) -> SelmerReport:
    setup = DescentSetup(t.d, enlarge_base(t), s_prime)
    sel, dual = setup.groups(setup.w_down, setup.w_up)
    return SelmerReport(setup.s_prime, setup.labels, sel, dual,
                        tuple(setup.split_places()), t.d)


def _strict_weak(setup: DescentSetup, s1: PlaceSet, d: int) -> SelmerReport:
    sel, dual = setup.groups(setup.w_down, setup.w_up)
    if not s1:
        return SelmerReport(setup.s_prime, setup.labels, sel, dual,
                            tuple(setup.split_places()), d, s1, sel, dual)
    mask = setup.parity_functional(s1)
    if all(f2.parity(w & mask) == 0 for w in setup.w_down.basis):
        raise HypothesisError("valuation parity over S1 is trivial on W")
    even = F2Subspace(setup.dim_v, tuple(f2.nullspace([mask], setup.dim_v)))
    w_minus = f2.intersect(setup.w_down, even)
    w_plus = f2.orthogonal_complement(w_minus, setup.pairing, "left")
    lo, hi = setup.groups(w_minus, w_plus)
    return SelmerReport(setup.s_prime, setup.labels, sel, dual,
                        tuple(setup.split_places()), d, s1, lo, hi)


def strict_weak_selmer(t: NormOneTorus, s1, s_prime: Optional[PlaceSet] = None) -> SelmerReport:
    s1 = s1 if isinstance(s1, PlaceSet) else PlaceSet.of(s1)
    s = enlarge_base(t)
    if any(v in t.s0 for v in s1):
        raise ValueError("S1 must be disjoint from S0")
    if not s1 <= s:
        raise ValueError("S1 must lie in S")
    return _strict_weak(DescentSetup(t.d, s, s_prime), s1, t.d)


def strict_weak_for(d: int, s: PlaceSet, s1: PlaceSet, s_prime: Optional[PlaceSet] = None) -> SelmerReport:
    """Same as strict_weak_selmer with the enlarged set S given directly."""
    return _strict_weak(DescentSetup(d, s, s_prime), s1, d)
