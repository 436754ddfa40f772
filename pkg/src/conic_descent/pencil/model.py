"""Surface data a*p_A(t,s)*x^2 + b*p_B(t,s)*y^2 = 1 and its D-class calculus.

Forms are indexed from 0 in code. Index subsets J are bitmasks over the
forms, so [c][p_J] is stored as the pair (c, J).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from ..arith import PlaceSet, factorize, is_prime, sqfree
from ..descent import class_to_vector
from ..f2 import bits, rref
from ..torsor import ConicTorsor, _s0_part

__all__ = [
    "Pencil", "FormalClass", "DegenerateFiber", "delta", "D_class", "Dhat_class",
    "fiber", "bad_places", "class_labels", "class_vectors", "class_rank",
]


class DegenerateFiber(ValueError):
    """Raised when p_I(t, s) = 0."""


@dataclass(frozen=True, order=True)
class FormalClass:
    """[c][p_J]: a square-free c and a bitmask J of forms."""
    c: int
    J: int

    def __post_init__(self):
        object.__setattr__(self, "c", sqfree(self.c))

    def __mul__(self, other: "FormalClass") -> "FormalClass":
        return FormalClass(self.c * other.c, self.J ^ other.J)

    @property
    def size(self) -> int:
        return bin(self.J).count("1")

    def to_json(self) -> dict:
        return {"c": self.c, "J": [i + 1 for i in bits(self.J)]}

    def __repr__(self):
        js = "".join(f"p{i + 1}" for i in bits(self.J))
        return f"[{self.c}]" + (f"[{js}]" if js else "")


@dataclass(frozen=True)
class Pencil:
    forms: tuple  # ((c_i, d_i), ...)
    part_a: frozenset  # indices (from 0) of the forms in A
    a: int
    b: int
    s0: PlaceSet

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple((int(c), int(d)) for c, d in self.forms))
        object.__setattr__(self, "part_a", frozenset(int(i) for i in self.part_a))
        if not isinstance(self.s0, PlaceSet):
            object.__setattr__(self, "s0", PlaceSet.of(self.s0))
        n = len(self.forms)
        if n == 0 or n % 2:
            raise ValueError("the number of forms must be even and positive")
        if not self.part_a <= set(range(n)):
            raise ValueError("partition indices out of range")
        if len(self.part_a) % 2:
            raise ValueError("A and B must both have even size")
        if self.a == 0 or self.b == 0:
            raise ValueError("a and b must be nonzero")
        if not self.s0.has_inf:
            raise ValueError("S0 must contain the real place")
        for i, (c, d) in enumerate(self.forms):
            if c == 0 and d == 0:
                raise ValueError(f"form {i + 1} is zero")
            if _s0_part(math.gcd(c, d), self.s0)[1] != 1:
                raise ValueError(f"form {i + 1} has coefficients sharing a prime outside S0")
        for i in range(n):
            for j in range(i + 1, n):
                if self.delta(i, j) == 0:
                    raise ValueError(f"forms {i + 1} and {j + 1} are proportional")

    # ---------------------------------------------------------- basic data
    @property
    def size(self) -> int:
        return len(self.forms)

    @property
    def d(self) -> int:
        return self.a * self.b

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @property
    def A(self) -> int:
        return sum(1 << i for i in self.part_a)

    @property
    def B(self) -> int:
        return self.full ^ self.A

    @property
    def n(self) -> int:
        return len(self.part_a) // 2

    @property
    def m(self) -> int:
        return (self.size - len(self.part_a)) // 2

    def delta(self, i: int, j: int) -> int:
        """c_i d_j - c_j d_i."""
        if i == j:
            raise ValueError("delta needs i != j")
        (ci, di), (cj, dj) = self.forms[i], self.forms[j]
        return ci * dj - cj * di

    def p(self, i: int, t: int, s: int) -> int:
        c, d = self.forms[i]
        return c * t + d * s

    def p_set(self, J: int, t: int, s: int) -> int:
        out = 1
        for i in bits(J):
            out *= self.p(i, t, s)
        return out

    def root(self, i: int) -> tuple[int, int]:
        """(d_i, -c_i), a zero of p_i."""
        c, d = self.forms[i]
        return d, -c

    def even_subsets(self) -> Iterator[int]:
        for J in range(self.full + 1):
            if bin(J).count("1") % 2 == 0:
                yield J

    # ------------------------------------------------------------- D-classes
    def D_value(self, J: int, i: int, hat: bool = False) -> int:
        t, s = self.root(i)
        if not J >> i & 1:
            return self.p_set(J, t, s)
        return (-self.d if hat else self.d) * self.p_set(self.full ^ J, t, s)

    def D(self, J: int, i: int) -> int:
        return sqfree(self.D_value(J, i))

    def Dhat(self, J: int, i: int) -> int:
        return sqfree(self.D_value(J, i, hat=True))

    @cached_property
    def aDA(self) -> tuple[int, ...]:
        """Square classes [a D^A_i]: the residues of the vertical classes A_i."""
        return tuple(sqfree(self.a * self.D_value(self.A, i)) for i in range(self.size))

    # ------------------------------------------------------------- helpers
    def to_json(self) -> dict:
        return {
            "forms": [list(f) for f in self.forms],
            "partition_A": sorted(i + 1 for i in self.part_a),
            "a": self.a, "b": self.b, "s0": self.s0.to_json(),
        }

    def describe(self) -> str:
        def prod(J):
            return "".join(f"({c}t{d:+d}s)" for k, (c, d) in enumerate(self.forms) if J >> k & 1)
        lhs = f"{self.a}*{prod(self.A)}" if self.A else f"{self.a}"
        rhs = f"{self.b}*{prod(self.B)}" if self.B else f"{self.b}"
        return f"{lhs}*x^2 + {rhs}*y^2 = 1"


def delta(P: Pencil, i: int, j: int) -> int:
    return P.delta(i, j)


def D_class(P: Pencil, J: int, i: int) -> int:
    return P.D(J, i)


def Dhat_class(P: Pencil, J: int, i: int) -> int:
    return P.Dhat(J, i)


def fiber(P: Pencil, t: int, s: int) -> ConicTorsor:
    """The conic over (t, s) as the torsor a p_A(t,s) x^2 + b p_B(t,s) y^2 = 1."""
    if P.p_set(P.full, t, s) == 0:
        raise DegenerateFiber(f"p_I vanishes at {(t, s)}")
    if _s0_part(math.gcd(t, s), P.s0)[1] != 1:
        raise ValueError(f"{(t, s)} is not an S0-coprime pair")
    fa = P.a * P.p_set(P.A, t, s)
    fb = P.b * P.p_set(P.B, t, s)
    assert fa * fb == P.d * P.p_set(P.full, t, s)
    return ConicTorsor(fa, fb, P.s0)


def bad_places(P: Pencil) -> PlaceSet:
    """Primes outside S0 dividing some Delta, d or 2, or killing p_I on P^1(F_v)."""
    primes = {2} | set(factorize(P.d)[1])
    for i in range(P.size):
        for j in range(i + 1, P.size):
            primes |= set(factorize(P.delta(i, j))[1])
    v = 3
    while v + 1 <= P.size:
        if is_prime(v):
            pts = [(1, s) for s in range(v)] + [(0, 1)]
            if all(P.p_set(P.full, t, s) % v == 0 for t, s in pts):
                primes.add(v)
        v += 1
    return PlaceSet(False, tuple(sorted(p for p in primes if p not in P.s0)))


# ----------------------------------------------- square-class linear algebra

def class_labels(values: Iterable[int]) -> tuple:
    primes = set()
    for q in values:
        primes |= set(factorize(q)[1])
    return (-1,) + tuple(sorted(primes))


def class_vectors(values: Iterable[int], labels: tuple | None = None) -> list[int]:
    values = [sqfree(q) for q in values]
    labels = labels or class_labels(values)
    return [class_to_vector(q, labels) for q in values]


def class_rank(values: Iterable[int]) -> int:
    return len(rref(class_vectors(list(values))))
