"""The conic a*x^2 + b*y^2 = 1 as a torsor under x^2 - d*y^2 = 1, d = -a*b.

S0-integral points correspond to elements a*x + sqrt(d)*y of norm a.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import (
    PlaceSet, factorize, local_conic_soluble, place_key, sqfree, valuation,
)
from .descent import (
    HypothesisError, NormOneTorus, class_to_vector, enlarge_base, selmer_group,
)
from .f2 import span
from .pell import Budget, BudgetExhausted, fundamental_unit, is_square, lmm

__all__ = [
    "ConicTorsor", "AdelicReport", "SolveResult", "adelic_report", "solve",
    "descend_to_S0", "hasse_certificate", "act", "DEFAULT_EFFORT",
]

DEFAULT_EFFORT = 10**5

POINT = "point"
NO_ADELIC = "no_adelic_point"
HASSE = "hasse_principle_guaranteed"
INCONCLUSIVE = "inconclusive"


def _s0_part(n: int, s0: PlaceSet) -> tuple[int, int]:
    """Split |n| = (S0 part) * (prime-to-S0 part)."""
    n = abs(n)
    inside = 1
    for p in s0.primes:
        while n % p == 0:
            n //= p
            inside *= p
    return inside, n


@dataclass(frozen=True)
class ConicTorsor:
    a: int
    b: int
    s0: PlaceSet

    def __post_init__(self):
        if not isinstance(self.s0, PlaceSet):
            object.__setattr__(self, "s0", PlaceSet.of(self.s0))
        if not self.s0.has_inf:
            raise ValueError("S0 must contain the real place")
        if self.a == 0 or self.b == 0:
            raise ValueError("coefficients must be nonzero")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))

    @property
    def d(self) -> int:
        """Parameter of the acting torus x^2 - d*y^2 = 1."""
        return -self.a * self.b

    @property
    def ideal(self) -> tuple[int, str]:
        return (self.a, f"sqrt({self.d})")

    def torus(self, strict: bool = False) -> NormOneTorus:
        return NormOneTorus(self.d, self.s0, strict=strict)

    def coprime(self) -> bool:
        return _s0_part(math.gcd(self.a, self.b), self.s0)[1] == 1

    def satisfies(self, x, y) -> bool:
        return self.a * Fraction(x) ** 2 + self.b * Fraction(y) ** 2 == 1

    def is_s0_integral(self, x, y) -> bool:
        for q in (Fraction(x), Fraction(y)):
            if _s0_part(q.denominator, self.s0)[1] != 1:
                return False
        return True


@dataclass(frozen=True)
class AdelicReport:
    places: tuple  # ((place, soluble), ...)

    @property
    def soluble(self) -> bool:
        return all(ok for _, ok in self.places)

    @property
    def first_failure(self):
        for v, ok in self.places:
            if not ok:
                return v
        return None


def adelic_report(z: ConicTorsor, support=None) -> AdelicReport:
    """Local solubility at S0 (over Q_v) and at v | 2ab off S0 (over Z_v).

    support, when given, is a set of primes known to contain every prime
    dividing ab; it spares factoring large coefficients."""
    out = [(v, local_conic_soluble(z.a, z.b, v)) for v in z.s0]
    if support is None:
        extra = set(factorize(z.a)[1]) | set(factorize(z.b)[1]) | {2}
    else:
        extra = {p for p in support if z.a % p == 0 or z.b % p == 0} | {2}
    for p in sorted(extra):
        if p not in z.s0:
            out.append((p, local_conic_soluble(z.a, z.b, p, integral=True)))
    out.sort(key=lambda t: place_key(t[0]))
    return AdelicReport(tuple(out))


@dataclass(frozen=True)
class SolveResult:
    status: str
    x: Optional[Fraction] = None
    y: Optional[Fraction] = None
    place: object = None
    witness: Optional[list] = None
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def found(self) -> bool:
        return self.status == POINT

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.status == POINT:
            out["x"], out["y"] = str(self.x), str(self.y)
        if self.place is not None:
            out["place"] = str(self.place)
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _point(z: ConicTorsor, x, y, stats) -> SolveResult:
    x, y = abs(Fraction(x)), abs(Fraction(y))
    if not z.satisfies(x, y) or not z.is_s0_integral(x, y):
        raise AssertionError(f"bad point {(x, y)} on {z}")
    return SolveResult(POINT, x, y, stats=stats)


def _twists(s0: PlaceSet):
    """S0-smooth positive integers in increasing order."""
    heap, seen = [1], {1}
    while heap:
        m = heapq.heappop(heap)
        yield m
        for p in s0.primes:
            if m * p not in seen:
                seen.add(m * p)
                heapq.heappush(heap, m * p)


def _solve_negative(z: ConicTorsor, m: int, budget: Budget):
    # a, b > 0: a*X^2 + b*Y^2 = m^2 has finitely many solutions
    a, b = z.a, z.b
    m2 = m * m
    best = None
    for X in range(math.isqrt(m2 // a) + 1):
        budget.spend()
        r = m2 - a * X * X
        if r % b == 0 and is_square(r // b):
            Y = math.isqrt(r // b)
            key = (Y, X)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    Y, X = best
    return Fraction(X, m), Fraction(Y, m)


def _solve_split(z: ConicTorsor, m: int, budget: Budget):
    # d = c^2: (X - cY)(X + cY) = a m^2 with X = a x
    c = math.isqrt(z.d)
    N = z.a * m * m
    best = None
    sign, fac = factorize(N)
    divisors = [1]
    for p, e in fac.items():
        divisors = [g * p ** k for g in divisors for k in range(e + 1)]
    for g in divisors:
        for g1 in (g, -g):
            budget.spend()
            g2 = N // g1
            if (g1 + g2) % 2 or c == 0:
                continue
            X, cY = (g1 + g2) // 2, (g2 - g1) // 2
            if cY % c:
                continue
            Y = cY // c
            if X % z.a == 0 or z.is_s0_integral(Fraction(X, z.a * m), 1):
                x, y = Fraction(X, z.a * m), Fraction(Y, m)
                if z.is_s0_integral(x, y):
                    key = (abs(Y), abs(X))
                    if best is None or key < best[0]:
                        best = (key, x, y)
    return None if best is None else best[1:]


def _mul(p, q, D: int, mod: int = 0):
    x = p[0] * q[0] + D * p[1] * q[1]
    y = p[0] * q[1] + p[1] * q[0]
    return (x % mod, y % mod) if mod else (x, y)


def _power(unit, k: int, D: int):
    if k < 0:
        unit, k = (unit[0], -unit[1]), -k
    out = (1, 0)
    while k:
        if k & 1:
            out = _mul(out, unit, D)
        unit = _mul(unit, unit, D)
        k >>= 1
    return out


def _good_exponents(start, unit, D: int, a0: int, budget: Budget) -> list[int]:
    """Exponents k (one period) with a0 | X for start * unit^k."""
    u = (unit[0] % a0, unit[1] % a0)
    cur = (start[0] % a0, start[1] % a0)
    first = cur
    ks, k = [], 0
    while True:
        budget.spend()
        if cur[0] == 0:
            ks.append(k)
        cur = _mul(cur, u, D, a0)
        k += 1
        if cur == first:
            return [j - k for j in ks] + ks


def _solve_positive(z: ConicTorsor, m: int, budget: Budget, direct: int):
    a, D = z.a, z.d
    # small solutions first: scan |y| directly
    for Y in range(direct + 1):
        budget.spend()
        r = m * m - z.b * Y * Y
        if r % a == 0 and is_square(r // a):
            return Fraction(math.isqrt(r // a), m), Fraction(Y, m)
    _, a0 = _s0_part(a, z.s0)
    N = a * m * m
    fund = lmm(D, N, budget)
    if not fund:
        return None
    unit = fundamental_unit(D, budget)
    best = None
    for X0, Y0 in fund:
        ks = _good_exponents((X0, Y0), unit, D, a0, budget) if a0 > 1 else [0]
        # the exponents nearest zero on either side give the smallest solutions
        near = [k for k in (max((k for k in ks if k <= 0), default=None),
                            min((k for k in ks if k >= 0), default=None)) if k is not None]
        for k in near:
            X, Y = _mul((X0, Y0), _power(unit, k, D), D)
            key = (abs(Y), abs(X))
            if best is None or key < best:
                best = key
    if best is None:
        return None
    Y, X = best
    return Fraction(X, a * m), Fraction(Y, m)


def solve(z: ConicTorsor, effort: int = DEFAULT_EFFORT) -> SolveResult:
    """Search for an S0-integral point; Inconclusive when effort runs out."""
    if effort <= 0:
        raise ValueError("effort must be positive")
    rep = adelic_report(z)
    if not rep.soluble:
        return SolveResult(NO_ADELIC, place=rep.first_failure)
    budget = Budget(effort)
    D = z.d
    direct = min(2000, max(10, effort // 100))
    try:
        for m in _twists(z.s0):
            if D < 0:
                res = _solve_negative(z, m, budget)
            elif is_square(D):
                res = _solve_split(z, m, budget)
            else:
                res = _solve_positive(z, m, budget, direct)
            if res is not None:
                return _point(z, res[0], res[1], {"twist": m, "steps": budget.used})
    except BudgetExhausted:
        pass
    return SolveResult(INCONCLUSIVE, stats={"steps": budget.used})


def act(z: ConicTorsor, point, unit) -> tuple[Fraction, Fraction]:
    """Multiply a*x + sqrt(d)*y by u + sqrt(d)*w."""
    x, y = map(Fraction, point)
    u, w = map(Fraction, unit)
    if u * u - z.d * w * w != 1:
        raise ValueError("not a point of the torus")
    return u * x - z.b * w * y, z.a * w * x + u * y


def descend_to_S0(z: ConicTorsor, x, y) -> tuple[Fraction, Fraction]:
    """Check that a point over the enlarged base is already S0-integral."""
    t = z.torus()
    if t.violations():
        raise HypothesisError(f"base assumption fails at {t.violations()}")
    x, y = Fraction(x), Fraction(y)
    if not z.satisfies(x, y):
        raise ValueError("not a point of the torsor")
    s = enlarge_base(t)
    for v in s.primes:
        if v in z.s0:
            continue
        for q in (x, y):
            if q != 0 and valuation(q, v) < 0:
                raise HypothesisError(f"point is not integral at {v}")
    for q in (x, y):
        if not z.is_s0_integral(q, 0):
            raise HypothesisError("point has denominators outside S")
    return x, y


def hasse_certificate(z: ConicTorsor) -> SolveResult:
    t = z.torus()
    if t.violations():
        raise HypothesisError(f"base assumption fails at {t.violations()}")
    rep = adelic_report(z)
    if not rep.soluble:
        return SolveResult(NO_ADELIC, place=rep.first_failure)
    sel = selmer_group(t)
    gen = span([class_to_vector(sqfree(t.d), sel.labels)], len(sel.labels))
    witness = [sorted(b) for b in sel.dual_selmer.with_labels(sel.labels).labeled_basis()]
    if sel.dual_selmer == gen:
        return SolveResult(HASSE, witness=witness)
    return SolveResult(INCONCLUSIVE, witness=witness)
