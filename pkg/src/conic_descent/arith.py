"""Exact arithmetic primitives over Q.

Factorization, valuations, square classes, Legendre and Hilbert symbols
and local solubility of the affine conic a*x^2 + b*y^2 = 1.

Hilbert symbols are additive: 0 means trivial, 1 means nontrivial.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Union

__all__ = [
    "INF", "Place", "PlaceSet", "SquareClass",
    "is_prime", "factorize", "primes_of", "sqfree", "square_class",
    "valuation", "legendre", "hilbert", "is_local_square",
    "local_conic_soluble", "next_prime", "parse_place", "place_key",
]

Rational = Union[int, Fraction]


class _RealPlace:
    __slots__ = ()

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __reduce__(self):
        return (_real_place, ())


def _real_place():
    return INF


INF = _RealPlace()
Place = Union[int, _RealPlace]


def place_key(v) -> int:
    """Sort key putting the real place first."""
    return -1 if v is INF else v


def parse_place(x) -> Place:
    if x is INF or (isinstance(x, str) and x.strip().lower() in ("inf", "oo", "infinity")):
        return INF
    p = int(x)
    if not is_prime(p):
        raise ValueError(f"{x!r} is not a prime")
    return p


# ---------------------------------------------------------------- primality

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_BOUND = 10**6


@lru_cache(maxsize=1)
def _sieve() -> tuple[int, ...]:
    n = _TRIAL_BOUND
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i::i] = bytes(len(range(i * i, n + 1, i)))
    return tuple(i for i in range(n + 1) if flags[i])


def _strong_probable_prime(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    # Selfridge parameters
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    U, V, Qk = 0, 2, 1
    inv2 = (n + 1) // 2
    for bit in bin(d)[2:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic below 3.3e24, BPSW above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    if n < 3_317_044_064_679_887_385_961_981:
        return all(_strong_probable_prime(n, b) for b in _SMALL_PRIMES)
    if math.isqrt(n) ** 2 == n:
        return False
    return _strong_probable_prime(n, 2) and _strong_lucas(n)


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    n = max(n, 1) + 1
    while not is_prime(n):
        n += 1
    return n


# ------------------------------------------------------------ factorization

def _rho(n: int) -> int:
    # Brent's variant; returns a nontrivial factor of composite odd n
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    f = _rho(n)
    _split(f, out)
    _split(n // f, out)


@lru_cache(maxsize=1 << 16)
def _factor_positive(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    for p in _sieve():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
            if n > 1 and is_prime(n):
                break
    _split(n, out)
    return tuple(sorted(out.items()))


def factorize(n: int) -> tuple[int, dict[int, int]]:
    """Return (sign, {prime: exponent}) with n = sign * prod p^e."""
    n = int(n)
    if n == 0:
        raise ValueError("cannot factorize 0")
    return (1 if n > 0 else -1), dict(_factor_positive(abs(n)))


def primes_of(q: Rational) -> list[int]:
    """Primes dividing numerator or denominator of q."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no prime support")
    ps = set(factorize(q.numerator)[1]) | set(factorize(q.denominator)[1])
    return sorted(ps)


# ----------------------------------------------------------- square classes

@lru_cache(maxsize=1 << 16)
def _sqfree_int(n: int) -> int:
    sign, fac = factorize(n)
    r = sign
    for p, e in fac.items():
        if e & 1:
            r *= p
    return r


def sqfree(q: Rational) -> int:
    """Square-free integer representative of q modulo squares."""
    if isinstance(q, Fraction):
        if q == 0:
            raise ValueError("zero has no square class")
        return _sqfree_int(q.numerator * q.denominator)
    if q == 0:
        raise ValueError("zero has no square class")
    return _sqfree_int(int(q))


@dataclass(frozen=True, order=True)
class SquareClass:
    """Element of Q*/Q*^2, stored as its square-free representative."""
    value: int

    def __post_init__(self):
        if self.value == 0 or _sqfree_int(self.value) != self.value:
            raise ValueError(f"{self.value} is not square-free")

    @property
    def sign(self) -> int:
        return 1 if self.value > 0 else -1

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(factorize(self.value)[1])

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        g = math.gcd(self.value, other.value)
        return SquareClass(self.value * other.value // (g * g))

    def __int__(self):
        return self.value

    def is_trivial(self) -> bool:
        return self.value == 1

    def __repr__(self):
        return f"[{self.value}]"


def square_class(q: Rational) -> SquareClass:
    return SquareClass(sqfree(q))


def valuation(q: Rational, p) -> int:
    if p is INF:
        raise ValueError("valuation at the real place is undefined")
    q = Fraction(q)
    if q == 0:
        raise ValueError("valuation of 0")

    def v(n):
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        return k

    return v(q.numerator) - v(q.denominator)


def _unit_part(q: Fraction, p: int) -> tuple[int, int]:
    """Write q = p^k * u with u a p-adic unit; return (k, integer u mod nothing)."""
    k = valuation(q, p)
    r = q / Fraction(p) ** k
    # r = n/m with p not dividing n, m; u = n*m has the same square class mod p
    return k, r.numerator * r.denominator


def legendre(a: int, p: int) -> int:
    if p == 2 or p < 2:
        raise ValueError("legendre needs an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# ---------------------------------------------------------- Hilbert symbols

def hilbert(a: Rational, b: Rational, v) -> int:
    """Additive Hilbert symbol <a,b>_v."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of 0")
    if v is INF:
        return 1 if (a < 0 and b < 0) else 0
    alpha, u = _unit_part(Fraction(a), v)
    beta, w = _unit_part(Fraction(b), v)
    if v == 2:
        eps_u, eps_w = ((u - 1) // 2) & 1, ((w - 1) // 2) & 1
        om_u, om_w = ((u * u - 1) // 8) & 1, ((w * w - 1) // 8) & 1
        return (eps_u * eps_w + alpha * om_w + beta * om_u) & 1
    alpha, beta = alpha & 1, beta & 1
    e = alpha * beta * ((v - 1) // 2)
    if beta and legendre(u, v) == -1:
        e += 1
    if alpha and legendre(w, v) == -1:
        e += 1
    return e & 1


def is_local_square(q: Rational, v) -> bool:
    if q == 0:
        raise ValueError("zero")
    if v is INF:
        return q > 0
    k, u = _unit_part(Fraction(q), v)
    if k & 1:
        return False
    if v == 2:
        return u % 8 == 1
    return legendre(u, v) == 1


# -------------------------------------------------------- conic solubility

@lru_cache(maxsize=1 << 14)
def _hensel_integral(a: int, b: int, p: int) -> bool:
    # A Z_p-point has a*x or b*y a unit, so the gradient (2ax, 2by) has
    # valuation m = val(2); a solution mod p^(2m+1) with that gradient lifts.
    k = 3 if p == 2 else 1
    mod = p ** k
    a, b = a % mod, b % mod
    for x in range(mod):
        ax = a * x % mod
        r = (1 - ax * x) % mod
        for y in range(mod):
            if (b * y * y - r) % mod == 0 and (ax % p or b * y % p):
                return True
    return False


def local_conic_soluble(a: Rational, b: Rational, v, integral: bool = False) -> bool:
    """Does a*x^2 + b*y^2 = 1 have a Q_v-point (or a Z_v-point if integral)?"""
    if a == 0 or b == 0:
        raise ValueError("coefficients must be nonzero")
    if not integral:
        return hilbert(a, b, v) == 0
    if v is INF:
        raise ValueError("integral solubility needs a finite place")
    a, b = Fraction(a), Fraction(b)
    if valuation(a, v) < 0 or valuation(b, v) < 0:
        raise ValueError(f"coefficients are not {v}-integral")
    # integer representatives congruent modulo a high power of v
    mod = v ** 8
    ai = a.numerator * pow(a.denominator, -1, mod) % mod
    bi = b.numerator * pow(b.denominator, -1, mod) % mod
    if v == 2 or v < 64:
        k = 3 if v == 2 else 1
        return _hensel_integral(ai % v**k, bi % v**k, v)
    # large odd v: the mod-v search reduces to residue tests
    pa, pb = ai % v == 0, bi % v == 0
    if pa and pb:
        return False
    if pa:
        return legendre(bi, v) == 1
    if pb:
        return legendre(ai, v) == 1
    return True


# ----------------------------------------------------------------- PlaceSet

@dataclass(frozen=True)
class PlaceSet:
    """A finite set of places of Q."""
    has_inf: bool
    primes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(sorted(set(int(p) for p in self.primes)))
        for p in ps:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def of(cls, places: Iterable) -> "PlaceSet":
        inf, ps = False, []
        for x in places:
            v = parse_place(x)
            if v is INF:
                inf = True
            else:
                ps.append(v)
        return cls(inf, tuple(ps))

    def __iter__(self) -> Iterator:
        if self.has_inf:
            yield INF
        yield from self.primes

    def __len__(self):
        return int(self.has_inf) + len(self.primes)

    def __contains__(self, v) -> bool:
        if v is INF:
            return self.has_inf
        return v in self.primes

    def __or__(self, other) -> "PlaceSet":
        other = other if isinstance(other, PlaceSet) else PlaceSet.of(other)
        return PlaceSet(self.has_inf or other.has_inf, self.primes + other.primes)

    def __sub__(self, other) -> "PlaceSet":
        other = other if isinstance(other, PlaceSet) else PlaceSet.of(other)
        return PlaceSet(self.has_inf and not other.has_inf,
                        tuple(p for p in self.primes if p not in other.primes))

    def __le__(self, other: "PlaceSet") -> bool:
        return all(v in other for v in self)

    def to_json(self) -> list:
        return [str(v) for v in self]

    def __repr__(self):
        return "{" + ", ".join(str(v) for v in self) + "}"
