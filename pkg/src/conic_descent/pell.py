"""Generalized Pell equations X^2 - D*Y^2 = N by continued fractions.

Fundamental solutions follow the LMM scheme: for each f with f^2 | N and
each square root z of D modulo |N/f^2|, expand (z + sqrt D)/|N/f^2| until a
complete quotient with Q = +-1 appears.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Optional

from .arith import factorize

__all__ = [
    "Budget", "BudgetExhausted", "is_square", "sqrt_mod", "fundamental_unit",
    "negative_unit", "lmm", "pell_solutions",
]


class BudgetExhausted(Exception):
    pass


class Budget:
    """Counter of elementary steps shared by one solve call."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExhausted(self.used)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


# ------------------------------------------------------------ square roots

def _tonelli(a: int, p: int) -> Optional[int]:
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _sqrt_prime_power(D: int, p: int, k: int) -> list[int]:
    mod = p ** k
    if p != 2 and D % p:
        r = _tonelli(D, p)
        if r is None:
            return []
        pk = p
        for _ in range(1, k):
            pk *= p
            r = (r - (r * r - D) * pow(2 * r, -1, pk)) % pk
        return sorted({r % mod, (-r) % mod})
    # lift all roots one power at a time
    roots = [z for z in range(p) if (z * z - D) % p == 0]
    pk = p
    for _ in range(1, k):
        nxt = pk * p
        roots = [z + t * pk for z in roots for t in range(p)
                 if ((z + t * pk) ** 2 - D) % nxt == 0]
        pk = nxt
    return sorted(roots)


def sqrt_mod(D: int, n: int) -> list[int]:
    """All z in [0, n) with z^2 = D mod n."""
    n = abs(n)
    if n == 1:
        return [0]
    roots, mod = [0], 1
    for p, k in factorize(n)[1].items():
        pk = p ** k
        local = _sqrt_prime_power(D, p, k)
        if not local:
            return []
        inv = pow(mod, -1, pk)
        roots = [(r + mod * ((s - r) * inv % pk)) for r in roots for s in local]
        mod *= pk
    return sorted(r % n for r in roots)


# ------------------------------------------------------- continued fractions

def _floor_quot(P: int, Q: int, sD: int) -> int:
    # floor((P + sqrt D)/Q) for non-square D with sD = isqrt(D)
    if Q > 0:
        return (P + sD) // Q
    return -((P + sD) // (-Q)) - 1


def _pqa(P0: int, Q0: int, D: int, budget: Optional[Budget]) -> Iterator[tuple]:
    """Yield (i, P_i, Q_i, G_{i-1}, B_{i-1}) for i = 0, 1, ..."""
    sD = math.isqrt(D)
    B2, B1 = 1, 0
    G2, G1 = -P0, Q0
    P, Q = P0, Q0
    i = 0
    while True:
        yield i, P, Q, G1, B1
        if budget is not None:
            budget.spend()
        a = _floor_quot(P, Q, sD)
        B2, B1 = B1, a * B1 + B2
        G2, G1 = G1, a * G1 + G2
        P = a * Q - P
        Q = (D - P * P) // Q
        i += 1


@lru_cache(maxsize=256)
def _period_unit(D: int, limit: int) -> Optional[tuple[int, int, int]]:
    budget = Budget(limit)
    try:
        for i, P, Q, G, B in _pqa(0, 1, D, budget):
            if i >= 1 and Q == 1:
                return G, B, i
    except BudgetExhausted:
        return None


def fundamental_unit(D: int, budget: Optional[Budget] = None) -> tuple[int, int]:
    """Least x, y > 0 with x^2 - D*y^2 = 1."""
    if D <= 0 or is_square(D):
        raise ValueError("D must be a positive non-square")
    limit = 10**7 if budget is None else max(budget.limit - budget.used, 1)
    res = _period_unit(D, limit)
    if res is None:
        if budget is not None:
            budget.spend(limit + 1)
        raise BudgetExhausted(limit)
    x, y, l = res
    if budget is not None:
        budget.spend(l)
    if l % 2:
        x, y = x * x + D * y * y, 2 * x * y
    return x, y


def negative_unit(D: int, budget: Optional[Budget] = None) -> Optional[tuple[int, int]]:
    """Least solution of x^2 - D*y^2 = -1, or None."""
    limit = 10**7 if budget is None else max(budget.limit - budget.used, 1)
    res = _period_unit(D, limit)
    if res is None:
        raise BudgetExhausted(limit)
    x, y, l = res
    return (x, y) if l % 2 else None


def _square_divisors(N: int) -> list[int]:
    fs = [1]
    for p, e in factorize(N)[1].items():
        fs = [f * p ** k for f in fs for k in range(e // 2 + 1)]
    return sorted(fs)


def lmm(D: int, N: int, budget: Optional[Budget] = None) -> list[tuple[int, int]]:
    """Fundamental solutions of X^2 - D*Y^2 = N, one per class."""
    if D <= 0 or is_square(D):
        raise ValueError("D must be a positive non-square")
    if N == 0:
        raise ValueError("N must be nonzero")
    neg = negative_unit(D, budget)
    out = set()
    for f in _square_divisors(abs(N)):
        m = N // (f * f)
        am = abs(m)
        for z in sqrt_mod(D, am):
            if z > am // 2:
                z -= am
            if am == 1:
                z = 0
            seen = set()
            for i, P, Q, G, B in _pqa(z, am, D, budget):
                if (P, Q) in seen:
                    break
                seen.add((P, Q))
                if i >= 1 and Q in (1, -1):
                    r, s = G, B
                    val = r * r - D * s * s
                    if val == m:
                        out.add((f * r, f * s))
                    elif val == -m and neg is not None:
                        t, u = neg
                        out.add((f * (r * t + s * D * u), f * (r * u + s * t)))
                    break
    return sorted(out)


def pell_solutions(D: int, N: int, budget: Optional[Budget] = None,
                   fund: Optional[list] = None) -> list[tuple[int, int]]:
    """Fundamental solutions normalized up to sign: list of (X, Y)."""
    fund = lmm(D, N, budget) if fund is None else fund
    for X, Y in fund:
        assert X * X - D * Y * Y == N
    return fund
