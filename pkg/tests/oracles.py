"""Independent brute-force oracles for the test suite.

Nothing here imports the package. Each oracle decides its question by
enumeration or by the most elementary definition available, so agreement
with the library is evidence rather than a restatement.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np


def trial_factor(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime_naive(n: int) -> bool:
    return n > 1 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def sqfree_naive(n: int) -> int:
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in trial_factor(n).items():
        if e % 2:
            out *= p
    return sign * out


def val(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def legendre_enum(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if a in {x * x % p for x in range(1, p)} else -1


@lru_cache(maxsize=None)
def _squares(mod: int) -> np.ndarray:
    table = np.zeros(mod, dtype=bool)
    z = np.arange(mod, dtype=np.int64)
    table[(z * z) % mod] = True
    return table


@lru_cache(maxsize=None)
def _isotropic_mod(a: int, b: int, p: int, k: int) -> bool:
    """z^2 = a x^2 + b y^2 mod p^k with (x, y) normalised to (1, *) or (*, 1)."""
    mod = p ** k
    sq = _squares(mod)
    t = np.arange(mod, dtype=np.int64)
    t2 = (t * t) % mod
    if sq[(a + b * t2) % mod].any():  # x = 1
        return True
    return bool(sq[(a * t2 + b) % mod].any())  # y = 1


def hilbert_enum(a: int, b: int, p) -> int:
    """0 iff z^2 = a x^2 + b y^2 has a nonzero solution over Q_p (or R)."""
    if p == "inf":
        return 1 if a < 0 and b < 0 else 0
    a, b = sqfree_naive(a), sqfree_naive(b)
    # a primitive solution can be scaled so that x or y is 1, where the
    # gradient has valuation at most val(2) + max(val a, val b); Hensel then
    # needs agreement modulo p^(2m+1)
    m = val(2, p) + max(val(a, p), val(b, p))
    k = 2 * m + 1
    return 0 if _isotropic_mod(a % p ** k, b % p ** k, p, k) else 1


@lru_cache(maxsize=None)
def integral_table(p: int) -> np.ndarray:
    """T[a mod p, b mod p]: a x^2 + b y^2 = 1 has a solution mod p.

    For odd p any Z_p point has a x^2 or b y^2 a unit, so the gradient is a
    unit and a solution mod p lifts; conversely a solution mod p has a
    nonvanishing gradient because the two terms cannot both vanish."""
    r = np.arange(p, dtype=np.int64)
    sq = np.unique((r * r) % p)
    a = r[:, None, None, None]
    b = r[None, :, None, None]
    x2 = sq[None, None, :, None]
    y2 = sq[None, None, None, :]
    hit = ((a * x2 + b * y2) % p) == 1
    return hit.any(axis=(2, 3))


def integral_soluble_enum(a: int, b: int, p: int) -> bool:
    if p <= 60:
        return bool(integral_table(p)[a % p, b % p])
    # one loop over x: is 1 - a x^2 of the form b y^2 mod p
    x = np.arange(p, dtype=np.int64)
    rest = (1 - (a % p) * ((x * x) % p)) % p
    y2 = np.unique((x * x) % p)
    return bool(np.isin(rest, ((b % p) * y2) % p).any())


def is_local_square_naive(q: int, p) -> bool:
    if p == "inf":
        return q > 0
    v = val(q, p)
    if v % 2:
        return False
    u = q // p ** v
    if p == 2:
        return u % 8 == 1
    return legendre_enum(u, p) == 1


def splits_everywhere_above(a: int, d: int, v) -> bool:
    """Every place of Q(sqrt d) over v splits in the extension by sqrt a."""
    if is_local_square_naive(d, v):
        return is_local_square_naive(a, v)
    # the quadratic local field: squares from Q_v are a and a*d up to squares
    return is_local_square_naive(a, v) or is_local_square_naive(sqfree_naive(a * d), v)


# ------------------------------------------------------------- GF(2) brute

def span_set(vectors) -> frozenset:
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return frozenset(out)


def all_vectors(dim: int):
    return range(1 << dim)


def dot(u: int, v: int) -> int:
    return bin(u & v).count("1") & 1


def classes_on(labels) -> list[int]:
    """Every square-free class supported on the given labels (-1 and primes)."""
    out = []
    for bits in product((0, 1), repeat=len(labels)):
        c = 1
        for b, l in zip(bits, labels):
            if b:
                c *= l
        out.append(c)
    return out


# ------------------------------------------------------------- pencils

def form_value(form, t: int, s: int) -> int:
    c, d = form
    return c * t + d * s


def d_value_naive(forms, A: set, a: int, b: int, J: set, i: int, hat: bool = False) -> int:
    """D^J_i (or its hatted twin) straight from the definition, as an integer."""
    t, s = forms[i][1], -forms[i][0]
    if i not in J:
        out = 1
        for j in J:
            out *= form_value(forms[j], t, s)
        return out
    out = -a * b if hat else a * b
    for j in range(len(forms)):
        if j not in J:
            out *= form_value(forms[j], t, s)
    return out


def even_subsets(n: int):
    for bits_ in product((0, 1), repeat=n):
        if sum(bits_) % 2 == 0:
            yield {i for i in range(n) if bits_[i]}


def group_GD_naive(forms, A: set, a: int, b: int, hat: bool = False) -> set:
    """Brute force: (c, J) with [c D^J_i] in {1, [a D^A_i]} for every i."""
    n = len(forms)
    adA = [sqfree_naive(a * d_value_naive(forms, A, a, b, A, i)) for i in range(n)]
    primes = set()
    for J in even_subsets(n):
        for i in range(n):
            primes |= set(trial_factor(d_value_naive(forms, A, a, b, J, i, hat)))
    for x in adA:
        primes |= set(trial_factor(x))
    labels = [-1] + sorted(primes)
    out = set()
    for J in even_subsets(n):
        for c in classes_on(labels):
            ok = all(sqfree_naive(c * d_value_naive(forms, A, a, b, J, i, hat)) in (1, adA[i])
                     for i in range(n))
            if ok:
                out.add((c, frozenset(J)))
    return out


def rank_f2_classes(values) -> int:
    """Rank of square classes by Gaussian elimination over prime supports."""
    vecs = []
    for q in values:
        v = {-1} if q < 0 else set()
        v |= {p for p, e in trial_factor(q).items() if e % 2}
        vecs.append(v)
    rank = 0
    rows = [set(v) for v in vecs]
    while rows:
        pivot_row = next((r for r in rows if r), None)
        if pivot_row is None:
            break
        rows.remove(pivot_row)
        piv = min(pivot_row, key=lambda x: (x != -1, x))
        rows = [r ^ pivot_row if piv in r else r for r in rows]
        rank += 1
    return rank
