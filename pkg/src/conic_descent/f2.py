"""Linear algebra over GF(2) with vectors packed into Python ints.

Bit i of an int is coordinate i. Subspaces keep a canonical reduced row
echelon basis, so two subspaces are equal iff their bases are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

__all__ = [
    "F2Subspace", "F2Pairing", "rref", "span", "intersect", "nullspace",
    "left_kernel", "right_kernel", "orthogonal_complement", "contains",
    "parity", "preimage", "bits",
]


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def bits(x: int) -> Iterator[int]:
    i = 0
    while x:
        if x & 1:
            yield i
        x >>= 1
        i += 1


def rref(vectors: Iterable[int]) -> tuple[int, ...]:
    """Canonical basis: pivots are leading bits, cleared in all other rows."""
    rows: list[int] = []
    for v in vectors:
        for r in rows:
            if v ^ r < v:
                v ^= r
        if v:
            top = 1 << (v.bit_length() - 1)
            rows = [r ^ v if r & top else r for r in rows]
            rows.append(v)
    return tuple(sorted(rows, reverse=True))


def _reduce(v: int, basis: Sequence[int]) -> int:
    for r in basis:
        if v ^ r < v:
            v ^= r
    return v


@dataclass(frozen=True)
class F2Subspace:
    dim: int
    basis: tuple[int, ...]
    labels: Optional[tuple] = None

    def __post_init__(self):
        for v in self.basis:
            if v >> self.dim:
                raise ValueError("vector longer than ambient dimension")
        if rref(self.basis) != self.basis:
            object.__setattr__(self, "basis", rref(self.basis))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, x: int) -> bool:
        return _reduce(x, self.basis) == 0

    def __le__(self, other: "F2Subspace") -> bool:
        _check(self, other)
        return all(v in other for v in self.basis)

    def __eq__(self, other):
        if not isinstance(other, F2Subspace):
            return NotImplemented
        return self.dim == other.dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim, self.basis))

    def __add__(self, other: "F2Subspace") -> "F2Subspace":
        _check(self, other)
        return F2Subspace(self.dim, rref(self.basis + other.basis), self.labels)

    def elements(self) -> Iterator[int]:
        for mask in range(1 << self.rank):
            v = 0
            for i in bits(mask):
                v ^= self.basis[i]
            yield v

    def with_labels(self, labels) -> "F2Subspace":
        return F2Subspace(self.dim, self.basis, tuple(labels))

    def labeled_basis(self) -> list[list]:
        labels = self.labels or tuple(range(self.dim))
        return [[labels[i] for i in bits(v)] for v in self.basis]

    @classmethod
    def full(cls, dim: int, labels=None) -> "F2Subspace":
        return cls(dim, tuple(1 << i for i in range(dim)), labels)

    @classmethod
    def zero(cls, dim: int, labels=None) -> "F2Subspace":
        return cls(dim, (), labels)


def _check(a: F2Subspace, b: F2Subspace) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch {a.dim} != {b.dim}")


def span(vectors: Iterable[int], dim: int, labels=None) -> F2Subspace:
    return F2Subspace(dim, rref(vectors), labels)


def contains(a: F2Subspace, x: int) -> bool:
    return x in a


def nullspace(rows: Sequence[int], ncols: int) -> list[int]:
    """All x in GF(2)^ncols with parity(row & x) = 0 for every row."""
    basis = rref(rows)
    pivots = {r.bit_length() - 1: r for r in basis}
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        x = 1 << free
        for p, r in pivots.items():
            if r >> free & 1:
                x |= 1 << p
        out.append(x)
    return out


def intersect(a: F2Subspace, b: F2Subspace) -> F2Subspace:
    # Zassenhaus: rows (u|u) for u in A and (w|0) for w in B
    _check(a, b)
    n = a.dim
    rows = rref([(u << n) | u for u in a.basis] + [w << n for w in b.basis])
    inter = [r for r in rows if r >> n == 0]
    return F2Subspace(n, rref(inter), a.labels)


@dataclass(frozen=True)
class F2Pairing:
    """Bilinear map U x V -> GF(2); rows[i] is the pairing of e_i with V."""
    rows: tuple[int, ...]
    dim_left: int
    dim_right: int

    def __post_init__(self):
        if len(self.rows) != self.dim_left:
            raise ValueError("row count must equal left dimension")
        if any(r >> self.dim_right for r in self.rows):
            raise ValueError("row longer than right dimension")

    def left_image(self, u: int) -> int:
        out = 0
        for i in bits(u):
            out ^= self.rows[i]
        return out

    def right_image(self, v: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            if parity(r & v):
                out |= 1 << i
        return out

    def __call__(self, u: int, v: int) -> int:
        return parity(self.left_image(u) & v)

    def transpose(self) -> "F2Pairing":
        cols = [0] * self.dim_right
        for i, r in enumerate(self.rows):
            for j in bits(r):
                cols[j] |= 1 << i
        return F2Pairing(tuple(cols), self.dim_right, self.dim_left)

    def is_nondegenerate(self) -> bool:
        return self.dim_left == self.dim_right and len(rref(self.rows)) == self.dim_left


def _combine(coeffs: int, basis: Sequence[int]) -> int:
    v = 0
    for i in bits(coeffs):
        v ^= basis[i]
    return v


def left_kernel(p: F2Pairing, a: F2Subspace, b: F2Subspace) -> F2Subspace:
    """{u in A : p(u, w) = 0 for all w in B}."""
    if a.dim != p.dim_left or b.dim != p.dim_right:
        raise ValueError("pairing and subspaces disagree on dimensions")
    imgs = [p.left_image(u) for u in a.basis]
    rows = []
    for w in b.basis:
        r = 0
        for k, g in enumerate(imgs):
            if parity(g & w):
                r |= 1 << k
        rows.append(r)
    sols = nullspace(rows, a.rank)
    return F2Subspace(a.dim, rref(_combine(c, a.basis) for c in sols), a.labels)


def right_kernel(p: F2Pairing, a: F2Subspace, b: F2Subspace) -> F2Subspace:
    """{w in B : p(u, w) = 0 for all u in A}."""
    return left_kernel(p.transpose(), b, a)


def orthogonal_complement(a: F2Subspace, p: F2Pairing, side: str = "left") -> F2Subspace:
    """Complement of A under p; side says which factor A lives in."""
    if side == "left":
        if a.dim != p.dim_left:
            raise ValueError("dimension mismatch")
        rows = [p.left_image(u) for u in a.basis]
        n = p.dim_right
    elif side == "right":
        if a.dim != p.dim_right:
            raise ValueError("dimension mismatch")
        rows = [p.right_image(v) for v in a.basis]
        n = p.dim_left
    else:
        raise ValueError("side must be 'left' or 'right'")
    return F2Subspace(n, rref(nullspace(rows, n)))


def preimage(images: Sequence[int], dim_out: int, target: F2Subspace) -> F2Subspace:
    """{x : L x in target} for the linear map sending e_k to images[k]."""
    if target.dim != dim_out:
        raise ValueError("dimension mismatch")
    # rows of C span the standard-dot complement of target; solve C L x = 0
    comp = nullspace(target.basis, dim_out)
    rows = []
    for c in comp:
        r = 0
        for k, img in enumerate(images):
            if parity(c & img):
                r |= 1 << k
        rows.append(r)
    n = len(images)
    return F2Subspace(n, rref(nullspace(rows, n)))
