from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conic_descent.f2 import (
    F2Pairing, F2Subspace, bits, intersect, left_kernel, nullspace, orthogonal_complement,
    parity, preimage, right_kernel, rref, span,
)
from oracles import all_vectors, dot, span_set


def vecs(dim, max_size=6):
    return st.lists(st.integers(0, (1 << dim) - 1), max_size=max_size)


@st.composite
def pairings(draw, nondegenerate=False):
    n = draw(st.integers(1, 5))
    m = n if nondegenerate else draw(st.integers(1, 5))
    rows = tuple(draw(st.lists(st.integers(0, (1 << m) - 1), min_size=n, max_size=n)))
    p = F2Pairing(rows, n, m)
    if nondegenerate and not p.is_nondegenerate():
        rows = tuple(1 << i for i in range(n))  # fall back to the dot product
        p = F2Pairing(rows, n, n)
    return p


def all_subspaces(dim):
    seen = set()
    for k in range(dim + 1):
        for gens in combinations(range(1, 1 << dim), k):
            s = span(gens, dim)
            if s.basis not in seen:
                seen.add(s.basis)
                yield s


def test_bits_and_parity():
    assert list(bits(0b10110)) == [1, 2, 4]
    assert parity(0b10110) == 1


def test_intersect_example():
    assert intersect(span([0b01, 0b10], 2), span([0b11], 2)) == span([0b11], 2)


def test_left_kernel_of_zero_pairing():
    p = F2Pairing((0, 0, 0), 3, 2)
    a = span([0b011, 0b100], 3)
    assert left_kernel(p, a, F2Subspace.full(2)) == a


@given(vecs(6))
def test_span_elements_match_brute_force(gens):
    s = span(gens, 6)
    assert set(s.elements()) == span_set(gens)
    assert s.rank == len(span_set(gens)).bit_length() - 1
    assert rref(s.basis) == s.basis


@given(vecs(6), vecs(6))
def test_canonical_basis_decides_equality(g1, g2):
    assert (span(g1, 6) == span(g2, 6)) == (span_set(g1) == span_set(g2))


@given(vecs(5), vecs(5))
def test_intersection_matches_brute_force(g1, g2):
    got = intersect(span(g1, 5), span(g2, 5))
    assert set(got.elements()) == span_set(g1) & span_set(g2)


@given(vecs(6), st.integers(1, 6))
def test_nullspace_matches_brute_force(rows, n):
    rows = [r & ((1 << n) - 1) for r in rows]
    want = {x for x in all_vectors(n) if all(dot(r, x) == 0 for r in rows)}
    assert span_set(nullspace(rows, n)) == want


@given(pairings(), st.data())
def test_kernels_match_brute_force(p, data):
    a = span(data.draw(vecs(p.dim_left)), p.dim_left)
    b = span(data.draw(vecs(p.dim_right)), p.dim_right)
    lk = {u for u in a.elements() if all(p(u, w) == 0 for w in b.elements())}
    rk = {w for w in b.elements() if all(p(u, w) == 0 for u in a.elements())}
    assert set(left_kernel(p, a, b).elements()) == lk
    assert set(right_kernel(p, a, b).elements()) == rk


@given(pairings(), st.data())
def test_preimage_matches_brute_force(p, data):
    n, m = p.dim_left, p.dim_right
    target = span(data.draw(vecs(m)), m)
    got = preimage(list(p.rows), m, target)
    want = {x for x in all_vectors(n) if p.left_image(x) in target}
    assert set(got.elements()) == want


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_complement_dimension_exhaustive(dim):
    # standard dot product and a twisted nondegenerate pairing
    dot_p = F2Pairing(tuple(1 << i for i in range(dim)), dim, dim)
    twisted = F2Pairing(tuple((1 << i) | (1 << ((i + 1) % dim)) * (i + 1 < dim)
                              for i in range(dim)), dim, dim)
    for p in (dot_p, twisted):
        assert p.is_nondegenerate()
        for a in all_subspaces(dim):
            for side in ("left", "right"):
                comp = orthogonal_complement(a, p, side)
                assert a.rank + comp.rank == dim


@pytest.mark.parametrize("dim", [1, 2, 3, 4, 5])
def test_double_complement_exhaustive(dim):
    rows = tuple((1 << i) | ((1 << (dim - 1)) if i == 0 and dim > 1 else 0) for i in range(dim))
    p = F2Pairing(rows, dim, dim)
    assert p.is_nondegenerate()
    for a in all_subspaces(dim):
        back = orthogonal_complement(orthogonal_complement(a, p, "left"), p, "right")
        assert back == a


@given(pairings(nondegenerate=True), st.data())
def test_complement_matches_brute_force(p, data):
    a = span(data.draw(vecs(p.dim_left)), p.dim_left)
    want = {w for w in all_vectors(p.dim_right) if all(p(u, w) == 0 for u in a.elements())}
    assert set(orthogonal_complement(a, p, "left").elements()) == want


def test_transpose_swaps_arguments():
    p = F2Pairing((0b101, 0b011), 2, 3)
    q = p.transpose()
    for u in range(4):
        for w in range(8):
            assert p(u, w) == q(w, u)


def test_subspace_order_and_sum():
    a, b = span([0b001], 3), span([0b010], 3)
    assert a <= a + b and not (a + b) <= a
    assert (a + b).rank == 2
    assert 0b011 in a + b


def test_errors():
    with pytest.raises(ValueError):
        intersect(span([1], 2), span([1], 3))
    with pytest.raises(ValueError):
        F2Pairing((0b1,), 2, 1)
    with pytest.raises(ValueError):
        F2Subspace(2, (0b100,))
    with pytest.raises(ValueError):
        orthogonal_complement(span([1], 2), F2Pairing((1, 2), 2, 2), "middle")


def test_labels():
    s = span([0b011], 2, labels=(-1, 3))
    assert s.labeled_basis() == [[-1, 3]]
