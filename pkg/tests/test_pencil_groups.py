import random

from hypothesis import assume, given, settings, strategies as st

from conic_descent.pencil import (
    FormalClass, Pencil, compute_GD, compute_GDhat, condition_D, lemma_explicit_conditions,
    vertical_brauer_basis,
)
from conic_descent.pencil.groups import compute_G_i, in_G_i
from conftest import random_pencil
from oracles import group_GD_naive, rank_f2_classes, sqfree_naive, span_set

seeds = st.integers(0, 10**6)


def _naive(P, hat=False):
    A = {i for i in range(P.size) if P.A >> i & 1}
    return {FormalClass(c, sum(1 << i for i in J))
            for c, J in group_GD_naive(P.forms, A, P.a, P.b, hat)}


def test_example_groups(example_pencil):
    P = example_pencil
    gd = {FormalClass(1, 0), FormalClass(1, 0b0011), FormalClass(1, 0b1111), FormalClass(1, 0b1100)}
    assert compute_GD(P) == gd == _naive(P)
    assert compute_GDhat(P) == {FormalClass(1, 0), FormalClass(-1, 0b1111)} == _naive(P, True)
    cd = condition_D(P)
    assert cd.holds and cd.witness is None


@settings(max_examples=25)
@given(seeds)
def test_groups_match_brute_force(seed):
    P = random_pencil(random.Random(seed), coeff=4, ab=2)
    assert compute_GD(P) == _naive(P)
    assert compute_GDhat(P) == _naive(P, hat=True)


@given(seeds)
def test_forced_elements(seed):
    P = random_pencil(random.Random(seed))
    gd, gdh = compute_GD(P), compute_GDhat(P)
    for x in (FormalClass(1, 0), FormalClass(P.a, P.A), FormalClass(P.d, P.full)):
        assert x in gd
    assert FormalClass(-P.d, P.full) in gdh


@given(seeds)
def test_G_i_is_a_group_of_size_twice_even_subsets(seed):
    P = random_pencil(random.Random(seed))
    for i in range(P.size):
        g = compute_G_i(P, i)
        assert len(g) == 2 ** (P.size - 1) * (1 if P.aDA[i] == 1 else 2)
        assert all(in_G_i(P, x, i) for x in g)
        assert all(x * y in g for x in list(g)[:6] for y in list(g)[:6])
    assert not in_G_i(P, FormalClass(1, 0b1), 0)  # odd subsets never belong


def test_explicit_conditions_example(example_pencil):
    ec = lemma_explicit_conditions(example_pencil)
    assert ec.cond1 and ec.cond2 and ec.rank1 == ec.target1 == 7
    assert rank_f2_classes([-1, 3, 10, 19, 11, 23, 7]) == 7


@settings(max_examples=30)
@given(seeds)
def test_explicit_chain(seed):
    P = random_pencil(random.Random(seed), coeff=12, ab=5)
    # the Brauer part of the chain uses cond2 at J = A, which needs A != {}, I
    assume(P.A not in (0, P.full))
    ec = lemma_explicit_conditions(P)
    if ec.cond1:
        assert ec.cond2
    if ec.cond2:
        assert condition_D(P).holds
        assert vertical_brauer_basis(P).basis == (P.full,)


@given(seeds)
def test_cond1_rank_matches_elimination(seed):
    P = random_pencil(random.Random(seed))
    from itertools import combinations
    deltas = [P.delta(i, j) for i, j in combinations(range(P.size), 2)]
    full = rank_f2_classes([-1, *deltas, P.a, P.b])
    ab = rank_f2_classes([P.a, P.b])
    assert lemma_explicit_conditions(P).rank1 == full - ab


@given(seeds)
def test_brauer_basis_is_kernel(seed):
    P = random_pencil(random.Random(seed))
    basis = vertical_brauer_basis(P)
    assert P.full in basis
    for eps in range(1 << P.size):
        prod = 1
        for i in range(P.size):
            if eps >> i & 1:
                prod *= P.aDA[i]
        assert (eps in basis) == (sqfree_naive(prod) == 1)


def test_brauer_basis_with_equal_residues():
    # [a D^A_1] = [a D^A_3] = [-1], so e_1 + e_3 lies in the kernel
    P = Pencil(((1, 1), (-2, -1), (-5, -1), (1, -2)), {2, 3}, 3, 3, ["inf", 2])
    assert P.aDA == (-1, -5, -1, -5)
    basis = vertical_brauer_basis(P)
    assert 0b0101 in basis and basis.rank == 2
    assert set(basis.elements()) == span_set([0b0101, 0b1010])


def test_chain_needs_a_proper_partition():
    # A = I: every [a D^A_i] is [d] = 1, so every eps is a vertical class
    P = Pencil(((3, -5), (-4, 5), (-1, -4), (3, 4)), {0, 1, 2, 3}, 1, 1, ["inf", 2])
    ec = lemma_explicit_conditions(P)
    assert ec.cond1 and ec.cond2 and condition_D(P).holds
    assert vertical_brauer_basis(P).rank == 4
