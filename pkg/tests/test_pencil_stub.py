import random

from hypothesis import given, settings, strategies as st

from conic_descent.arith import INF, valuation
from conic_descent.pencil import find_stub, suitable_stub
from conic_descent.pencil.groups import compute_G_i, compute_GD
from conic_descent.pencil.model import bad_places
from conic_descent.pencil.stub import (
    T0_places, _uniformizer_point, build_S_D, local_candidates, suitability,
)
from conftest import random_pencil
from oracles import hilbert_enum, integral_soluble_enum, is_local_square_naive

seeds = st.integers(0, 10**6)


def _o(v):
    return "inf" if v is INF else v


def test_example_stub_is_suitable(example_pencil):
    P = example_pencil
    ss = suitable_stub(P)
    assert ss.suitable
    assert P.s0 | bad_places(P) <= ss.T
    assert ss.twist == 1
    assert [w.place for w in ss.witnesses] == [17, 29, 31, 37, 43]
    assert set(ss.to_json()) == {"T", "twist", "points", "witnesses", "flags"}


def test_stub_points_are_locally_soluble(example_pencil):
    P = example_pencil
    stub = suitable_stub(P).stub
    for pt in stub.points:
        fa = P.a * P.p_set(P.A, pt.t, pt.s)
        fb = P.b * P.p_set(P.B, pt.t, pt.s)
        if pt.place in P.s0:
            assert hilbert_enum(fa, fb, _o(pt.place)) == 0
        else:
            assert integral_soluble_enum(fa, fb, pt.place)
            assert valuation(P.d * P.p_set(P.full, pt.t, pt.s), pt.place) <= 1


def test_two_split_places_in_s0(example_pencil):
    P = example_pencil
    stub = find_stub(P)
    split = [v for v in P.s0
             if is_local_square_naive(-P.d * P.p_set(P.full, stub.at(v).t, stub.at(v).s), _o(v))]
    assert len(split) >= 2


@settings(max_examples=25)
@given(seeds)
def test_candidates_satisfy_local_clauses(seed):
    P = random_pencil(random.Random(seed))
    for v in list(P.s0 | bad_places(P))[:4]:
        for c in local_candidates(P, v)[:8]:
            t, s = c.point.t, c.point.s
            val = P.d * P.p_set(P.full, t, s)
            assert val != 0
            fa, fb = P.a * P.p_set(P.A, t, s), P.b * P.p_set(P.B, t, s)
            if v in P.s0:
                assert hilbert_enum(fa, fb, _o(v)) == 0
                assert c.split == is_local_square_naive(-val, _o(v))
            else:
                assert valuation(val, v) <= 1
                assert integral_soluble_enum(fa, fb, v) if v != 2 else True


@settings(max_examples=25)
@given(seeds)
def test_find_stub_flags(seed):
    P = random_pencil(random.Random(seed))
    stub = find_stub(P)
    if stub is None:
        return
    flags = suitability(P, stub)
    for k in ("1_nonzero", "2_valuation", "3_two", "4_split"):
        assert flags[k], k


def test_uniformizer_point(example_pencil):
    P = example_pencil
    for i in range(P.size):
        for w in (13, 17, 41):
            pt = _uniformizer_point(P, i, w)
            assert valuation(P.p(i, pt.t, pt.s), w) == 1
            assert pt.place == w


def test_witnesses_exclude_every_outstanding_class(example_pencil):
    P = example_pencil
    gd = compute_GD(P)
    todo = set()
    for i in range(P.size):
        todo |= compute_G_i(P, i) - gd
    wits = build_S_D(P)
    for x in todo:
        assert any(
            is_local_square_naive(P.aDA[w.index], w.place)
            and not is_local_square_naive(x.c * P.D_value(x.J, w.index), w.place)
            for w in wits), x
    for w in wits:
        assert w.place not in P.s0 and w.place not in bad_places(P)


def test_T0_places(example_pencil):
    P = example_pencil
    stub = suitable_stub(P).stub
    T0 = T0_places(P, stub)
    assert P.s0 <= T0 <= stub.places
    for pt in stub.points:
        if pt.place not in P.s0:
            in_t0 = valuation(P.d * P.p_set(P.full, pt.t, pt.s), pt.place) == 1
            assert (pt.place in T0) == in_t0


def test_suitability_detects_missing_witness(example_pencil):
    P = example_pencil
    ss = suitable_stub(P)
    short = type(ss.stub)(tuple(p for p in ss.stub.points if p.place != 17), P.s0)
    flags = suitability(P, short, list(ss.witnesses))
    assert not flags["6_witnesses"]
