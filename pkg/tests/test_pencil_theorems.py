import json
from math import isqrt, prod

import pytest

from conic_descent.pencil import VARIANTS, Pencil, ShapeError, theorem_check

from oracles import sqfree_naive

DEPENDENT = ((-3, -2), (-5, -2), (-1, 4), (3, 4))


def _delta(forms, i, j):
    return forms[i][0] * forms[j][1] - forms[j][0] * forms[i][1]


def test_example_satisfies_intro_variant(example_pencil):
    rep = theorem_check(example_pencil, "main_intro")
    assert rep.holds
    assert rep["independence"].holds


@pytest.mark.parametrize("variant", VARIANTS)
def test_example_every_variant(example_pencil, variant):
    rep = theorem_check(example_pencil, variant)
    assert rep.holds
    doc = rep.to_json()
    assert doc["variant"] == variant and doc["all_hold"] is True
    json.dumps(doc)  # serialisable


def test_delta_table_carries_both_signs(example_pencil):
    tab = theorem_check(example_pencil, "main_intro").to_json()["delta"]
    assert set(tab) == {"1,2", "1,3", "1,4", "2,3", "2,4", "3,4"}
    for row in tab.values():
        a, b = row.values()
        assert a == -b
    assert tab["1,2"]["c_i d_j - c_j d_i"] == -3


def test_dependent_deltas_give_relation():
    P = Pencil(DEPENDENT, {0, 1}, 1, 1, ["inf", 2])
    hyp = theorem_check(P, "main_intro")["independence"]
    assert not hyp.holds
    names = hyp.witness["relation"]
    assert names
    # the witnessed classes multiply to a square
    idx = {f"Delta_{i + 1}{j + 1}": (i, j) for i in range(4) for j in range(i + 1, 4)}
    vals = [-1 if n == "-1" else _delta(DEPENDENT, *idx[n]) for n in names]
    q = prod(vals)
    assert q > 0 and isqrt(q) ** 2 == q
    assert sqfree_naive(q) == 1


def test_intro_shape_errors(example_pencil):
    F = example_pencil.forms
    with pytest.raises(ShapeError):
        theorem_check(Pencil(F + ((1, 7), (7, 1)), {0, 1}, 1, 1, ["inf", 2]), "main_intro")
    with pytest.raises(ShapeError):
        theorem_check(Pencil(F, {0, 1, 2, 3}, 1, 1, ["inf", 2]), "main_intro")
    with pytest.raises(ShapeError):
        theorem_check(Pencil(F, {0, 1}, 3, 1, ["inf", 2]), "main_intro")


@pytest.mark.parametrize("variant", VARIANTS[:3])
def test_two_required_in_s0(example_pencil, variant):
    P = Pencil(example_pencil.forms, {0, 1}, 1, 1, ["inf", 3])
    with pytest.raises(ShapeError):
        theorem_check(P, variant)


def test_main_3_rejects_square_factor(example_pencil):
    P = Pencil(example_pencil.forms, {0, 1}, 9, 1, ["inf", 2])
    with pytest.raises(ShapeError):
        theorem_check(P, "main_3")
    # a power of 2 is absorbed by S0
    theorem_check(Pencil(example_pencil.forms, {0, 1}, 4, 1, ["inf", 2]), "main_3")


def test_main_3_rejects_more_than_four(example_pencil):
    F = example_pencil.forms + ((1, 7), (7, 1))
    with pytest.raises(ShapeError):
        theorem_check(Pencil(F, {0, 1}, 1, 1, ["inf", 2]), "main_3")


def test_unknown_variant(example_pencil):
    with pytest.raises(ValueError):
        theorem_check(example_pencil, "main_9")
