from fractions import Fraction

import pytest

from srlab.algebra import QuadExtField
from srlab.errors import InvalidInput
from srlab.supersingular import is_supersingular_j, supersingular_j_oracle
from srlab.x0p import (
    CONVENTION_NOTE,
    build_x0p,
    generic_thickness,
    generic_thickness_terms,
    genus_x0p,
    thickness,
)

from oracles import genus_x0, supersingular_count

PRIMES = (5, 7, 11, 13, 17, 19, 23, 29, 31)


def crossing_js(fiber):
    return {c.j.index for c in fiber.crossings}


def test_p29_fiber():
    f = build_x0p(29)
    K = QuadExtField(29)
    assert crossing_js(f) == {K(0).index, K(2).index, K(25).index}
    assert f.intermediate["d"] == [{"at": 1728}]
    assert f.genus == 2
    assert {c.j.a: c.thickness for c in f.crossings} == {0: 3, 2: 1, 25: 1}


def test_p11_fiber():
    f = build_x0p(11)
    assert sorted(c.j.a for c in f.crossings) == sorted([0, 1728 % 11])
    assert f.genus == 1
    assert f.intermediate["d"] == []


def test_p13_fiber():
    f = build_x0p(13)
    assert [c.j.a for c in f.crossings] == [5]
    assert f.genus == 0
    assert f.intermediate["d"] == [{"at": 0}, {"at": 1728}]


@pytest.mark.parametrize("p", PRIMES)
def test_crossings_are_the_supersingular_set(p):
    f = build_x0p(p)
    assert crossing_js(f) == supersingular_j_oracle(p)
    assert len(f.crossings) == p // 12 + (p % 3 == 2) + (p % 4 == 3) == supersingular_count(p)


@pytest.mark.parametrize("p", PRIMES)
def test_genus_against_classical_formula(p):
    assert genus_x0p(p) == genus_x0(p)


def test_genus_examples():
    assert genus_x0p(29) == 2
    assert genus_x0p(23) == 2
    assert genus_x0p(13) == 0


@pytest.mark.parametrize("p", PRIMES)
def test_generic_thickness_is_one(p):
    first, second = generic_thickness_terms(p)
    assert first == Fraction(p, p + 1) and second == Fraction(1, p + 1)
    assert generic_thickness(p) == 1


@pytest.mark.parametrize("p", PRIMES)
def test_split_pairs_where_special_points_are_ordinary(p):
    d = build_x0p(p).intermediate["d"]
    assert ({"at": 0} in d) == (p % 3 == 1) == (not is_supersingular_j(p, 0))
    assert ({"at": 1728} in d) == (p % 4 == 1) == (not is_supersingular_j(p, 1728))


def test_thickness_examples():
    assert thickness(29, 2) == 1
    assert thickness(11, 0) == 3
    assert thickness(11, 1728 % 11) == 2
    with pytest.raises(InvalidInput):
        thickness(29, 1728)


def test_singularity_tags():
    f = build_x0p(11)
    assert {c.singularity for c in f.crossings} == {"A2", "A3"}


def test_fiber_json():
    doc = build_x0p(29).to_json()
    assert set(doc) >= {"p", "crossings", "genus", "intermediate", "convention_note"}
    assert doc["intermediate"]["a"] == doc["intermediate"]["b"] == 1
    assert len(doc["intermediate"]["c"]) == 3
    assert doc["convention_note"] == CONVENTION_NOTE
    assert "1728" in CONVENTION_NOTE and "j = 0" in CONVENTION_NOTE
