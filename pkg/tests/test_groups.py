import itertools
import random

import pytest
from hypothesis import given, strategies as st

from srlab.errors import CapExceeded, InvalidInput
from srlab.groups import (
    PSL2,
    SL2,
    ClassVector,
    ConjClass,
    GroupElement,
    a_invariant,
    classify_element,
    enumerate_group,
    get_group,
    nielsen_count,
    outer_twist,
)

from oracles import A5


def test_group_orders():
    assert len(enumerate_group(5, SL2)) == 120
    assert len(enumerate_group(5, PSL2)) == 60
    assert len(enumerate_group(7, SL2)) == 336
    assert len(set(enumerate_group(7, PSL2))) == 168


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_group(17, SL2)
    assert len(enumerate_group(17, PSL2, max_p=17)) == 17 * 288 // 2


def test_classify_examples():
    assert classify_element(GroupElement.from_rows([[1, 1], [0, 1]], 5)).label == "pA"
    assert classify_element(GroupElement.from_rows([[2, 0], [0, 3]], 5)).label == "C(1)"
    c = classify_element(GroupElement.from_rows([[0, 1], [-1, 0]], 7))
    assert c.kind == "Ct" and c.trace == 0


def test_psl2_canonical_representative():
    M = GroupElement(1, 1, 0, 1, 5, PSL2)
    N = GroupElement(-1, -1, 0, -1, 5, PSL2)
    assert M == N and M.entries == min((1, 1, 0, 1), (4, 4, 0, 4))


def test_determinant_checked():
    with pytest.raises(InvalidInput):
        GroupElement(1, 1, 1, 1, 5)


@pytest.mark.parametrize("p", (5, 7, 11, 13))
@pytest.mark.parametrize("flavor", (SL2, PSL2))
def test_class_equation(p, flavor):
    G = get_group(p, flavor)
    assert sum(G.class_size(c) for c in G.classes) == G.order == len(G.raw)
    expected = (p + 4) if flavor == SL2 else (p + 5) // 2
    assert len(G.classes) == expected
    for c in G.classes:
        # from centralizer orders; g ~ -g halves the class in PSL2
        size = {"C": p * (p + 1), "Ct": p * (p - 1), "pA": (p * p - 1) // 2,
                "pB": (p * p - 1) // 2}.get(c.kind)
        if size is None:
            continue
        if flavor == PSL2 and c.trace == 0:
            size //= 2
        assert G.class_size(c) == size, c


@pytest.mark.parametrize("p", (5, 7, 11, 13))
def test_class_traces_and_orders(p):
    G = get_group(p, SL2)
    for c in G.classes:
        for i in G.members[c][:5]:
            g = G.element(int(i))
            assert g.trace() == c.trace
            assert g.order() == c.element_order


@given(st.data())
def test_classify_constant_on_conjugacy_orbits(data):
    p = data.draw(st.sampled_from((5, 7, 11, 13)))
    flavor = data.draw(st.sampled_from((SL2, PSL2)))
    G = get_group(p, flavor)
    g = G.element(data.draw(st.integers(0, G.order - 1)))
    h = G.element(data.draw(st.integers(0, G.order - 1)))
    assert classify_element(h * g * h.inverse()) == classify_element(g)


def test_outer_twist_examples():
    v = ClassVector.parse(["pA", "pA", "C(1)"], 7)
    assert outer_twist(v).labels == ["pB", "pB", "C(1)"]
    w = ClassVector.parse(["C(1)", "C(2)", "Ct(1)"], 7)
    assert outer_twist(w) == w
    assert outer_twist(ClassVector.parse(["pA", "pB", "pA"], 7)).labels == ["pB", "pA", "pB"]


def test_outer_twist_is_conjugation_by_gl2():
    # conjugation by diag(n, 1), n a non-residue, realises the outer automorphism
    for p in (5, 7, 11):
        G = get_group(p, SL2)
        from srlab.algebra import smallest_nonresidue
        n, ninv = smallest_nonresidue(p), pow(smallest_nonresidue(p), -1, p)
        for c in G.classes:
            a, b, cc, d = G.raw[int(G.members[c][0])]
            twisted = classify_element(GroupElement(a, b * n, cc * ninv, d, p))
            assert twisted == outer_twist(ClassVector((c, c, c)))[0]


def test_a_invariant_examples():
    assert a_invariant(ConjClass.parse("C(1)", 29)) == 26
    assert a_invariant(ConjClass.parse("Ct(1)", 29)) == 28
    assert a_invariant(ConjClass.parse("pA", 29)) == 0
    with pytest.raises(InvalidInput):
        a_invariant(ConjClass.parse("-I", 29))


@pytest.mark.parametrize("p", (5, 7, 11, 13, 29, 31))
def test_a_invariant_even_and_in_range(p):
    for l in range(1, (p - 1) // 2):
        a = a_invariant(ConjClass(p, SL2, "C", l))
        assert a % 2 == 0 and 0 < a < p - 1
    for l in range(1, (p + 1) // 2):
        a = a_invariant(ConjClass(p, SL2, "Ct", l))
        assert a % 2 == 0 and 0 < a <= p - 1


def test_class_label_validation():
    with pytest.raises(InvalidInput):
        ConjClass.parse("C(3)", 7)          # l must be < (p-1)/2
    with pytest.raises(InvalidInput):
        ConjClass.parse("Ct(4)", 7)
    with pytest.raises(InvalidInput):
        ConjClass.parse("-I", 7, "psl2")
    with pytest.raises(InvalidInput):
        ConjClass.parse("X", 7)
    assert ConjClass.parse("C~(2)", 7).label == "Ct(2)"


def test_class_json():
    c = ConjClass.parse("C(1)", 5)
    assert c.to_json() == {"flavor": "SL2", "label": "C(1)", "order": 4, "p": 5, "trace": 0}


def test_nielsen_examples():
    assert nielsen_count(ClassVector.parse(["pA", "pA", "pB"], 7, PSL2)) == 0
    assert nielsen_count(ClassVector.parse(["pA", "pA", "pA"], 5, PSL2)) == 1
    assert nielsen_count(ClassVector.parse(["C(1)", "C(1)", "C(1)"], 5)) in (0, 2)


def test_nielsen_cap():
    with pytest.raises(CapExceeded):
        nielsen_count(ClassVector.parse(["pA", "pA", "pA"], 17))


@pytest.mark.parametrize("p", (5, 7))
def test_division_and_orbit_methods_agree(p):
    for flavor in (SL2, PSL2):
        G = get_group(p, flavor)
        vectors = list(itertools.product(G.noncentral_classes(), repeat=3))
        if p > 5:
            vectors = random.Random(p).sample(vectors, 25)
        for v in vectors:
            V = ClassVector(v)
            assert G.nielsen_count(V) == G.nielsen_count(V, method="orbits"), V


@pytest.mark.parametrize("p", (5, 7, 11))
def test_nielsen_invariant_under_outer_twist(p):
    G = get_group(p, SL2)
    cls = G.noncentral_classes()
    rng = random.Random(p)
    vectors = [ClassVector(tuple(rng.choice(cls) for _ in range(3))) for _ in range(40)]
    vectors.append(ClassVector.parse(["pA", "pA", "C(1)"], p))
    for v in vectors:
        assert G.nielsen_count(v) == G.nielsen_count(outer_twist(v))


def _a5_label_map(G, a5, five_a):
    """PSL_2(5) class -> A_5 class, matching orders; pA goes to five_a."""
    by_order = {}
    for cl in a5.classes:
        by_order.setdefault(a5.order(cl), []).append(cl)
    fives = by_order[5]
    out = {}
    for c in G.classes:
        o = c.element_order
        if o == 5:
            out[c] = fives[five_a] if c.kind == "pA" else fives[1 - five_a]
        else:
            (out[c],) = by_order[o]
    return out


def test_psl2_5_matches_a5_permutation_oracle():
    G = get_group(5, PSL2)
    a5 = A5()
    table = {v: G.nielsen_count(ClassVector(v))
             for v in itertools.product(G.classes, repeat=3)}
    for five_a in (0, 1):
        m = _a5_label_map(G, a5, five_a)
        for v, n in table.items():
            assert n == a5.nielsen(*(m[c] for c in v)), v
