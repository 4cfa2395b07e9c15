import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from srlab.algebra import Polynomial, QuadExtElement
from srlab.deformation import (
    INF,
    NEW,
    PRIMITIVE,
    WILD,
    Signature,
    admissible_u,
    build_datum,
    cartier_lhs,
    cartier_rhs,
    epsilon_power,
    epsilon_power_at_zero,
    epsilon_power_binomial,
    hypergeom_params,
    new_tail_count,
    solve_u,
    symmetric_u,
    u_at_zero_product,
    valid_signatures,
    verify_cartier,
    verify_ode,
)
from srlab.errors import InvalidInput

from oracles import hasse_coeffs, monic_ode_solutions

SMALL = (5, 7, 11, 13)
LARGE = (17, 19, 23, 29, 31)


def sig(p, *a):
    return Signature(p, *a)


# --- solve_u -------------------------------------------------------------------

def test_solve_u_examples():
    assert solve_u(sig(5, 0, 0, 0)).coeffs == (1, 4, 1)
    assert solve_u(sig(7, 0, 0, 0)).coeffs == (1, 2, 2, 1)
    assert solve_u(sig(29, 0, 0, 0)).coeffs == tuple(hasse_coeffs(29))


@pytest.mark.parametrize("p", SMALL + LARGE)
def test_full_sum_gives_constant(p):
    s = sig(p, (p - 1) // 2 - 1, (p - 1) // 2 + 1, 0)
    assert s.d == 0 and solve_u(s).coeffs == (1,)


def test_signature_validation():
    for bad in ((7, 1, 1, 1), (7, 6, 0, 0), (7, 4, 4, 0), (7, -2, 0, 0)):
        with pytest.raises(InvalidInput):
            Signature(*bad)
    with pytest.raises(InvalidInput):
        Signature(9, 0, 0, 0)


def test_hypergeom_params():
    hp = hypergeom_params(sig(29, 10, 14, 0))
    assert hp.A == (25 * pow(2, -1, 29)) % 29
    assert hp.C == 11
    assert hp.P0.coeffs == (0, 28, 1)
    assert hp.P1.coeffs == ((-11) % 29, 26)


# --- epsilon ---------------------------------------------------------------------

def test_epsilon_trivial_signature():
    for p in SMALL + LARGE:
        assert epsilon_power(sig(p, 0, 0, 0)) == 1


def test_epsilon_binomial_closed_form_values():
    assert epsilon_power_binomial(sig(29, 10, 14, 0)) == comb(14, 10) % 29 == 15
    assert epsilon_power_binomial(sig(7, 2, 2, 0)) == 6


@pytest.mark.parametrize("s", [(29, 10, 14, 0), (7, 2, 2, 0)])
def test_certified_epsilon_against_closed_form(s):
    # the identity certifies the computed constant and rejects the closed form
    S = sig(*s)
    u = solve_u(S)
    assert epsilon_power(S, u) == 1
    assert verify_cartier(S, u, epsilon_power(S, u))
    assert not verify_cartier(S, u, epsilon_power_binomial(S))


@pytest.mark.parametrize("p", SMALL + (17, 19))
def test_epsilon_is_the_unique_certified_constant(p):
    for S in valid_signatures(p):
        u = solve_u(S)
        e = epsilon_power(S, u)
        assert e == epsilon_power_at_zero(S, u)
        assert verify_cartier(S, u, e)
        assert not verify_cartier(S, u, e + 1)


def test_closed_form_at_a_boundary_signature():
    # both forms give 1 here
    S = sig(13, 4, 8, 0)
    assert epsilon_power(S) == 1
    assert epsilon_power_binomial(S) == comb(12 - 8, 4) % 13


# --- verify_ode / verify_cartier -----------------------------------------------------

def test_verify_ode_examples():
    assert verify_ode(sig(5, 0, 0, 0), Polynomial(5, (1, 4, 1)))
    assert verify_ode(sig(29, 0, 0, 0), Polynomial(29, hasse_coeffs(29)))
    for p in (5, 7, 13):
        S = sig(p, 0, 0, 0)
        assert not verify_ode(S, Polynomial(p, (0,) * S.d + (1,)))


def test_verify_cartier_examples():
    assert verify_cartier(sig(5, 0, 0, 0), Polynomial(5, (1, 4, 1)), 1)
    assert verify_cartier(sig(7, 0, 0, 0), Polynomial(7, (1, 2, 2, 1)), 1)
    assert not verify_cartier(sig(5, 0, 0, 0), Polynomial(5, (1, 1, 1)), 1)


def test_cartier_rejects_inadmissible_u():
    S = sig(5, 0, 0, 0)
    # (x - 1)^2 satisfies the bare identity for a shifted signature
    for bad in [(1, 3, 1), (0, 4, 1), (4, 4, 1), (1, 4, 0), (2, 3, 2)]:
        assert not admissible_u(S, Polynomial(5, bad))
        assert not verify_cartier(S, Polynomial(5, bad), 1)
    d0 = sig(7, 2, 2, 2)
    assert not verify_cartier(d0, Polynomial(7, (6,)), 1)


@pytest.mark.parametrize("p", (5, 7))
def test_structured_recursion_matches_generic_rational_route(p):
    for S in valid_signatures(p):
        u = solve_u(S)
        e = epsilon_power(S, u)
        assert cartier_lhs(S, u).cross_equal(cartier_rhs(S, e))


@given(st.sampled_from(list(valid_signatures(11))), st.integers(0, 10 ** 6))
def test_random_mutation_breaks_cartier(S, seed):
    rng = random.Random(seed)
    u = solve_u(S)
    e = epsilon_power(S, u)
    i = rng.randrange(S.d + 1)
    cs = list(u.coeffs)
    cs[i] = (cs[i] + rng.randrange(1, S.p)) % S.p
    assert not verify_cartier(S, Polynomial(S.p, cs), e)


# --- build_datum -------------------------------------------------------------------

def test_build_datum_examples():
    D = build_datum(sig(29, 0, 0, 0))
    assert len(D.new_points) == 14
    assert D.m_cover == 14
    assert [c.kind for c in D.criticals[:3]] == [WILD] * 3
    D = build_datum(sig(29, 10, 14, 0))
    assert D.d == 2 and len(D.new_points) == 2
    assert [c.kind for c in D.criticals[:3]] == [PRIMITIVE, PRIMITIVE, WILD]
    D = build_datum(sig(7, 2, 2, 2))
    assert D.d == 0 and D.new_points == [] and D.u.coeffs == (1,)


def test_new_tail_count_examples():
    assert new_tail_count(sig(29, 0, 0, 0)) == 14
    assert new_tail_count(sig(13, 4, 4, 4)) == 0
    assert new_tail_count(sig(13, 2, 2, 2)) == 3


def test_m_cover():
    assert sig(13, 2, 2, 2).m_cover == 6
    assert sig(13, 1, 1, 2).m_cover == 12


def _check_datum(D):
    S = D.signature
    p = S.p
    assert len(D.new_points) == S.d
    assert sum(c.kind in (WILD, PRIMITIVE) for c in D.criticals) == 3
    for c in D.criticals:
        assert c.sigma == Fraction(c.h, c.m)
        assert (c.kind == WILD) == (c.h == 0)
    for c in D.new_points:
        assert c.sigma == Fraction(p + 1, p - 1)
    assert D.u.coeffs[-1] == 1 and D.u.degree == S.d
    assert D.u(0) != 0 and D.u(1) != 0
    assert D.m_cover == ((p - 1) // 2 if S.all_even else p - 1)


@pytest.mark.parametrize("p", SMALL)
def test_every_small_signature_builds(p):
    for S in valid_signatures(p):
        _check_datum(build_datum(S))


@pytest.mark.parametrize("p", LARGE)
def test_random_large_signatures_build(p):
    sigs = list(valid_signatures(p))
    for S in random.Random(p).sample(sigs, 25):
        _check_datum(build_datum(S))


def test_new_points_over_fp2_come_in_conjugate_pairs():
    D = build_datum(sig(5, 0, 0, 0))
    taus = [c.tau for c in D.new_points]
    assert all(isinstance(t, QuadExtElement) for t in taus)
    assert taus[0].conjugate() == taus[1]


def test_wild_override():
    D = build_datum(sig(13, 0, 2, 4), wild=(False, False, False))
    assert D.criticals[0].kind == PRIMITIVE and D.criticals[0].sigma == 1
    with pytest.raises(InvalidInput):
        build_datum(sig(13, 0, 2, 4), wild=(False, True, False))


def test_sl2_lift_exponents():
    D = build_datum(sig(13, 2, 2, 2), sl2_lift=True)
    assert D.m_cover == 12
    assert D.cover_exponents == (7, 7, 7, 1)
    assert all(c.m == 12 and c.h == 14 for c in D.new_points)
    with pytest.raises(InvalidInput):
        build_datum(sig(13, 1, 1, 2), sl2_lift=True)


def test_datum_json_schema():
    doc = build_datum(sig(5, 0, 0, 0)).to_json()
    assert set(doc) >= {"p", "signature", "m_cover", "u", "eps_pow", "d", "criticals"}
    assert doc["u"] == [1, 4, 1]
    assert doc["criticals"][2]["tau"] == INF
    assert set(doc["criticals"][3]["tau"]) == {"quad"}
    assert {c["kind"] for c in doc["criticals"]} == {WILD, NEW}


# --- structural properties --------------------------------------------------------------

@pytest.mark.parametrize("p", SMALL + (17,))
def test_symmetry_swaps_a1_a2(p):
    for S in valid_signatures(p):
        T = Signature(p, S.a2, S.a1, S.a3)
        assert solve_u(T) == symmetric_u(S)


@pytest.mark.parametrize("p", SMALL + LARGE)
def test_u_at_zero_product(p):
    for S in list(valid_signatures(p))[:: max(1, p // 5)]:
        assert solve_u(S)(0) == u_at_zero_product(S)


def test_monic_solution_unique_by_enumeration():
    for p in (5, 7, 11):
        for S in valid_signatures(p):
            if S.d > 4 or p ** S.d > 20000:
                continue
            sols = monic_ode_solutions(p, *S.a, S.d)
            assert sols == [list(solve_u(S).coeffs)], S
