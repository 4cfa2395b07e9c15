"""Combinatorial stable models ("combs") of three-point SL_2(p)/PSL_2(p) covers.

A comb is the central projective line carrying the deformation datum, with one
tail per primitive branch point and one per new critical point. Each tail
records its ramification invariant sigma = h/m, inertia order p*m, the shape
of its decomposition group and the thickness 1/(h(p-1)) of its node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional

from .algebra import Polynomial, QuadExtElement, QuadExtField, RationalFunction, roots_in_fp2
from .deformation import (
    INF,
    NEW,
    PRIMITIVE,
    WILD,
    CriticalPoint,
    DeformationDatum,
    Signature,
    build_datum,
)
from .errors import GoodReduction, InvalidInput, VerificationError
from .groups import (
    DEFAULT_MAX_GROUP_P,
    PSL2,
    SL2,
    ClassVector,
    ConjClass,
    GroupElement,
    a_invariant,
    classify_element,
    enumerate_group,
    nielsen_count,
)
from .supersingular import _check_p, jline_exponents, jline_polynomial

FULL_GROUP = "full_group"


def borel_like(n: int) -> str:
    return f"borel_like({n})"


def odd_order(n: int) -> str:
    return f"odd_order({n})"


def dihedral(n: int) -> str:
    return f"dihedral({n})"


@dataclass(frozen=True)
class TailSpec:
    kind: str
    sigma: Fraction
    conductor_h: int
    inertia_order: int
    decomposition: str
    attach_tau: object = None
    marked_branch_point: Optional[int] = None
    p: int = 0

    def __post_init__(self):
        if self.kind not in (PRIMITIVE, NEW):
            raise InvalidInput(f"tail kind must be primitive or new, got {self.kind!r}")
        if self.p and self.inertia_order % self.p:
            raise VerificationError("inertia order of a tail must be divisible by p")
        if self.p and Fraction(self.conductor_h, self.m) != self.sigma:
            raise VerificationError(f"sigma {self.sigma} != h/m = {self.conductor_h}/{self.m}")
        lo, hi = (0, 1) if self.kind == PRIMITIVE else (1, 2)
        if not lo < self.sigma <= hi:
            raise VerificationError(f"{self.kind} tail with sigma {self.sigma}")

    @property
    def m(self) -> int:
        return self.inertia_order // self.p

    def thickness(self) -> Fraction:
        return Fraction(1, self.conductor_h * (self.p - 1))

    def to_json(self) -> dict:
        attach = self.attach_tau
        if isinstance(attach, QuadExtElement):
            attach = attach.to_json()
        return {
            "attach": attach,
            "branch_point": self.marked_branch_point,
            "decomposition": self.decomposition,
            "h": self.conductor_h,
            "inertia": self.inertia_order,
            "kind": self.kind,
            "sigma": [self.sigma.numerator, self.sigma.denominator],
        }


def primitive_tail_invariants(c: ConjClass, attach=None, branch_point=None) -> TailSpec:
    """The primitive tail carrying a branch point of class C(l) or Ct(l) of SL_2(p)."""
    if c.is_central or c.p_divides_order:
        raise InvalidInput(f"{c.label}: primitive tails need a noncentral class of order prime to p")
    p, l = c.p, c.l
    a = a_invariant(c)
    sigma = Fraction(a, p - 1)
    if c.kind == "C":
        m = (p - 1) // gcd(p - 1, l)
        decomp = borel_like(p * (p - 1) // gcd(p - 1, l))
    else:
        m = (p - 1) // gcd(p - 1, l - 1)
        decomp = FULL_GROUP
    h = sigma * m
    if h.denominator != 1:
        raise VerificationError(f"conductor {h} of the {c.label} tail is not integral")
    return TailSpec(PRIMITIVE, sigma, int(h), p * m, decomp, attach, branch_point, p)


def new_tail_invariants(p: int, flavor: str = SL2, attach=None) -> TailSpec:
    """sigma = (p+1)/(p-1); inertia p(p-1) for SL_2, p(p-1)/2 for PSL_2."""
    flavor = flavor.upper()
    if flavor == SL2:
        m, h = p - 1, p + 1
    elif flavor == PSL2:
        m, h = (p - 1) // 2, (p + 1) // 2
    else:
        raise InvalidInput(f"unknown group flavor {flavor!r}")
    return TailSpec(NEW, Fraction(p + 1, p - 1), h, p * m, FULL_GROUP, attach, None, p)


def field_degree(datum: DeformationDatum) -> int:
    """(p-1) lcm of the conductors of the non-wild critical points; lcm of nothing is 1."""
    hs = [c.h for c in datum.criticals if c.kind != WILD]
    return (datum.p - 1) * (lcm(*hs) if hs else 1)


@dataclass(frozen=True)
class CombModel:
    p: int
    flavor: str
    datum: DeformationDatum
    tails: tuple[TailSpec, ...]
    wild_points: tuple[int, ...]
    field_degree_N: int
    class_vector: Optional[ClassVector] = None
    coordinate: str = "x"

    def __post_init__(self):
        if len(self.new_tails) != self.datum.d:
            raise VerificationError("number of new tails differs from deg u")
        if len(self.primitive_tails) + len(self.wild_points) != 3:
            raise VerificationError("primitive tails and wild points must number 3")
        if field_degree(self.datum) != self.field_degree_N:
            raise VerificationError("field degree disagrees with its recomputation")

    @property
    def new_tails(self) -> list[TailSpec]:
        return [t for t in self.tails if t.kind == NEW]

    @property
    def primitive_tails(self) -> list[TailSpec]:
        return [t for t in self.tails if t.kind == PRIMITIVE]

    @property
    def node_thickness(self) -> dict[int, Fraction]:
        return {i: t.thickness() for i, t in enumerate(self.tails)}

    def to_json(self) -> dict:
        out = {
            "N": self.field_degree_N,
            "coordinate": self.coordinate,
            "flavor": self.flavor,
            "p": self.p,
            "signature": list(self.datum.signature.a),
            "tails": [t.to_json() for t in self.tails],
            "thickness": {str(i): [e.numerator, e.denominator]
                          for i, e in self.node_thickness.items()},
            "u": self.datum.u.to_json(),
            "wild_branch_points": [i + 1 for i in self.wild_points],
        }
        if self.class_vector is not None:
            out["class_vector"] = self.class_vector.labels
        return out


def _same_invariants(crit: CriticalPoint, tail: TailSpec, what: str):
    if (crit.m, crit.h, crit.sigma) != (tail.m, tail.conductor_h, tail.sigma):
        raise VerificationError(
            f"{what}: datum gives (m,h)=({crit.m},{crit.h}), tail formula "
            f"({tail.m},{tail.conductor_h})"
        )


def _new_tails(datum: DeformationDatum, flavor: str, scale: int = 1) -> list[TailSpec]:
    tails = []
    for crit in datum.new_points:
        tau = crit.tau
        if scale != 1 and not isinstance(tau, dict):
            tau = tau * scale if isinstance(tau, QuadExtElement) else tau * scale % datum.p
        t = new_tail_invariants(datum.p, flavor, attach=tau)
        _same_invariants(crit, t, "new tail")
        tails.append(t)
    return tails


def x2p_model(p: int) -> CombModel:
    """Comb of X(2p) -> X(2): three wild points, (p-1)/2 new tails at the Hasse roots."""
    _check_p(p)
    datum = build_datum(Signature(p, 0, 0, 0))
    tails = _new_tails(datum, PSL2)
    N = field_degree(datum)
    if N != (p * p - 1) // 2:
        raise VerificationError(f"field degree {N} != (p^2-1)/2")
    return CombModel(p, PSL2, datum, tuple(tails), (0, 1, 2), N)


@dataclass(frozen=True)
class XpClassData:
    """The classes 3A, 2A of PSL_2(p) and the SL_2 lifts that fix the signature."""

    class_3A: ConjClass
    class_2A: ConjClass
    lift_3A: ConjClass
    lift_2A: ConjClass

    @property
    def signature(self) -> tuple[int, int, int]:
        return (a_invariant(self.lift_3A), a_invariant(self.lift_2A), 0)


def xp_class_data(p: int) -> XpClassData:
    # an element of order 3 has trace -1, one of order 4 has trace 0
    lift3 = classify_element(GroupElement(0, -1, 1, -1, p, SL2))
    lift2 = classify_element(GroupElement(0, -1, 1, 0, p, SL2))
    if lift3.element_order != 3 or lift2.element_order != 4:
        raise VerificationError("lifts of 3A and 2A have the wrong orders")
    c3 = ConjClass(p, PSL2, lift3.kind, lift3.l)
    c2 = ConjClass(p, PSL2, lift2.kind, lift2.l)
    if c3.element_order != 3 or c2.element_order != 2:
        raise VerificationError("3A or 2A has the wrong order in PSL2")
    return XpClassData(c3, c2, lift3, lift2)


def s3_orbit_identity(p: int) -> bool:
    """6 alpha + 3 [p = 3 mod 4] + 2 [p = 2 mod 3] == (p-1)/2."""
    return 6 * (p // 12) + 3 * (p % 4 == 3) + 2 * (p % 3 == 2) == (p - 1) // 2


def xp_model(p: int) -> CombModel:
    """Comb of X(p) -> X(1) on the j-line: primitive tails over 0 and 1728, infinity wild."""
    _check_p(p)
    a1, a2, alpha = jline_exponents(p)
    cd = xp_class_data(p)
    if cd.signature != (a1, a2, 0):
        raise VerificationError(f"lifted signature {cd.signature} != ({a1}, {a2}, 0)")
    datum = build_datum(Signature(p, a1, a2, 0))
    if datum.d != alpha:
        raise VerificationError(f"{datum.d} new points, expected floor(p/12) = {alpha}")

    tails = []
    decomp1 = FULL_GROUP if p % 3 == 2 else odd_order(3 * p)
    decomp2 = FULL_GROUP if p % 4 == 3 else dihedral(2 * p)
    for idx, (attach, decomp) in enumerate(((0, decomp1), (1728 % p, decomp2))):
        crit = datum.criticals[idx]
        tails.append(TailSpec(PRIMITIVE, crit.sigma, crit.h, p * crit.m, decomp,
                              attach, idx + 1, p))
    new = _new_tails(datum, PSL2, scale=1728)
    roots = {r.index for r in roots_in_fp2(jline_polynomial(p))}
    K = QuadExtField(p)
    if {K(t.attach_tau).index for t in new} != roots:
        raise VerificationError("new tails are not attached at the j-line polynomial roots")
    tails.extend(new)
    return CombModel(p, PSL2, datum, tuple(tails), (2,), field_degree(datum),
                     coordinate="j")


# ---------------------------------------------------------------------------
# SL_2(p) three-point covers


@dataclass(frozen=True)
class ReductionReport:
    class_vector: ClassVector
    total_covers: int
    bad_covers: int
    reason: str
    total_is_bound: bool = False
    a: Optional[tuple[int, int, int]] = None

    @property
    def good_covers(self) -> int:
        return self.total_covers - self.bad_covers

    def to_json(self) -> dict:
        return {
            "a": list(self.a) if self.a else None,
            "bad": self.bad_covers,
            "classes": self.class_vector.labels,
            "flavor": self.class_vector.flavor,
            "good": self.good_covers,
            "p": self.class_vector.p,
            "reason": self.reason,
            "total": self.total_covers,
            "total_is_upper_bound": self.total_is_bound,
        }


def _bad_count_formula(v: ClassVector) -> tuple[int, str, tuple[int, int, int]]:
    a = tuple(a_invariant(c) for c in v)
    s, p = sum(a), v.p
    if s < p - 1:
        return 2, "b1", a
    if s == p - 1 and any(c.kind == "Ct" for c in v):
        return 2, "b2", a
    return 0, "b0", a


def reduction_census(v: ClassVector, max_group_p: int = DEFAULT_MAX_GROUP_P) -> ReductionReport:
    """How many covers with class vector v have bad reduction.

    The total comes from a brute-force Nielsen count when p <= max_group_p and
    from the rigidity bound (1 or 2) otherwise, flagged as an upper bound.
    """
    if any(c.is_central for c in v):
        raise InvalidInput("class vectors with central classes are excluded")
    enumerate_ok = v.p <= max_group_p
    if any(c.p_divides_order for c in v):
        total = nielsen_count(v, max_p=max_group_p) if enumerate_ok else 1
        return ReductionReport(v, total, total, "a", not enumerate_ok)
    if v.flavor != SL2:
        raise InvalidInput("for prime-to-p classes give the SL2 lift of the vector")
    bad, reason, a = _bad_count_formula(v)
    if enumerate_ok:
        total = nielsen_count(v, max_p=max_group_p)
        if bad > total:
            raise VerificationError(f"{bad} bad covers predicted but only {total} exist for {v}")
    else:
        total = 2
    return ReductionReport(v, total, bad, reason, not enumerate_ok, a)


def generic_comb(v: ClassVector) -> CombModel:
    """Comb of the SL_2(p)-covers with a prime-to-p class vector that reduce badly."""
    if v.flavor != SL2:
        raise InvalidInput("generic_comb expects SL2 classes")
    if any(c.is_central or c.p_divides_order for c in v):
        raise InvalidInput("generic_comb expects noncentral classes of order prime to p")
    bad, _, a = _bad_count_formula(v)
    if not bad:
        raise GoodReduction(f"{v} has good reduction (a = {a}); there is no comb")
    p = v.p
    datum = build_datum(Signature(p, *a), wild=(False, False, False), sl2_lift=True)
    tails = []
    for idx, (c, tau) in enumerate(zip(v, (0, 1, INF))):
        t = primitive_tail_invariants(c, attach=tau, branch_point=idx + 1)
        _same_invariants(datum.criticals[idx], t, f"primitive tail {c.label}")
        tails.append(t)
    tails.extend(_new_tails(datum, SL2))
    return CombModel(p, SL2, datum, tuple(tails), (), field_degree(datum), v)


# ---------------------------------------------------------------------------
# the curve y^(p+1) = x^p - x with its SL_2(p)-action


def _moebius(A: GroupElement) -> tuple[RationalFunction, RationalFunction]:
    p = A.p
    num = Polynomial(p, (A.b, A.a))
    den = Polynomial(p, (A.d, A.c))
    return RationalFunction(num, den), RationalFunction(Polynomial(p, (1,)), den)


def lemma_al_action_check(p: int, max_p: int = DEFAULT_MAX_GROUP_P) -> bool:
    """A(x, y) = ((ax+b)/(cx+d), y/(cx+d)) preserves y^(p+1) = x^p - x for every A in
    SL_2(p), and A(B(x, y)) = (AB)(x, y) for every A and each generator B."""
    group = enumerate_group(p, SL2, max_p=max_p)
    x = Polynomial(p, (0, 1))
    curve = RationalFunction.from_poly(x**p - x)
    action = {}
    for A in group:
        M, r = _moebius(A)
        if curve * r ** (p + 1) != M**p - M:
            return False
        action[A.entries] = (M, r)
    ident = action[(1, 0, 0, 1)]
    if ident[0] != RationalFunction.from_poly(x) or ident[1] != RationalFunction.from_poly(
            Polynomial(p, (1,))):
        return False
    gens = [GroupElement(1, 1, 0, 1, p), GroupElement(0, -1, 1, 0, p)]
    for A in group:
        MA, rA = action[A.entries]
        for B in gens:
            MB, rB = action[B.entries]
            MAB, rAB = action[(A * B).entries]
            # points: A(B(x, y)) = (M_A(M_B x), y r_B(x) r_A(M_B x))
            if MA.compose(MB) != MAB or rB * rA.compose(MB) != rAB:
                return False
    return True
