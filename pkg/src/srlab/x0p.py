"""Special fiber of X_0(p) at p, read off from the comb of X(p).

Two rational components, one mapping isomorphically to the j-line and one
purely inseparably of degree p, cross exactly over the supersingular
j-invariants. Each crossing carries a thickness e (local equation uv = pi^e).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import QuadExtElement, QuadExtField
from .deformation import NEW, PRIMITIVE
from .errors import InvalidInput, VerificationError
from .groups import PSL2
from .stable_models import new_tail_invariants, xp_model
from .supersingular import _check_p, is_supersingular_j, supersingular_j_values

CONVENTION_NOTE = (
    "thickness e with uv = pi^e: e = 1 at ordinary crossings, e = 2 at j = 1728 and "
    "e = 3 at j = 0 (e = |Aut E|/2, singularity tag A_e). The alternative assignment "
    "e = 3 at j = 1728 and e = 2 at j = 0 is the other reading; it is not used."
)


def generic_thickness_terms(p: int) -> tuple[Fraction, Fraction]:
    """The two summands |Stab(y'')| e(y'') and |Stab(y''')| e(y''') at an ordinary crossing.

    Both points lie on a new tail of the PSL_2 comb: the first is stabilised by
    the whole inertia group (order p m), the second by its prime-to-p part (order m);
    each has thickness 1/(h(p-1)).
    """
    tail = new_tail_invariants(p, PSL2)
    e = tail.thickness()
    return tail.inertia_order * e, tail.m * e


def generic_thickness(p: int) -> Fraction:
    _check_p(p)
    first, second = generic_thickness_terms(p)
    return first + second


def _as_fp2(p: int, j) -> QuadExtElement:
    K = QuadExtField(p)
    return j if isinstance(j, QuadExtElement) else K(int(j))


def thickness(p: int, j) -> int:
    """Thickness of X_0(p) at the supersingular point with invariant j."""
    _check_p(p)
    j = _as_fp2(p, j)
    if not is_supersingular_j(p, j):
        raise InvalidInput(f"j = {j} is not supersingular for p = {p}")
    if j == 0:
        return 3
    if j == 1728 % p:
        return 2
    e = generic_thickness(p)
    if e.denominator != 1:
        raise VerificationError(f"generic thickness {e} is not an integer")
    return int(e)


@dataclass(frozen=True)
class Crossing:
    j: QuadExtElement
    thickness: int

    @property
    def singularity(self) -> str:
        return f"A{self.thickness}"

    def to_json(self) -> dict:
        return {"j": self.j.to_json(), "singularity": self.singularity,
                "thickness": self.thickness}


@dataclass(frozen=True)
class X0pFiber:
    p: int
    crossings: tuple[Crossing, ...]
    intermediate: dict
    component_iso: str = "isomorphic to the j-line"
    component_frob: str = "purely inseparable of degree p onto the j-line"
    convention_note: str = CONVENTION_NOTE

    @property
    def genus(self) -> int:
        return len(self.crossings) - 1

    def to_json(self) -> dict:
        return {
            "component_frob": self.component_frob,
            "component_iso": self.component_iso,
            "convention_note": self.convention_note,
            "crossings": [c.to_json() for c in self.crossings],
            "genus": self.genus,
            "intermediate": self.intermediate,
            "p": self.p,
        }


def build_x0p(p: int) -> X0pFiber:
    _check_p(p)
    comb = xp_model(p)
    c_list, d_list = [], []
    for t in comb.tails:
        j = _as_fp2(p, t.attach_tau)
        if is_supersingular_j(p, j):
            c_list.append(j)
        elif t.kind == PRIMITIVE:
            d_list.append({"at": 0 if j == 0 else 1728})
        else:
            raise VerificationError(f"new tail at non-supersingular j = {j}")

    expected_d = ([{"at": 0}] if p % 3 == 1 else []) + ([{"at": 1728}] if p % 4 == 1 else [])
    if d_list != expected_d:
        raise VerificationError(f"split components {d_list}, expected {expected_d}")

    ss = supersingular_j_values(p)
    if {j.index for j in c_list} != {j.index for j in ss}:
        raise VerificationError("supersingular tails differ from the supersingular j-set")
    crossings = tuple(Crossing(j, thickness(p, j)) for j in ss)
    intermediate = {
        "a": 1,
        "b": 1,
        "c": [j.to_json() for j in ss],
        "d": d_list,
        "new_tails": sum(t.kind == NEW for t in comb.tails),
    }
    return X0pFiber(p, crossings, intermediate)


def genus_x0p(p: int) -> int:
    return build_x0p(p).genus
