"""Hypergeometric deformation data over F_p.

A signature (a1, a2, a3) determines a monic polynomial u (the positions of the
new critical points) through the recursion A_i u_{i+1} = B_i u_i, together with the constant
eps^(p-1) of the differential. :func:`build_datum` assembles the datum and
certifies it: the hypergeometric ODE holds, the differential
eps z dx / (x(x-1)) is logarithmic, and u has d simple zeros away from 0 and 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Union

from .algebra import (
    FieldElement,
    Polynomial,
    PrimeField,
    QuadExtElement,
    RationalFunction,
    binomial_mod_p,
    check_odd_prime,
    is_squarefree,
    roots_in_fp2,
)
from .errors import InvalidInput, VerificationError

WILD, PRIMITIVE, NEW = "wild", "primitive", "new"
INF = "inf"


@dataclass(frozen=True)
class Signature:
    p: int
    a1: int
    a2: int
    a3: int

    def __post_init__(self):
        try:
            check_odd_prime(self.p)
        except InvalidInput:
            raise
        a = self.a
        if any(not 0 <= ai < self.p - 1 for ai in a):
            raise InvalidInput(f"signature entries must lie in [0, p-1), got {a}")
        if sum(a) % 2:
            raise InvalidInput(f"signature {a} has odd sum")
        if sum(a) > self.p - 1:
            raise InvalidInput(f"signature {a} has sum > p-1 = {self.p - 1}")

    @property
    def a(self) -> tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)

    @property
    def d(self) -> int:
        return (self.p - 1 - sum(self.a)) // 2

    @property
    def all_even(self) -> bool:
        return all(ai % 2 == 0 for ai in self.a)

    @property
    def m_cover(self) -> int:
        return (self.p - 1) // 2 if self.all_even else self.p - 1


def valid_signatures(p: int):
    """Every signature for p, in lexicographic order."""
    for a1 in range(p - 1):
        for a2 in range(p - 1):
            for a3 in range(p - 1):
                s = a1 + a2 + a3
                if s % 2 == 0 and s <= p - 1:
                    yield Signature(p, a1, a2, a3)


def new_tail_count(sig: Signature) -> int:
    return sig.d


@dataclass(frozen=True)
class HypergeomParams:
    A: FieldElement
    B: FieldElement
    C: FieldElement
    P0: Polynomial
    P1: Polynomial
    P2: Polynomial


def hypergeom_params(sig: Signature) -> HypergeomParams:
    p, (a1, a2, a3) = sig.p, sig.a
    F = PrimeField(p)
    half = F(2).inverse()
    A = F(1 + a1 + a2 + a3) * half
    B = F(1 + a1 + a2 - a3) * half
    C = F(1 + a1)
    P0 = Polynomial(p, (0, -1, 1))
    P1 = Polynomial(p, (-(1 + a1), 2 + a1 + a2))
    P2 = Polynomial(p, (((1 + a1 + a2) ** 2 - a3 * a3) * pow(4, -1, p),))
    return HypergeomParams(A, B, C, P0, P1, P2)


def _recursion_coeffs(sig: Signature, i: int) -> tuple[FieldElement, FieldElement]:
    F = PrimeField(sig.p)
    hp = hypergeom_params(sig)
    Ai = F((i + 1) * (i + sig.a1 + 1))
    Bi = (hp.A + i) * (hp.B + i)
    return Ai, Bi


def solve_u(sig: Signature) -> Polynomial:
    """The unique monic degree-d polynomial solution of P0 u'' + P1 u' + P2 u = 0."""
    d = sig.d
    A_m1, _ = _recursion_coeffs(sig, -1)
    _, B_d = _recursion_coeffs(sig, d)
    if A_m1 != 0 or B_d != 0:
        raise VerificationError(f"recursion boundary A_-1 = B_d = 0 fails for {sig}")
    coeffs = [None] * (d + 1)
    coeffs[d] = PrimeField(sig.p)(1)
    for i in range(d - 1, -1, -1):
        Ai, Bi = _recursion_coeffs(sig, i)
        if Ai == 0 or Bi == 0:
            raise VerificationError(f"recursion coefficient vanishes at i={i} for {sig}")
        coeffs[i] = Ai * coeffs[i + 1] / Bi
    return Polynomial(sig.p, [c.value for c in coeffs])


def u_at_zero_product(sig: Signature) -> FieldElement:
    """prod_{i<d} A_i / B_i, which must equal u(0) for monic u."""
    acc = PrimeField(sig.p)(1)
    for i in range(sig.d):
        Ai, Bi = _recursion_coeffs(sig, i)
        acc = acc * Ai / Bi
    return acc


def _series_inverse(c: list[int], n: int, p: int) -> list[int]:
    out = [0] * n
    inv0 = pow(c[0], -1, p)
    for k in range(n):
        s = 1 if k == 0 else 0
        for j in range(1, min(k, len(c) - 1) + 1):
            s -= c[j] * out[k - j]
        out[k] = s * inv0 % p
    return out


def _series_coeff_of_inverse(den: Polynomial, k: int) -> int:
    """[t^k] of 1/den as a power series at t = 0."""
    c = list(den.coeffs[: k + 1]) + [0] * max(0, k + 1 - len(den.coeffs))
    return _series_inverse(c, k + 1, den.p)[k]


def epsilon_power(sig: Signature, u: Optional[Polynomial] = None) -> FieldElement:
    """eps^(p-1) for the monic solution u.

    Comparing the x^(-p-1) coefficients of both sides of the Cartier identity at
    infinity gives eps^(p-1) = [t^a3] 1/((1-t)^(1+a2) v(t)^2), where v is the
    reversed polynomial t^d u(1/t). For a3 = 0 this is 1.
    """
    p = sig.p
    if u is None:
        u = solve_u(sig)
    v = Polynomial(p, tuple(reversed(u.coeffs)))
    den = Polynomial(p, (1, -1)) ** (1 + sig.a2) * v * v
    val = PrimeField(p)(_series_coeff_of_inverse(den, sig.a3))
    if val == 0:
        raise VerificationError(f"eps^(p-1) vanishes for {sig}")
    return val


def epsilon_power_at_zero(sig: Signature, u: Optional[Polynomial] = None) -> FieldElement:
    """The same constant read off at x = 0: -[x^a1] 1/((x-1)^(1+a2) u^2)."""
    p = sig.p
    if u is None:
        u = solve_u(sig)
    den = Polynomial(p, (-1, 1)) ** (1 + sig.a2) * u * u
    return -PrimeField(p)(_series_coeff_of_inverse(den, sig.a1))


def epsilon_power_binomial(sig: Signature) -> FieldElement:
    """The closed form (-1)^a1 C(p-1-a2, a1).

    Not a valid constant for the monic u in general; it agrees with
    :func:`epsilon_power` only on a subset of signatures. Kept for comparison.
    """
    val = binomial_mod_p(sig.p - 1 - sig.a2, sig.a1, sig.p)
    return -val if sig.a1 % 2 else val


def verify_ode(sig: Signature, u: Polynomial) -> bool:
    hp = hypergeom_params(sig)
    return (hp.P0 * u.derivative(2) + hp.P1 * u.derivative() + hp.P2 * u).is_zero()


def _q_poly(sig: Signature) -> Polynomial:
    p = sig.p
    return Polynomial(p, (0, 1)) ** (1 + sig.a1) * Polynomial(p, (-1, 1)) ** (1 + sig.a2)


def cartier_numerator(sig: Signature, u: Polynomial) -> Polynomial:
    """N with D^(p-1)[1/(Q u^2)] = N / (x^(a1+p) (x-1)^(a2+p) u^(p+1)).

    Each step uses D(N / (x^al (x-1)^be u^ga)) =
    [N' x(x-1)u - N(al(x-1)u + be x u + ga x(x-1)u')] / (x^(al+1) (x-1)^(be+1) u^(ga+1)),
    so no gcds are needed.
    """
    p = sig.p
    x = Polynomial(p, (0, 1))
    xm1 = Polynomial(p, (-1, 1))
    w = x * xm1
    wu = w * u
    du = u.derivative()
    xm1u, xu, wdu = xm1 * u, x * u, w * du
    al, be, ga = 1 + sig.a1, 1 + sig.a2, 2
    N = Polynomial(p, (1,))
    for _ in range(p - 1):
        N = N.derivative() * wu - N * (xm1u.scale(al) + xu.scale(be) + wdu.scale(ga))
        al, be, ga = al + 1, be + 1, ga + 1
    return N


def admissible_u(sig: Signature, u: Polynomial) -> bool:
    """Monic of degree d, squarefree, nonzero at 0 and 1."""
    return (not u.is_zero() and u.degree == sig.d and u.coeffs[-1] == 1
            and u(0) != 0 and u(1) != 0 and is_squarefree(u))


def verify_cartier(sig: Signature, u: Polynomial, eps_pow) -> bool:
    """D^(p-1)[1/(Q u^2)] == -eps^(p-1) / (x^p (x-1)^p), compared cross-multiplied.

    An inadmissible u is rejected first: a u with a zero at 0 or 1, a repeated
    factor or the wrong degree can satisfy the identity for a different
    signature, so the identity alone does not certify it.
    """
    if not admissible_u(sig, u):
        return False
    p = sig.p
    N = cartier_numerator(sig, u)
    rhs = Polynomial(p, (0, 1)) ** sig.a1 * Polynomial(p, (-1, 1)) ** sig.a2 * u ** (p + 1)
    return N == rhs.scale(-int(eps_pow))


def cartier_lhs(sig: Signature, u: Polynomial) -> RationalFunction:
    """D^(p-1)[1/(Q u^2)] by generic reduced rational-function differentiation."""
    f = RationalFunction(Polynomial(sig.p, (1,)), _q_poly(sig) * u * u)
    return f.derivative(sig.p - 1)


def cartier_rhs(sig: Signature, eps_pow) -> RationalFunction:
    p = sig.p
    den = Polynomial(p, (0, 1)) ** p * Polynomial(p, (-1, 1)) ** p
    return RationalFunction(Polynomial(p, (-int(eps_pow),)), den)


# ---------------------------------------------------------------------------
# critical points and the assembled datum

Tau = Union[int, QuadExtElement, str, dict]


@dataclass(frozen=True)
class CriticalPoint:
    tau: Tau
    m: int
    h: int
    sigma: Fraction
    kind: str

    def tau_json(self):
        if isinstance(self.tau, QuadExtElement):
            return self.tau.to_json()
        return self.tau

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "kind": self.kind,
            "m": self.m,
            "sigma": [self.sigma.numerator, self.sigma.denominator],
            "tau": self.tau_json(),
        }


def _kind(sigma: Fraction) -> str:
    if sigma == 0:
        return WILD
    if 0 < sigma <= 1:
        return PRIMITIVE
    if 1 < sigma <= 2:
        return NEW
    raise VerificationError(f"ramification invariant {sigma} outside (0, 2]")


def _critical(p: int, tau, exponent: int, sigma: Fraction) -> CriticalPoint:
    m = (p - 1) // gcd(p - 1, exponent % (p - 1))
    h = sigma * m
    if h.denominator != 1:
        raise VerificationError(f"conductor {h} at {tau} is not integral")
    return CriticalPoint(tau, m, int(h), sigma, _kind(sigma))


@dataclass(frozen=True)
class DeformationDatum:
    signature: Signature
    u: Polynomial
    eps_pow: FieldElement
    criticals: tuple[CriticalPoint, ...]
    m_cover: int
    cover_exponents: tuple[int, ...]
    residual: Polynomial = field(default=None)

    @property
    def p(self) -> int:
        return self.signature.p

    @property
    def d(self) -> int:
        return self.signature.d

    def of_kind(self, kind: str) -> list[CriticalPoint]:
        return [c for c in self.criticals if c.kind == kind]

    @property
    def new_points(self) -> list[CriticalPoint]:
        return self.of_kind(NEW)

    def to_json(self) -> dict:
        out = {
            "criticals": [c.to_json() for c in self.criticals],
            "cover_exponents": list(self.cover_exponents),
            "d": self.d,
            "eps_pow": self.eps_pow.value,
            "m_cover": self.m_cover,
            "p": self.p,
            "signature": list(self.signature.a),
            "u": self.u.to_json(),
        }
        if self.residual is not None and self.residual.degree > 0:
            out["u_factor_beyond_fp2"] = self.residual.to_json()
        return out


def build_datum(sig: Signature, wild: Optional[tuple[bool, bool, bool]] = None,
                sl2_lift: bool = False) -> DeformationDatum:
    """Certified hypergeometric deformation datum of signature ``sig``.

    ``wild[i]`` marks branch point i (at 0, 1, inf) as wild (h = 0); by default
    exactly the points with a_i = 0 are wild. With ``sl2_lift`` the cyclic cover
    is z^(p-1) = x^b1 (x-1)^b2 u with b_i = a_i/2 + (p-1)/2, the (p-1)-cyclic
    cover used for SL_2(p)-covers; otherwise z^(p-1) = x^a1 (x-1)^a2 u^2.
    """
    p = sig.p
    if wild is None:
        wild = tuple(ai == 0 for ai in sig.a)
    if any(w and ai for w, ai in zip(wild, sig.a)):
        raise InvalidInput("only branch points with a_i = 0 can be wild")

    u = solve_u(sig)
    eps = epsilon_power(sig, u)
    checks = [
        ("hypergeometric ODE", verify_ode(sig, u)),
        ("Cartier logarithmicity", verify_cartier(sig, u, eps)),
        ("u(0) != 0", u(0) != 0),
        ("u(1) != 0", u(1) != 0),
        ("u(0) = prod A_i/B_i", u(0) == u_at_zero_product(sig)),
        ("u squarefree", is_squarefree(u)),
        ("deg u = d", u.degree == sig.d),
    ]
    for name, ok in checks:
        if not ok:
            raise VerificationError(f"{name} fails for signature {sig.a} at p={p}")

    if sl2_lift:
        if not sig.all_even:
            raise InvalidInput("the SL2 lift needs an all-even signature")
        half = (p - 1) // 2
        exps = tuple(ai // 2 + half for ai in sig.a)
        e_new, m_cover = 1, p - 1
    else:
        exps = sig.a
        e_new, m_cover = 2, sig.m_cover

    crit = []
    for tau, ai, e, w in zip((0, 1, INF), sig.a, exps, wild):
        sigma = Fraction(0) if w else (Fraction(ai, p - 1) if ai else Fraction(1))
        crit.append(_critical(p, tau, e, sigma))

    sigma_new = Fraction(p + 1, p - 1)
    roots = roots_in_fp2(u)
    # residual: the part of u with no zeros in F_{p^2}
    lin = Polynomial(p, (1,))
    for r in roots:
        if r.b == 0:
            lin = lin * Polynomial(p, (-r.a, 1))
    quad = Polynomial(p, (1,))
    seen = set()
    for r in roots:
        if r.b and r not in seen:
            seen.update({r, r.conjugate()})
            quad = quad * Polynomial(p, ((r * r.conjugate()).a, -(r + r.conjugate()).a, 1))
    residual = u // (lin * quad)
    for r in roots:
        crit.append(_critical(p, r.a if r.b == 0 else r, e_new, sigma_new))
    if residual.degree > 0:
        for k in range(residual.degree):
            crit.append(_critical(p, {"root_of": residual.to_json(), "index": k},
                                  e_new, sigma_new))

    n_wild_prim = sum(c.kind in (WILD, PRIMITIVE) for c in crit)
    n_new = sum(c.kind == NEW for c in crit)
    if n_wild_prim != 3 or n_new != sig.d:
        raise VerificationError(
            f"critical census {n_wild_prim} wild/primitive, {n_new} new for {sig.a}"
        )
    return DeformationDatum(sig, u, eps, tuple(crit), m_cover, tuple(exps) + (e_new,),
                            residual)


def symmetric_u(sig: Signature) -> Polynomial:
    """u for (a2, a1, a3) predicted from u(a1, a2, a3) by x -> 1 - x, made monic."""
    u = solve_u(sig)
    one_minus_x = Polynomial(sig.p, (1, -1))
    return u.compose(one_minus_x).monic()

