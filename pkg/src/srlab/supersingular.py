"""Supersingular loci on the lambda-line and the j-line.

The polynomials come from closed binomial sums; the point counts below are an
independent check that never looks at those sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .algebra import (
    FieldElement,
    Polynomial,
    PrimeField,
    QuadExtElement,
    QuadExtField,
    binomial_mod_p,
    check_odd_prime,
    legendre_symbol,
    roots_in_fp2,
)
from .errors import InvalidInput

Scalar = Union[int, FieldElement, QuadExtElement]


def _check_p(p: int) -> int:
    check_odd_prime(p)
    if p < 5:
        raise InvalidInput(f"p must be at least 5, got {p}")
    return p


def hasse_polynomial(p: int) -> Polynomial:
    """sum_j C((p-1)/2, j)^2 x^j."""
    _check_p(p)
    m = (p - 1) // 2
    return Polynomial(p, [binomial_mod_p(m, j, p).value ** 2 for j in range(m + 1)])


def jline_exponents(p: int) -> tuple[int, int, int]:
    """(a1, a2, alpha) for the j-line: ceil((p-1)/3), 2 ceil((p-1)/4), floor(p/12)."""
    _check_p(p)
    return -(-(p - 1) // 3), 2 * (-(-(p - 1) // 4)), p // 12


def jline_polynomial(p: int) -> Polynomial:
    """1728^alpha sum_n C(a1+alpha, alpha-n) C(alpha, n) (x/1728)^n, monic of degree alpha."""
    a1, _, alpha = jline_exponents(p)
    return Polynomial(p, [
        binomial_mod_p(a1 + alpha, alpha - n, p).value
        * binomial_mod_p(alpha, n, p).value
        * pow(1728, alpha - n, p)
        for n in range(alpha + 1)
    ])


def jline_ode_residual(p: int, u: Polynomial) -> Polynomial:
    """x(x-1728)u'' + [(2+a1+a2)x - 1728(1+a1)]u' + (1+a1+a2)^2 u/4."""
    a1, a2, _ = jline_exponents(p)
    P0 = Polynomial(p, (0, -1728, 1))
    P1 = Polynomial(p, (-1728 * (1 + a1), 2 + a1 + a2))
    c = (1 + a1 + a2) ** 2 * pow(4, -1, p)
    return P0 * u.derivative(2) + P1 * u.derivative() + u.scale(c)


# ---------------------------------------------------------------------------
# point counting oracle


@lru_cache(maxsize=None)
def _fp2_tables(p: int):
    """Coordinates of every element of F_{p^2} (index a + b p) and a square mask."""
    n = QuadExtField(p).nonresidue
    idx = np.arange(p * p, dtype=np.int64)
    a, b = idx % p, idx // p
    sa, sb = (a * a + n * b * b) % p, (2 * a * b) % p
    square = np.zeros(p * p, dtype=bool)
    square[sa + sb * p] = True
    return a, b, n, square


def _mul(x, y, p, n):
    return (x[0] * y[0] + n * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p


def _chi_sum(values, p, square) -> np.ndarray:
    """Sum over the last axis of the quadratic character on F_{p^2}."""
    key = values[0] + values[1] * p
    chi = np.where(square[key], 1, -1)
    chi[key == 0] = 0
    return chi.sum(axis=-1)


def count_points_fp(p: int, coeffs: tuple[int, int, int, int]) -> int:
    """#E(F_p) for y^2 = x^3 + c2 x^2 + c1 x + c0, coeffs = (1, c2, c1, c0)."""
    _, c2, c1, c0 = coeffs
    total = 1
    for x in range(p):
        total += 1 + legendre_symbol((x**3 + c2 * x * x + c1 * x + c0) % p, p)
    return total


def count_legendre_fp2(lam: QuadExtElement) -> int:
    """#E(F_{p^2}) for y^2 = x(x-1)(x-lam)."""
    p = lam.p
    a, b, n, square = _fp2_tables(p)
    x = (a, b)
    xm1 = ((a - 1) % p, b)
    xml = ((a - lam.a) % p, (b - lam.b) % p)
    f = _mul(_mul(x, xm1, p, n), xml, p, n)
    return 1 + p * p + int(_chi_sum(f, p, square))


@lru_cache(maxsize=None)
def supersingular_lambdas_oracle(p: int) -> frozenset:
    """Indices of all lam in F_{p^2} minus {0,1} with #E(F_{p^2}) = 1 mod p.

    One vectorised sweep over all (lam, x) pairs.
    """
    _check_p(p)
    a, b, n, square = _fp2_tables(p)
    f0 = _mul((a, b), ((a - 1) % p, b), p, n)
    f0 = (f0[0][None, :], f0[1][None, :])
    xml = ((a[None, :] - a[:, None]) % p, (b[None, :] - b[:, None]) % p)
    f = _mul(f0, xml, p, n)
    counts = 1 + p * p + _chi_sum(f, p, square)
    good = (counts % p == 1)
    good[0] = good[1] = False
    return frozenset(int(i) for i in np.flatnonzero(good))


@dataclass(frozen=True)
class LegendreCurve:
    lam: FieldElement
    p: int

    def __post_init__(self):
        _check_p(self.p)
        lam = PrimeField(self.p)(self.lam)
        object.__setattr__(self, "lam", lam)
        if lam == 0 or lam == 1:
            raise InvalidInput("y^2 = x(x-1)(x-lam) is singular for lam in {0, 1}")

    def count_points(self) -> int:
        lam = self.lam.value
        return count_points_fp(self.p, (1, (-1 - lam) % self.p, lam, 0))


def is_supersingular_lambda(c: Union[LegendreCurve, QuadExtElement]) -> bool:
    """Trace-zero test over F_p, or #E = 1 mod p over F_{p^2} for lam outside F_p."""
    if isinstance(c, QuadExtElement):
        if c.b == 0:
            return is_supersingular_lambda(LegendreCurve(c.a, c.p))
        return count_legendre_fp2(c) % c.p == 1
    return c.count_points() == c.p + 1


def lambda_to_j(lam: Scalar, p: int | None = None):
    """2^8 (lam^2 - lam + 1)^3 / (lam^2 (lam - 1)^2)."""
    if not isinstance(lam, (FieldElement, QuadExtElement)):
        if p is None:
            raise InvalidInput("an integer lambda needs p")
        lam = PrimeField(p)(lam)
    if lam == 0 or lam == 1:
        raise InvalidInput("lambda must avoid 0 and 1")
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


def _j_in_fp_curve(p: int, j: int) -> tuple[int, int, int, int]:
    if j == 0:
        return (1, 0, 0, 1)
    if j == 1728 % p:
        return (1, 0, 1, 0)
    k = j * pow(1728 - j, -1, p) % p
    return (1, 0, 3 * k % p, 2 * k % p)


def lambda_preimages(j: QuadExtElement) -> list[QuadExtElement]:
    """All lam in F_{p^2} with j(lam) = j, by exhaustive search."""
    p = j.p
    a, b, n, _ = _fp2_tables(p)
    lam = (a, b)
    l2 = _mul(lam, lam, p, n)
    q = ((l2[0] - a + 1) % p, (l2[1] - b) % p)
    q3 = _mul(_mul(q, q, p, n), q, p, n)
    lm1 = ((a - 1) % p, b)
    r = _mul(l2, _mul(lm1, lm1, p, n), p, n)
    jr = _mul((j.a, j.b), r, p, n)
    e0, e1 = (256 * q3[0] - jr[0]) % p, (256 * q3[1] - jr[1]) % p
    K = QuadExtField(p)
    return [K.from_index(int(i)) for i in np.flatnonzero((e0 == 0) & (e1 == 0))]


def is_supersingular_j(p: int, j: Scalar) -> bool:
    _check_p(p)
    if isinstance(j, QuadExtElement) and j.b:
        for lam in lambda_preimages(j):
            if lam != 0 and lam != 1:
                return is_supersingular_lambda(lam)
        raise AssertionError("every j has a lambda preimage over F_{p^2}")
    jv = j.a if isinstance(j, QuadExtElement) else int(j) % p
    return count_points_fp(p, _j_in_fp_curve(p, jv)) == p + 1


def supersingular_j_oracle(p: int) -> frozenset:
    """Indices of supersingular j in F_{p^2}, as images of the oracle lambda set."""
    K = QuadExtField(p)
    return frozenset(lambda_to_j(K.from_index(i)).index for i in supersingular_lambdas_oracle(p))


def special_supersingular_j(p: int) -> list[int]:
    """Those of 0, 1728 that are supersingular: 0 iff p = 2 mod 3, 1728 iff p = 3 mod 4."""
    out = []
    if p % 3 == 2:
        out.append(0)
    if p % 4 == 3:
        out.append(1728 % p)
    return out


def supersingular_j_values(p: int) -> list:
    """Roots of the j-line polynomial together with the special values, as F_{p^2} elements."""
    K = QuadExtField(p)
    return [K(j) for j in special_supersingular_j(p)] + roots_in_fp2(jline_polynomial(p))


@dataclass(frozen=True)
class SupersingularReport:
    p: int
    line: str
    polynomial: Polynomial
    roots_in_fp2: tuple
    verified: bool

    @property
    def count(self) -> int:
        return len(self.roots_in_fp2)

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "line": self.line,
            "p": self.p,
            "poly": self.polynomial.to_json(),
            "roots": [r.to_json() for r in self.roots_in_fp2],
            "verified": self.verified,
        }


def supersingular_report(p: int, line: str = "lambda") -> SupersingularReport:
    _check_p(p)
    if line == "lambda":
        poly = hasse_polynomial(p)
        roots = roots_in_fp2(poly)
        ok = all(is_supersingular_lambda(r) for r in roots)
    elif line == "j":
        poly = jline_polynomial(p)
        roots = roots_in_fp2(poly)
        ok = all(is_supersingular_j(p, r) for r in roots)
    else:
        raise InvalidInput(f"line must be 'lambda' or 'j', got {line!r}")
    ok = ok and len(roots) == poly.degree
    return SupersingularReport(p, line, poly, tuple(roots), ok)
