"""Exact arithmetic over F_p and F_{p^2}: scalars, polynomials, rational functions.

Everything is immutable and canonical (residues in [0, p), polynomials without
trailing zeros, rational functions reduced with monic denominator), so equality
is structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidInput


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def check_odd_prime(p: int) -> int:
    if not isinstance(p, int) or p == 2 or not is_prime(p):
        raise InvalidInput(f"{p!r} is not an odd prime")
    return p


# ---------------------------------------------------------------------------
# prime field


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        check_odd_prime(self.p)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            value = value.value
        return FieldElement(int(value) % self.p, self)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.p)]


def _coerce(x, field: PrimeField) -> int:
    if isinstance(x, FieldElement):
        if x.field.p != field.p:
            raise ValueError(f"mixing F_{x.field.p} and F_{field.p}")
        return x.value
    if isinstance(x, int):
        return x % field.p
    return NotImplemented


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    @property
    def p(self) -> int:
        return self.field.p

    def _new(self, v: int) -> "FieldElement":
        return FieldElement(v % self.field.p, self.field)

    def __add__(self, other):
        o = _coerce(other, self.field)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other, self.field)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = _coerce(other, self.field)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = _coerce(other, self.field)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return self._new(pow(self.value, -1, self.p))

    def __truediv__(self, other):
        o = _coerce(other, self.field)
        if o is NotImplemented:
            return NotImplemented
        return self * self._new(o).inverse()

    def __rtruediv__(self, other):
        o = _coerce(other, self.field)
        if o is NotImplemented:
            return NotImplemented
        return self.inverse() * o

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return self._new(pow(self.value, n, self.p))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field.p == other.field.p
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        # hashes like its canonical residue, so sets mix with plain ints
        return hash(self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def neg(x: FieldElement) -> FieldElement:
    return -x


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def binomial_mod_p(n: int, k: int, p: int) -> FieldElement:
    """C(n, k) reduced mod p; zero when k > n."""
    if n < 0 or k < 0:
        raise InvalidInput("binomial_mod_p takes nonnegative arguments")
    return PrimeField(p)(math.comb(n, k) if k <= n else 0)


def legendre_symbol(x, p: int | None = None) -> int:
    if isinstance(x, FieldElement):
        p, v = x.p, x.value
    else:
        if p is None:
            raise TypeError("need p for an int argument")
        v = x % p
    if v == 0:
        return 0
    return 1 if pow(v, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    check_odd_prime(p)
    for n in range(2, p):
        if legendre_symbol(n, p) == -1:
            return n
    raise AssertionError("unreachable for odd p")


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest generator of F_p^x."""
    check_odd_prime(p)
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable for odd p")


# ---------------------------------------------------------------------------
# quadratic extension F_p[s]/(s^2 - n), n the smallest non-residue


@dataclass(frozen=True)
class QuadExtField:
    p: int

    def __post_init__(self):
        check_odd_prime(self.p)

    @property
    def nonresidue(self) -> int:
        return smallest_nonresidue(self.p)

    def __call__(self, a, b=0) -> "QuadExtElement":
        if isinstance(a, QuadExtElement):
            return a
        return QuadExtElement(int(a) % self.p, int(b) % self.p, self)

    @property
    def gen(self) -> "QuadExtElement":
        """The square root s of the fixed non-residue."""
        return self(0, 1)

    def from_index(self, i: int) -> "QuadExtElement":
        return self(i % self.p, i // self.p)

    def elements(self) -> list["QuadExtElement"]:
        """All p^2 elements in index order a + b*p."""
        return [self.from_index(i) for i in range(self.p * self.p)]

    def units(self) -> list["QuadExtElement"]:
        return [self.from_index(i) for i in range(1, self.p * self.p)]


def _qcoerce(x, field: QuadExtField):
    if isinstance(x, QuadExtElement):
        if x.field.p != field.p:
            raise ValueError("mixing quadratic extensions of different p")
        return x.a, x.b
    if isinstance(x, FieldElement):
        return x.value, 0
    if isinstance(x, int):
        return x % field.p, 0
    return NotImplemented


@dataclass(frozen=True)
class QuadExtElement:
    a: int
    b: int
    field: QuadExtField

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def index(self) -> int:
        return self.a + self.b * self.field.p

    def in_base_field(self) -> bool:
        return self.b == 0

    def _new(self, a, b):
        p = self.field.p
        return QuadExtElement(a % p, b % p, self.field)

    def __add__(self, other):
        o = _qcoerce(other, self.field)
        if o is NotImplemented:
            return o
        return self._new(self.a + o[0], self.b + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = _qcoerce(other, self.field)
        if o is NotImplemented:
            return o
        return self._new(self.a - o[0], self.b - o[1])

    def __rsub__(self, other):
        o = _qcoerce(other, self.field)
        if o is NotImplemented:
            return o
        return self._new(o[0] - self.a, o[1] - self.b)

    def __mul__(self, other):
        o = _qcoerce(other, self.field)
        if o is NotImplemented:
            return o
        c, d = o
        n = self.field.nonresidue
        return self._new(self.a * c + n * self.b * d, self.a * d + self.b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.a, -self.b)

    def norm(self) -> int:
        return (self.a * self.a - self.field.nonresidue * self.b * self.b) % self.p

    def conjugate(self) -> "QuadExtElement":
        """Frobenius x -> x^p, which sends s to -s."""
        return self._new(self.a, -self.b)

    def inverse(self) -> "QuadExtElement":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("0 has no inverse in F_{p^2}")
        t = pow(nm, -1, self.p)
        return self._new(self.a * t, -self.b * t)

    def __truediv__(self, other):
        o = _qcoerce(other, self.field)
        if o is NotImplemented:
            return o
        return self * QuadExtElement(o[0], o[1], self.field).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self._new(1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = _qcoerce(other, self.field)
        if o is NotImplemented:
            return NotImplemented
        return (self.a, self.b) == o

    def __hash__(self):
        return hash((self.a, self.b, self.field.p))

    def __bool__(self):
        return bool(self.a or self.b)

    def multiplicative_order(self) -> int:
        if not self:
            raise ZeroDivisionError("0 has no multiplicative order")
        n = self.p * self.p - 1
        for q in _prime_factors(n):
            while n % q == 0 and self ** (n // q) == 1:
                n //= q
        return n

    def to_json(self):
        return self.a if self.b == 0 else {"quad": [self.a, self.b]}

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"{self.a}+{self.b}s"


@lru_cache(maxsize=None)
def zeta_tilde(p: int) -> QuadExtElement:
    """First element of order p+1 in the index enumeration of F_{p^2}^x."""
    for z in QuadExtField(p).units():
        if z.multiplicative_order() == p + 1:
            return z
    raise AssertionError("F_{p^2}^x is cyclic; an element of order p+1 exists")


# ---------------------------------------------------------------------------
# polynomials


Scalar = Union[int, FieldElement]


def _trim(cs: Sequence[int]) -> tuple[int, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial over F_p; ``coeffs`` ascending, no trailing zeros."""

    p: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        p = self.p
        object.__setattr__(self, "coeffs", _trim([int(c) % p for c in self.coeffs]))

    @classmethod
    def x(cls, p: int) -> "Polynomial":
        return cls(p, (0, 1))

    @classmethod
    def const(cls, p: int, c: Scalar) -> "Polynomial":
        return cls(p, (int(c),))

    @classmethod
    def from_roots(cls, p: int, roots: Iterable[Scalar]) -> "Polynomial":
        f = cls(p, (1,))
        for r in roots:
            f = f * cls(p, (-int(r), 1))
        return f

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coefficient(self, i: int) -> FieldElement:
        return PrimeField(self.p)(self.coeffs[i] if 0 <= i < len(self.coeffs) else 0)

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.p != self.p:
                raise ValueError("mixing polynomials over different primes")
            return other
        if isinstance(other, (int, FieldElement)):
            return Polynomial(self.p, (int(other),))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(self.p, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Polynomial(self.p)
        if (self.p - 1) ** 2 * min(len(a), len(b)) < 2**62:
            out = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
            return Polynomial(self.p, (out % self.p).tolist())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Polynomial(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial(self.p, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        c = int(c)
        return Polynomial(self.p, [c * a for a in self.coeffs])

    def shift(self, k: int) -> "Polynomial":
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return Polynomial(self.p, (0,) * k + self.coeffs)

    def __divmod__(self, other: "Polynomial"):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        dq = o.degree
        inv_lead = pow(o.leading, -1, p)
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * inv_lead % p
            quot[k] = c
            if c:
                for j, oc in enumerate(o.coeffs):
                    rem[k + j] = (rem[k + j] - c * oc) % p
        return Polynomial(p, quot), Polynomial(p, rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(pow(self.leading, -1, self.p))

    def derivative(self, k: int = 1) -> "Polynomial":
        """k-fold formal derivative."""
        if k < 0:
            raise ValueError("negative derivative order")
        if k == 0:
            return self
        out = []
        for i in range(k, len(self.coeffs)):
            ff = 1
            for t in range(i - k + 1, i + 1):
                ff *= t
            out.append(self.coeffs[i] * ff)
        return Polynomial(self.p, out)

    def __call__(self, pt):
        """Horner evaluation at an int, FieldElement or QuadExtElement."""
        if isinstance(pt, QuadExtElement):
            acc = pt.field(0)
            for c in reversed(self.coeffs):
                acc = acc * pt + c
            return acc
        v = int(pt) % self.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * v + c) % self.p
        return PrimeField(self.p)(acc)

    def compose(self, g: "Polynomial") -> "Polynomial":
        acc = Polynomial(self.p)
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd (zero iff both inputs are zero)."""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def is_squarefree(f: Polynomial) -> bool:
    if f.is_zero():
        raise InvalidInput("squarefreeness of the zero polynomial")
    return poly_gcd(f, f.derivative()).degree == 0


def roots_in_fp(f: Polynomial) -> set[FieldElement]:
    if f.is_zero():
        raise InvalidInput("roots of the zero polynomial")
    F = PrimeField(f.p)
    return {F(v) for v in range(f.p) if f(v) == 0}


def roots_in_fp2(f: Polynomial) -> list[QuadExtElement]:
    """All zeros of f in F_{p^2}, in index order."""
    if f.is_zero():
        raise InvalidInput("roots of the zero polynomial")
    p = f.p
    K = QuadExtField(p)
    n = K.nonresidue
    idx = np.arange(p * p, dtype=np.int64)
    a, b = idx % p, idx // p
    ra = np.zeros(p * p, dtype=np.int64)
    rb = np.zeros(p * p, dtype=np.int64)
    for c in reversed(f.coeffs):
        ra, rb = (ra * a + n * rb * b + c) % p, (ra * b + rb * a) % p
    return [K.from_index(int(i)) for i in np.flatnonzero((ra == 0) & (rb == 0))]


# ---------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True, eq=False)
class RationalFunction:
    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if self.num.p != self.den.p:
            raise ValueError("numerator and denominator over different primes")
        g = poly_gcd(self.num, self.den)
        num, den = self.num, self.den
        if g.degree > 0:
            num, den = num // g, den // g
        c = pow(den.leading, -1, den.p)
        object.__setattr__(self, "num", num.scale(c))
        object.__setattr__(self, "den", den.scale(c))

    @property
    def p(self) -> int:
        return self.num.p

    @classmethod
    def from_poly(cls, f: Polynomial) -> "RationalFunction":
        return cls(f, Polynomial(f.p, (1,)))

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, FieldElement)):
            return RationalFunction.from_poly(Polynomial(self.p, (int(other),)))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inverse() ** (-n)
        # num/den already coprime, so powers stay reduced
        return RationalFunction(self.num**n, self.den**n)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, RationalFunction) else other
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def cross_equal(self, other: "RationalFunction") -> bool:
        """a/b == c/d tested as a*d == c*b."""
        return self.num * other.den == other.num * self.den

    def derivative(self, k: int = 1) -> "RationalFunction":
        f = self
        for _ in range(k):
            n, d = f.num, f.den
            dd = d.derivative()
            g = poly_gcd(d, dd)
            # D(n/d) = (n' f - n e) / (d f) with d = g f, d' = g e
            fq = d // g
            e = dd // g
            f = RationalFunction(n.derivative() * fq - n * e, d * fq)
        return f

    def compose(self, g: "RationalFunction") -> "RationalFunction":
        """self(g)."""
        k = max(self.num.degree, self.den.degree, 0)
        a, b = g.num, g.den
        bpow = [Polynomial(self.p, (1,))]
        for _ in range(k):
            bpow.append(bpow[-1] * b)

        def homog(f: Polynomial) -> Polynomial:
            acc = Polynomial(self.p)
            apow = Polynomial(self.p, (1,))
            for i, c in enumerate(f.coeffs):
                if c:
                    acc = acc + (apow * bpow[k - i]).scale(c)
                apow = apow * a
            return acc

        return RationalFunction(homog(self.num), homog(self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return f"({self.num})"
        return f"({self.num}) / ({self.den})"


def derivative(f, k: int = 1):
    """k-fold formal derivative of a Polynomial or RationalFunction."""
    if k < 0:
        raise ValueError("negative derivative order")
    return f.derivative(k)
