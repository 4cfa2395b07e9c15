"""Independent oracles for the test suite. Nothing here imports srlab."""

from fractions import Fraction
from itertools import permutations, product
from math import comb


# --- A_5 as even permutations of five letters -------------------------------

def _parity(perm):
    seen, sign = set(), 1
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        sign *= (-1) ** (length - 1)
    return sign


def _compose(a, b):
    # (a*b)(i) = a(b(i))
    return tuple(a[b[i]] for i in range(len(a)))


def _inverse(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _order(a):
    e = tuple(range(len(a)))
    g, n = a, 1
    while g != e:
        g, n = _compose(g, a), n + 1
    return n


class A5:
    def __init__(self):
        self.elements = [p for p in permutations(range(5)) if _parity(p) == 1]
        self.identity = tuple(range(5))
        classes, seen = [], set()
        for g in self.elements:
            if g in seen:
                continue
            cl = {_compose(_compose(h, g), _inverse(h)) for h in self.elements}
            seen |= cl
            classes.append(frozenset(cl))
        self.classes = classes

    def order(self, cl):
        return _order(next(iter(cl)))

    def generates(self, gens):
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = _compose(x, g)
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return len(seen) == 60

    def nielsen(self, c1, c2, c3):
        raw = 0
        for g1 in c1:
            for g2 in c2:
                g3 = _inverse(_compose(g1, g2))
                if g3 in c3 and self.generates([g1, g2]):
                    raw += 1
        assert raw % 60 == 0
        return raw // 60


# --- modular curves -----------------------------------------------------------

def genus_x0(p):
    """Classical genus of X_0(p) from the index p+1 and elliptic/cusp counts."""
    nu2 = 1 + (1 if p % 4 == 1 else -1)
    nu3 = 1 + (1 if p % 3 == 1 else -1)
    g = 1 + Fraction(p + 1, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - 1
    assert g.denominator == 1
    return int(g)


def supersingular_count(p):
    return p // 12 + (p % 3 == 2) + (p % 4 == 3)


def hasse_coeffs(p):
    m = (p - 1) // 2
    return [comb(m, j) ** 2 % p for j in range(m + 1)]


# --- linear algebra for the monic ODE solution ---------------------------------

def monic_ode_solutions(p, a1, a2, a3, d):
    """All monic degree-d u over F_p with P0 u'' + P1 u' + P2 u = 0, by enumeration."""
    inv4 = pow(4, -1, p)
    c2 = ((1 + a1 + a2) ** 2 - a3 * a3) * inv4 % p
    out = []
    for low in product(range(p), repeat=d):
        u = list(low) + [1]
        res = [0] * (d + 2)
        for i, c in enumerate(u):
            # x(x-1) u'' + ((2+a1+a2) x - (1+a1)) u' + c2 u
            if i >= 2:
                k = i * (i - 1) * c
                res[i] += k
                res[i - 1] -= k
            if i >= 1:
                res[i] += (2 + a1 + a2) * i * c
                res[i - 1] -= (1 + a1) * i * c
            res[i] += c2 * c
        if all(r % p == 0 for r in res):
            out.append(u)
    return out


def rational_derivative(num, den, k, p):
    """k-th derivative of num/den over F_p on coefficient lists, no reduction."""
    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1) if a and b else []
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return out

    def d(a):
        return [(i * a[i]) % p for i in range(1, len(a))]

    def sub(a, b):
        n = max(len(a), len(b))
        a, b = a + [0] * (n - len(a)), b + [0] * (n - len(b))
        return [(x - y) % p for x, y in zip(a, b)]

    for _ in range(k):
        num, den = sub(mul(d(num), den), mul(num, d(den))), mul(den, den)
    return num, den
