"""Conjugacy classes of SL_2(p) and PSL_2(p) and brute-force Nielsen counts.

Class labels follow the root-of-unity conventions fixed in :mod:`srlab.algebra`:
zeta is the smallest primitive root mod p, zeta~ the first element of order
p+1 in F_{p^2}. pA is the class of [[1,1],[0,1]]; a unipotent element lies in
pA iff the off-diagonal parameter of its upper-triangular conjugate is a square.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .algebra import (
    PrimeField,
    check_odd_prime,
    legendre_symbol,
    primitive_root,
    smallest_nonresidue,
    zeta_tilde,
)
from .errors import CapExceeded, InvalidInput, VerificationError

SL2 = "SL2"
PSL2 = "PSL2"
DEFAULT_MAX_GROUP_P = 13

UNIPOTENT = ("pA", "pB")
NEG_UNIPOTENT = ("2pA", "2pB")


def _check_flavor(flavor: str) -> str:
    f = flavor.upper()
    if f not in (SL2, PSL2):
        raise InvalidInput(f"unknown group flavor {flavor!r}")
    return f


def conventions(p: int) -> dict:
    """The fixed choices every class label depends on."""
    zt = zeta_tilde(p)
    return {
        "nonresidue": smallest_nonresidue(p),
        "pA_anchor": [[1, 1], [0, 1]],
        "zeta": primitive_root(p),
        "zeta_tilde": [zt.a, zt.b],
    }


@lru_cache(maxsize=None)
def split_trace_table(p: int) -> dict[int, int]:
    """trace -> l for the classes C(l), 0 < l < (p-1)/2."""
    z = primitive_root(p)
    return {(pow(z, l, p) + pow(z, -l, p)) % p: l for l in range(1, (p - 1) // 2)}


@lru_cache(maxsize=None)
def nonsplit_trace_table(p: int) -> dict[int, int]:
    """trace -> l for the classes C~(l), 0 < l < (p+1)/2."""
    zt = zeta_tilde(p)
    out = {}
    for l in range(1, (p + 1) // 2):
        t = zt**l + zt ** (-l)
        assert t.b == 0, "zeta~^l + zeta~^-l is Frobenius-invariant"
        out[t.a] = l
    return out


# ---------------------------------------------------------------------------
# elements and classes


@dataclass(frozen=True)
class GroupElement:
    a: int
    b: int
    c: int
    d: int
    p: int
    flavor: str = SL2

    def __post_init__(self):
        p = self.p
        a, b, c, d = (x % p for x in (self.a, self.b, self.c, self.d))
        if (a * d - b * c) % p != 1:
            raise InvalidInput(f"[[{a},{b}],[{c},{d}]] has determinant != 1 mod {p}")
        flavor = _check_flavor(self.flavor)
        if flavor == PSL2:
            neg = tuple((-x) % p for x in (a, b, c, d))
            a, b, c, d = min((a, b, c, d), neg)
        for k, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, k, v)
        object.__setattr__(self, "flavor", flavor)

    @classmethod
    def from_rows(cls, rows, p: int, flavor: str = SL2) -> "GroupElement":
        (a, b), (c, d) = rows
        return cls(a, b, c, d, p, flavor)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o: "GroupElement") -> "GroupElement":
        a, b, c, d = self.entries
        e, f, g, h = o.entries
        return GroupElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h,
                            self.p, self.flavor)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a, self.p, self.flavor)

    def trace(self):
        return PrimeField(self.p)(self.a + self.d)

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def order(self) -> int:
        g, n = self, 1
        while not g.is_identity():
            g, n = g * self, n + 1
        return n

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


_LABEL_RE = re.compile(r"^(C|Ct|C~)\((\d+)\)$")


@dataclass(frozen=True)
class ConjClass:
    """A labelled conjugacy class. ``kind`` is one of I, -I, pA, pB, 2pA, 2pB, C, Ct."""

    p: int
    flavor: str
    kind: str
    l: int = 0

    def __post_init__(self):
        check_odd_prime(self.p)
        flavor = _check_flavor(self.flavor)
        object.__setattr__(self, "flavor", flavor)
        p, k, l = self.p, self.kind, self.l
        if k not in ("I", "-I", "pA", "pB", "2pA", "2pB", "C", "Ct"):
            raise InvalidInput(f"unknown class kind {k!r}")
        if flavor == PSL2 and k in ("-I", "2pA", "2pB"):
            raise InvalidInput(f"class {k} does not exist in PSL2")
        if k == "C":
            if not 0 < l < (p - 1) / 2:
                raise InvalidInput(f"C(l) needs 0 < l < (p-1)/2, got l={l}")
            if flavor == PSL2:
                object.__setattr__(self, "l", min(l, (p - 1) // 2 - l))
        elif k == "Ct":
            if not 0 < l < (p + 1) / 2:
                raise InvalidInput(f"Ct(l) needs 0 < l < (p+1)/2, got l={l}")
            if flavor == PSL2:
                object.__setattr__(self, "l", min(l, (p + 1) // 2 - l))
        elif l:
            raise InvalidInput(f"class {k} takes no index")

    @classmethod
    def parse(cls, label: str, p: int, flavor: str = SL2) -> "ConjClass":
        label = label.strip()
        m = _LABEL_RE.match(label)
        if m:
            kind = "C" if m.group(1) == "C" else "Ct"
            return cls(p, flavor, kind, int(m.group(2)))
        return cls(p, flavor, label)

    @property
    def label(self) -> str:
        if self.kind in ("C", "Ct"):
            return f"{self.kind}({self.l})"
        return self.kind

    @property
    def is_central(self) -> bool:
        return self.kind in ("I", "-I")

    @property
    def p_divides_order(self) -> bool:
        return self.kind in UNIPOTENT + NEG_UNIPOTENT

    @property
    def trace(self):
        """Trace of a representative (for PSL2 the representative fixed by the label)."""
        F, p = PrimeField(self.p), self.p
        if self.kind in ("I", "pA", "pB"):
            return F(2)
        if self.kind in ("-I", "2pA", "2pB"):
            return F(-2)
        if self.kind == "C":
            z = primitive_root(p)
            return F(pow(z, self.l, p) + pow(z, -self.l, p))
        zt = zeta_tilde(p)
        return F((zt**self.l + zt ** (-self.l)).a)

    @property
    def element_order(self) -> int:
        p, k, l = self.p, self.kind, self.l
        if k == "I":
            return 1
        if k == "-I":
            return 2
        if k in UNIPOTENT:
            return p
        if k in NEG_UNIPOTENT:
            return 2 * p
        n = p - 1 if k == "C" else p + 1
        if self.flavor == PSL2:
            n //= 2
        return n // gcd(n, l)

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "label": self.label,
            "order": self.element_order,
            "p": self.p,
            "trace": self.trace.value,
        }

    def __repr__(self):
        return self.label


def _unipotent_kind(a, b, c, d, p) -> str:
    # nilpotent part of a conjugate of [[1,x],[0,1]] has b = x*alpha^2, c = -x*gamma^2
    chi = legendre_symbol(-c, p) if c % p else legendre_symbol(b, p)
    return "pA" if chi == 1 else "pB"


def classify_element(M: GroupElement) -> ConjClass:
    p = M.p
    a, b, c, d = M.entries
    t = (a + d) % p
    if M.flavor == PSL2:
        if t == p - 2:
            a, b, c, d = (-a) % p, (-b) % p, (-c) % p, (-d) % p
            t = 2
        if t == 2:
            if (a, b, c, d) == (1, 0, 0, 1):
                return ConjClass(p, PSL2, "I")
            return ConjClass(p, PSL2, _unipotent_kind(a, b, c, d, p))
        lift = classify_element(GroupElement(a, b, c, d, p, SL2))
        return ConjClass(p, PSL2, lift.kind, lift.l)
    if t == 2:
        if (a, b, c, d) == (1, 0, 0, 1):
            return ConjClass(p, SL2, "I")
        return ConjClass(p, SL2, _unipotent_kind(a, b, c, d, p))
    if t == p - 2:
        if (a, b, c, d) == (p - 1, 0, 0, p - 1):
            return ConjClass(p, SL2, "-I")
        return ConjClass(p, SL2, "2" + _unipotent_kind(-a, -b, -c, -d, p))
    if legendre_symbol(t * t - 4, p) == 1:
        return ConjClass(p, SL2, "C", split_trace_table(p)[t])
    return ConjClass(p, SL2, "Ct", nonsplit_trace_table(p)[t])


def a_invariant(c: ConjClass) -> int:
    """p-1-2l for C(l), p+1-2l for Ct(l), 0 for classes of order divisible by p."""
    if c.is_central:
        raise InvalidInput("a_invariant is undefined on central classes")
    if c.p_divides_order:
        return 0
    if c.flavor == PSL2:
        raise InvalidInput(
            f"{c.label} in PSL2 has two lifts to SL2 with different a; lift explicitly"
        )
    return c.p - 1 - 2 * c.l if c.kind == "C" else c.p + 1 - 2 * c.l


@dataclass(frozen=True)
class ClassVector:
    classes: tuple[ConjClass, ConjClass, ConjClass]

    def __post_init__(self):
        cs = tuple(self.classes)
        if len(cs) != 3:
            raise InvalidInput("a class vector has exactly three entries")
        if len({(c.p, c.flavor) for c in cs}) != 1:
            raise InvalidInput("classes of a vector must share p and flavor")
        object.__setattr__(self, "classes", cs)

    @classmethod
    def parse(cls, labels, p: int, flavor: str = SL2) -> "ClassVector":
        return cls(tuple(ConjClass.parse(s, p, flavor) for s in labels))

    @property
    def p(self) -> int:
        return self.classes[0].p

    @property
    def flavor(self) -> str:
        return self.classes[0].flavor

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.classes]

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i):
        return self.classes[i]

    def __repr__(self):
        return "(" + ", ".join(self.labels) + ")"


_TWIST = {"pA": "pB", "pB": "pA", "2pA": "2pB", "2pB": "2pA"}


def outer_twist(v: ClassVector) -> ClassVector:
    """Image under the outer automorphism: swaps the two order-p (and order-2p) classes."""
    return ClassVector(tuple(
        ConjClass(c.p, c.flavor, _TWIST.get(c.kind, c.kind), c.l) for c in v
    ))


# ---------------------------------------------------------------------------
# enumerated groups


def _check_cap(p: int, max_p: int):
    if p > max_p:
        raise CapExceeded(f"group enumeration for p={p} exceeds the cap p <= {max_p}")


def enumerate_group(p: int, flavor: str = SL2, max_p: int = DEFAULT_MAX_GROUP_P):
    check_odd_prime(p)
    _check_cap(p, max_p)
    return [GroupElement(*e, p, flavor) for e in _raw_elements(p, _check_flavor(flavor))]


def _raw_elements(p: int, flavor: str) -> list[tuple[int, int, int, int]]:
    out = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p != 1:
                        continue
                    if flavor == PSL2 and (a, b, c, d) > tuple((-x) % p for x in (a, b, c, d)):
                        continue
                    out.append((a, b, c, d))
    return out


class MatrixGroup:
    """SL_2(p) or PSL_2(p) with a full Cayley table and class labels per element."""

    def __init__(self, p: int, flavor: str = SL2, max_p: int = DEFAULT_MAX_GROUP_P):
        check_odd_prime(p)
        _check_cap(p, max_p)
        self.p = p
        self.flavor = flavor = _check_flavor(flavor)
        self.raw = _raw_elements(p, flavor)
        n = self.order = len(self.raw)
        E = np.array(self.raw, dtype=np.int64)
        keys = ((E[:, 0] * p + E[:, 1]) * p + E[:, 2]) * p + E[:, 3]
        lookup = np.full(p**4, -1, dtype=np.int64)
        lookup[keys] = np.arange(n)
        self.index = {e: i for i, e in enumerate(self.raw)}
        self.identity = self.index[(1, 0, 0, 1)]

        a, b, c, d = (E[:, k] for k in range(4))
        table = np.empty((n, n), dtype=np.int32)
        chunk = max(1, 400_000 // n)
        for s in range(0, n, chunk):
            sl = slice(s, s + chunk)
            ai, bi, ci, di = (x[sl, None] for x in (a, b, c, d))
            prod = [(ai * a + bi * c) % p, (ai * b + bi * d) % p,
                    (ci * a + di * c) % p, (ci * b + di * d) % p]
            key = ((prod[0] * p + prod[1]) * p + prod[2]) * p + prod[3]
            if flavor == PSL2:
                neg = [(-x) % p for x in prod]
                nkey = ((neg[0] * p + neg[1]) * p + neg[2]) * p + neg[3]
                key = np.minimum(key, nkey)
            table[sl] = lookup[key]
        assert (table >= 0).all()
        self.table = table
        self.inv = np.argmax(table == self.identity, axis=1)

        self.classes: list[ConjClass] = []
        ids: dict[ConjClass, int] = {}
        class_of = np.empty(n, dtype=np.int32)
        for i, e in enumerate(self.raw):
            cl = classify_element(GroupElement(*e, p, flavor))
            if cl not in ids:
                ids[cl] = len(self.classes)
                self.classes.append(cl)
            class_of[i] = ids[cl]
        self.class_id = ids
        self.class_of = class_of
        self.members = {cl: np.flatnonzero(class_of == k) for cl, k in ids.items()}
        self.center = [i for i in range(n) if (table[i] == table[:, i]).all()]

    def element(self, i: int) -> GroupElement:
        return GroupElement(*self.raw[i], self.p, self.flavor)

    def class_size(self, c: ConjClass) -> int:
        return len(self.members.get(c, ()))

    def noncentral_classes(self) -> list[ConjClass]:
        return [c for c in self.classes if not c.is_central]

    def generates(self, gens) -> bool:
        """Closure of ``gens`` under multiplication; exits once past |G|/2 (Lagrange)."""
        n = self.order
        gens = np.asarray(gens, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[self.identity] = True
        count = 1
        frontier = np.array([self.identity])
        while frontier.size:
            nxt = np.unique(self.table[frontier][:, gens])
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            count += nxt.size
            if 2 * count > n:
                return True
            frontier = nxt
        return count == n

    def centralizer_size(self, gens) -> int:
        mask = np.ones(self.order, dtype=bool)
        for g in gens:
            mask &= self.table[:, g] == self.table[g, :]
        return int(mask.sum())

    def conjugates(self, g: int) -> np.ndarray:
        """h g h^-1 for every h, indexed by h."""
        return self.table[self.table[:, g], self.inv]

    def _candidates(self, g1: int, c2: ConjClass, c3: ConjClass):
        m2 = self.members.get(c2)
        if m2 is None or c3 not in self.class_id:
            return []
        g3 = self.inv[self.table[g1, m2]]
        ok = self.class_of[g3] == self.class_id[c3]
        return [(int(x), int(y)) for x, y in zip(m2[ok], g3[ok])]

    def nielsen_count(self, v: ClassVector, method: str = "division") -> int:
        if (v.p, v.flavor) != (self.p, self.flavor):
            raise InvalidInput("class vector does not belong to this group")
        c1, c2, c3 = v
        if c1 not in self.members:
            return 0
        if method == "orbits":
            return self._nielsen_by_orbits(v)
        if method != "division":
            raise InvalidInput(f"unknown counting method {method!r}")
        g1 = int(self.members[c1][0])
        z = len(self.center)
        found = 0
        for g2, _ in self._candidates(g1, c2, c3):
            if self.generates([g1, g2]):
                if self.centralizer_size([g1, g2]) != z:
                    raise VerificationError(
                        f"generating pair with centralizer larger than the center in {v}"
                    )
                found += 1
        raw = found * self.class_size(c1)
        if (raw * z) % self.order:
            raise VerificationError(f"raw triple count {raw} not divisible by |G/Z| for {v}")
        return raw * z // self.order

    def _nielsen_by_orbits(self, v: ClassVector) -> int:
        c1, c2, c3 = v
        n = self.order
        forms = set()
        for g1 in self.members[c1]:
            g1 = int(g1)
            conj1 = self.conjugates(g1)
            for g2, _ in self._candidates(g1, c2, c3):
                if not self.generates([g1, g2]):
                    continue
                key = conj1.astype(np.int64) * n + self.conjugates(g2)
                forms.add(int(key.min()))
        return len(forms)


@lru_cache(maxsize=8)
def get_group(p: int, flavor: str = SL2) -> MatrixGroup:
    return MatrixGroup(p, flavor, max_p=max(p, DEFAULT_MAX_GROUP_P))


def nielsen_count(v: ClassVector, max_p: int = DEFAULT_MAX_GROUP_P,
                  method: str = "division") -> int:
    """Generating triples with g1 g2 g3 = 1, g_i in C_i, up to simultaneous conjugation."""
    _check_cap(v.p, max_p)
    return get_group(v.p, v.flavor).nielsen_count(v, method=method)
