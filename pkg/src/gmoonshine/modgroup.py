"""Projective 2x2 rational matrices, PSL(2,p) quotients, cusps of Gamma(p) and genus counts."""
from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd

__all__ = [
    "GroupError",
    "GroupElt",
    "Psl2pElt",
    "Psl2pGroup",
    "parse_matrix",
    "named_matrix",
    "conjugate_by_theta",
    "unconjugate_by_theta",
    "reduce_mod_p",
    "generate",
    "full_group",
    "gamma_p_image",
    "identify",
    "check_relations",
    "Cusp",
    "cusps",
    "cusp_orbits",
    "GenusData",
    "genus",
    "star_k",
    "psl2_order",
    "BUILTINS",
    "S",
    "T",
    "elt_ops",
    "theta",
]


class GroupError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class GroupElt:
    """A 2x2 rational matrix up to nonzero scalars.

    Stored scaled to coprime integers with the first nonzero entry positive,
    so equality is plain tuple equality.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        ents = [Fraction(x) for x in (a, b, c, d)]
        if ents[0] * ents[3] - ents[1] * ents[2] == 0:
            raise GroupError(f"singular matrix {ents}")
        den = reduce(_lcm, (x.denominator for x in ents), 1)
        ints = [int(x * den) for x in ents]
        g = reduce(gcd, ints)
        ints = [x // g for x in ints]
        if next(x for x in ints if x) < 0:
            ints = [-x for x in ints]
        self.a, self.b, self.c, self.d = ints

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other: "GroupElt") -> "GroupElt":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return GroupElt(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "GroupElt":
        return GroupElt(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "GroupElt":
        base = self if n >= 0 else self.inverse()
        out = GroupElt(1, 0, 0, 1)
        for _ in range(abs(n)):
            out = out * base
        return out

    def act(self, tau: complex) -> complex:
        if complex(tau).imag <= 0:
            raise GroupError("tau must lie in the upper half plane")
        den = self.c * tau + self.d
        if den == 0:
            raise GroupError("c*tau + d vanishes")
        return (self.a * tau + self.b) / den

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def __eq__(self, other):
        return isinstance(other, GroupElt) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def elt_ops(x: GroupElt, y, op: str):
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "act_on_tau":
        return x.act(y)
    raise GroupError(f"unknown op {op!r}")


def theta(p: int) -> GroupElt:
    return GroupElt(1, 0, 0, p)


def conjugate_by_theta(x: GroupElt, p: int) -> GroupElt:
    """theta_p x theta_p^-1 with theta_p = diag(1, p)."""
    return GroupElt(x.a, Fraction(x.b, p), x.c * p, x.d)


def unconjugate_by_theta(x: GroupElt, p: int) -> GroupElt:
    """theta_p^-1 x theta_p, taking a tilde-side element back to the Gamma(p) side."""
    return GroupElt(x.a, x.b * p, Fraction(x.c, p), x.d)


# --- named matrices -----------------------------------------------------

DELTA = {5: (2, 5, 5, 13), 7: (2, 7, 7, 25), 11: (-40, -11, 11, 3), 13: (85, 13, 13, 2)}

S = GroupElt(0, -1, 1, 0)
T = GroupElt(1, 1, 0, 1)


def _alpha13(r: int) -> GroupElt:
    return GroupElt(11, 2 ** (3 - r), 92 * 2**r, 67)


def _builtin_table() -> dict[str, GroupElt]:
    tab: dict[str, GroupElt] = {"S": S, "T": T, "I": GroupElt(1, 0, 0, 1)}
    for p, ents in DELTA.items():
        tab[f"delta_{p}"] = GroupElt(*ents)
        tab[f"theta_{p}"] = theta(p)
    d5 = tab["delta_5"]
    tab["alpha_5i"] = T * S * d5 * T
    tab["alpha_7i"] = GroupElt(3, 2, -5, -3)
    tab["alpha_7ii"] = GroupElt(3, -2, 5, -3)
    tab["alpha_7iii"] = GroupElt(3, 2, -5, -3)
    tab["alphaprime_7iii"] = GroupElt(-4, 1, -5, 1)
    tab["alpha_11"] = GroupElt(1, 1, -2, -1)
    tab["alphaprime_11"] = GroupElt(1, 5, -2, -9)
    tab["Delta_13"] = tab["delta_13"] ** 2
    for r in range(4):
        tab[f"alpha_13r{r}"] = _alpha13(r)
    return tab


BUILTINS = _builtin_table()

_T_FRAC = re.compile(r"^T\^\{?(-?\d+)/(\d+)\}?$")
_W = re.compile(r"^W_?\{?(\d+)\}?$")
_POW = re.compile(r"^(.+?)\^\{?(-?\d+)\}?$")


def named_matrix(name: str) -> GroupElt:
    """Built-in names: S, T, T^{r/p}, W_N, delta_p, theta_p, alpha_<case>, Delta_13, or a literal."""
    name = name.strip()
    if name.startswith("["):
        return parse_matrix(name)
    if name in BUILTINS:
        return BUILTINS[name]
    m = _T_FRAC.match(name)
    if m:
        return GroupElt(1, Fraction(int(m.group(1)), int(m.group(2))), 0, 1)
    m = _W.match(name)
    if m:
        return GroupElt(0, -1, int(m.group(1)), 0)
    m = _POW.match(name)
    if m and m.group(1) in BUILTINS:
        return BUILTINS[m.group(1)] ** int(m.group(2))
    raise GroupError(f"unknown matrix name {name!r}")


_MAT = re.compile(r"^\[\[([^,\]]+),([^,\]]+)\],\[([^,\]]+),([^,\]]+)\]\]$")


def parse_matrix(text: str) -> GroupElt:
    """Parse ``[[a,b],[c,d]]`` with rational entries such as ``2/7``."""
    m = _MAT.match(re.sub(r"\s+", "", text))
    if not m:
        raise GroupError(f"bad matrix literal {text!r}")
    try:
        return GroupElt(*(Fraction(g) for g in m.groups()))
    except ValueError as exc:
        raise GroupError(f"bad matrix entry in {text!r}") from exc


# --- PSL(2,p) ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Psl2pElt:
    p: int
    m: tuple[int, int, int, int]

    @classmethod
    def make(cls, p: int, a: int, b: int, c: int, d: int) -> "Psl2pElt":
        t = (a % p, b % p, c % p, d % p)
        if (t[0] * t[3] - t[1] * t[2]) % p != 1:
            raise GroupError(f"matrix {t} does not have determinant 1 mod {p}")
        neg = tuple((-x) % p for x in t)
        return cls(p, min(t, neg))

    def __mul__(self, other: "Psl2pElt") -> "Psl2pElt":
        if self.p != other.p:
            raise GroupError("mixed primes")
        a, b, c, d = self.m
        e, f, g, h = other.m
        return Psl2pElt.make(self.p, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Psl2pElt":
        a, b, c, d = self.m
        return Psl2pElt.make(self.p, d, -b, -c, a)

    def __pow__(self, n: int) -> "Psl2pElt":
        base = self if n >= 0 else self.inverse()
        out = Psl2pElt.identity(self.p)
        for _ in range(abs(n)):
            out = out * base
        return out

    @classmethod
    def identity(cls, p: int) -> "Psl2pElt":
        return cls.make(p, 1, 0, 0, 1)

    def is_identity(self) -> bool:
        return self.m == (1, 0, 0, 1)

    def order(self) -> int:
        x, n = self, 1
        while not x.is_identity():
            x = x * self
            n += 1
        return n

    def act_vector(self, v: tuple[int, int]) -> tuple[int, int]:
        a, b, c, d = self.m
        return ((a * v[0] + b * v[1]) % self.p, (c * v[0] + d * v[1]) % self.p)

    def __repr__(self):
        a, b, c, d = self.m
        return f"[[{a},{b}],[{c},{d}]] mod {self.p}"


def reduce_mod_p(x: GroupElt, p: int) -> Psl2pElt:
    """Image in PSL(2,p) of an integral determinant-1 matrix."""
    det = x.det()
    if det != 1:
        if det % p == 0:
            raise GroupError(
                f"{x} has determinant {det} divisible by {p}; it is not p-integral in SL(2,Z). "
                f"Conjugate tilde-side elements back by theta_{p} first"
            )
        raise GroupError(f"{x} is not in SL(2,Z) up to scalars (determinant {det})")
    return Psl2pElt.make(p, *x.entries)


def psl2_order(p: int) -> int:
    return p * (p * p - 1) // 2


class Psl2pGroup:
    """A subgroup of PSL(2,p) with its full element set."""

    def __init__(self, p: int, generators, elements):
        self.p = p
        self.generators = tuple(generators)
        self.elements = frozenset(elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Psl2pElt) -> bool:
        return x in self.elements

    def __eq__(self, other):
        return isinstance(other, Psl2pGroup) and self.p == other.p and self.elements == other.elements

    def __hash__(self):
        return hash((self.p, self.elements))

    def __repr__(self):
        return f"Psl2pGroup(p={self.p}, order={self.order})"


def generate(gens, p: int | None = None) -> Psl2pGroup:
    """Closure of the given PSL(2,p) elements by breadth-first multiplication."""
    gens = list(gens)
    if not gens:
        if p is None:
            raise GroupError("empty generator list needs an explicit p")
        return Psl2pGroup(p, (), {Psl2pElt.identity(p)})
    p = gens[0].p
    if any(g.p != p for g in gens):
        raise GroupError("generators live in different PSL(2,p)")
    ident = Psl2pElt.identity(p)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return Psl2pGroup(p, gens, seen)


@lru_cache(maxsize=None)
def full_group(p: int) -> Psl2pGroup:
    elts = set()
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p == 1:
                        elts.add(Psl2pElt.make(p, a, b, c, d))
    return Psl2pGroup(p, (reduce_mod_p(S, p), reduce_mod_p(T, p)), elts)


def gamma_p_image(p: int) -> Psl2pGroup:
    """Image of Gamma(p) in PSL(2,p): the trivial group."""
    return generate([], p)


# --- identification -----------------------------------------------------

def _census(G: Psl2pGroup) -> dict[int, int]:
    out: dict[int, int] = {}
    for x in G.elements:
        o = x.order()
        out[o] = out.get(o, 0) + 1
    return dict(sorted(out.items()))


def identify(G: Psl2pGroup) -> tuple[str, dict[int, int]]:
    """Name the group by its order and element-order census.

    Returns ('other', census) when the profile matches none of the candidates.
    """
    n = G.order
    census = _census(G)
    if n == 1:
        return "trivial", census
    if max(census) == n:
        return f"cyclic_{n}", census
    if n % 2 == 0 and n >= 4:
        k = n // 2
        inv = k + (1 if k % 2 == 0 else 0)  # involutions in D_k
        if census.get(2, 0) == inv and census.get(k, 0) >= 1 and max(census) == k:
            if all(o == 2 or k % o == 0 for o in census):
                return f"dihedral_{k}", census
    known = {
        12: ("A4", {1: 1, 2: 3, 3: 8}),
        24: ("S4", {1: 1, 2: 9, 3: 8, 4: 6}),
        60: ("A5", {1: 1, 2: 15, 3: 20, 5: 24}),
    }
    if n in known and census == known[n][1]:
        return known[n][0], census
    if n == psl2_order(G.p):
        return f"L2({G.p})", census
    return "other", census


_WORD_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<num>-?\d+)|(?P<op>[()*^]))")


def _eval_word(word: str, gens: dict[str, Psl2pElt], p: int) -> Psl2pElt:
    toks = []
    pos = 0
    while pos < len(word):
        if word[pos].isspace():
            pos += 1
            continue
        m = _WORD_TOKEN.match(word, pos)
        if not m:
            raise GroupError(f"bad character {word[pos]!r} in word {word!r}")
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
        pos = m.end()
    i = 0

    def product():
        nonlocal i
        acc = Psl2pElt.identity(p)
        while i < len(toks) and toks[i][1] != ")":
            if toks[i][1] == "*":
                i += 1
                continue
            acc = acc * power()
        return acc

    def power():
        nonlocal i
        kind, val = toks[i]
        if val == "(":
            i += 1
            x = product()
            if i >= len(toks) or toks[i][1] != ")":
                raise GroupError(f"unbalanced parentheses in {word!r}")
            i += 1
        elif kind == "name":
            if val not in gens:
                raise GroupError(f"undeclared generator {val!r} in word {word!r}")
            x = gens[val]
            i += 1
        else:
            raise GroupError(f"unexpected {val!r} in word {word!r}")
        if i < len(toks) and toks[i][1] == "^":
            i += 1
            if i >= len(toks) or toks[i][0] != "num":
                raise GroupError(f"missing exponent in {word!r}")
            x = x ** int(toks[i][1])
            i += 1
        return x

    out = product()
    if i != len(toks):
        raise GroupError(f"unbalanced parentheses in {word!r}")
    return out


def check_relations(gens: dict[str, Psl2pElt], relations: list[str]) -> list[tuple[str, bool]]:
    """Evaluate each word in PSL(2,p); a relation passes when the word is the identity."""
    if not gens:
        raise GroupError("no generators declared")
    p = next(iter(gens.values())).p
    return [(w, _eval_word(w, gens, p).is_identity()) for w in relations]


# --- cusps -------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Cusp:
    p: int
    a: int
    c: int

    @classmethod
    def make(cls, p: int, a: int, c: int) -> "Cusp":
        v, w = (a % p, c % p), ((-a) % p, (-c) % p)
        if v == (0, 0):
            raise GroupError("zero vector is not a cusp")
        a, c = min(v, w)
        return cls(p, a, c)

    def __repr__(self):
        return f"({self.a},{self.c})"


def cusps(p: int) -> list[Cusp]:
    return sorted({Cusp.make(p, a, c) for a in range(p) for c in range(p) if (a, c) != (0, 0)})


def _act_cusp(x: Psl2pElt, cu: Cusp) -> Cusp:
    a, c = x.act_vector((cu.a, cu.c))
    return Cusp.make(cu.p, a, c)


def cusp_orbits(G: Psl2pGroup, among=None) -> list[list[Cusp]]:
    """Orbits of G on the cusps of Gamma(p) (or on a G-stable subset ``among``)."""
    pts = sorted(among) if among is not None else cusps(G.p)
    left = set(pts)
    orbits = []
    for cu in pts:
        if cu not in left:
            continue
        orb = {_act_cusp(x, cu) for x in G.elements}
        if not orb <= left:
            raise GroupError("cusp subset is not stable under the group")
        left -= orb
        orbits.append(sorted(orb))
    return orbits


# --- genus -------------------------------------------------------------

@dataclass(frozen=True)
class GenusData:
    index: int
    e2: int
    e3: int
    cusps: int
    genus: int


def _coset_perm(G: Psl2pGroup, x: Psl2pElt, coset_of: dict, reps: list) -> list[int]:
    return [coset_of[x * r] for r in reps]


def genus(G: Psl2pGroup) -> GenusData:
    """Genus of the curve attached to G via the action of PSL(2,p) on left cosets xG."""
    p = G.p
    full = full_group(p)
    coset_of: dict[Psl2pElt, int] = {}
    reps: list[Psl2pElt] = []
    for x in sorted(full.elements):
        if x in coset_of:
            continue
        idx = len(reps)
        reps.append(x)
        for g in G.elements:
            coset_of[x * g] = idx
    s, t = reduce_mod_p(S, p), reduce_mod_p(T, p)
    st = s * t
    perm_s = _coset_perm(G, s, coset_of, reps)
    perm_st = _coset_perm(G, st, coset_of, reps)
    perm_t = _coset_perm(G, t, coset_of, reps)
    mu = len(reps)
    e2 = sum(1 for i, j in enumerate(perm_s) if i == j)
    e3 = sum(1 for i, j in enumerate(perm_st) if i == j)
    seen, cyc = set(), 0
    for i in range(mu):
        if i in seen:
            continue
        cyc += 1
        j = i
        while j not in seen:
            seen.add(j)
            j = perm_t[j]
    twelve_g = 12 + mu - 3 * e2 - 4 * e3 - 6 * cyc
    if twelve_g % 12 or twelve_g < 0:
        raise GroupError(f"non-integral genus {twelve_g}/12 for index {mu}: internal inconsistency")
    return GenusData(mu, e2, e3, cyc, twelve_g // 12)


# --- star_k --------------------------------------------------------------

def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


SEARCH_BOUND = 10_000


def _centered(n: int) -> int:
    # 0, -1, 1, -2, 2, ...
    return (n + 1) // 2 * (1 if n % 2 == 0 else -1)


def _lift_with_divisible_c(x: Psl2pElt, k: int, rng: random.Random | None) -> GroupElt:
    """An SL(2,Z) matrix reducing to x mod p whose lower-left entry is divisible by k."""
    p = x.p
    a, b, c, d = x.m
    kk = abs(k)
    # c0 = c mod p and 0 mod k
    c0 = (c * kk * pow(kk, -1, p)) % (p * kk)
    for n in range(SEARCH_BOUND):
        if rng:
            c1 = c0 + p * kk * rng.randrange(-3, 4)
            d1 = d + p * rng.randrange(-30, 31)
        else:
            c1 = c0 + p * kk * _centered(n % 7)
            d1 = d + p * _centered(n // 7)
        g, u, v = _egcd(d1, -c1)  # u*d1 - v*c1 = g
        if g != 1:
            continue
        # a' = u + c1*s, b' = v + d1*s with a' = a, b' = b mod p
        if c1 % p:
            s = ((a - u) * pow(c1, -1, p)) % p
        else:
            s = ((b - v) * pow(d1, -1, p)) % p
        if rng:
            s += p * rng.randrange(-2, 3)
        a1, b1 = u + c1 * s, v + d1 * s
        return GroupElt(a1, b1, c1, d1)
    raise GroupError(f"no lift of {x} with {k} | c within {SEARCH_BOUND} trials")


def star_k(G_gens: list[GroupElt], k: int, p: int, rng: random.Random | None = None) -> list[GroupElt]:
    """The *k operation: representatives (a, k b; c/k, d) of coset representatives with k | c.

    ``G_gens`` are PSL(2,Z)-side elements normalising Gamma(p). Passing an
    ``rng`` re-chooses the representatives at random.
    """
    if gcd(k, p) != 1:
        raise GroupError(f"k={k} must be coprime to p={p}")
    if k == 0:
        raise GroupError("k must be nonzero")
    out = []
    for g in G_gens:
        x = reduce_mod_p(g, p)
        lift = _lift_with_divisible_c(x, k, rng)
        a, b, c, d = lift.entries
        out.append(GroupElt(a, k * b, Fraction(c, k), d))
    return out
