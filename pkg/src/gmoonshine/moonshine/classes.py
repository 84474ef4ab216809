"""Fricke labelings of (Z_p)^2, singular cusps and fixing-group verification."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..modgroup import (
    Cusp,
    GenusData,
    GroupElt,
    GroupError,
    Psl2pElt,
    Psl2pGroup,
    cusp_orbits,
    cusps,
    full_group,
    generate,
    genus,
    identify,
    reduce_mod_p,
    unconjugate_by_theta,
)
from ..exact import parse_cyc
from .characters import dirichlet_char, legendre

__all__ = [
    "CaseError",
    "ClassStructure",
    "CASE_IDS",
    "build_class_structure",
    "line_of",
    "singular_cusps",
    "relabel",
    "preserves_labels",
    "fricke_stabilizer",
    "FixingReport",
    "reduce_generators",
    "verify_fixing_group",
    "diagonal_criterion",
]

CASE_IDS = ("5i", "5ii", "7i", "7ii", "7iii", "11", "13r0", "13r1", "13r2", "13r3")


class CaseError(ValueError):
    pass


def line_of(v: tuple[int, int], p: int) -> tuple[int, int]:
    """Normalized projective point: (1:n) or (0:1)."""
    a, b = v[0] % p, v[1] % p
    if a:
        return (1, b * pow(a, -1, p) % p)
    if b:
        return (0, 1)
    raise CaseError("the zero vector has no line")


def projective_line(p: int) -> list[tuple[int, int]]:
    return [(1, n) for n in range(p)] + [(0, 1)]


@dataclass(frozen=True)
class ClassStructure:
    p: int
    line_labels: dict = field(hash=False)
    case_id: str = ""

    def is_fricke(self, v: tuple[int, int]) -> bool:
        """Fricke type of the element g^a h^b with v = (a, b)."""
        return self.line_labels[line_of(v, self.p)]

    def fricke_lines(self) -> list[tuple[int, int]]:
        return [ln for ln in projective_line(self.p) if self.line_labels[ln]]


def _labels(p: int, fricke_n: set[int], h_fricke: bool) -> dict:
    lab = {(1, n): n == 0 or n in fricke_n for n in range(p)}
    lab[(0, 1)] = h_fricke
    return lab


def build_class_structure(case_id: str) -> ClassStructure:
    """Labeling of P^1(F_p): g = (1:0) always Fricke, (1:n) from the set holding gh^n."""
    if case_id in ("5i", "5ii", "7i", "7ii"):
        p = int(case_id[0])
        qr = {n for n in range(1, p) if legendre(n, p) == 1}
        fricke = qr if case_id[1:] == "i" else set(range(1, p)) - qr
        return ClassStructure(p, _labels(p, fricke, False), case_id)
    if case_id == "7iii":
        return ClassStructure(7, _labels(7, set(range(1, 7)), True), case_id)
    if case_id == "11":
        return ClassStructure(11, _labels(11, set(range(1, 11)), True), case_id)
    if case_id in ("13r0", "13r1", "13r2", "13r3"):
        r = int(case_id[3])
        chi = dirichlet_char(13, 4, "i")
        target = {0: "-i", 1: "1", 2: "i", 3: "-1"}[r]
        want = parse_cyc(target)
        fricke = {n for n in range(1, 13) if chi(n) == want}
        return ClassStructure(13, _labels(13, fricke, False), case_id)
    raise CaseError(f"unknown case {case_id!r}; known: {', '.join(CASE_IDS)}")


def singular_cusps(cs: ClassStructure) -> list[Cusp]:
    """Cusp +-(a, c) is singular when the g^a h^-c sector is Fricke."""
    return [cu for cu in cusps(cs.p) if cs.is_fricke((cu.a, -cu.c))]


def relabel(x: Psl2pElt, v: tuple[int, int]) -> tuple[int, int]:
    """Image of the label vector v under x.

    Cusp (a, c) carries the label vector (a, -c), so the induced action on
    labels is conjugation of x by diag(1, -1).
    """
    a, b, c, d = x.m
    p = x.p
    return ((a * v[0] - b * v[1]) % p, (-c * v[0] + d * v[1]) % p)


def preserves_labels(cs: ClassStructure, x: Psl2pElt) -> bool:
    return all(cs.is_fricke(relabel(x, ln)) == lab for ln, lab in cs.line_labels.items())


def fricke_stabilizer(cs: ClassStructure) -> Psl2pGroup:
    full = full_group(cs.p)
    keep = [x for x in full.elements if preserves_labels(cs, x)]
    return Psl2pGroup(cs.p, (), keep)


def reduce_generators(gens: list[GroupElt], p: int) -> list[Psl2pElt]:
    """Reduce mod p, undoing the theta conjugation for tilde-side matrices."""
    out = []
    for g in gens:
        try:
            out.append(reduce_mod_p(g, p))
        except GroupError:
            out.append(reduce_mod_p(unconjugate_by_theta(g, p), p))
    return out


@dataclass
class FixingReport:
    case_id: str
    order: int
    name: str
    labels_preserved: bool
    singular_count: int
    orbit_sizes: list[int]
    genus: GenusData
    constant: bool = False
    group: Psl2pGroup | None = None

    @property
    def singular_orbits(self) -> int:
        return len(self.orbit_sizes)


def verify_fixing_group(cs: ClassStructure, gens: list[GroupElt]) -> FixingReport:
    G = generate(reduce_generators(gens, cs.p), cs.p)
    name, _ = identify(G)
    sing = singular_cusps(cs)
    ok = all(preserves_labels(cs, x) for x in G.generators)
    if not sing:
        return FixingReport(cs.case_id, G.order, name, ok, 0, [], genus(G), constant=True, group=G)
    if ok:
        sizes = [len(o) for o in cusp_orbits(G, among=sing)]
    else:
        sizes = []
    return FixingReport(cs.case_id, G.order, name, ok, len(sing), sizes, genus(G), group=G)


def diagonal_criterion(G: Psl2pGroup) -> list[tuple[int, int, bool, bool]]:
    """For each diag(a, d), (a, d) in F_p*, compare membership of its PGL class in G with (ad/p) = 1.

    Returns rows (a, d, in_image, legendre_says_yes).  A diagonal matrix with
    non-square determinant is not in PSL(2,p); a square one equals the
    scalar-rescaled diag(a', 1/a').
    """
    p = G.p
    rows = []
    for a in range(1, p):
        for d in range(1, p):
            det = a * d % p
            square = legendre(det, p) == 1
            inside = False
            if square:
                s = next(x for x in range(1, p) if x * x % p == det)
                si = pow(s, -1, p)
                inside = Psl2pElt.make(p, a * si, 0, 0, d * si) in G
            rows.append((a, d, inside, square))
    return rows
