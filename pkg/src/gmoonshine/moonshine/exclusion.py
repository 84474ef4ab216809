"""Rule-driven replay of the pair-exclusion searches.

A search fixes the relabeling g -> base twist, h -> g^a h^b and discards the
pairs (a, b) that contradict a class-structure constraint.  Each case carries
its own ordered rule list, written down as the corresponding argument uses it.
Filtering rules drop pairs; closure rules grow the excluded set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .characters import dirichlet_char, legendre
from .classes import CaseError, ClassStructure, build_class_structure

__all__ = ["Rule", "SearchResult", "SEARCHES", "exclusion_search", "rules_for"]

Pair = tuple[int, int]


@dataclass(frozen=True)
class Rule:
    name: str
    kind: str  # "filter" or "closure"
    fn: Callable = field(compare=False)
    note: str = ""


@dataclass
class SearchResult:
    case_id: str
    base: Pair
    pairs: set[Pair]
    trace: list[tuple[str, int]]
    block: tuple[int, ...] = ()
    partner: Callable | None = None

    def partners(self) -> set[Pair]:
        if self.partner is None:
            return set()
        return {self.partner(x) for x in self.pairs}


def _scale(v: Pair, n: int, p: int) -> Pair:
    return (v[0] * n % p, v[1] * n % p)


def _proportional(v: Pair, w: Pair, p: int) -> bool:
    return (v[0] * w[1] - v[1] * w[0]) % p == 0


# --- rule builders -------------------------------------------------------

def r_phi(base: Pair, p: int) -> Rule:
    return Rule("R-phi", "filter", lambda cs, v: not _proportional(v, base, p),
                "the image of h is not a power of the base twist")


def r_axes(p: int) -> Rule:
    return Rule("R-phi-axes", "filter", lambda cs, v: v[0] % p != 0 and v[1] % p != 0,
                "a = 0 and b = 0 contradict the phase bookkeeping")


def r_type() -> Rule:
    return Rule("R-type", "filter", lambda cs, v: cs.is_fricke(v) == cs.is_fricke((0, 1)),
                "g^a h^b has the Fricke type of h")


def r_shift(base: Pair, n: int, p: int) -> Rule:
    def ok(cs, v):
        image = ((n * base[0] + v[0]) % p, (n * base[1] + v[1]) % p)
        return cs.is_fricke((n, 1)) == cs.is_fricke(image)

    return Rule(f"R-shift({n})", "filter", ok, "T-power shift g^n h keeps its type")


def r_conj(block: tuple[int, ...], p: int) -> Rule:
    def close(cs, excluded: set[Pair]) -> set[Pair]:
        return {_scale(v, n, p) for v in excluded for n in block}

    return Rule("R-conj", "closure", close, f"powers {list(block)} give conjugate images")


def r_thm2(pairs: list[Pair]) -> Rule:
    bad = set(pairs)
    return Rule("R-thm2", "filter", lambda cs, v: v not in bad, "uniqueness of the twisted-sector phase")


def r_star_self(partner: Callable, block: tuple[int, ...], p: int) -> Rule:
    def ok(cs, v):
        w = partner(v)
        return all(_scale(w, n, p) != v for n in block)

    return Rule("R-star-self", "filter", ok, "Z and its conjugate cannot share a pair")


def r_star(partner: Callable) -> Rule:
    def close(cs, excluded: set[Pair]) -> set[Pair]:
        return excluded | {partner(v) for v in excluded}

    return Rule("R-star", "closure", close, "partner pairs of excluded pairs are excluded")


def r_det(base: Pair, block: tuple[int, ...], p: int) -> Rule:
    def ok(cs, v):
        return (base[0] * v[1] - base[1] * v[0]) % p in block

    return Rule("R-det", "filter", ok, "the relabeling matrix has determinant in the identity block")


# --- per-case searches ------------------------------------------------------

def _qr(p: int) -> tuple[int, ...]:
    return tuple(n for n in range(1, p) if legendre(n, p) == 1)


def _thm2_pairs(p: int, coeff: int, bs: list[int]) -> list[Pair]:
    """(coeff * b^2 * n, b * n) for the listed b and quadratic residues n."""
    return sorted({(coeff * b * b * n % p, b * n % p) for b in bs for n in _qr(p)})


def _partner_7(v: Pair) -> Pair:
    return (-v[1] % 7, -2 * v[0] % 7)


def _partner_11(v: Pair) -> Pair:
    return (5 * v[1] % 11, -2 * v[0] % 11)


def _chi4_kernel_13() -> tuple[int, ...]:
    chi = dirichlet_char(13, 4, "i")
    return tuple(sorted(chi.kernel()))


def _search_5i():
    base, p = (2, 3), 5
    return base, [r_phi(base, p), r_type(), r_shift(base, 1, p), r_shift(base, -1, p), r_conj(_qr(p), p)], _qr(p), None


def _search_7i():
    base, p = (3, 5), 7
    return base, [r_phi(base, p), r_type(), r_shift(base, 1, p), r_conj(_qr(p), p)], _qr(p), None


def _search_7iii():
    base, p = (3, 5), 7
    block = _qr(p)
    rules = [
        r_star_self(_partner_7, block, p),
        r_axes(p),
        r_phi(base, p),
        r_thm2(_thm2_pairs(p, 4, [1, -1, 2, -2])),
        r_conj(block, p),
        r_star(_partner_7),
    ]
    return base, rules, block, _partner_7


def _search_11():
    base, p = (1, 2), 11
    block = _qr(p)
    rules = [
        r_star_self(_partner_11, block, p),
        r_phi(base, p),
        r_axes(p),
        r_thm2(_thm2_pairs(p, 5, [2, -2, 3, -3, 4, -4, 5, -5])),
        r_conj(block, p),
        r_star(_partner_11),
    ]
    return base, rules, block, _partner_11


def _search_13r1():
    base, p = (11, 11), 13
    block = _chi4_kernel_13()
    rules = [r_type()] + [r_shift(base, n, p) for n in block] + [r_conj(block, p)]
    return base, rules, block, None


SEARCHES = {
    "5i": _search_5i,
    "7i": _search_7i,
    "7iii": _search_7iii,
    "11": _search_11,
    "13r1": _search_13r1,
}


def rules_for(case_id: str):
    if case_id not in SEARCHES:
        build_class_structure(case_id)  # unknown ids raise CaseError here
        raise CaseError(f"no transcribed exclusion search for case {case_id!r}")
    return SEARCHES[case_id]()


def exclusion_search(case_id: str, base_twist: Pair | None = None, require_det: bool = False) -> SearchResult:
    """Admissible pairs after the case's rules.

    ``require_det`` appends a determinant filter that the written arguments
    do not state: a relabeling realized by an SL(2,Z) element has
    determinant 1 mod p, up to the allowed rescaling by the identity block.
    """
    cs: ClassStructure = build_class_structure(case_id)
    base, rules, block, partner = rules_for(case_id)
    p = cs.p
    if require_det:
        rules = rules + [r_det(base, block, p)]
    if base_twist is not None and tuple(x % p for x in base_twist) != base:
        raise CaseError(f"case {case_id} is transcribed for base twist {base}, got {tuple(base_twist)}")
    universe = {(a, b) for a in range(p) for b in range(p) if (a, b) != (0, 0)}
    alive = set(universe)
    trace = []
    for rule in rules:
        if rule.kind == "filter":
            alive = {v for v in alive if rule.fn(cs, v)}
        else:
            alive = universe - rule.fn(cs, universe - alive)
        trace.append((rule.name, len(alive)))
    if not alive:
        raise CaseError(f"exclusion search for {case_id} removed every pair; rule transcription is inconsistent")
    return SearchResult(case_id, base, alive, trace, block, partner)
