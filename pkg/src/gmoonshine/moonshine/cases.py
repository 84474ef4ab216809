"""Per-case data: hauptmodul specs, fixing-group generators, presentations, class pairings."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..modgroup import GroupElt, GroupError, named_matrix, parse_matrix
from .classes import CASE_IDS, CaseError

__all__ = [
    "GeneratorSet",
    "SeriesSpec",
    "CaseData",
    "CASES",
    "case_data",
    "matrix_expr",
]

SPEC_25B = "eta*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)"
SPEC_25A = "eta*eta[1/5]*eta[4/5] / (eta[2/5]*eta[3/5]*eta(25)) + (1 + sqrt5)"
SPEC_49A = "z{12}^-1 * eta*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4 + (1/2 - 1/2*i*sqrt7)"
SPEC_49B = "z{24}^-1 * eta*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4 + (1/2 + 1/2*i*sqrt7)"
SPEC_7_PLUS = (
    "z{12}^-1 * eta*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4"
    " + z{24}^-1 * i*sqrt7 * eta(49)*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4"
    " + (1/2 - 1/2*i*sqrt7)"
)
SPEC_7_PLUS_CONJ = (
    "z{24}^-1 * eta*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4"
    " - z{12}^-1 * i*sqrt7 * eta(49)*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4"
    " + (1/2 + 1/2*i*sqrt7)"
)


def matrix_expr(text: str) -> GroupElt:
    """Product of named matrices or literals separated by '*'."""
    text = text.strip()
    if text.startswith("[["):
        return parse_matrix(text)
    out = None
    for part in text.split("*"):
        part = part.strip()
        if not part:
            raise GroupError(f"empty factor in {text!r}")
        m = parse_matrix(part) if part.startswith("[[") else named_matrix(part)
        out = m if out is None else out * m
    return out


@dataclass(frozen=True)
class GeneratorSet:
    label: str
    names: tuple[str, ...]
    relation_gens: dict = field(default_factory=dict, hash=False)
    relations: tuple[str, ...] = ()
    # (matrix expression, stated pair) realizing the relabeling onto the base twist
    realizes: tuple = ()

    def matrices(self) -> list[GroupElt]:
        return [matrix_expr(n) for n in self.names]


@dataclass(frozen=True)
class SeriesSpec:
    label: str
    dsl: str | None
    head: tuple[str, str] | None = None  # (scheme id, class name)
    conj_of: tuple[str, int] | None = None  # (label, galois index) this series should equal
    gen_set: str | None = None  # generator set used for numeric invariance


@dataclass(frozen=True)
class CaseData:
    case_id: str
    p: int
    gen_sets: tuple[GeneratorSet, ...]
    series: tuple[SeriesSpec, ...] = ()
    base_twist: tuple[int, int] | None = None
    star_from: tuple[str, int] | None = None  # (case, k) with star_k(case) = this case

    def gen_set(self, label: str) -> GeneratorSet:
        for g in self.gen_sets:
            if g.label == label:
                return g
        raise CaseError(f"{self.case_id} has no generator set {label!r}")


_S4_ALPHA = {"a1": "alpha_7iii*S", "a2": "delta_7*S", "a3": "S"}
_S4_ALPHA_REL = ("a1^2", "a2^2", "a3^2", "(a1*a2)^3", "(a2*a3)^3", "(a3*a1)^2")
_S4_PRIME = {"b1": "S", "b2": "S*alphaprime_7iii"}
_S4_PRIME_REL = ("b1^2", "b2^3", "(b1*b2)^4")
_A5_REL = ("a1^2", "a2^2", "a3^2", "(a1*a2)^3", "(a1*a3)^2", "(a2*a3)^5", "(a1*a2*a3)^5")


def _a4_13(r: int) -> GeneratorSet:
    return GeneratorSet(
        "main",
        ("Delta_13", f"alpha_13r{r}"),
        {"D": "Delta_13", "a": f"alpha_13r{r}"},
        ("D^3", "a^2", "(D*a)^3"),
        (("alpha_13r1", (9, 2)),) if r == 1 else (),
    )


CASES: dict[str, CaseData] = {
    "5i": CaseData(
        "5i", 5,
        (GeneratorSet("main", ("delta_5", "alpha_5i"), {"a": "alpha_5i", "d": "delta_5"},
                      ("a^3", "d^2", "(a*d)^2"), (("alpha_5i", (1, 2)),)),),
        (SeriesSpec("Z", SPEC_25B, head=("HN", "5C"), gen_set="main"),),
        base_twist=(2, 3),
    ),
    "5ii": CaseData(
        "5ii", 5,
        (GeneratorSet("main", ("delta_5", "T^{2/5}*W_25*T^{2/5}"),
                      {"a": "[[2,3],[1,2]]", "d": "delta_5"}, ("a^3", "d^2", "(a*d)^2")),),
        (SeriesSpec("Z", SPEC_25A, head=("HN", "5D"), conj_of=("5i:Z", 2), gen_set="main"),),
        star_from=("5i", 2),
    ),
    "7i": CaseData(
        "7i", 7,
        (GeneratorSet("main", ("delta_7", "alpha_7i"), {"b": "delta_7*alpha_7i^-1", "a": "alpha_7i"},
                      ("b^3", "a^2", "(b*a)^3"), (("alpha_7i", (5, 4)),)),),
        (SeriesSpec("Z", SPEC_49A, head=("He", "7E"), gen_set="main"),),
        base_twist=(3, 5),
    ),
    "7ii": CaseData(
        "7ii", 7,
        (GeneratorSet("main", ("delta_7", "alpha_7ii"), {"b": "delta_7*alpha_7ii^-1", "a": "alpha_7ii"},
                      ("b^3", "a^2", "(b*a)^3")),),
        (SeriesSpec("Z", SPEC_49B, head=("He", "7D"), conj_of=("7i:Z", -1), gen_set="main"),),
        star_from=("7i", -1),
    ),
    "7iii": CaseData(
        "7iii", 7,
        (
            GeneratorSet("alpha", ("delta_7", "alpha_7iii", "S"), _S4_ALPHA, _S4_ALPHA_REL,
                         (("alpha_7iii", (5, 4)),)),
            GeneratorSet("alphaprime", ("delta_7", "alphaprime_7iii", "S"), _S4_PRIME, _S4_PRIME_REL,
                         (("alphaprime_7iii", (3, 4)),)),
        ),
        (
            SeriesSpec("Z", SPEC_7_PLUS, head=("He", "7A"), gen_set="alpha"),
            SeriesSpec("Zstar", SPEC_7_PLUS_CONJ, head=("He", "7B"), conj_of=("7iii:Z", -1), gen_set="alphaprime"),
        ),
        base_twist=(3, 5),
    ),
    "11": CaseData(
        "11", 11,
        (
            GeneratorSet("alpha", ("delta_11", "alpha_11", "S"),
                         {"a1": "delta_11*S*alpha_11", "a2": "S", "a3": "alpha_11"}, _A5_REL,
                         (("alpha_11", (10, 10)),)),
            GeneratorSet("alphaprime", ("delta_11", "alphaprime_11", "S"),
                         {"a1": "delta_11*S*alphaprime_11", "a2": "S", "a3": "alphaprime_11"}, (),
                         (("alphaprime_11", (6, 2)),)),
        ),
        (
            SeriesSpec("upper", None, head=("M12", "11A")),
            SeriesSpec("lower", None, head=("M12", "11B"), conj_of=("11:upper", -1)),
        ),
        base_twist=(1, 2),
    ),
}
for _r in range(4):
    CASES[f"13r{_r}"] = CaseData(f"13r{_r}", 13, (_a4_13(_r),), base_twist=(11, 11) if _r == 1 else None)


def case_data(case_id: str) -> CaseData:
    if case_id not in CASES:
        raise CaseError(f"unknown case {case_id!r}; known: {', '.join(CASE_IDS)}")
    return CASES[case_id]
