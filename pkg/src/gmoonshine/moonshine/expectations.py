"""Reader for the versioned expectations file."""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..exact import CycError, CycNum, parse_cyc

__all__ = ["ExpectationError", "CaseExpectation", "Expectations", "load_expectations", "data_dir"]

_PAIR = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


class ExpectationError(ValueError):
    pass


def data_dir() -> Path:
    """Package data directory, overridable through MOONSHINE_DATA."""
    env = os.environ.get("MOONSHINE_DATA")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent.parent / "data"


@dataclass
class CaseExpectation:
    case_id: str
    quotient: str
    order: int
    genus: int
    singular_orbits: int
    pairs: set | None
    partners: set | None = None


@dataclass
class Expectations:
    cases: dict[str, CaseExpectation] = field(default_factory=dict)
    series: dict[tuple[str, str], dict[int, CycNum]] = field(default_factory=dict)
    source: str = ""

    def case(self, case_id: str) -> CaseExpectation:
        if case_id not in self.cases:
            raise ExpectationError(f"no CASE line for {case_id!r} in {self.source}")
        return self.cases[case_id]


def _pairs(text: str):
    if text.strip() == "-":
        return None
    found = _PAIR.findall(text)
    rest = _PAIR.sub("", text).replace(",", "").strip()
    if not found or rest:
        raise ExpectationError(f"bad pair list {text!r}")
    return {(int(a), int(b)) for a, b in found}


def _parse_case(parts: list[str]) -> CaseExpectation:
    keys = {}
    i = 2
    order_keys = ["QUOTIENT", "ORDER", "GENUS", "SINGULAR_ORBITS", "PAIRS", "PARTNERS"]
    while i < len(parts):
        k = parts[i]
        if k not in order_keys:
            raise ExpectationError(f"unknown field {k!r}")
        j = i + 1
        while j < len(parts) and parts[j] not in order_keys:
            j += 1
        keys[k] = " ".join(parts[i + 1:j])
        i = j
    missing = [k for k in order_keys[:5] if k not in keys]
    if missing:
        raise ExpectationError(f"missing fields {missing}")
    return CaseExpectation(
        parts[1],
        keys["QUOTIENT"],
        int(keys["ORDER"]),
        int(keys["GENUS"]),
        int(keys["SINGULAR_ORBITS"]),
        _pairs(keys["PAIRS"]),
        _pairs(keys["PARTNERS"]) if "PARTNERS" in keys else None,
    )


def load_expectations(path=None) -> Expectations:
    path = Path(path) if path is not None else data_dir() / "expectations.txt"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ExpectationError(f"cannot read {path}: {exc}") from exc
    out = Expectations(source=str(path))
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "CASE":
                ce = _parse_case(parts)
                out.cases[ce.case_id] = ce
            elif parts[0] == "SERIES":
                if len(parts) < 5:
                    raise ExpectationError("expected SERIES <case> <label> <n> <coefficient>")
                out.series.setdefault((parts[1], parts[2]), {})[int(parts[3])] = parse_cyc(" ".join(parts[4:]))
            else:
                raise ExpectationError(f"unknown record {parts[0]!r}")
        except (ExpectationError, ValueError, CycError) as exc:
            raise ExpectationError(f"{path.name}:{lineno}: {exc}") from exc
    return out
