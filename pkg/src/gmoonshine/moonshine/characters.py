"""Character-table ingestion, Dirichlet characters and head-character expansions."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..exact import CycError, CycNum, parse_cyc
from ..qseries import QSeries

__all__ = [
    "TableError",
    "ClassInfo",
    "CharTable",
    "load_char_table",
    "legendre",
    "DirichletChar",
    "dirichlet_char",
    "classify_powers",
    "SCHEMES",
    "head_char_expansion",
]


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class ClassInfo:
    name: str
    order: int
    centralizer: int


@dataclass
class CharTable:
    group_name: str
    group_order: int
    classes: list[ClassInfo]
    power_maps: dict[int, dict[str, str]]
    irreducibles: list[list[CycNum]]
    source: str = ""

    def index(self, name: str) -> int:
        for i, c in enumerate(self.classes):
            if c.name == name:
                return i
        raise TableError(f"{self.group_name} has no class {name!r}")

    def value(self, char_number: int, class_name: str) -> CycNum:
        """chi_{char_number}(class), characters numbered from 1 as in the ATLAS."""
        if not 1 <= char_number <= len(self.irreducibles):
            raise TableError(f"{self.group_name} has no character chi_{char_number}")
        return self.irreducibles[char_number - 1][self.index(class_name)]

    def power(self, class_name: str, k: int) -> str:
        """Class of x^k for x in class_name, composing the stored prime power maps."""
        order = self.classes[self.index(class_name)].order
        k %= order
        if k == 0:
            return self.classes[0].name
        cur = class_name
        n = k
        q = 2
        while n > 1:
            while n % q == 0:
                if q not in self.power_maps:
                    raise TableError(f"{self.group_name}: no {q}-power map stored")
                cur = self.power_maps[q][cur]
                n //= q
            q += 1
        return cur

    def class_size(self, i: int) -> int:
        return self.group_order // self.classes[i].centralizer


def _inner(table: CharTable, u: list[CycNum], v: list[CycNum]) -> CycNum:
    tot = CycNum()
    for i, (x, y) in enumerate(zip(u, v)):
        if not x.is_zero() and not y.is_zero():
            tot = tot + x * y.conjugate() * table.class_size(i)
    return tot / table.group_order


def _validate(table: CharTable) -> None:
    n = len(table.classes)
    if table.classes[0].order != 1 or table.classes[0].centralizer != table.group_order:
        raise TableError("first class must be the identity class")
    if sum(table.class_size(i) for i in range(n)) != table.group_order:
        raise TableError("class sizes do not add up to the group order")
    for k, pm in table.power_maps.items():
        for src, dst in pm.items():
            o_src = table.classes[table.index(src)].order
            o_dst = table.classes[table.index(dst)].order
            if o_src % o_dst:
                raise TableError(f"power map {k}: {src} -> {dst} does not divide the element order")
    if not table.irreducibles:
        raise TableError("no irreducible characters")
    if any(v != 1 for v in table.irreducibles[0]):
        raise TableError("first irreducible must be the trivial character")
    for row in table.irreducibles:
        if len(row) != n:
            raise TableError("character row length differs from the number of classes")
    rows = table.irreducibles
    for i in range(len(rows)):
        for j in range(i, len(rows)):
            if _inner(table, rows[i], rows[j]) != (1 if i == j else 0):
                raise TableError(f"orthogonality fails for chi_{i + 1}, chi_{j + 1}")
    if len(rows) == n and sum(int(r[0].to_fraction()) ** 2 for r in rows) != table.group_order:
        raise TableError("sum of squared degrees differs from the group order")


def load_char_table(source, validate: bool = True) -> CharTable:
    """Read a table file; see the package README for the line format."""
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    name = None
    order = 0
    classes: list[ClassInfo] = []
    pmaps: dict[int, dict[str, str]] = {}
    chars: dict[int, list[CycNum]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        key = parts[0]
        try:
            if key == "GROUP":
                if len(parts) != 4 or parts[2] != "ORDER":
                    raise TableError("expected GROUP <name> ORDER <n>")
                name, order = parts[1], int(parts[3])
            elif key == "CLASS":
                if len(parts) != 4:
                    raise TableError("expected CLASS <name> <order> <centralizer>")
                classes.append(ClassInfo(parts[1], int(parts[2]), int(parts[3])))
            elif key == "POWERMAP":
                if len(parts) != 4:
                    raise TableError("expected POWERMAP <k> <from> <to>")
                pmaps.setdefault(int(parts[1]), {})[parts[2]] = parts[3]
            elif key == "CHAR":
                idx = int(parts[1])
                vals = [parse_cyc(v) for v in parts[2:]]
                if idx in chars:
                    raise TableError(f"duplicate character {idx}")
                chars[idx] = vals
            else:
                raise TableError(f"unknown record {key!r}")
        except (TableError, ValueError, CycError) as exc:
            raise TableError(f"{path.name}:{lineno}: {exc}") from exc
    if name is None:
        raise TableError(f"{path.name}: missing GROUP line")
    if sorted(chars) != list(range(1, len(chars) + 1)):
        raise TableError(f"{path.name}: characters must be numbered 1..n")
    names = {c.name for c in classes}
    for k, pm in pmaps.items():
        for src, dst in pm.items():
            if src not in names or dst not in names:
                raise TableError(f"{path.name}: power map {k} mentions unknown class")
    table = CharTable(name, order, classes, pmaps, [chars[i] for i in sorted(chars)], str(path))
    if validate:
        try:
            _validate(table)
        except TableError as exc:
            raise TableError(f"{path.name}: {exc}") from exc
    return table


# --- Dirichlet characters -------------------------------------------------

def legendre(a: int, p: int) -> int:
    """(a/p) computed as a^((p-1)/2) mod p."""
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _primitive_root(p: int) -> int:
    for m in range(2, p):
        if all(pow(m, (p - 1) // q, p) != 1 for q in _prime_divisors(p - 1)):
            return m
    raise ValueError(f"no primitive root mod {p}")


def _prime_divisors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class DirichletChar:
    p: int
    order: int
    values: dict[int, CycNum]

    def __call__(self, a: int) -> CycNum:
        a %= self.p
        return CycNum() if a == 0 else self.values[a]

    def kernel(self) -> set[int]:
        return {a for a, v in self.values.items() if v == 1}

    def __truediv__(self, other: "DirichletChar") -> dict[int, CycNum]:
        return {a: self.values[a] / other.values[a] for a in self.values}


def dirichlet_char(p: int, N: int, generator_image, generator: int | None = None) -> DirichletChar:
    """Homomorphism (Z/p)* -> <zeta_N> sending the generator (2 for p = 13) to generator_image."""
    if (p - 1) % N:
        raise ValueError(f"N={N} does not divide p-1={p - 1}")
    img = CycNum.coerce(generator_image)
    if img**N != 1 or any(img**d == 1 for d in range(1, N)):
        raise ValueError(f"{img} is not a primitive {N}-th root of unity")
    m = generator if generator is not None else _primitive_root(p)
    values: dict[int, CycNum] = {}
    x, v = 1, CycNum(1, [1])
    for _ in range(p - 1):
        values[x] = v
        x = x * m % p
        v = v * img
    if len(values) != p - 1:
        raise ValueError(f"{m} is not a generator of (Z/{p})*")
    return DirichletChar(p, N, values)


def classify_powers(table: CharTable, class_name: str, p: int | None = None) -> tuple[int, list[list[int]]]:
    """Group the exponents a = 1..p-1 by the class of h^a.

    Returns (number of blocks, blocks); the block containing 1 comes first.
    """
    order = table.classes[table.index(class_name)].order
    if p is None:
        p = order
    if order != p:
        raise TableError(f"class {class_name} has order {order}, not {p}")
    by_class: dict[str, list[int]] = {}
    for a in range(1, p):
        by_class.setdefault(table.power(class_name, a), []).append(a)
    blocks = sorted(by_class.values(), key=lambda b: (1 not in b, min(b)))
    return len(blocks), blocks


# --- head characters -------------------------------------------------------

SCHEMES: dict[str, dict] = {
    "HN": {
        "group": "HN",
        "coeffs": [
            {1: 1, 3: 1},
            {4: 1},
            {1: 1, 5: 1},
            {1: 1, 2: 1, 5: 1, 6: 1},
            {1: 1, 2: 1, 4: 1, 5: 1, 11: 1},
        ],
    },
    "He": {
        "group": "He",
        "coeffs": [
            {2: 1},
            {3: 1, 4: 1},
            {1: 1, 6: 1},
            {1: 1, 6: 1, 11: 1},
            {1: 1, 2: 1, 3: 1, 6: 1, 14: 1},
        ],
    },
    "M12": {
        "group": "M12",
        "coeffs": [
            {1: 1, 4: 1},
            {1: 1, 6: 1},
            {1: 1, 4: 1, 6: 1, 7: 1},
            {1: 1, 5: 2, 6: 1, 7: 1, 13: 1},
            {1: 2, 4: 2, 5: 1, 6: 2, 7: 2, 11: 1, 12: 1, 13: 1},
        ],
    },
}


def head_char_expansion(table: CharTable, class_name: str, scheme_id: str) -> QSeries:
    """q^-1 + 0 + sum_n (sum_i m_i chi_i(h)) q^n for n = 1..5, per the named scheme."""
    if scheme_id not in SCHEMES:
        raise TableError(f"unknown scheme {scheme_id!r}")
    scheme = SCHEMES[scheme_id]
    if scheme["group"] != table.group_name:
        raise TableError(f"scheme {scheme_id} is for {scheme['group']}, table is {table.group_name}")
    terms: dict[int, CycNum] = {-1: CycNum(1, [1])}
    for n, combo in enumerate(scheme["coeffs"], 1):
        tot = CycNum()
        for i, mult in combo.items():
            tot = tot + table.value(i, class_name) * mult
        terms[n] = tot
    return QSeries(terms, len(scheme["coeffs"]) + 1)
