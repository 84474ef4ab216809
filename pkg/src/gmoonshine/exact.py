"""Exact arithmetic in cyclotomic fields Q(zeta_M) over the rationals.

A :class:`CycNum` is stored on the power basis ``1, z, ..., z^(phi(M)-1)`` of
``Q(zeta_M)`` after reduction modulo the M-th cyclotomic polynomial, always at
the smallest conductor that contains the value.  Two numbers are therefore
equal exactly when their ``(conductor, coordinates)`` pairs are equal.
"""
from __future__ import annotations

import re
import threading
from fractions import Fraction
from math import gcd

__all__ = [
    "CycNum",
    "CycError",
    "Rat",
    "zeta",
    "embed_sqrt",
    "sqrt_int",
    "galois",
    "cyc_arith",
    "parse_cyc",
    "format_cyc",
    "cyclotomic_poly",
    "euler_phi",
]

Rat = Fraction


class CycError(ArithmeticError):
    """Raised for invalid cyclotomic operations (division by zero, bad Galois index, parse errors)."""


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n: int) -> int:
    r = n
    for q in _prime_factors(n):
        r -= r // q
    return r


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# --- per-conductor caches -------------------------------------------------
# Populated under a single lock; entries are immutable once published, so
# readers never need the lock.

_cache_lock = threading.Lock()
_phi_polys: dict[int, tuple[int, ...]] = {}
_power_tables: dict[int, tuple[tuple[int, ...], ...]] = {}
_embeddings: dict[tuple[int, int], tuple] = {}


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, den monic; coefficients low -> high
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise CycError("non-exact cyclotomic division")
    return out


def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    got = _phi_polys.get(n)
    if got is not None:
        return got
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _poly_divexact(num, list(cyclotomic_poly(d)))
    res = tuple(num)
    with _cache_lock:
        _phi_polys.setdefault(n, res)
    return _phi_polys[n]


def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row e holds the integer coordinates of zeta_m^e, 0 <= e < m."""
    got = _power_tables.get(m)
    if got is not None:
        return got
    poly = cyclotomic_poly(m)
    f = len(poly) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * f
    cur[0] = 1
    for e in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(f):
                cur[i] -= top * poly[i]
    res = tuple(rows)
    with _cache_lock:
        _power_tables.setdefault(m, res)
    return _power_tables[m]


def _embedding(m: int, d: int):
    """Data to recognise elements of Q(zeta_d) inside Q(zeta_m), d | m.

    Returns (rows, pivots, inverse): rows[e] are the Q(zeta_m) coordinates of
    zeta_d^e, pivots a set of coordinate positions on which the rows are
    independent, and inverse the inverse of that square minor.
    """
    key = (m, d)
    got = _embeddings.get(key)
    if got is not None:
        return got
    table = _power_table(m)
    fd = euler_phi(d)
    rows = [table[e * (m // d)] for e in range(fd)]
    # column-pivoted elimination on the transpose to pick independent columns
    ncols = len(rows[0])
    work = [[Fraction(v) for v in r] for r in rows]
    pivots: list[int] = []
    basis: list[list[Fraction]] = []  # echelon rows in column space
    cols = [[work[i][j] for i in range(fd)] for j in range(ncols)]
    for j, col in enumerate(cols):
        v = list(col)
        for piv_idx, b in zip(pivots, basis):
            lead = next(k for k, x in enumerate(b) if x)
            if v[lead]:
                c = v[lead] / b[lead]
                v = [x - c * y for x, y in zip(v, b)]
        if any(v):
            pivots.append(j)
            basis.append(v)
            if len(pivots) == fd:
                break
    minor = [[work[i][j] for j in pivots] for i in range(fd)]
    inverse = _mat_inverse(minor)
    res = (rows, tuple(pivots), inverse)
    with _cache_lock:
        _embeddings.setdefault(key, res)
    return _embeddings[key]


def _mat_inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c])
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _try_restrict(m: int, coords: tuple[Fraction, ...], d: int) -> tuple[Fraction, ...] | None:
    rows, pivots, inverse = _embedding(m, d)
    fd = len(rows)
    xs = [coords[j] for j in pivots]
    y = [sum((xs[k] * inverse[k][i] for k in range(fd)), Fraction(0)) for i in range(fd)]
    for j in range(len(coords)):
        if sum((y[i] * rows[i][j] for i in range(fd) if rows[i][j]), Fraction(0)) != coords[j]:
            return None
    return tuple(y)


def _odd_part_if_2mod4(n: int) -> int:
    return n // 2 if n % 4 == 2 else n


class CycNum:
    """An element of Q(zeta_M) in canonical (minimal-conductor) form."""

    __slots__ = ("_m", "_c", "_hash")

    def __init__(self, conductor: int = 1, coords=None):
        if conductor < 1:
            raise CycError("conductor must be positive")
        f = euler_phi(conductor)
        if coords is None:
            vec = [Fraction(0)] * f
        elif isinstance(coords, dict):
            # sparse input: exponent -> value, exponents taken mod conductor
            acc = [Fraction(0)] * conductor
            for e, v in coords.items():
                acc[e % conductor] += Fraction(v)
            vec = _fold(conductor, acc)
        else:
            vec = [Fraction(v) for v in coords]
            if len(vec) != f:
                vec = _fold(conductor, vec + [Fraction(0)] * (conductor - len(vec)))
        m, c = _canonical(conductor, tuple(vec))
        self._m = m
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, m: int, c: tuple[Fraction, ...]) -> "CycNum":
        obj = object.__new__(cls)
        obj._m, obj._c = _canonical(m, c)
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls._raw(1, (Fraction(x),))
        if isinstance(x, str):
            return parse_cyc(x)
        raise TypeError(f"cannot convert {type(x).__name__} to CycNum")

    # --- structure ---------------------------------------------------------
    @property
    def conductor(self) -> int:
        return self._m

    @property
    def coords(self) -> dict[int, Fraction]:
        return {e: v for e, v in enumerate(self._c) if v}

    def is_zero(self) -> bool:
        return not any(self._c)

    def is_rational(self) -> bool:
        return self._m == 1

    def to_fraction(self) -> Fraction:
        if self._m != 1:
            raise CycError(f"{self} is not rational")
        return self._c[0]

    def lift(self, m: int) -> tuple[Fraction, ...]:
        """Coordinates of this value in Q(zeta_m); requires conductor | m."""
        if m % self._m:
            raise CycError(f"conductor {self._m} does not divide {m}")
        if m == self._m:
            return self._c
        table = _power_table(m)
        step = m // self._m
        out = [Fraction(0)] * euler_phi(m)
        for e, v in enumerate(self._c):
            if v:
                for i, t in enumerate(table[e * step]):
                    if t:
                        out[i] += v * t
        return tuple(out)

    # --- arithmetic --------------------------------------------------------
    def _common(self, other: "CycNum"):
        m = _lcm(self._m, other._m)
        return m, self.lift(m), other.lift(m)

    def __add__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        m, a, b = self._common(other)
        return CycNum._raw(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(CycNum)
        obj._m, obj._c, obj._hash = self._m, tuple(-x for x in self._c), None
        return obj

    def __sub__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return CycNum.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return CycNum()
            obj = object.__new__(CycNum)
            obj._m, obj._c, obj._hash = self._m, tuple(x * other for x in self._c), None
            return obj
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        if other._m == 1:
            return self * other._c[0]
        if self._m == 1:
            return other * self._c[0]
        m, a, b = self._common(other)
        acc = [Fraction(0)] * m
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        acc[(i + j) % m] += x * y
        return CycNum._raw(m, tuple(_fold(m, acc)))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise CycError("division by zero in Q(zeta_M)")
        if self._m == 1:
            return CycNum._raw(1, (1 / self._c[0],))
        nz = [(e, v) for e, v in enumerate(self._c) if v]
        if len(nz) == 1:
            e, v = nz[0]
            return CycNum(self._m, {(-e) % self._m: 1 / v})
        # product of the other Galois conjugates over the (rational) norm
        m = self._m
        others = CycNum(1, [1])
        for k in range(2, m):
            if gcd(k, m) == 1:
                others = others * galois(self, k)
        norm = (self * others).to_fraction()
        return others * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise CycError("division by zero in Q(zeta_M)")
            return self * (1 / Fraction(other))
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycNum.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = CycNum(1, [1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "CycNum":
        return galois(self, -1)

    def __complex__(self) -> complex:
        import cmath

        w = cmath.exp(2j * cmath.pi / self._m)
        return complex(sum(float(v) * w**e for e, v in enumerate(self._c) if v))

    # --- comparisons -------------------------------------------------------
    def __eq__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self._m == other._m and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._c[0]) if self._m == 1 else hash((self._m, self._c))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycNum({format_cyc(self, pretty=False)!r})"

    def __str__(self):
        return format_cyc(self, pretty=True)


def _fold(m: int, acc) -> list[Fraction]:
    """Reduce a dense vector indexed by exponents mod m to power-basis coordinates."""
    table = _power_table(m)
    f = euler_phi(m)
    out = [Fraction(0)] * f
    for e, v in enumerate(acc):
        if v:
            if e < f:
                out[e] += v
            else:
                for i, t in enumerate(table[e]):
                    if t:
                        out[i] += v * t
    return out


def _canonical(m: int, c: tuple[Fraction, ...]) -> tuple[int, tuple[Fraction, ...]]:
    if m == 1:
        return 1, c
    if not any(c[1:]):
        return 1, (c[0],)
    # greedy descent: the set of admissible conductors is closed under gcd
    changed = True
    while changed and m > 1:
        changed = False
        for q in _prime_factors(m):
            d = _odd_part_if_2mod4(m // q)
            if d == m:
                continue
            y = _try_restrict(m, c, d)
            if y is not None:
                m, c = d, y
                changed = True
                break
    if m % 4 == 2:
        y = _try_restrict(m, c, m // 2)
        if y is not None:
            m, c = m // 2, y
    return m, c


# --- constructors -----------------------------------------------------------

def zeta(m: int, e: int = 1) -> CycNum:
    """The root of unity exp(2*pi*i*e/m)."""
    return CycNum(m, {e % m: 1})


def embed_sqrt(p: int) -> CycNum:
    """The quadratic Gauss sum sum_a (a/p) zeta_p^a.

    Squares to p for p = 1 mod 4 and to -p for p = 3 mod 4.
    """
    if p < 3 or len(_prime_factors(p)) != 1 or _prime_factors(p)[0] != p:
        raise CycError(f"{p} is not an odd prime")
    return CycNum(p, {a: _legendre(a, p) for a in range(1, p)})


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_int(n: int) -> CycNum:
    """Principal square root of an integer as a cyclotomic number."""
    if n == 0:
        return CycNum()
    out = zeta(4) if n < 0 else CycNum(1, [1])
    n = abs(n)
    for q in _prime_factors(n):
        k = 0
        while n % q == 0:
            n //= q
            k += 1
        out = out * (q ** (k // 2))
        if k % 2:
            if q == 2:
                r = zeta(8) + zeta(8, 7)
            else:
                r = embed_sqrt(q)
                if q % 4 == 3:
                    r = r * zeta(4, 3)
            out = out * r
    return out


def galois(a: CycNum, k: int) -> CycNum:
    """Apply zeta_M -> zeta_M^k."""
    a = CycNum.coerce(a)
    m = a.conductor
    if gcd(k, m) != 1:
        raise CycError(f"Galois index {k} not coprime to conductor {m}")
    if m == 1:
        return a
    acc = [Fraction(0)] * m
    for e, v in enumerate(a._c):
        if v:
            acc[(e * k) % m] += v
    return CycNum._raw(m, tuple(_fold(m, acc)))


def cyc_arith(a, b, op: str) -> CycNum:
    a, b = CycNum.coerce(a), CycNum.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# --- text -------------------------------------------------------------------

def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _zform(x: CycNum) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for e, v in enumerate(x._c):
        if not v:
            continue
        if e == 0:
            body = _fmt_rat(abs(v))
        else:
            mono = f"z{{{x.conductor}}}" + (f"^{e}" if e != 1 else "")
            body = mono if abs(v) == 1 else f"{_fmt_rat(abs(v))}*{mono}"
        parts.append(("-" if v < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def _quadratic_parts(x: CycNum):
    """Return (a, b, D) with x = a + b*sqrt(D) if x lies in a quadratic field."""
    m = x.conductor
    cands = []
    for d in _divisors(m):
        if d > 1 and all(d % (q * q) for q in _prime_factors(d)):
            cands += [d, -d]
    cands.append(-1)
    seen = set()
    for D in cands:
        if D in seen:
            continue
        seen.add(D)
        s = sqrt_int(D)
        if m % s.conductor:
            continue
        sol = _solve2(x.lift(m), CycNum(1, [1]).lift(m), s.lift(m))
        if sol is not None:
            return sol[0], sol[1], D
    return None


def _solve2(x, u, v):
    # solve x = a*u + b*v exactly over the coordinate vectors
    n = len(x)
    for i in range(n):
        for j in range(i + 1, n):
            det = u[i] * v[j] - u[j] * v[i]
            if det:
                a = (x[i] * v[j] - x[j] * v[i]) / det
                b = (u[i] * x[j] - u[j] * x[i]) / det
                if all(a * u[k] + b * v[k] == x[k] for k in range(n)):
                    return a, b
                return None
    return None


def _sqrt_name(D: int) -> str:
    if D == -1:
        return "i"
    if D < 0:
        return f"i*sqrt{-D}"
    return f"sqrt{D}"


def format_cyc(x: CycNum, pretty: bool = True) -> str:
    """Render as ``a + b*sqrtD`` when possible (pretty), else as ``c*z{M}^e`` terms."""
    x = CycNum.coerce(x)
    if x.is_rational():
        return _fmt_rat(x.to_fraction())
    if pretty:
        q = _quadratic_parts(x)
        if q is not None:
            a, b, D = q
            name = _sqrt_name(D)
            tail = name if abs(b) == 1 else f"{_fmt_rat(abs(b))}*{name}"
            if a == 0:
                return ("-" if b < 0 else "") + tail
            return f"{_fmt_rat(a)} {'-' if b < 0 else '+'} {tail}"
    return _zform(x)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<z>z\{(?P<zm>\d+)\})|(?P<sqrt>sqrt(?P<sn>\d+))|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^(){}]))"
)


class _Parser:
    """Recursive-descent parser for cyclotomic literals.

    Grammar: sums/differences of products/quotients of powers of atoms, with
    atoms integers, ``z{M}``, ``sqrtN``, ``sqrt(N)``, ``i`` and parentheses.
    """

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            mt = _TOKEN.match(text, pos)
            if not mt or mt.end() == pos:
                raise CycError(f"unexpected character {text[pos]!r} at position {pos} in {text!r}")
            kind = mt.lastgroup if mt.lastgroup not in ("zm", "sn") else None
            for k in ("num", "z", "sqrt", "name", "op"):
                if mt.group(k) is not None:
                    kind = k
                    break
            val = {"z": mt.group("zm"), "sqrt": mt.group("sn")}.get(kind, mt.group(kind))
            self.toks.append((kind, val, mt.start(kind)))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, val=None):
        tok = self.peek()
        if val is not None and tok[1] != val:
            raise CycError(f"expected {val!r} at position {tok[2]} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> CycNum:
        v = self.expr()
        if self.i != len(self.toks):
            raise CycError(f"trailing input at position {self.peek()[2]} in {self.text!r}")
        return v

    def expr(self):
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        v = self.term() * sign
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def term(self):
        v = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            f = self.factor()
            v = v * f if op == "*" else v / f
        return v

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            braced = self.peek()[1] in ("{", "(")
            if braced:
                close = "}" if self.take()[1] == "{" else ")"
            sign = 1
            if self.peek()[1] in ("+", "-"):
                sign = -1 if self.take()[1] == "-" else 1
            kind, val, pos = self.take()
            if kind != "num":
                raise CycError(f"expected integer exponent at position {pos} in {self.text!r}")
            if braced:
                self.take(close)
            return base ** (sign * int(val))
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return CycNum(1, [int(val)])
        if kind == "z":
            return zeta(int(val))
        if kind == "sqrt":
            return sqrt_int(int(val))
        if kind == "name" and val == "i":
            return zeta(4)
        if kind == "name" and val == "sqrt":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return sqrt_int(int(inner.to_fraction()))
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        if val in ("-", "+"):
            v = self.factor()
            return -v if val == "-" else v
        raise CycError(f"unexpected token {val!r} at position {pos} in {self.text!r}")


def parse_cyc(text: str) -> CycNum:
    """Parse a cyclotomic literal such as ``-1/2 + 1/2*i*sqrt11`` or ``z{11}^2+z{11}^6``."""
    if not text.strip():
        raise CycError("empty cyclotomic literal")
    return _Parser(text).parse()
