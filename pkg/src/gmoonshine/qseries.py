"""Truncated Laurent series in fractional powers of q with cyclotomic coefficients.

Also holds the eta/Eisenstein builders, the eta-quotient DSL and numeric
evaluation on the upper half plane.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, inf

import numpy as np

from .exact import CycError, CycNum, format_cyc, galois, parse_cyc, sqrt_int, zeta

__all__ = [
    "QSeries",
    "SeriesError",
    "EtaFactor",
    "EtaTerm",
    "EtaQuotientSpec",
    "eta_series",
    "eta_shifted",
    "eta_scaled",
    "eisenstein_e4",
    "j_series",
    "series_arith",
    "build_eta_quotient",
    "galois_series",
    "eval_numeric",
    "parse_spec",
    "expand_text",
    "render_series",
    "series_lines",
]

ONE = CycNum(1, [1])


class SeriesError(ValueError):
    pass


def _as_frac(x) -> Fraction | float:
    if x == inf:
        return inf
    return Fraction(x)


class QSeries:
    """Sum of c_e q^e over rational exponents e, known exactly for e < trunc.

    ``trunc`` may be ``math.inf`` for exact finite sums (constants, monomials).
    """

    __slots__ = ("_terms", "trunc")

    def __init__(self, terms=None, trunc=inf):
        self.trunc = _as_frac(trunc)
        clean: dict[Fraction, CycNum] = {}
        for e, c in (terms or {}).items():
            e = Fraction(e)
            c = CycNum.coerce(c)
            if c.is_zero() or e >= self.trunc:
                continue
            clean[e] = c
        self._terms = dict(sorted(clean.items()))

    # --- constructors --------------------------------------------------
    @classmethod
    def constant(cls, c) -> "QSeries":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, e) -> "QSeries":
        return cls({e: c})

    # --- structure -----------------------------------------------------
    @property
    def terms(self) -> dict[Fraction, CycNum]:
        return dict(self._terms)

    @property
    def D(self) -> int:
        d = 1
        for e in self._terms:
            d = d * e.denominator // gcd(d, e.denominator)
        return d

    @property
    def valuation(self):
        return next(iter(self._terms), self.trunc)

    def leading(self) -> CycNum:
        if not self._terms:
            raise SeriesError("series has no known nonzero terms")
        return next(iter(self._terms.values()))

    def coeff(self, e) -> CycNum:
        e = Fraction(e)
        if e >= self.trunc:
            raise SeriesError(f"coefficient of q^{e} is beyond the truncation {self.trunc}")
        return self._terms.get(e, CycNum())

    def is_zero(self) -> bool:
        return not self._terms

    def truncate(self, t) -> "QSeries":
        return QSeries(self._terms, min(self.trunc, _as_frac(t)))

    # --- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = _coerce_series(other)
        t = min(self.trunc, other.trunc)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out[e] + c if e in out else c
        return QSeries(out, t)

    __radd__ = __add__

    def __neg__(self):
        return QSeries({e: -c for e, c in self._terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-_coerce_series(other))

    def __rsub__(self, other):
        return _coerce_series(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return QSeries({e: c * other for e, c in self._terms.items()}, self.trunc)
        other = _coerce_series(other)
        v1, v2 = self.valuation, other.valuation
        t = min(self.trunc + v2, other.trunc + v1)
        out: dict[Fraction, CycNum] = {}
        for e1, c1 in self._terms.items():
            if e1 + v2 >= t:
                break
            for e2, c2 in other._terms.items():
                e = e1 + e2
                if e >= t:
                    break
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return QSeries(out, t)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        if not self._terms:
            raise SeriesError("cannot invert a series with no known terms")
        v = self.valuation
        lead_inv = self.leading().inverse()
        rest = {e - v: c * lead_inv for e, c in self._terms.items() if e != v}
        if not rest:
            return QSeries({-v: lead_inv})
        if self.trunc == inf:
            raise SeriesError("inverse of an exact non-monomial needs a finite truncation")
        window = self.trunc - v  # relative precision of the unit part
        d = 1
        for e in rest:
            d = d * e.denominator // gcd(d, e.denominator)
        n_max = math.ceil(window * d)
        u = [CycNum()] * n_max
        for e, c in rest.items():
            k = int(e * d)
            if k < n_max:
                u[k] = c
        w = [CycNum()] * n_max
        w[0] = ONE
        nz = [k for k in range(1, n_max) if not u[k].is_zero()]
        for n in range(1, n_max):
            acc = CycNum()
            for k in nz:
                if k > n:
                    break
                if not w[n - k].is_zero():
                    acc = acc - u[k] * w[n - k]
            w[n] = acc
        terms = {Fraction(n, d) - v: c * lead_inv for n, c in enumerate(w)}
        return QSeries(terms, self.trunc - 2 * v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            if other == 0:
                raise SeriesError("division by zero")
            return self * (ONE / CycNum.coerce(other))
        return self * _coerce_series(other).inverse()

    def __rtruediv__(self, other):
        return _coerce_series(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QSeries.constant(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def rescale(self, m) -> "QSeries":
        """Substitute tau -> m*tau, i.e. multiply every exponent by m."""
        m = Fraction(m)
        if m <= 0:
            raise SeriesError("rescale factor must be positive")
        return QSeries({e * m: c for e, c in self._terms.items()}, self.trunc * m)

    def map_coeffs(self, f) -> "QSeries":
        return QSeries({e: f(c) for e, c in self._terms.items()}, self.trunc)

    # --- comparison / display -----------------------------------------
    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.trunc == other.trunc and self._terms == other._terms

    def agrees_with(self, other: "QSeries") -> bool:
        """Equal on the common window of validity."""
        t = min(self.trunc, other.trunc)
        return self.truncate(t)._terms == other.truncate(t)._terms

    def __hash__(self):
        return hash((self.trunc, tuple(self._terms.items())))

    def __repr__(self):
        return f"QSeries({render_series(self)})"

    __str__ = lambda self: render_series(self)


def _coerce_series(x) -> QSeries:
    if isinstance(x, QSeries):
        return x
    return QSeries.constant(CycNum.coerce(x))


def series_arith(a, b, op: str) -> QSeries:
    if op == "add":
        return _coerce_series(a) + b
    if op == "sub":
        return _coerce_series(a) - b
    if op == "mul":
        return _coerce_series(a) * b
    if op == "div":
        return _coerce_series(a) / b
    if op == "pow":
        return _coerce_series(a) ** int(b)
    if op == "rescale":
        return _coerce_series(a).rescale(b)
    raise SeriesError(f"unknown op {op!r}")


# --- builders ---------------------------------------------------------

def _unit_product(window: int, step: int, root: CycNum | None = None) -> list[CycNum]:
    """Coefficients of prod_{n>=1} (1 - r^n x^(step*n)) below x^window, r = root or 1."""
    poly = [CycNum()] * window
    poly[0] = ONE
    n = 1
    while step * n < window:
        k = step * n
        r = ONE if root is None else root**n
        for i in range(window - 1, k - 1, -1):
            if not poly[i - k].is_zero():
                poly[i] = poly[i] - r * poly[i - k]
        n += 1
    return poly


def _eta_like(m: int, shift: tuple[int, int] | None, trunc) -> QSeries:
    lead = Fraction(m, 24)
    trunc = Fraction(trunc)
    if trunc <= lead:
        return QSeries({}, trunc)
    window = math.ceil(trunc - lead)
    if shift is None:
        pref, root = ONE, None
    else:
        a, p = shift
        pref, root = zeta(24 * p, a), zeta(p, a)
    poly = _unit_product(window, m, root)
    return QSeries({lead + i: pref * c for i, c in enumerate(poly)}, trunc)


def eta_series(trunc) -> QSeries:
    """q^(1/24) prod (1 - q^n), exact below q^trunc."""
    return _eta_like(1, None, trunc)


def eta_scaled(m: int, trunc) -> QSeries:
    """eta(m tau)."""
    if m < 1:
        raise SeriesError("eta scale must be a positive integer")
    return _eta_like(m, None, trunc)


def eta_shifted(a: int, p: int, trunc) -> QSeries:
    """eta(tau + a/p) = zeta_{24p}^a q^(1/24) prod (1 - zeta_p^(a n) q^n)."""
    if not 0 <= a < p:
        raise SeriesError(f"shift {a}/{p} outside 0 <= a < p")
    return _eta_like(1, (a, p), trunc)


def _sigma3(n: int) -> int:
    return sum(d**3 for d in range(1, n + 1) if n % d == 0)


def eisenstein_e4(trunc, m: int = 1) -> QSeries:
    """E4(m tau) = 1 + 240 sum sigma_3(n) q^(m n)."""
    trunc = Fraction(trunc)
    terms = {0: 1}
    n = 1
    while m * n < trunc:
        terms[m * n] = 240 * _sigma3(n)
        n += 1
    return QSeries(terms, trunc)


def j_series(trunc) -> QSeries:
    """E4^3 / eta^24 - 744."""
    trunc = Fraction(trunc)
    # E4^3 has valuation 0 and eta^24 valuation 1; relative window trunc + 1
    num = eisenstein_e4(trunc + 1) ** 3
    den = eta_series(Fraction(1, 24) + trunc + 1) ** 24
    return num / den - 744


# --- eta quotient specs -------------------------------------------------

@dataclass(frozen=True, order=True)
class EtaFactor:
    """One factor: kind is 'eta_scaled' (param m), 'eta_shifted' (param (a, p)) or 'e4' (param m)."""

    kind: str
    param: object

    def __post_init__(self):
        if self.kind == "eta_shifted":
            a, p = self.param
            if not 0 <= a < p:
                raise SeriesError(f"shift {a}/{p} outside 0 <= a < p")
            if a == 0:
                object.__setattr__(self, "kind", "eta_scaled")
                object.__setattr__(self, "param", 1)
        elif self.kind in ("eta_scaled", "e4"):
            if not isinstance(self.param, int) or self.param < 1:
                raise SeriesError(f"{self.kind} needs a positive integer scale")
        else:
            raise SeriesError(f"unknown factor kind {self.kind!r}")

    @property
    def valuation(self) -> Fraction:
        if self.kind == "eta_scaled":
            return Fraction(self.param, 24)
        if self.kind == "eta_shifted":
            return Fraction(1, 24)
        return Fraction(0)

    def series(self, trunc) -> QSeries:
        if self.kind == "eta_scaled":
            return eta_scaled(self.param, trunc)
        if self.kind == "eta_shifted":
            return eta_shifted(*self.param, trunc)
        return eisenstein_e4(trunc, self.param)

    def numeric(self, tau: complex, terms: int) -> complex:
        if self.kind == "eta_scaled":
            return eta_numeric(self.param * tau, terms)
        if self.kind == "eta_shifted":
            a, p = self.param
            return eta_numeric(tau + a / p, terms)
        return e4_numeric(self.param * tau, terms)

    def text(self) -> str:
        if self.kind == "eta_scaled":
            return "eta" if self.param == 1 else f"eta({self.param})"
        if self.kind == "eta_shifted":
            return f"eta[{self.param[0]}/{self.param[1]}]"
        return "E4" if self.param == 1 else f"E4({self.param})"


@dataclass(frozen=True)
class EtaTerm:
    coefficient: CycNum
    factors: tuple[tuple[EtaFactor, int], ...]

    @property
    def valuation(self) -> Fraction:
        return sum((f.valuation * k for f, k in self.factors), Fraction(0))


@dataclass(frozen=True)
class EtaQuotientSpec:
    """A sum of scaled eta/E4 monomials plus a constant.

    The single-quotient case is one term; symmetrised sums use several.
    """

    terms: tuple[EtaTerm, ...]
    constant: CycNum = field(default_factory=CycNum)

    @classmethod
    def single(cls, factors, constant=0, overall=1) -> "EtaQuotientSpec":
        return cls((EtaTerm(CycNum.coerce(overall), tuple(factors)),), CycNum.coerce(constant))

    def __post_init__(self):
        for t in self.terms:
            if not t.factors:
                raise SeriesError("each term needs at least one factor")
            if any(k == 0 for _, k in t.factors):
                raise SeriesError("factor exponents must be nonzero")

    def galois(self, k: int) -> "EtaQuotientSpec":
        """Conjugate coefficients only (the factors themselves are not touched)."""
        return EtaQuotientSpec(
            tuple(EtaTerm(galois(t.coefficient, k), t.factors) for t in self.terms),
            galois(self.constant, k),
        )

    def text(self) -> str:
        parts = []
        for t in self.terms:
            num = [f.text() + (f"^{k}" if k != 1 else "") for f, k in t.factors if k > 0]
            den = [f.text() + (f"^{-k}" if k != -1 else "") for f, k in t.factors if k < 0]
            s = "*".join(num) if num else "1"
            if den:
                s += "/(" + "*".join(den) + ")"
            if t.coefficient != 1:
                s = f"({format_cyc(t.coefficient)})*" + s
            parts.append(s)
        if not self.constant.is_zero():
            parts.append(f"({format_cyc(self.constant)})")
        return " + ".join(parts)


def build_eta_quotient(spec: EtaQuotientSpec, trunc=6) -> QSeries:
    """Exact expansion of the spec, valid below q^trunc."""
    trunc = Fraction(trunc)
    total = QSeries.constant(spec.constant)
    for term in spec.terms:
        v = term.valuation
        rel = trunc - v
        acc = QSeries.constant(term.coefficient)
        for fac, k in term.factors:
            base = fac.series(fac.valuation + rel)
            acc = acc * base**k
        total = total + acc
    return total.truncate(trunc)


def galois_series(s: QSeries, k: int) -> QSeries:
    return s.map_coeffs(lambda c: galois(c, k))


# --- numerics -----------------------------------------------------------

_EPS = 1e-17


def _n_terms(q_abs: float, minimum: int) -> int:
    if q_abs <= 0:
        return minimum
    need = math.ceil(math.log(_EPS) / math.log(q_abs)) + 1
    return max(minimum, need)


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise SeriesError(f"tau must lie in the upper half plane, got {tau}")
    return tau


def eta_numeric(tau: complex, terms: int = 40) -> complex:
    tau = _check_tau(tau)
    q = cmath.exp(2j * cmath.pi * tau)
    n = np.arange(1, _n_terms(abs(q), terms) + 1)
    log_prod = np.sum(np.log1p(-np.exp(2j * np.pi * tau * n)))
    return complex(np.exp(2j * np.pi * tau / 24 + log_prod))


def e4_numeric(tau: complex, terms: int = 40) -> complex:
    tau = _check_tau(tau)
    q = cmath.exp(2j * cmath.pi * tau)
    n = np.arange(1, 2 * _n_terms(abs(q), terms) + 1)
    qn = np.exp(2j * np.pi * tau * n)
    return complex(1 + 240 * np.sum(n.astype(float) ** 3 * qn / (1 - qn)))


def eval_numeric(obj, tau: complex, precision_terms: int = 40) -> complex:
    """Evaluate a spec by its defining products, or a series by summing its stored terms.

    For a series the truncation error is of the size of the first omitted
    term, roughly |q|^trunc times the coefficient growth.
    """
    tau = _check_tau(tau)
    if isinstance(obj, EtaQuotientSpec):
        total = complex(obj.constant)
        for t in obj.terms:
            val = complex(t.coefficient)
            for fac, k in t.factors:
                val *= fac.numeric(tau, precision_terms) ** k
            total += val
        return total
    if isinstance(obj, QSeries):
        return sum(
            (complex(c) * cmath.exp(2j * cmath.pi * float(e) * tau) for e, c in obj.terms.items()),
            0j,
        )
    raise TypeError(f"cannot evaluate {type(obj).__name__}")


# --- rendering ----------------------------------------------------------

def _fmt_exp(e: Fraction) -> str:
    if e == 1:
        return "q"
    if e.denominator == 1 and e > 0:
        return f"q^{e.numerator}"
    if e.denominator == 1:
        return f"q^{{{e.numerator}}}"
    return f"q^{{{e.numerator}/{e.denominator}}}"


def _fmt_term(e: Fraction, c: CycNum) -> tuple[str, str]:
    """Return (sign, body) for one term."""
    if e == 0:
        txt = format_cyc(c)
        if txt.startswith("-") and (" + " not in txt and " - " not in txt[1:]):
            return "-", txt[1:]
        return "+", txt if (" + " not in txt and " - " not in txt[1:]) else f"({txt})"
    if c == 1:
        return "+", _fmt_exp(e)
    if c == -1:
        return "-", _fmt_exp(e)
    txt = format_cyc(c)
    simple = " + " not in txt and " - " not in txt[1:]
    if simple and txt.startswith("-"):
        return "-", f"{txt[1:]}*{_fmt_exp(e)}"
    if simple:
        return "+", f"{txt}*{_fmt_exp(e)}"
    return "+", f"({txt})*{_fmt_exp(e)}"


def render_series(s: QSeries) -> str:
    """Human-readable form such as ``q^{-1} + 0 + (3/2 - 5/2*sqrt5)*q + ...``."""
    items = list(s.terms.items())
    if s.valuation < 0 < s.trunc and Fraction(0) not in s.terms:
        items.append((Fraction(0), CycNum()))
        items.sort(key=lambda t: t[0])
    parts: list[tuple[str, str]] = []
    for e, c in items:
        parts.append(("+", "0") if c.is_zero() else _fmt_term(e, c))
    if not parts:
        out = "0"
    else:
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
    if s.trunc != inf:
        out += " + ..."
    return out


def series_lines(s: QSeries) -> list[str]:
    """Machine-readable ``EXP <num>/<den> COEFF <cycnum>`` lines."""
    items = dict(s.terms)
    if s.valuation < 0 < s.trunc:
        items.setdefault(Fraction(0), CycNum())
    return [
        f"EXP {e.numerator}/{e.denominator} COEFF {format_cyc(c)}"
        for e, c in sorted(items.items())
    ]


# --- DSL ----------------------------------------------------------------
# An expression is normalised to a Laurent polynomial in the factors:
# {tuple(sorted((factor, exponent))): coefficient}.

_DSL_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<eta>eta)|(?P<e4>E4)|(?P<z>z\{\d+\})|(?P<sqrt>sqrt\d+)|(?P<sqrtf>sqrt)"
    r"|(?P<i>i\b)|(?P<num>\d+)|(?P<op>[-+*/^()\[\]{}])"
)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            exps = dict(ka)
            for f, k in kb:
                exps[f] = exps.get(f, 0) + k
            key = tuple(sorted((f, k) for f, k in exps.items() if k))
            out[key] = out.get(key, CycNum()) + ca * cb
    return {k: v for k, v in out.items() if not v.is_zero()}


def _poly_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, CycNum()) + v * sign
    return {k: v for k, v in out.items() if not v.is_zero()}


def _poly_pow(a: dict, n: int, where: int) -> dict:
    if n < 0:
        if len(a) != 1:
            raise SeriesError(f"negative power of a sum at position {where}")
        (key, c), = a.items()
        return {tuple((f, -k) for f, k in key): ONE / c} if n == -1 else _poly_pow(_poly_pow(a, -1, where), -n, where)
    out = {(): ONE}
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


class _SpecParser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            mt = _DSL_TOKEN.match(text, pos)
            if not mt:
                raise SeriesError(f"unexpected character {text[pos]!r} at position {pos}")
            if mt.lastgroup != "ws":
                self.toks.append((mt.lastgroup, mt.group(), pos))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self, val=None):
        tok = self.peek()
        if val is not None and tok[1] != val:
            raise SeriesError(f"expected {val!r} at position {tok[2]}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def integer(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "num":
            raise SeriesError(f"expected integer at position {pos}")
        return sign * int(val)

    def parse(self) -> dict:
        v = self.expr()
        if self.i != len(self.toks):
            raise SeriesError(f"trailing input at position {self.peek()[2]}")
        return v

    def expr(self) -> dict:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        v = _poly_mul({(): CycNum.coerce(sign)}, self.term())
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            v = _poly_add(v, self.term(), 1 if op == "+" else -1)
        return v

    def term(self) -> dict:
        v = self.power()
        while self.peek()[1] in ("*", "/"):
            op, _, pos = self.take()[1], None, self.peek()[2]
            rhs = self.power()
            v = _poly_mul(v, rhs if op == "*" else _poly_pow(rhs, -1, pos))
        return v

    def power(self) -> dict:
        pos = self.peek()[2]
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            if self.peek()[1] in ("{", "("):
                close = "}" if self.take()[1] == "{" else ")"
                n = self.integer()
                self.take(close)
            else:
                n = self.integer()
            return _poly_pow(base, n, pos)
        return base

    def atom(self) -> dict:
        kind, val, pos = self.take()
        if kind == "eta":
            if self.peek()[1] == "(":
                self.take()
                m = self.integer()
                self.take(")")
                return {((EtaFactor("eta_scaled", m), 1),): ONE}
            if self.peek()[1] == "[":
                self.take()
                a = self.integer()
                self.take("/")
                p = self.integer()
                self.take("]")
                return {((EtaFactor("eta_shifted", (a % p, p)), 1),): ONE}
            return {((EtaFactor("eta_scaled", 1), 1),): ONE}
        if kind == "e4":
            m = 1
            if self.peek()[1] == "(":
                self.take()
                m = self.integer()
                self.take(")")
            return {((EtaFactor("e4", m), 1),): ONE}
        if kind == "num":
            return {(): CycNum.coerce(int(val))}
        if kind == "z":
            return {(): parse_cyc(val)}
        if kind == "sqrt":
            return {(): sqrt_int(int(val[4:]))}
        if kind == "sqrtf":
            self.take("(")
            n = self.integer()
            self.take(")")
            return {(): sqrt_int(n)}
        if kind == "i":
            return {(): zeta(4)}
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        if val == "-":
            return _poly_mul({(): CycNum.coerce(-1)}, self.power())
        raise SeriesError(f"unexpected {val or 'end of input'!r} at position {pos}")


def parse_spec(text: str) -> EtaQuotientSpec:
    """Parse the one-line DSL, e.g. ``eta[0/5]*eta[2/5]/(eta[1/5]*eta(25)) + (1 - sqrt5)``.

    Atoms: ``eta`` (eta(tau)), ``eta(m)``, ``eta[a/p]``, ``E4``, ``E4(m)`` and
    cyclotomic constants (integers, ``sqrtN``, ``sqrt(N)``, ``i``, ``z{M}``).
    Division is allowed by single monomials only.
    """
    if not text.strip():
        raise SeriesError("empty expression")
    try:
        poly = _SpecParser(text).parse()
    except CycError as exc:
        raise SeriesError(str(exc)) from exc
    const = poly.pop((), CycNum())
    terms = tuple(EtaTerm(c, key) for key, c in sorted(poly.items(), key=lambda kv: repr(kv[0])))
    return EtaQuotientSpec(terms, const)


def expand_text(text: str, trunc=6) -> QSeries:
    spec = parse_spec(text)
    if not spec.terms:
        return QSeries.constant(spec.constant)
    return build_eta_quotient(spec, trunc)
