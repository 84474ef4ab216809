import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gmoonshine.exact import CycNum, parse_cyc, zeta
from gmoonshine.qseries import (
    EtaFactor,
    EtaQuotientSpec,
    QSeries,
    SeriesError,
    build_eta_quotient,
    eisenstein_e4,
    eta_series,
    eta_shifted,
    eval_numeric,
    expand_text,
    galois_series,
    j_series,
    parse_spec,
    render_series,
    series_arith,
    series_lines,
)

F = Fraction


def coeffs_in(s, lo, hi):
    return [s.coeff(n) for n in range(lo, hi + 1)]


def test_eta_pentagonal():
    e = eta_series(13)
    assert e.valuation == F(1, 24)
    expected = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1}
    for n in range(13):
        assert e.coeff(F(1, 24) + n) == expected.get(n, 0)


def test_eta_power_24_leading():
    assert (eta_series(3) ** 24).valuation == 1


def test_eta_shifted_zero_is_eta():
    assert eta_shifted(0, 5, 6) == eta_series(6)


def test_eta_shifted_prefactor():
    assert eta_shifted(2, 5, 3).leading() == zeta(120, 2)
    with pytest.raises(SeriesError):
        eta_shifted(5, 5, 3)


def test_e4_coefficients():
    e = eisenstein_e4(4)
    assert coeffs_in(e, 0, 3) == [1, 240, 2160, 6720]


def test_j_coefficients():
    j = j_series(4)
    assert j.coeff(-1) == 1
    assert j.coeff(0) == 0
    assert j.coeff(1) == 196884
    assert j.coeff(2) == 21493760
    assert j.coeff(3) == 864299970


def test_truncation_algebra():
    a = QSeries({-1: 1, 0: 3, 2: 5}, 4)
    b = QSeries({1: 2, 3: 1}, 5)
    prod = a * b
    assert prod.trunc == min(4 + 1, 5 - 1)
    assert a * 1 == a
    assert (a / a).agrees_with(QSeries.constant(1))
    # 1/a is valid below 4 - 2*(-1) = 6 with valuation 1
    assert (a / a).trunc == min(4 + 1, 6 - 1)
    with pytest.raises(SeriesError):
        a / QSeries({}, 3)


def test_rescale():
    e = eta_series(4)
    assert e.rescale(1) == e
    r = e.rescale(5)
    assert r.valuation == F(5, 24) and r.trunc == 20
    assert series_arith(e, 5, "rescale") == r


def test_25b_series():
    spec = parse_spec("eta[0/5]*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)")
    s = build_eta_quotient(spec, 6)
    assert s.coeff(-1) == 1 and s.coeff(0) == 0
    expected = ["3/2 - 5/2*sqrt5", "-10", "5", "21 + 5*sqrt5", "-25/2 + 25/2*sqrt5"]
    assert coeffs_in(s, 1, 5) == [parse_cyc(x) for x in expected]
    assert all(s.coeff(n).conductor in (1, 5) for n in range(-1, 6))


def test_25a_is_galois_image():
    b = expand_text("eta*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)")
    a = expand_text("eta*eta[1/5]*eta[4/5] / (eta[2/5]*eta[3/5]*eta(25)) + (1 + sqrt5)")
    assert galois_series(b, 2) == a
    assert galois_series(b, 1) == b


def test_49a_series():
    s = expand_text("z{12}^-1 * eta*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4 + (1/2 - 1/2*i*sqrt7)")
    expected = ["-3/2 + 1/2*i*sqrt7", "-5/2 - 3/2*i*sqrt7", "2", "3 - i*sqrt7", "-3"]
    assert s.coeff(-1) == 1 and s.coeff(0) == 0
    assert coeffs_in(s, 1, 5) == [parse_cyc(x) for x in expected]
    b = expand_text("z{24}^-1 * eta*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4 + (1/2 + 1/2*i*sqrt7)")
    assert galois_series(s, -1) == b


def test_render_and_lines():
    s = expand_text("eta[0/5]*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)")
    text = render_series(s)
    assert text.startswith("q^{-1} + 0 + (3/2 - 5/2*sqrt5)*q - 10*q^2 + 5*q^3")
    lines = series_lines(s)
    assert lines[0] == "EXP -1/1 COEFF 1"
    assert lines[1] == "EXP 0/1 COEFF 0"
    assert lines[2] == "EXP 1/1 COEFF 3/2 - 5/2*sqrt5"
    assert render_series(eta_series(2)) == "q^{1/24} - q^{25/24} + ..."


def test_dsl_errors():
    with pytest.raises(SeriesError, match="position"):
        parse_spec("eta[1/5 * eta")
    with pytest.raises(SeriesError):
        parse_spec("1/(eta + eta(2))")
    with pytest.raises(SeriesError):
        parse_spec("")


def test_dsl_constant_and_j():
    assert expand_text("1") == QSeries.constant(1)
    assert expand_text("E4^3/eta^24 - 744", 3).agrees_with(j_series(3))


def test_spec_text_roundtrip():
    spec = parse_spec("(1/2 - 1/2*i*sqrt7) + z{24}^-1*i*sqrt7*eta(49)*eta[1/7]*eta[2/7]*eta[4/7]/eta(7)^4")
    again = parse_spec(spec.text())
    assert build_eta_quotient(again, 4) == build_eta_quotient(spec, 4)


def test_factor_validation():
    assert EtaFactor("eta_shifted", (0, 7)) == EtaFactor("eta_scaled", 1)
    with pytest.raises(SeriesError):
        EtaFactor("eta_scaled", 0)
    with pytest.raises(SeriesError):
        EtaQuotientSpec.single([(EtaFactor("eta_scaled", 1), 0)])


def test_numeric_oracles():
    eta_i = math.gamma(0.25) / (2 * math.pi**0.75)
    assert abs(eval_numeric(parse_spec("eta"), 1j) - eta_i) < 1e-6
    jspec = parse_spec("E4^3/eta^24 - 744")
    assert abs(eval_numeric(jspec, 1j) - 984) < 1e-6
    rho = cmath.exp(2j * cmath.pi / 3)
    assert abs(eval_numeric(jspec, rho) + 744) < 1e-6
    with pytest.raises(SeriesError):
        eval_numeric(jspec, 0.5)


def test_series_matches_products_numerically():
    spec = parse_spec("eta*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)")
    s = build_eta_quotient(spec, 30)
    for tau in (0.8j, 0.3 + 1j, -0.45 + 0.9j):
        assert abs(eval_numeric(spec, tau) - eval_numeric(s, tau)) < 1e-6


small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def series(draw):
    terms = draw(st.dictionaries(st.integers(-2, 4), small, max_size=4))
    coef = {e: CycNum(5, {draw(st.integers(0, 4)): c}) for e, c in terms.items()}
    return QSeries(coef, draw(st.integers(3, 6)))


@settings(max_examples=40, deadline=None)
@given(series(), series(), st.sampled_from([2, 3, 4, -1]))
def test_galois_commutes_with_arith(a, b, k):
    assert galois_series(a + b, k) == galois_series(a, k) + galois_series(b, k)
    assert galois_series(a * b, k) == galois_series(a, k) * galois_series(b, k)


@settings(max_examples=40, deadline=None)
@given(series())
def test_inverse_roundtrip(a):
    if a.is_zero():
        return
    one = a * a.inverse()
    assert one.agrees_with(QSeries.constant(1))
