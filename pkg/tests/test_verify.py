import pytest

from gmoonshine.modgroup import GroupError
from gmoonshine.moonshine.cases import CASES, case_data, matrix_expr
from gmoonshine.moonshine.classes import CaseError
from gmoonshine.moonshine.expectations import ExpectationError, load_expectations
from gmoonshine.moonshine.verify import SAMPLE_POINTS, verify_case
from gmoonshine.qseries import eval_numeric, parse_spec
from gmoonshine.modgroup import conjugate_by_theta


def statuses(rep):
    return {c.id: c.status for c in rep.checks}


def test_5i_all_pass():
    st = statuses(verify_case("5i"))
    assert st["series_25b"] == "PASS"
    assert st["quotient_D3"] == "PASS"
    assert set(st.values()) == {"PASS"}


def test_13r1_info_lines():
    rep = verify_case("13r1")
    st = statuses(rep)
    for cid in ("quotient_A4", "relations", "pairs"):
        assert st[cid] == "PASS"
    assert st["singular_orbits"] == "INFO"
    assert not rep.failed


def test_report_line_grammar():
    for line in verify_case("7i").lines():
        parts = line.split(" ")
        assert parts[0] == "CHECK" and parts[2] in ("PASS", "FAIL", "INFO")
        assert parts[3].startswith("expected=") and parts[4].startswith("computed=")
        assert len(parts) == 5


def test_deterministic():
    assert verify_case("7iii").lines() == verify_case("7iii").lines()


def test_missing_tables_give_info(tmp_path):
    rep = verify_case("11", tables=tmp_path)
    st = statuses(rep)
    assert st["series_11plus_upper"] == "INFO"
    assert st["quotient_A5[alpha]"] == "PASS"


def test_expectations_parser(tmp_path):
    exp = load_expectations()
    assert exp.case("11").partners == {(6, 2), (7, 6), (2, 8), (8, 10), (10, 7)}
    assert exp.case("5ii").pairs is None
    bad = tmp_path / "e.txt"
    bad.write_text("CASE 5i QUOTIENT A4 ORDER 12\n")
    with pytest.raises(ExpectationError, match="missing"):
        load_expectations(bad)
    bad.write_text("CASE 5i QUOTIENT A4 ORDER 12 GENUS 0 SINGULAR_ORBITS 1 PAIRS (1,2) junk\n")
    with pytest.raises(ExpectationError):
        load_expectations(bad)


def test_failing_expectation_is_reported(tmp_path):
    path = tmp_path / "e.txt"
    path.write_text("CASE 5i QUOTIENT A4 ORDER 12 GENUS 1 SINGULAR_ORBITS 2 PAIRS (1,1)\n")
    rep = verify_case("5i", expectations=path)
    st = statuses(rep)
    assert st["quotient_A4"] == "FAIL"
    assert st["genus"] == "FAIL"
    assert st["pairs"] == "FAIL"
    assert rep.failed


def test_case_lookup():
    with pytest.raises(CaseError):
        case_data("9")
    assert matrix_expr("S*S").is_identity()
    with pytest.raises(GroupError):
        matrix_expr("S**T")


def test_invariance_discriminates():
    # the conjugate series is not invariant under the generator of the other group
    case = CASES["7iii"]
    zstar = parse_spec(case.series[1].dsl)
    alpha = conjugate_by_theta(matrix_expr("alpha_7iii"), 7)
    worst = max(abs(eval_numeric(zstar, alpha.act(t)) - eval_numeric(zstar, t)) for t in SAMPLE_POINTS)
    assert worst > 1e-3
