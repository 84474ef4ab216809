import pytest

from gmoonshine.modgroup import Psl2pElt, cusp_orbits, full_group, named_matrix
from gmoonshine.moonshine.cases import CASES
from gmoonshine.moonshine.classes import (
    CASE_IDS,
    CaseError,
    ClassStructure,
    build_class_structure,
    diagonal_criterion,
    fricke_stabilizer,
    line_of,
    preserves_labels,
    singular_cusps,
    verify_fixing_group,
)


def test_labelings():
    assert build_class_structure("5i").fricke_lines() == [(1, 0), (1, 1), (1, 4)]
    assert len(build_class_structure("7iii").fricke_lines()) == 8
    assert build_class_structure("13r1").fricke_lines() == [(1, 0), (1, 1), (1, 3), (1, 9)]
    with pytest.raises(CaseError):
        build_class_structure("17")


def test_labeling_constant_on_lines():
    for cid in CASE_IDS:
        cs = build_class_structure(cid)
        p = cs.p
        for a in range(p):
            for b in range(p):
                if (a, b) != (0, 0):
                    assert all(cs.is_fricke((a, b)) == cs.is_fricke((s * a, s * b)) for s in range(1, p))


def test_singular_cusps():
    cs = build_class_structure("5i")
    sing = singular_cusps(cs)
    assert len(sing) == 6
    keys = {(c.a, c.c) for c in sing}
    assert (1, 0) in keys and (0, 1) not in keys
    counts = {cid: len(singular_cusps(build_class_structure(cid))) for cid in CASE_IDS}
    assert counts == {"5i": 6, "5ii": 6, "7i": 12, "7ii": 12, "7iii": 24, "11": 60,
                      "13r0": 24, "13r1": 24, "13r2": 24, "13r3": 24}


def test_cusp_infinity_always_singular():
    for cid in CASE_IDS:
        keys = {(c.a, c.c) for c in singular_cusps(build_class_structure(cid))}
        assert (1, 0) in keys


def test_charge_conjugation():
    for cid in CASE_IDS:
        cs = build_class_structure(cid)
        p = cs.p
        for ln in cs.line_labels:
            assert cs.is_fricke(ln) == cs.is_fricke((-ln[0] % p, -ln[1] % p))


def test_fricke_stabilizer_5i():
    st = fricke_stabilizer(build_class_structure("5i"))
    assert st.order == 6


def test_constant_labeling_stabilizer_is_everything():
    lab = {line_of((1, n), 7): False for n in range(7)}
    lab[(0, 1)] = False
    cs = ClassStructure(7, lab, "none")
    assert fricke_stabilizer(cs).order == 168
    assert singular_cusps(cs) == []
    rep = verify_fixing_group(cs, [named_matrix("delta_7")])
    assert rep.constant and rep.singular_count == 0


def test_stabilizer_contains_case_groups():
    for cid, case in CASES.items():
        cs = build_class_structure(cid)
        st = fricke_stabilizer(cs)
        for gs in case.gen_sets:
            rep = verify_fixing_group(cs, gs.matrices())
            assert rep.group.elements <= st.elements


def test_singular_set_is_union_of_orbits():
    for cid, case in CASES.items():
        cs = build_class_structure(cid)
        sing = set(singular_cusps(cs))
        rep = verify_fixing_group(cs, case.gen_sets[0].matrices())
        for orb in cusp_orbits(rep.group):
            assert set(orb) <= sing or not (set(orb) & sing)


def test_label_preservation_detects_mismatch():
    cs = build_class_structure("5i")
    s = Psl2pElt.make(5, 0, -1, 1, 0)
    assert not preserves_labels(cs, s)
    rep = verify_fixing_group(cs, [named_matrix("S")])
    assert not rep.labels_preserved


def test_diagonal_criterion():
    for cid in ("5i", "7i", "7iii", "11"):
        rep = verify_fixing_group(build_class_structure(cid), CASES[cid].gen_sets[0].matrices())
        assert all(inside == sq for _, _, inside, sq in diagonal_criterion(rep.group))


def test_diagonal_criterion_fails_for_trivial_group():
    from gmoonshine.modgroup import gamma_p_image

    rows = diagonal_criterion(gamma_p_image(7))
    assert any(inside != sq for _, _, inside, sq in rows)


def test_13_census():
    rep = verify_fixing_group(build_class_structure("13r1"), CASES["13r1"].gen_sets[0].matrices())
    assert (rep.order, rep.name) == (12, "A4")
    assert rep.orbit_sizes == [12, 12]
    assert rep.genus.genus == 3
    assert full_group(13).order == 1092
