import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import integral_elements
from disctwins.ellmodel import WeierstrassModel
from disctwins.errors import BadPair, FieldMismatch, UnsupportedField, UnsupportedP
from disctwins.families import family_curve, special_j_pair
from disctwins.numeric import QQ, FieldElem, field_make, parse_elem, zeta3
from disctwins.twinscan import (
    IDEAL_TWIN,
    ISOMORPHIC,
    NECESSARY,
    NOT_NECESSARY,
    NOT_TWIN,
    SINGULAR,
    TWIN,
    admissible_parameters,
    classify_pair,
    criterion_p2_necessary,
    special_j_criterion,
    valuation_criterion,
    enumerate_imag_quad,
    enumerate_over_Q,
    load_tables,
    self_isogeny_count,
    verify_tables,
)

K33 = field_make(-33)
QI = field_make(-1)
QZ = field_make(-3)


def test_classify_examples():
    v = classify_pair(family_curve(2, 1, 16, -2), family_curve(2, 2, 16, -2))
    assert v.status == NOT_TWIN and v.reason == "ideal-mismatch at 2"
    v = classify_pair(family_curve(7, 1, 1, 1), family_curve(7, 2, 1, 1))
    assert v.status == TWIN
    E1, E2 = special_j_pair(3, 0, FieldElem(1, 0, QZ))
    assert classify_pair(E1, E2).status == ISOMORPHIC
    E1, E2 = special_j_pair(3, 0, 1)
    assert classify_pair(E1, E2).status == NOT_TWIN
    with pytest.raises(FieldMismatch):
        classify_pair(WeierstrassModel.make([0, 1]), WeierstrassModel.make([0, 1], QI))


def test_verdict_json_has_witnesses():
    v = classify_pair(family_curve(3, 1, 1, 21), family_curve(3, 2, 1, 21))
    obj = v.to_json()
    assert obj["status"] == TWIN
    assert {row["prime"] for row in obj["per_prime"]} >= {"2", "7"}


def test_valuation_criterion_examples():
    assert valuation_criterion(3, 1, 21) == TWIN  # strongest level; see the rational tables
    assert valuation_criterion(5, 27, 1) == NOT_TWIN
    assert valuation_criterion(13, zeta3() + 4, 1, QZ) == TWIN
    assert valuation_criterion(3, 0) == SINGULAR
    assert valuation_criterion(3, 1, 0) == SINGULAR
    assert valuation_criterion(5, -11 + 2 * QI.sqrtD()) == SINGULAR
    with pytest.raises(UnsupportedP):
        valuation_criterion(2, 1)
    with pytest.raises(UnsupportedP):
        valuation_criterion(11, 1)


def test_criterion_p2_examples():
    assert criterion_p2_necessary(16) == NOT_NECESSARY
    assert criterion_p2_necessary(1) == NECESSARY
    assert criterion_p2_necessary(4096) == NECESSARY
    assert criterion_p2_necessary(-64) == SINGULAR
    assert criterion_p2_necessary(FieldElem(64, 0, field_make(-2))) == ISOMORPHIC


def test_special_j_criterion_examples():
    assert special_j_criterion(3, 0, K33) == IDEAL_TWIN
    assert special_j_criterion(2, 1728, K33) == NECESSARY
    assert special_j_criterion(3, 0, QZ) == ISOMORPHIC
    assert special_j_criterion(3, 0, QQ) == NOT_TWIN
    assert special_j_criterion(3, 0, field_make(3)) == TWIN
    assert special_j_criterion(2, 1728, QI) == ISOMORPHIC
    assert special_j_criterion(2, 1728, QQ) == NOT_TWIN
    with pytest.raises(BadPair):
        special_j_criterion(5, 0, QQ)
    E1, E2 = special_j_pair(2, 1728, FieldElem(1, 0, K33))
    assert classify_pair(E1, E2).status == IDEAL_TWIN


@pytest.mark.parametrize("K", [QI, QZ, K33], ids=str)
@pytest.mark.parametrize("p", [3, 5, 7, 13])
@given(data=st.data())
@settings(max_examples=15)
def test_criterion_agrees_with_local_data(K, p, data):
    t0 = data.draw(integral_elements(K, 12))
    pred = valuation_criterion(p, t0, 1, K)
    if pred == SINGULAR:
        return
    got = classify_pair(family_curve(p, 1, t0), family_curve(p, 2, t0)).status
    assert pred == got


def test_enumerate_over_Q_rows():
    rows = {(c.p, str(c.t0)): c for c in enumerate_over_Q()}
    c = rows[(2, "1")]
    assert (c.j1, c.j2, c.dmin1, c.dmin2) == (16974593, 4913, 274625, 274625)
    c = rows[(5, "-1")]
    assert (c.dmin1, c.dmin2) == (-1124864, -1124864)
    c = rows[(37, "None")]
    assert c.source == "embedded" and c.j1 == -162677523113838677 and c.dmin1 == c.dmin2 == -6125
    with pytest.raises(BadPair):
        c.curves()


def test_admissible_parameters():
    got = admissible_parameters(K33, 7)
    expected = {parse_elem(s, K33) for s in ("sqrt(-33) + 4", "sqrt(-33) - 4", "49", "1")}
    assert expected <= {u * x for x in got for u in (1, -1)}
    for x in got:
        assert valuation_criterion(7, x, 1, K33) != NOT_TWIN
    with pytest.raises(UnsupportedField):
        admissible_parameters(field_make(5), 3)


def test_scan_q33_contains_reference_rows():
    cands = enumerate_imag_quad(K33)
    data = load_tables()["field_twins"]["-33"]
    js = {frozenset((c.j1, c.j2)) for c in cands}
    for row in data["rows"]:
        assert frozenset((parse_elem(row["j1"], K33), parse_elem(row["j2"], K33))) in js
    specials = [c for c in cands if c.source == "special-j"]
    assert sorted(c.special_j for c in specials) == [0, 1728]
    assert all(c.status == IDEAL_TWIN for c in specials)
    assert all(c.status in (TWIN, IDEAL_TWIN) for c in cands)
    with pytest.raises(UnsupportedField):
        enumerate_imag_quad(QQ)


@pytest.mark.parametrize("D", ["-1", "-3"])
def test_scan_contains_reference_rows(D):
    K = field_make(int(D))
    cands = enumerate_imag_quad(K, primes=(2, 3, 5, 7, 13))
    js = {frozenset((c.j1, c.j2)) for c in cands}
    for row in load_tables()["field_twins"][D]["rows"]:
        assert frozenset((parse_elem(row["j1"], K), parse_elem(row["j2"], K))) in js


def test_gaussian_example_row():
    i = QI.sqrtD()
    E1, E2 = family_curve(2, 1, i), family_curve(2, 2, i)
    assert E1.j == -196607 * i - 16776448 and E2.j == -4048 * i + 767


def test_parallel_enumeration_is_deterministic():
    a = [c.to_json() for c in enumerate_imag_quad(QI, workers=1)]
    b = [c.to_json() for c in enumerate_imag_quad(QI, workers=3)]
    assert a == b


def test_self_isogeny_counts():
    assert self_isogeny_count(0, 7) == 2
    assert self_isogeny_count(1728, 2) == 1
    assert self_isogeny_count(1728, 3) == 0


def test_verify_tables_clean():
    rep = verify_tables("all")
    assert rep.ok and len(rep.cells) > 250
    with pytest.raises(ValueError):
        verify_tables("7")


def test_p2_edge_row():
    rep = verify_tables("equal-j")
    cells = {(c.row, c.column): c for c in rep.cells}
    assert cells[("p=2,t0=64", "dmin1")].computed == str(2**9)
    assert cells[("p=2,t0=64", "dmin2")].computed == str(2**15)


def test_injected_off_by_one_is_flagged_once():
    data = load_tables()
    row = data["rational_twins"][3]
    row["j1"] = str(int(row["j1"]) + 1)
    bad = verify_tables("all", data=data).mismatches
    assert len(bad) == 1
    assert bad[0].column == "j1" and bad[0].row == f"p={row['p']},t0={row['t0']}"
    assert verify_tables("all").ok
