from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIELDS, IMAG, elements, integral_elements
from disctwins.errors import (
    DegenerateD,
    DivisionByZero,
    FieldMismatch,
    InfiniteUnitGroup,
    NotSquarefree,
    ZeroElement,
)
from disctwins.numeric import (
    QQ,
    FieldElem,
    Poly,
    RationalFunction,
    elem_arith,
    field_make,
    format_elem,
    is_identically_zero,
    is_nth_power,
    nth_power_root,
    nth_roots,
    parse_elem,
    units_of,
    zeta3,
)


def test_field_make_basics():
    Qi = field_make(-1)
    assert Qi.disc == -4 and not Qi.omega_half
    assert Qi.omega() == Qi.sqrtD()
    Qz = field_make(-3)
    assert Qz.disc == -3 and Qz.omega_half
    assert Qz.omega() == FieldElem(Fraction(1, 2), Fraction(1, 2), Qz)
    assert field_make(10).disc == 40
    with pytest.raises(NotSquarefree):
        field_make(12)
    for D in (0, 1):
        with pytest.raises(DegenerateD):
            field_make(D)


def test_arith_examples():
    Qi = field_make(-1)
    assert FieldElem(3, 2, Qi).norm() == 13
    K = field_make(-33)
    x = parse_elem("sqrt(-33) + 4", K)
    assert x.conj() == parse_elem("-sqrt(-33) + 4", K)
    z = zeta3()
    assert (z + 2) * (z + 2) == 3 * z + 3
    assert (z + 2).norm() == 3
    assert z * z + z + 1 == 0


def test_arith_errors():
    a = FieldElem(1, 1, field_make(-1))
    b = FieldElem(1, 1, field_make(-3))
    with pytest.raises(FieldMismatch):
        elem_arith(a, b, "add")
    with pytest.raises(DivisionByZero):
        elem_arith(a, FieldElem(0, 0, a.K), "div")


@pytest.mark.parametrize("name", list(FIELDS))
@given(data=st.data())
@settings(max_examples=40)
def test_norm_trace_identities(name, data):
    K = FIELDS[name]
    x = data.draw(elements(K))
    assert x * x.conj() == x.norm()
    assert x + x.conj() == x.trace()
    y = data.draw(elements(K))
    assert (x * y).norm() == x.norm() * y.norm()
    if not y.is_zero():
        assert elem_arith(elem_arith(x, y, "div"), y, "mul") == x


def test_units():
    assert units_of(QQ) == [1, -1]
    assert len(units_of(field_make(-33))) == 2
    assert len(units_of(field_make(-1))) == 4
    U = units_of(field_make(-3))
    assert len(U) == 6
    with pytest.raises(InfiniteUnitGroup):
        units_of(field_make(5))


@pytest.mark.parametrize("D", [1, -1, -3, -33, -7])
def test_units_form_a_group(D):
    K = QQ if D == 1 else field_make(D)
    U = set(units_of(K))
    for u in U:
        assert 1 / u in U
        assert u.norm() == 1 and u.is_integral()
        for v in U:
            assert u * v in U


def test_nth_power_examples():
    assert nth_power_root(FieldElem(4096), 12) == 2
    i = field_make(-1).sqrtD()
    root = nth_power_root(FieldElem(-1, 0, i.K), 2)
    assert root is not None and root * root == -1
    assert nth_power_root(FieldElem(27), 6) is None
    assert nth_power_root(FieldElem(Fraction(-8, 27)), 3) == Fraction(-2, 3)
    with pytest.raises(ZeroElement):
        nth_roots(FieldElem(0), 3)


def test_roots_of_unity_counts():
    z = field_make(-3)
    assert len(nth_roots(FieldElem(1, 0, z), 6)) == 6
    assert len(nth_roots(FieldElem(1, 0, field_make(-1)), 12)) == 4
    assert len(nth_roots(FieldElem(1, 0, field_make(5)), 12)) == 2


@pytest.mark.parametrize("K", IMAG, ids=str)
@given(data=st.data())
@settings(max_examples=30)
def test_nth_root_recovers_power(K, data):
    y = data.draw(elements(K, st.builds(Fraction, st.integers(-300, 300), st.integers(1, 50))))
    n = data.draw(st.sampled_from([2, 3, 4, 6, 12]))
    if y.is_zero():
        return
    x = y**n
    r = nth_power_root(x, n)
    assert r is not None and r**n == x
    assert y in nth_roots(x, n)


@given(a=st.integers(-50, 50), b=st.integers(-50, 50))
@settings(max_examples=40)
def test_real_quadratic_roots(a, b):
    K = field_make(2)
    y = FieldElem(a, b, K)
    if y.is_zero():
        return
    assert y in nth_roots(y**6, 6)


@given(n=st.integers(2, 12), a=st.integers(2, 10**4))
def test_non_powers_rejected_over_Q(n, a):
    # a^n * q for a prime q is never an n-th power
    assert not is_nth_power(FieldElem(a**n * 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23), n)


def test_poly_ops():
    f = Poly([125, 22, 1])
    assert f(FieldElem(-11)) == 4
    A22 = -432 * Poly([16, 1]) * Poly([64, 1])
    assert A22(16) == -1105920
    assert (f - f).is_zero()
    assert is_identically_zero(f - f)
    assert not is_identically_zero(f)
    assert (Poly.x() ** 2 - 1) == Poly([-1, 1]) * Poly([1, 1])
    assert Poly([1, 2, 3]).derivative() == Poly([2, 6])


def test_rational_function_identity():
    x = Poly.x()
    L = RationalFunction(x**2 + 1, x)
    assert (L * RationalFunction(x) - RationalFunction(x**2 + 1)).is_identically_zero()
    assert not (L - RationalFunction(x)).is_identically_zero()


@pytest.mark.parametrize("name", list(FIELDS))
@given(data=st.data())
def test_format_parse_round_trip(name, data):
    K = FIELDS[name]
    x = data.draw(elements(K))
    assert parse_elem(format_elem(x), K) == x
    assert FieldElem.from_json(x.to_json()) == x


def test_parse_grammar():
    K = field_make(-33)
    assert parse_elem("3/2 - 5*sqrt(-33)", K) == FieldElem(Fraction(3, 2), -5, K)
    assert parse_elem("(2+i)^2") == FieldElem(3, 4, field_make(-1))
    assert parse_elem("zeta3^3") == 1
    with pytest.raises(FieldMismatch):
        parse_elem("i + zeta3")
    with pytest.raises(Exception):
        parse_elem("__import__('os')")


def test_json_integers_are_strings():
    obj = FieldElem(10**30, 1, field_make(-1)).to_json()
    assert all(isinstance(v, str) for v in obj.values())


@given(integral_elements(field_make(-3)))
def test_integrality_predicate(x):
    assert x.is_integral()
    assert x.denominator() == 1
    assert (x / 2).is_integral() == (x.omega_coords()[0] % 2 == 0 and x.omega_coords()[1] % 2 == 0)
