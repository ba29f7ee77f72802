import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint

from conftest import IMAG, integral_elements
from disctwins.errors import UnsupportedField, ZeroElement
from disctwins.ideals import (
    IdealFactorization,
    elements_of_norm,
    factor_principal_ideal,
    kronecker,
    principal_generator_of_power,
    split_prime,
    valuation,
)
from disctwins.numeric import QQ, FieldElem, field_make, parse_elem, units_of


def _prime(K, p, c=None):
    for P in split_prime(K, p):
        if c is None or P.c == c:
            return P
    raise LookupError


def test_splitting_examples():
    K = field_make(-33)
    Ps = split_prime(K, 7)
    assert [P.kind for P in Ps] == ["split", "split"]
    assert sorted(P.c for P in Ps) == [3, 4]
    (P,) = split_prime(field_make(-1), 3)
    assert P.kind == "inert" and P.f == 2 and P.e == 1
    (P,) = split_prime(field_make(-3), 3)
    assert P.kind == "ramified" and P.e == 2 and P.f == 1
    (P,) = split_prime(K, 2)
    assert P.kind == "ramified" and P.c == 1


def test_kronecker_examples():
    assert kronecker(-4, 3) == -1
    assert kronecker(-3, 7) == 1
    assert kronecker(-132, 11) == 0
    assert kronecker(-3, 2) == -1
    assert kronecker(5, 2) == -1
    assert kronecker(17, 2) == 1


def _squarefree(n):
    return n not in (0, 1) and all(e == 1 for e in factorint(abs(n)).values())


@given(D=st.integers(-400, 400).filter(_squarefree))
@settings(max_examples=20)
def test_split_kind_matches_kronecker(D):
    from sympy import primerange

    K = field_make(D)
    for p in primerange(2, 1000):
        Ps = split_prime(K, p)
        chi = kronecker(K.disc, p)
        kind = {1: "split", -1: "inert", 0: "ramified"}[chi]
        assert all(P.kind == kind for P in Ps)
        assert sum(P.e * P.f for P in Ps) == 2


def test_valuation_examples():
    K10 = field_make(10)
    x = parse_elem("-12224*sqrt(10) - 38656", K10)
    assert valuation(x, _prime(K10, 2)) == 13
    assert valuation(x, _prime(K10, 3, 2)) == 1
    K = field_make(-33)
    assert valuation(FieldElem(64, 0, K), _prime(K, 2)) == 12
    for p in (2, 3, 5, 7):
        for P in split_prime(K, p):
            assert valuation(FieldElem(1, 0, K), P) == 0
    with pytest.raises(ZeroElement):
        valuation(FieldElem(0, 0, K), _prime(K, 2))


def test_valuation_of_fractions():
    K = field_make(-1)
    P = _prime(K, 5, 2)
    x = FieldElem(1, 2, K)  # 1 + 2i has norm 5
    v = valuation(x, P)
    assert valuation(1 / x, P) == -v
    assert valuation(x / 25, P) == v - 2


def test_factor_examples():
    K10 = field_make(10)
    y = parse_elem("-2984375*sqrt(10) - 9437500", K10)
    F = factor_principal_ideal(y)
    assert sorted((P.p, e) for P, e in F.terms) == [(2, 1), (3, 1), (5, 12)]
    assert F.exp(_prime(K10, 5)) == 12
    assert str(factor_principal_ideal(FieldElem(343))) == "7^3"
    K = field_make(-33)
    F = factor_principal_ideal(parse_elem("sqrt(-33) - 4", K))
    assert F.terms == ((_prime(K, 7, 3), 2),)
    assert factor_principal_ideal(FieldElem(1, 0, K)).is_trivial()
    with pytest.raises(ZeroElement):
        factor_principal_ideal(FieldElem(0, 0, K))


@pytest.mark.parametrize("K", IMAG + [field_make(10), field_make(-5)], ids=str)
@given(data=st.data())
@settings(max_examples=60)
def test_norm_valuation_identity(K, data):
    x = data.draw(integral_elements(K, 60))
    if x.is_zero():
        return
    n = int(x.norm())
    for p, e in factorint(abs(n)).items():
        assert sum(P.f * valuation(x, P) for P in split_prime(K, p)) == e


@pytest.mark.parametrize("K", IMAG + [QQ, field_make(10)], ids=str)
@given(data=st.data())
@settings(max_examples=40)
def test_factorization_is_multiplicative(K, data):
    x = data.draw(integral_elements(K, 50))
    y = data.draw(integral_elements(K, 50))
    if x.is_zero() or y.is_zero():
        return
    assert factor_principal_ideal(x * y) == factor_principal_ideal(x) * factor_principal_ideal(y)
    assert factor_principal_ideal(x**3) == factor_principal_ideal(x) ** 3


def test_principal_generator_examples():
    K = field_make(-33)
    P2 = _prime(K, 2)
    g = principal_generator_of_power(P2, 12)
    assert g in [u * 64 for u in units_of(K)]
    assert principal_generator_of_power(P2, 1) is None
    g = principal_generator_of_power(_prime(K, 7, 4), 2)
    assert g in [u * parse_elem("sqrt(-33) + 4", K) for u in units_of(K)]
    with pytest.raises(UnsupportedField):
        principal_generator_of_power(_prime(field_make(10), 3), 1)


def test_no_norm_two_element_brute_force():
    K = field_make(-33)
    brute = [(a, b) for a in range(-2, 3) for b in range(-2, 3) if a * a + 33 * b * b == 2]
    assert brute == [] and elements_of_norm(K, 2) == []


@pytest.mark.parametrize("D", [-1, -3, -33, -5, -23])
@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
@pytest.mark.parametrize("k", [1, 2, 3, 6])
def test_principal_generator_factorization(D, p, k):
    K = field_make(D)
    for P in split_prime(K, p):
        g = principal_generator_of_power(P, k)
        if g is not None:
            assert factor_principal_ideal(g) == IdealFactorization.make([(P, k)])


@pytest.mark.parametrize("D", [-1, -3, -7, -33])
def test_elements_of_norm_matches_brute_force(D):
    K = field_make(D)
    for n in range(1, 60):
        found = set(elements_of_norm(K, n))
        brute = set()
        bound = 2 * math.isqrt(4 * n) + 2
        for X in range(-bound, bound + 1):
            for Y in range(-bound, bound + 1):
                x = K.from_omega(X, Y)
                if x.norm() == n:
                    brute.add(x)
        assert found == brute
