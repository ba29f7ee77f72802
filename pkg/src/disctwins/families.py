"""Parameterized p-isogenous families C_{p,i}(t, d), special-j pairs and identity checks.

C_{p,i}(t, d): y^2 = x^3 + d^2 A_{p,i}(t) x + d^3 B_{p,i}(t) for p in {2, 3, 5, 7, 13}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ellmodel import WeierstrassModel
from .errors import BadPair, SingularParameter, UnsupportedP, ZeroT
from .numeric import QQ, FieldElem, Poly, QuadField, RationalFunction, as_elem, poly_from_factors

PRIMES = (2, 3, 5, 7, 13)

# Polynomials are low-degree-first integer coefficient lists.
# (constant, [(factor, exponent), ...])
_A = {
    (2, 1): (-27, [([64, 1], 1), ([256, 1], 1)]),
    (2, 2): (-432, [([16, 1], 1), ([64, 1], 1)]),
    (3, 1): (-3, [([243, 1], 1), ([27, 1], 3)]),
    (3, 2): (-243, [([3, 1], 1), ([27, 1], 3)]),
    (5, 1): (-27, [([125, 22, 1], 1), ([3125, 250, 1], 1)]),
    (5, 2): (-16875, [([5, 10, 1], 1), ([125, 22, 1], 1)]),
    (7, 1): (-27, [([49, 13, 1], 1), ([2401, 245, 1], 1)]),
    (7, 2): (-64827, [([1, 5, 1], 1), ([49, 13, 1], 1)]),
    (13, 1): (-27, [([13, 5, 1], 1), ([13, 6, 1], 1), ([28561, 15379, 3380, 247, 1], 1)]),
    (13, 2): (-771147, [([13, 5, 1], 1), ([13, 6, 1], 1), ([1, 19, 20, 7, 1], 1)]),
}

_B = {
    (2, 1): (-54, [([-512, 1], 1), ([64, 1], 2)]),
    (2, 2): (-3456, [([-8, 1], 1), ([64, 1], 2)]),
    (3, 1): (-2, [([27, 1], 4), ([19683, 486, -1], 1)]),
    (3, 2): (-1458, [([27, 1], 4), ([27, -18, -1], 1)]),
    (5, 1): (-54, [([15625, 500, -1], 1), ([125, 22, 1], 2)]),
    (5, 2): (-843750, [([1, -4, -1], 1), ([125, 22, 1], 2)]),
    (7, 1): (-54, [([49, 13, 1], 1), ([823543, 235298, 21609, 490, -1], 1)]),
    (7, 2): (-6353046, [([49, 13, 1], 1), ([7, -70, -63, -14, -1], 1)]),
    (13, 1): (
        -54,
        [
            ([13, 5, 1], 1),
            ([13, 6, 1], 2),
            ([4826809, 3712930, 1313806, 237276, 20618, 494, -1], 1),
        ],
    ),
    # 54 * 13^6; the value is forced by the discriminant identity below
    (13, 2): (
        -260647686,
        [([13, 5, 1], 1), ([13, 6, 1], 2), ([1, -38, -122, -108, -46, -10, -1], 1)],
    ),
}

# j = jnum(t) / t^e
_JNUM = {
    (2, 1): (1, [([256, 1], 3)], 2),
    (2, 2): (1, [([16, 1], 3)], 1),
    (3, 1): (1, [([243, 1], 3), ([27, 1], 1)], 3),
    (3, 2): (1, [([3, 1], 3), ([27, 1], 1)], 1),
    (5, 1): (1, [([3125, 250, 1], 3)], 5),
    (5, 2): (1, [([5, 10, 1], 3)], 1),
    (7, 1): (1, [([2401, 245, 1], 3), ([49, 13, 1], 1)], 7),
    (7, 2): (1, [([1, 5, 1], 3), ([49, 13, 1], 1)], 1),
    (13, 1): (1, [([28561, 15379, 3380, 247, 1], 3), ([13, 5, 1], 1)], 13),
    (13, 2): (1, [([1, 19, 20, 7, 1], 3), ([13, 5, 1], 1)], 1),
}

# Delta / (2^12 3^12 d^6) = constant * product
_DISC = {
    (2, 1): (1, [([0, 1], 2), ([64, 1], 3)]),
    (2, 2): (2**12, [([0, 1], 1), ([64, 1], 3)]),
    (3, 1): (Fraction(1, 3**6), [([0, 1], 3), ([27, 1], 8)]),
    (3, 2): (3**6, [([0, 1], 1), ([27, 1], 8)]),
    (5, 1): (1, [([0, 1], 5), ([125, 22, 1], 3)]),
    (5, 2): (5**12, [([0, 1], 1), ([125, 22, 1], 3)]),
    (7, 1): (1, [([0, 1], 7), ([49, 13, 1], 2)]),
    (7, 2): (7**12, [([0, 1], 1), ([49, 13, 1], 2)]),
    (13, 1): (1, [([0, 1], 13), ([13, 6, 1], 3), ([13, 5, 1], 2)]),
    (13, 2): (13**12, [([0, 1], 1), ([13, 6, 1], 3), ([13, 5, 1], 2)]),
}

_SINGULAR = {
    2: [[64, 1]],
    3: [[27, 1]],
    5: [[125, 22, 1]],
    7: [[49, 13, 1]],
    13: [[13, 6, 1], [13, 5, 1]],
}

# Factors of t^p (j_{p,1} - j_{p,2}) whose roots give curves that are already
# isomorphic over Q(t0); j given as a polynomial in t0.
_F = Fraction
_ISOMORPHIC_CM = {
    2: [([4096, 47, 1], [-3375])],
    3: [([729, 46, 1], [8000]), ([729, -10, 1], [-32768])],
    5: [([125, 18, 1], [-32768]), ([125, 4, 1], [287496]), ([125, -14, 1], [-884736])],
    7: [
        ([2401, 490, 51, 10, 1], [994752, _F(-569088, 49), _F(-2845440, 49), _F(-284544, 49)]),
        ([49, 11, 1], [54000]),
        ([49, 5, 1], [-884736]),
        ([49, -11, 1], [-12288000]),
    ],
    13: [
        ([169, 78, 23, 6, 1], [10275264, _F(-221652480, 13), _F(-132991488, 13), _F(-22165248, 13)]),
        ([169, -13, -12, -1, 1], [-2994536448, _F(-11199283200, 13), _F(-447971328, 13), _F(447971328, 13)]),
        ([169, 0, -1, 0, 1], [1417905000, _F(3820257000, 13), 0, _F(-272875500, 13)]),
        ([13, 7, 1], [54000]),
        ([13, 4, 1], [287496]),
        ([13, 2, 1], [-12288000]),
        ([13, -3, 1], [-884736000]),
    ],
}

_EQUAL_J_TWIN = {
    5: [([-125, 0, 1], [632000, 56576])],
    13: [([-13, 0, 1], [3448440000, 956448000])],
}

# (factor, j, CM field discriminant D with Q(sqrt(D)), ideal ratio exponent of pO_K)
_EQUAL_J_CONDITIONAL = {
    2: [([-64, 1], 8000, -2, -6)],
    3: [([-27, 1], 54000, -3, -6)],
    7: [([7, 1], -3375, -7, 6), ([-7, 1], 16581375, -7, 6)],
}

# Number of p-isogenies E -> E over the algebraic closure for j in {0, 1728}
SELF_ISOGENY_COUNTS = {
    0: {2: 0, 3: 1, 5: 0, 7: 2, 13: 2},
    1728: {2: 1, 3: 0, 5: 2, 7: 0, 13: 2},
}


def _check_key(p: int, i: int) -> None:
    if p not in PRIMES:
        raise UnsupportedP(f"no genus-zero family for p = {p}")
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")


@dataclass(frozen=True)
class FamilyPolys:
    p: int
    i: int
    A: Poly
    B: Poly
    jnum: Poly
    jden_exp: int
    disc_const: Fraction
    Dfactor: Poly

    @property
    def disc_poly(self) -> Poly:
        """Delta_{p,i}(t, 1) as a polynomial in t."""
        return self.Dfactor * (self.disc_const * 2**12 * 3**12)


@lru_cache(maxsize=None)
def family_polys(p: int, i: int) -> FamilyPolys:
    _check_key(p, i)
    k = (p, i)
    A = poly_from_factors(*_A[k])
    B = poly_from_factors(*_B[k])
    c, fs, e = _JNUM[k]
    jnum = poly_from_factors(c, fs)
    dc, dfs = _DISC[k]
    return FamilyPolys(p, i, A, B, jnum, e, Fraction(dc), poly_from_factors(1, dfs))


def singular_t_factors(p: int) -> list[Poly]:
    """Factors whose roots t0 make both C_{p,1}(t0, d) and C_{p,2}(t0, d) singular (besides t = 0)."""
    if p not in PRIMES:
        raise UnsupportedP(f"no genus-zero family for p = {p}")
    return [Poly(f) for f in _SINGULAR[p]]


def _field_of(*xs) -> QuadField:
    for x in xs:
        if isinstance(x, FieldElem) and not x.K.is_rational:
            return x.K
    return QQ


def _vanishing_factor(p: int, t0: FieldElem) -> Poly | None:
    if t0.is_zero():
        return Poly([0, 1])
    for f in singular_t_factors(p):
        if f(t0).is_zero():
            return f
    return None


def family_curve(p: int, i: int, t0, d0=1) -> WeierstrassModel:
    K = _field_of(t0, d0)
    t0 = as_elem(t0, K)
    d0 = as_elem(d0, K)
    fp = family_polys(p, i)
    if d0.is_zero():
        raise SingularParameter("d0 must be nonzero", Poly([0]))
    bad = _vanishing_factor(p, t0)
    if bad is not None:
        raise SingularParameter(f"t0 = {t0} is a root of {bad}", bad)
    d2 = d0 * d0
    return WeierstrassModel.make([0, 0, 0, d2 * fp.A(t0), d2 * d0 * fp.B(t0)], K)


def family_j(p: int, i: int, t0) -> FieldElem:
    K = _field_of(t0)
    t0 = as_elem(t0, K)
    fp = family_polys(p, i)
    if t0.is_zero():
        raise ZeroT("j has a pole at t = 0")
    bad = _vanishing_factor(p, t0)
    if bad is not None:
        raise SingularParameter(f"t0 = {t0} is a root of {bad}", bad)
    return fp.jnum(t0) / t0**fp.jden_exp


def family_disc(p: int, i: int, t0, d0=1) -> FieldElem:
    K = _field_of(t0, d0)
    t0 = as_elem(t0, K)
    d0 = as_elem(d0, K)
    fp = family_polys(p, i)
    return fp.disc_poly(t0) * d0**6


@dataclass(frozen=True)
class EqualJCase:
    """How t0 relates to the coincidences j_{p,1}(t0) = j_{p,2}(t0).

    kind is one of Generic, SingularJ, IsomorphicCM, EqualJ_DIT, EqualJ_Conditional.
    """

    kind: str
    factor: Poly | None = None
    j: FieldElem | None = None
    cm_D: int | None = None
    ideal_ratio_exp: int | None = None


def _eval(coeffs, t0: FieldElem) -> FieldElem:
    return as_elem(Poly(coeffs)(t0), t0.K)


def equal_j_case(p: int, t0, field: QuadField | None = None) -> EqualJCase:
    if p not in PRIMES:
        raise UnsupportedP(f"no genus-zero family for p = {p}")
    K = field if field is not None else _field_of(t0)
    t0 = as_elem(t0, K)
    bad = _vanishing_factor(p, t0)
    if bad is not None:
        return EqualJCase("SingularJ", bad)
    for f, jc in _ISOMORPHIC_CM.get(p, []):
        if _eval(f, t0).is_zero():
            return EqualJCase("IsomorphicCM", Poly(f), _eval(jc, t0))
    for f, jc in _EQUAL_J_TWIN.get(p, []):
        if _eval(f, t0).is_zero():
            return EqualJCase("EqualJ_DIT", Poly(f), _eval(jc, t0))
    for f, j, D, e in _EQUAL_J_CONDITIONAL.get(p, []):
        if _eval(f, t0).is_zero():
            return EqualJCase("EqualJ_Conditional", Poly(f), as_elem(j, K), D, e)
    return EqualJCase("Generic")


def special_j_pair(p: int, j: int, d=1) -> tuple[WeierstrassModel, WeierstrassModel]:
    """The p-isogenous pair with common j in {0, 1728}: (2, 1728) or (3, 0)."""
    K = _field_of(d)
    d = as_elem(d, K)
    if d.is_zero():
        raise BadPair("d must be nonzero")
    if (p, j) == (2, 1728):
        return (
            WeierstrassModel.make([0, 0, 0, d, 0], K),
            WeierstrassModel.make([0, 0, 0, -4 * d, 0], K),
        )
    if (p, j) == (3, 0):
        return (
            WeierstrassModel.make([0, 0, 0, 0, d], K),
            WeierstrassModel.make([0, 0, 0, 0, -27 * d], K),
        )
    raise BadPair(f"no non-isomorphic {p}-isogenous pair with j = {j} and equal j")


def _dpoly(coeffs) -> Poly:
    return Poly([Poly(c) if isinstance(c, (list, tuple)) else Poly([c]) for c in coeffs])


def kernel_identity_check(j: int, numerator=None) -> bool:
    """Exact check that (x, y) -> (L, y L') maps E_{1,j}(d) onto E_{2,j}(d).

    Polynomials in x have coefficients that are polynomials in d. A custom
    numerator of L (coefficients in x, each a list of d-coefficients) can be
    supplied to probe the check.
    """
    d = [0, 1]
    if j == 0:
        num = _dpoly(numerator if numerator is not None else [[0, 4], 0, 0, 1])
        L = RationalFunction(num, _dpoly([0, 0, 1]))
        lhs = RationalFunction(_dpoly([d, 0, 0, 1])) * L.derivative() ** 2
        rhs = L**3 - RationalFunction(_dpoly([[0, 27]]))
    elif j == 1728:
        num = _dpoly(numerator if numerator is not None else [d, 0, 1])
        L = RationalFunction(num, _dpoly([0, 1]))
        lhs = RationalFunction(_dpoly([0, d, 0, 1])) * L.derivative() ** 2
        rhs = L**3 - RationalFunction(_dpoly([[0, 4]])) * L
    else:
        raise BadPair("kernel maps exist only for j = 0 and j = 1728")
    return (lhs - rhs).is_identically_zero()


def fricke_exponent(p: int) -> int:
    if p not in PRIMES:
        raise UnsupportedP(f"no genus-zero family for p = {p}")
    return 12 // (p - 1)


def fricke_swap_check(p: int) -> bool:
    """j_{p,1}(e) = j_{p,2}(e p^{12/(p-1)}) and j_{p,1}(e p^{12/(p-1)}) = j_{p,2}(e) for e = +-1."""
    q = p ** fricke_exponent(p)
    for e in (1, -1):
        if family_j(p, 1, e) != family_j(p, 2, e * q):
            return False
        if family_j(p, 1, e * q) != family_j(p, 2, e):
            return False
    return True
