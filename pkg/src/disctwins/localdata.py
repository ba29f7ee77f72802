"""Local invariants of Weierstrass models at a prime: Tate's algorithm and friends."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .ellmodel import WeierstrassModel, rst, scale
from .errors import (
    ClassNumberNotOne,
    IncompatiblePrimes,
    InvalidResidue,
    NonIntegralUnfixable,
    UnsupportedField,
)
from .ideals import (
    IdealFactorization,
    PrimeIdeal,
    ResidueField,
    candidate_primes,
    principal_generator_of_power,
    split_prime,
    valuation,
)
from .numeric import FieldElem, as_elem

INF = float("inf")


@dataclass(frozen=True, order=True)
class KodairaSymbol:
    tag: str
    n: int = 0

    def __str__(self) -> str:
        if self.tag == "In":
            return f"I{self.n}"
        if self.tag == "In*":
            return f"I{self.n}*"
        return self.tag

    @property
    def components(self) -> int:
        fixed = {"I0": 1, "II": 1, "III": 2, "IV": 3, "I0*": 5, "IV*": 7, "III*": 8, "II*": 9}
        if self.tag == "In":
            return self.n
        if self.tag == "In*":
            return 5 + self.n
        return fixed[self.tag]

    @staticmethod
    def parse(text: str) -> "KodairaSymbol":
        if text in ("I0", "II", "III", "IV", "I0*", "IV*", "III*", "II*"):
            return KodairaSymbol(text)
        star = text.endswith("*")
        n = int(text[1:-1] if star else text[1:])
        return KodairaSymbol("In*" if star else "In", n)


@dataclass(frozen=True)
class LocalData:
    prime: PrimeIdeal
    kodaira: KodairaSymbol
    f: int
    m: int
    vmin: int
    u_exp: int
    reduction: str
    potential: str

    def __post_init__(self):
        if self.f != self.vmin - self.m + 1:
            raise AssertionError(f"Ogg's formula violated: {self}")

    def to_json(self) -> dict:
        return {
            "p": self.prime.p,
            "kind": self.prime.kind,
            "pi": self.prime.pi.to_json(),
            "kodaira": str(self.kodaira),
            "f": self.f,
            "m": self.m,
            "vmin": self.vmin,
            "u_exp": self.u_exp,
            "reduction": self.reduction,
            "potential": self.potential,
        }


class _Local:
    """Valuation and residue helpers bound to one prime."""

    def __init__(self, P: PrimeIdeal):
        self.P = P
        self.F = ResidueField(P)
        self.p = P.p
        self.pi = P.uniformizer

    def val(self, x) -> float:
        if isinstance(x, FieldElem) and x.is_zero():
            return INF
        if not isinstance(x, FieldElem) and x == 0:
            return INF
        return valuation(x, self.P)

    def pdiv(self, x, k: int = 1) -> bool:
        return self.val(x) >= k

    def red(self, x):
        return self.F.reduce(x)

    def preduce(self, x) -> FieldElem:
        return self.F.lift(self.red(x))

    def pinv(self, x) -> FieldElem:
        return self.F.lift(self.F.inv(self.red(x)))

    def proot(self, x, e: int) -> FieldElem:
        if e != self.p:
            raise ValueError("only p-th roots in characteristic p are needed")
        return self.F.lift(self.F.frobenius_root(self.red(x)))


def _kodaira_local(E: WeierstrassModel, P: PrimeIdeal):
    """Tate's algorithm. Returns (symbol, f, vmin, u_exp)."""
    L = _Local(P)
    p = L.p
    pi = L.pi
    K = E.K
    pi2 = pi * pi
    pi3 = pi2 * pi
    pi4 = pi3 * pi
    half = as_elem(0, K) if p == 2 else L.pinv(2)
    u_exp = 0

    coeffs = list(E.coeffs)
    weights = (1, 2, 3, 4, 6)
    shift = 0
    for a, w in zip(coeffs, weights):
        if not a.is_zero():
            v = L.val(a)
            if v < 0:
                shift = max(shift, -(v // w))
    if shift:
        C = scale(E, pi ** (-shift))
        u_exp -= shift
    else:
        C = E

    for _ in range(10_000):
        a1, a2, a3, a4, a6 = C.coeffs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        vD = L.val(disc)
        if vD == 0:
            return KodairaSymbol("I0"), 0, 0, u_exp
        if L.val(c4) == 0:
            return KodairaSymbol("In", vD), 1, vD, u_exp

        # additive: move the singular point to (0, 0)
        if p == 2:
            if L.pdiv(b2):
                r = L.proot(a4, 2)
                t = L.proot(((r + a2) * r + a4) * r + a6, 2)
            else:
                temp = L.pinv(a1)
                r = temp * a3
                t = temp * (a4 + r * r)
        elif p == 3:
            if L.pdiv(b2):
                r = L.proot(-b6, 3)
            else:
                r = -L.pinv(b2) * b4
            t = a1 * r + a3
        else:
            r = -L.pinv(12) * b2
            t = -half * (a1 * r + a3)
        C = rst(C, L.preduce(r), 0, L.preduce(t))
        a1, a2, a3, a4, a6 = C.coeffs
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        if min(L.val(x) for x in C.coeffs) < 0:
            raise NonIntegralUnfixable("model left the local ring after translation")

        if L.val(a6) < 2:
            return KodairaSymbol("II"), vD, vD, u_exp
        if L.val(b8) < 3:
            return KodairaSymbol("III"), vD - 1, vD, u_exp
        if L.val(b6) < 3:
            return KodairaSymbol("IV"), vD - 2, vD, u_exp

        if p == 2:
            s = L.proot(a2, 2)
            t = pi * L.proot(a6 / pi2, 2)
        elif p == 3:
            s = a1
            t = a3
        else:
            s = -a1 * half
            t = -a3 * half
        C = rst(C, 0, s, t)
        a1, a2, a3, a4, a6 = C.coeffs

        # cubic T^3 + b T^2 + c T + d modulo P
        b = a2 / pi
        c = a4 / pi2
        d = a6 / pi3
        bb = b * b
        cc = c * c
        bc = b * c
        w = 27 * d * d - bb * cc + 4 * b * bb * d - 18 * bc * d + 4 * c * cc
        x = 3 * c - bb
        if L.pdiv(w):
            sw = 3 if L.pdiv(x) else 2
        else:
            sw = 1

        if sw == 1:
            return KodairaSymbol("I0*"), vD - 4, vD, u_exp

        if sw == 2:
            if p == 2:
                r = L.proot(c, 2)
            elif p == 3:
                r = c * L.pinv(b)
            else:
                r = (bc - 9 * d) * L.pinv(2 * x)
            C = rst(C, pi * L.preduce(r), 0, 0)
            a1, a2, a3, a4, a6 = C.coeffs
            ix = iy = 3
            mx = my = pi2
            while True:
                a2t = a2 / pi
                a3t = a3 / my
                a4t = a4 / (pi * mx)
                a6t = a6 / (mx * my)
                if not L.pdiv(a3t * a3t + 4 * a6t):
                    break
                if p == 2:
                    t = my * L.proot(a6t, 2)
                else:
                    t = my * L.preduce(-a3t * half)
                C = rst(C, 0, 0, t)
                a1, a2, a3, a4, a6 = C.coeffs
                my = my * pi
                iy += 1
                a2t = a2 / pi
                a3t = a3 / my
                a4t = a4 / (pi * mx)
                a6t = a6 / (mx * my)
                if not L.pdiv(a4t * a4t - 4 * a6t * a2t):
                    break
                if p == 2:
                    r = mx * L.proot(a6t * L.pinv(a2t), 2)
                else:
                    r = mx * L.preduce(-a4t * L.pinv(2 * a2t))
                C = rst(C, r, 0, 0)
                a1, a2, a3, a4, a6 = C.coeffs
                mx = mx * pi
                ix += 1
            n = ix + iy - 5
            return KodairaSymbol("In*", n), vD - n - 4, vD, u_exp

        # triple root
        if p == 2:
            r = b
        elif p == 3:
            r = L.proot(-d, 3)
        else:
            r = -b * L.pinv(3)
        C = rst(C, pi * L.preduce(r), 0, 0)
        a1, a2, a3, a4, a6 = C.coeffs
        a3t = a3 / pi2
        a6t = a6 / pi4
        if not L.pdiv(a3t * a3t + 4 * a6t):
            return KodairaSymbol("IV*"), vD - 6, vD, u_exp
        if p == 2:
            t = -pi2 * L.proot(a6t, 2)
        else:
            t = pi2 * L.preduce(-a3t * half)
        C = rst(C, 0, 0, t)
        a1, a2, a3, a4, a6 = C.coeffs
        if L.val(a4) < 4:
            return KodairaSymbol("III*"), vD - 7, vD, u_exp
        if L.val(a6) < 6:
            return KodairaSymbol("II*"), vD - 8, vD, u_exp
        # non-minimal: divide through by pi and restart
        C = scale(C, pi)
        u_exp += 1
    raise NonIntegralUnfixable("Tate's algorithm failed to terminate")


def _reduction_label(f: int) -> str:
    return "good" if f == 0 else ("multiplicative" if f == 1 else "additive")


def tate_local(E: WeierstrassModel, P: PrimeIdeal) -> LocalData:
    if P.K != E.K and not P.K.is_rational:
        raise IncompatiblePrimes("prime and model live over different fields")
    sym, f, vmin, u_exp = _kodaira_local(E, P)
    j = E.j
    potential = "good" if j.is_zero() or valuation(j, P) >= 0 else "multiplicative"
    return LocalData(P, sym, f, sym.components, vmin, u_exp, _reduction_label(f), potential)


def reduction_type(E: WeierstrassModel, P: PrimeIdeal) -> tuple[str, str]:
    ld = tate_local(E, P)
    return ld.reduction, ld.potential


def _integral_scale(E: WeierstrassModel) -> int:
    # u = 1/m with m the lcm of all denominators always clears them
    return lcm(*(a.denominator() for a in E.coeffs))


def relevant_primes(E: WeierstrassModel) -> list[PrimeIdeal]:
    """Primes where the model has bad reduction or is not integral."""
    m = _integral_scale(E)
    disc = E.disc * (m**12)
    ps = set(candidate_primes(disc))
    ps |= set(candidate_primes(as_elem(m, E.K)))
    out = []
    for p in sorted(ps):
        for P in split_prime(E.K, p):
            if valuation(E.disc, P) != 0 or any(
                not a.is_zero() and valuation(a, P) < 0 for a in E.coeffs
            ):
                out.append(P)
    return out


@lru_cache(maxsize=8192)
def local_data_all(E: WeierstrassModel) -> tuple[LocalData, ...]:
    """LocalData at every prime where the model is non-minimal or has bad reduction."""
    out = []
    for P in relevant_primes(E):
        ld = tate_local(E, P)
        if ld.vmin or ld.u_exp:
            out.append(ld)
    return tuple(out)


def minimal_discriminant_ideal(E: WeierstrassModel) -> IdealFactorization:
    return IdealFactorization.make((ld.prime, ld.vmin) for ld in local_data_all(E))


def conductor_ideal(E: WeierstrassModel) -> IdealFactorization:
    return IdealFactorization.make((ld.prime, ld.f) for ld in local_data_all(E))


def minimal_discriminant_value(E: WeierstrassModel) -> FieldElem:
    """Discriminant of a global minimal model; canonical when units^12 = 1."""
    K = E.K
    if not K.is_rational and not K.is_imaginary:
        raise UnsupportedField("minimal discriminant value needs a finite unit group")
    u = as_elem(1, K)
    for ld in local_data_all(E):
        if ld.u_exp == 0:
            continue
        g = principal_generator_of_power(ld.prime, 1)
        if g is None:
            raise ClassNumberNotOne(f"{ld.prime.label()} is not principal")
        u = u * g**ld.u_exp
    return E.disc / u**12


_MOD12 = {0: "I0", 2: "II", 3: "III", 4: "IV", 6: "I0*", 8: "IV*", 9: "III*", 10: "II*"}


def kodaira_from_mod12(v_disc: int) -> tuple[KodairaSymbol, int]:
    """Kodaira type and minimal valuation from nu(Delta) mod 12 (potentially good, P not over 2, 3)."""
    r = v_disc % 12
    if r not in _MOD12:
        raise InvalidResidue(f"residue {r} is impossible for potentially good reduction")
    return KodairaSymbol(_MOD12[r]), r


def isogeny_valuation_check(ld1: LocalData, ld2: LocalData, p: int, j1_val: int) -> bool:
    """Check the discriminant-valuation relation for a p-isogenous pair at one prime."""
    if ld1.prime != ld2.prime:
        raise IncompatiblePrimes("local data at different primes")
    d1, d2 = ld1.vmin, ld2.vmin
    if ld1.reduction != ld2.reduction:
        return False
    if ld1.reduction == "good":
        return d1 == 0 and d2 == 0
    if ld1.reduction == "multiplicative":
        return d1 == p * d2 or d2 == p * d1
    P = ld1.prime
    if ld1.potential == "multiplicative":
        diff = d2 - d1
        return diff == Fraction(p - 1, p) * j1_val or diff == -(p - 1) * j1_val
    if P.p != p:
        return d1 == d2
    if P.p in (2, 3):
        return True
    return d1 == d2 or d1 + d2 == 12
