"""Prime ideals of quadratic rings of integers.

Ideals are Z-lattices inside O_K = Z + Z*omega, stored in Hermite normal form
as (a, b, d): the lattice spanned by a and b + d*omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import factorint
from sympy.ntheory import sqrt_mod

from .errors import UnsupportedField, ZeroElement
from .numeric import QQ, FieldElem, QuadField, canonical_key

HNF = tuple[int, int, int]

KIND_ORDER = {"ramified": 0, "split": 1, "inert": 2, None: 3}


def kronecker(disc: int, p: int) -> int:
    """Kronecker symbol (disc | p) for a prime p."""
    if disc % p == 0:
        return 0
    if p == 2:
        return 1 if disc % 8 in (1, 7) else -1
    return 1 if pow(disc % p, (p - 1) // 2, p) == 1 else -1


def _omega_mul(K: QuadField, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    X1, Y1 = x
    X2, Y2 = y
    yy = Y1 * Y2
    # omega^2 = T*omega - N
    return (X1 * X2 - yy * K.omega_norm, X1 * Y2 + X2 * Y1 + yy * K.omega_trace)


def hnf(vectors) -> HNF:
    """HNF (a, b, d) of the full-rank lattice spanned by integer pairs."""
    pivot = (0, 0)
    xs: list[int] = []
    for x, y in vectors:
        if y == 0:
            if x:
                xs.append(x)
            continue
        if pivot[1] == 0:
            pivot = (x, y)
            continue
        g = math.gcd(pivot[1], y)
        _, s, t = _ext_gcd(pivot[1], y)
        new = (s * pivot[0] + t * x, g)
        xs.append((y // g) * pivot[0] - (pivot[1] // g) * x)
        pivot = new
    a = 0
    for v in xs:
        a = math.gcd(a, v)
    if a == 0 or pivot[1] == 0:
        raise ValueError("lattice is not of full rank")
    bx, d = pivot
    if d < 0:
        bx, d = -bx, -d
    return (a, bx % a, d)


def _ext_gcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_contains(h: HNF, X: int, Y: int) -> bool:
    a, b, d = h
    if Y % d:
        return False
    return (X - (Y // d) * b) % a == 0


def hnf_mul(K: QuadField, h1: HNF, h2: HNF) -> HNF:
    b1 = [(h1[0], 0), (h1[1], h1[2])]
    b2 = [(h2[0], 0), (h2[1], h2[2])]
    return hnf(_omega_mul(K, u, v) for u in b1 for v in b2)


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of O_K above p.

    Non-inert primes are (p, omega + c) with 0 <= c < p; inert primes are (p).
    Over Q the kind is None.
    """

    K: QuadField
    p: int
    kind: str | None
    c: int | None
    e: int
    f: int

    @property
    def pi(self) -> FieldElem:
        """Second two-element generator (omega + c, or p when inert)."""
        if self.c is None:
            return FieldElem(self.p, 0, self.K)
        return self.K.from_omega(self.c, 1)

    @property
    def gens(self) -> tuple[int, FieldElem]:
        return (self.p, self.pi)

    @property
    def uniformizer(self) -> FieldElem:
        """Element of valuation exactly one at this prime."""
        if self.c is None:
            return FieldElem(self.p, 0, self.K)
        pi = self.pi
        if self.kind == "split" and pi.norm() % (self.p * self.p) == 0:
            return self.K.from_omega(self.c + self.p, 1)
        return pi

    @property
    def residue_root(self) -> int | None:
        """Image of omega in F_p for degree-one primes."""
        return None if self.c is None else (-self.c) % self.p

    @property
    def norm(self) -> int:
        return self.p**self.f

    @property
    def z_basis(self) -> HNF:
        return ideal_power_basis(self, 1)

    def sort_key(self):
        return (self.p, KIND_ORDER[self.kind], -1 if self.c is None else self.c)

    def label(self) -> str:
        if self.K.is_rational:
            return str(self.p)
        if self.kind == "inert":
            return f"({self.p})"
        return f"({self.p}, {self.pi})"

    def __repr__(self) -> str:
        return f"PrimeIdeal{self.label()}"

    def to_json(self) -> dict:
        return {"p": self.p, "kind": self.kind, "pi": self.pi.to_json()}


def _omega_roots_mod(K: QuadField, p: int) -> list[int]:
    T, N = K.omega_trace, K.omega_norm
    if p == 2:
        return [r for r in range(2) if (r * r - T * r + N) % 2 == 0]
    d = (T * T - 4 * N) % p
    inv2 = pow(2, -1, p)
    if d == 0:
        return [(T * inv2) % p]
    roots = [int(r) for r in (sqrt_mod(d, p, all_roots=True) or [])]
    return sorted({((T + s) * inv2) % p for s in roots})


@lru_cache(maxsize=None)
def split_prime(K: QuadField, p: int) -> tuple[PrimeIdeal, ...]:
    if K.is_rational:
        return (PrimeIdeal(K, p, None, None, 1, 1),)
    chi = kronecker(K.disc, p)
    if chi == -1:
        return (PrimeIdeal(K, p, "inert", None, 1, 2),)
    roots = _omega_roots_mod(K, p)
    if chi == 0:
        return (PrimeIdeal(K, p, "ramified", (-roots[0]) % p, 2, 1),)
    cs = sorted((-r) % p for r in roots)
    return tuple(PrimeIdeal(K, p, "split", c, 1, 1) for c in cs)


@lru_cache(maxsize=4096)
def ideal_power_basis(P: PrimeIdeal, k: int) -> HNF:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if P.K.is_rational:
        raise UnsupportedField("lattice bases are only defined for quadratic fields")
    if k == 0:
        return (1, 0, 1)
    if k == 1:
        gens = [(P.p, 0), (0, P.p)]
        if P.c is not None:
            gens += [(P.c, 1), _omega_mul(P.K, (P.c, 1), (0, 1))]
        return hnf(gens)
    half = ideal_power_basis(P, k // 2)
    out = hnf_mul(P.K, half, half)
    if k % 2:
        out = hnf_mul(P.K, out, ideal_power_basis(P, 1))
    return out


def _vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ZeroElement("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _valuation_integral(X: int, Y: int, P: PrimeIdeal) -> int:
    p = P.p
    v = 0
    while X % p == 0 and Y % p == 0:
        X //= p
        Y //= p
        v += P.e
    if P.kind == "inert":
        return v
    k = 1
    while hnf_contains(ideal_power_basis(P, k), X, Y):
        k += 1
    return v + k - 1


def valuation(x, P: PrimeIdeal) -> int:
    """nu_P(x) for nonzero x in K."""
    if not isinstance(x, FieldElem):
        x = FieldElem(x, 0, P.K if not P.K.is_rational else QQ)
    if x.is_zero():
        raise ZeroElement("valuation of zero")
    if P.K.is_rational:
        q = x.to_rational()
        return _vp_int(q.numerator, P.p) - _vp_int(q.denominator, P.p)
    if x.b == 0:
        q = x.a
        return P.e * (_vp_int(q.numerator, P.p) - _vp_int(q.denominator, P.p))
    X, Y = x.omega_coords()
    m = math.lcm(X.denominator, Y.denominator)
    Xi, Yi = int(X * m), int(Y * m)
    return _valuation_integral(Xi, Yi, P) - (P.e * _vp_int(m, P.p) if m > 1 else 0)


@dataclass(frozen=True)
class IdealFactorization:
    terms: tuple[tuple[PrimeIdeal, int], ...] = ()

    @staticmethod
    def make(pairs) -> "IdealFactorization":
        acc: dict[PrimeIdeal, int] = {}
        for P, e in pairs:
            acc[P] = acc.get(P, 0) + e
        items = sorted(((P, e) for P, e in acc.items() if e), key=lambda t: t[0].sort_key())
        return IdealFactorization(tuple(items))

    def exp(self, P: PrimeIdeal) -> int:
        for Q, e in self.terms:
            if Q == P:
                return e
        return 0

    @property
    def primes(self) -> list[PrimeIdeal]:
        return [P for P, _ in self.terms]

    def __mul__(self, other: "IdealFactorization") -> "IdealFactorization":
        return IdealFactorization.make(list(self.terms) + list(other.terms))

    def __pow__(self, n: int) -> "IdealFactorization":
        return IdealFactorization.make((P, e * n) for P, e in self.terms)

    def is_trivial(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        return [dict(P.to_json(), exp=e) for P, e in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "(1)"
        return " ".join(f"{P.label()}^{e}" if e != 1 else P.label() for P, e in self.terms)


def _prime_factors(n: int) -> list[int]:
    n = abs(n)
    if n <= 1:
        return []
    return sorted(int(q) for q in factorint(n))


def candidate_primes(x: FieldElem) -> list[int]:
    """Rational primes below every prime ideal where x has nonzero valuation."""
    m = x.denominator()
    y = x * m
    n = y.norm()
    return sorted(set(_prime_factors(int(n))) | set(_prime_factors(m)))


def factor_principal_ideal(x: FieldElem, primes=None) -> IdealFactorization:
    if x.is_zero():
        raise ZeroElement("cannot factor the zero ideal")
    K = x.K
    ps = candidate_primes(x) if primes is None else primes
    pairs = []
    for p in ps:
        for P in split_prime(K, p):
            v = valuation(x, P)
            if v:
                pairs.append((P, v))
    return IdealFactorization.make(pairs)


def elements_of_norm(K: QuadField, n: int) -> list[FieldElem]:
    """All x in O_K with N(x) = n (K imaginary quadratic)."""
    if not K.is_imaginary:
        raise UnsupportedField("norm-form search needs a positive definite form")
    out = []
    absD = -K.D
    if K.omega_half:
        # (2X + Y)^2 + |D| Y^2 = 4n
        ymax = math.isqrt(4 * n // absD)
        for Y in range(-ymax, ymax + 1):
            rest = 4 * n - absD * Y * Y
            if rest < 0:
                continue
            s = math.isqrt(rest)
            if s * s != rest:
                continue
            for S in {s, -s}:
                if (S - Y) % 2 == 0:
                    out.append(K.from_omega((S - Y) // 2, Y))
    else:
        ymax = math.isqrt(n // absD)
        for Y in range(-ymax, ymax + 1):
            rest = n - absD * Y * Y
            if rest < 0:
                continue
            s = math.isqrt(rest)
            if s * s == rest:
                for X in {s, -s}:
                    out.append(FieldElem(X, Y, K))
    return sorted(set(out), key=canonical_key)


def principal_generator_of_power(P: PrimeIdeal, k: int) -> FieldElem | None:
    if k < 1:
        raise ValueError("k must be positive")
    K = P.K
    if K.is_rational:
        return FieldElem(P.p**k, 0, K)
    if not K.is_imaginary:
        raise UnsupportedField("generator search needs an imaginary quadratic field")
    if P.kind == "inert":
        return FieldElem(P.p**k, 0, K)
    for x in elements_of_norm(K, P.p ** (P.f * k)):
        if valuation(x, P) == k:
            return x
    return None


class ResidueField:
    """O_K / P as F_p or F_{p^2}; elements are ints or (u, v) = u + v*omega."""

    def __init__(self, P: PrimeIdeal):
        self.P = P
        self.p = P.p
        self.q = P.p**P.f
        self.deg = P.f
        K = P.K
        self._T = K.omega_trace % self.p if not K.is_rational else 0
        self._N = K.omega_norm % self.p if not K.is_rational else 0
        if P.kind == "split":
            other = [Q for Q in split_prime(K, P.p) if Q != P][0]
            self._away = other.pi
        else:
            self._away = None

    # reduction of integral elements
    def _reduce_integral(self, x: FieldElem):
        p = self.p
        if self.P.K.is_rational:
            return int(x.a) % p
        X, Y = x.omega_coords()
        X, Y = int(X), int(Y)
        if self.deg == 1:
            return (X + Y * self.P.residue_root) % p
        return (X % p, Y % p)

    def reduce(self, x) -> object:
        """Image of a P-integral element."""
        if not isinstance(x, FieldElem):
            x = FieldElem(x, 0, self.P.K)
        p = self.p
        if self.P.K.is_rational:
            q = x.a
            if q.denominator % p == 0:
                raise ValueError("element is not integral at p")
            return q.numerator * pow(q.denominator, -1, p) % p
        m = x.denominator()
        y = x * m
        a = 0
        while m % p == 0:
            m //= p
            a += 1
        scale = self.one()
        if a:
            if self._away is not None:
                s = self._away**a
                y = y * s
                scale = self.mul(scale, self._reduce_integral(s))
            y = y / (p**a)
            if not y.is_integral():
                raise ValueError("element is not integral at P")
        scale = self.mul(scale, m % p if self.deg == 1 else (m % p, 0))
        return self.mul(self._reduce_integral(y), self.inv(scale))

    def one(self):
        return 1 if self.deg == 1 else (1, 0)

    def zero(self):
        return 0 if self.deg == 1 else (0, 0)

    def is_zero(self, u) -> bool:
        return u == self.zero()

    def add(self, u, v):
        p = self.p
        if self.deg == 1:
            return (u + v) % p
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p)

    def mul(self, u, v):
        p = self.p
        if self.deg == 1:
            return (u * v) % p
        yy = u[1] * v[1]
        return ((u[0] * v[0] - yy * self._N) % p, (u[0] * v[1] + u[1] * v[0] + yy * self._T) % p)

    def power(self, u, n: int):
        result = self.one()
        while n:
            if n & 1:
                result = self.mul(result, u)
            n >>= 1
            if n:
                u = self.mul(u, u)
        return result

    def inv(self, u):
        if self.is_zero(u):
            raise ZeroDivisionError("inverse of zero in residue field")
        return self.power(u, self.q - 2)

    def frobenius_root(self, u):
        """The unique v with v**p == u (perfect field)."""
        return self.power(u, self.q // self.p)

    def lift(self, u) -> FieldElem:
        K = self.P.K
        if self.deg == 1:
            return FieldElem(u, 0, K)
        return K.from_omega(u[0], u[1])

    def elements(self):
        p = self.p
        if self.deg == 1:
            return list(range(p))
        return [(a, b) for a in range(p) for b in range(p)]


def residue_field(P: PrimeIdeal) -> ResidueField:
    return ResidueField(P)


def prime_above(K: QuadField, p: int, index: int = 0) -> PrimeIdeal:
    return split_prime(K, p)[index]


def rational_valuation(q: Fraction, p: int) -> int:
    return _vp_int(q.numerator, p) - _vp_int(q.denominator, p)
