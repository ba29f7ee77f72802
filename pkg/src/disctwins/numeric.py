"""Exact arithmetic in Q and quadratic fields Q(sqrt D).

Elements are stored as a + b*sqrt(D) with Fraction coordinates.  The rational
field is the degenerate variant ``QQ`` (internally D = 1, b always 0).
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import (
    DegenerateD,
    DivisionByZero,
    FieldMismatch,
    InfiniteUnitGroup,
    NotSquarefree,
    ZeroElement,
)


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt D); ``D == 1`` is reserved for Q itself."""

    D: int

    @property
    def is_rational(self) -> bool:
        return self.D == 1

    @property
    def is_imaginary(self) -> bool:
        return self.D < 0

    @property
    def omega_half(self) -> bool:
        # integral basis {1, (1+sqrt D)/2} when D = 1 mod 4
        return (not self.is_rational) and self.D % 4 == 1

    @property
    def disc(self) -> int:
        if self.is_rational:
            return 1
        return self.D if self.D % 4 == 1 else 4 * self.D

    @property
    def omega_trace(self) -> int:
        return 1 if self.omega_half else 0

    @property
    def omega_norm(self) -> int:
        return (1 - self.D) // 4 if self.omega_half else -self.D

    def __repr__(self) -> str:
        return "QQ" if self.is_rational else f"Q(sqrt({self.D}))"

    def elem(self, a=0, b=0) -> "FieldElem":
        return FieldElem(a, b, self)

    def sqrtD(self) -> "FieldElem":
        return FieldElem(0, 1, self)

    def omega(self) -> "FieldElem":
        if self.omega_half:
            return FieldElem(Fraction(1, 2), Fraction(1, 2), self)
        return FieldElem(0, 1, self)

    def from_omega(self, X, Y) -> "FieldElem":
        """Element X + Y*omega."""
        if self.omega_half:
            half = Fraction(Y) / 2
            return FieldElem(Fraction(X) + half, half, self)
        return FieldElem(X, Y, self)

    def to_json(self) -> dict:
        return {"D": str(self.D)}

    @staticmethod
    def from_json(obj) -> "QuadField":
        if obj is None:
            return QQ
        D = int(obj["D"]) if isinstance(obj, dict) else int(obj)
        return QQ if D == 1 else field_make(D)


QQ = QuadField(1)


def field_make(D: int) -> QuadField:
    D = int(D)
    if D in (0, 1):
        raise DegenerateD(f"D={D} does not define a quadratic field")
    if not is_squarefree(D):
        raise NotSquarefree(f"D={D} is not squarefree")
    return QuadField(D)


def _frac(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


class FieldElem:
    """Immutable a + b*sqrt(D)."""

    __slots__ = ("a", "b", "K")

    def __init__(self, a, b=0, K: QuadField = QQ):
        a = _frac(a)
        b = _frac(b)
        if K.is_rational and b != 0:
            raise FieldMismatch("irrational part in Q")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "K", K)

    def __setattr__(self, *_):
        raise AttributeError("FieldElem is immutable")

    def __reduce__(self):
        return (FieldElem, (self.a, self.b, self.K))

    # coercion -------------------------------------------------------------
    def _lift(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.K == self.K:
                return other
            if other.K.is_rational:
                return FieldElem(other.a, 0, self.K)
            if self.K.is_rational:
                return other
            raise FieldMismatch(f"{self.K} vs {other.K}")
        if isinstance(other, (int, Fraction)):
            return FieldElem(other, 0, self.K)
        return NotImplemented

    def _pair(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented, NotImplemented
        if o.K != self.K:
            # self rational, other quadratic
            return FieldElem(self.a, 0, o.K), o
        return self, o

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return FieldElem(x.a + y.a, x.b + y.b, x.K)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.a, -self.b, self.K)

    def __pos__(self):
        return self

    def __sub__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return FieldElem(x.a - y.a, x.b - y.b, x.K)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if type(other) is int or type(other) is Fraction:
            return FieldElem(self.a * other, self.b * other, self.K)
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        D = x.K.D
        return FieldElem(x.a * y.a + D * x.b * y.b, x.a * y.b + x.b * y.a, x.K)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero")
        return FieldElem(self.a / n, -self.b / n, self.K)

    def __truediv__(self, other):
        if type(other) is int or type(other) is Fraction:
            if other == 0:
                raise DivisionByZero("division by zero")
            return FieldElem(self.a / other, self.b / other, self.K)
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElem(1, 0, self.K)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparisons ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldElem):
            if other.K != self.K and not (other.K.is_rational or self.K.is_rational):
                return False
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.K.D))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # structure ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def conj(self) -> "FieldElem":
        return FieldElem(self.a, -self.b, self.K)

    def norm(self) -> Fraction:
        return self.a * self.a - self.K.D * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def omega_coords(self) -> tuple[Fraction, Fraction]:
        if self.K.omega_half:
            return self.a - self.b, 2 * self.b
        return self.a, self.b

    def is_integral(self) -> bool:
        X, Y = self.omega_coords()
        return X.denominator == 1 and Y.denominator == 1

    def denominator(self) -> int:
        """Smallest positive integer m with m*self integral."""
        X, Y = self.omega_coords()
        return math.lcm(X.denominator, Y.denominator)

    def to_rational(self) -> Fraction:
        if self.b != 0:
            raise FieldMismatch("element is not rational")
        return self.a

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "D": str(self.K.D)}

    @staticmethod
    def from_json(obj) -> "FieldElem":
        K = QuadField.from_json(obj.get("D", 1))
        return FieldElem(Fraction(obj["a"]), Fraction(obj.get("b", "0")), K)

    def __repr__(self) -> str:
        return format_elem(self)


def format_elem(x: FieldElem) -> str:
    """Parseable text; elements of Q(sqrt(-3)) are written in the basis 1, zeta3."""
    if x.b == 0:
        return str(x.a)
    a, b = x.a, x.b
    if x.K.D == -1:
        root = "i"
    elif x.K.D == -3:
        root = "zeta3"
        a, b = a + b, 2 * b
    else:
        root = f"sqrt({x.K.D})"
    if b == 1:
        term = root
    elif b == -1:
        term = "-" + root
    else:
        term = f"{b}*{root}"
    if a == 0:
        return term
    sign = "+" if a > 0 else "-"
    return f"{term} {sign} {abs(a)}"


def elem(a, b=0, K: QuadField = QQ) -> FieldElem:
    return FieldElem(a, b, K)


def as_elem(x, K: QuadField = QQ) -> FieldElem:
    if isinstance(x, FieldElem):
        if x.K != K and x.K.is_rational:
            return FieldElem(x.a, 0, K)
        return x
    return FieldElem(x, 0, K)


def elem_arith(x: FieldElem, y: FieldElem, op: str) -> FieldElem:
    if x.K != y.K and not (x.K.is_rational or y.K.is_rational):
        raise FieldMismatch(f"{x.K} vs {y.K}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if y.is_zero():
            raise DivisionByZero("division by zero")
        return x / y
    raise ValueError(f"unknown op {op!r}")


def zeta3() -> FieldElem:
    return FieldElem(Fraction(-1, 2), Fraction(1, 2), QuadField(-3))


def units_of(K: QuadField) -> list[FieldElem]:
    if K.is_rational:
        return [FieldElem(1, 0, K), FieldElem(-1, 0, K)]
    if K.D > 0:
        raise InfiniteUnitGroup(f"{K} has infinitely many units")
    if K.D == -1:
        i = K.sqrtD()
        return [FieldElem(1, 0, K), FieldElem(-1, 0, K), i, -i]
    if K.D == -3:
        z = zeta3()
        z2 = z * z
        return [FieldElem(1, 0, K), FieldElem(-1, 0, K), z, -z, z2, -z2]
    return [FieldElem(1, 0, K), FieldElem(-1, 0, K)]


def canonical_key(x: FieldElem):
    """Deterministic tie-break: small |a|, then small |b|, positive before negative."""
    return (abs(x.a), abs(x.b), x.a < 0, x.b < 0)


# n-th roots --------------------------------------------------------------------


def _int_root(n: int, k: int) -> int | None:
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / k)) if n.bit_length() < 1000 else int(mpmath.root(n, k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # fall back to integer Newton for very large inputs
    lo, hi = 0, 1 << (n.bit_length() // k + 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def _rational_roots(q: Fraction, n: int) -> list[Fraction]:
    num, den = q.numerator, q.denominator
    rd = _int_root(den, n)
    rn = _int_root(abs(num), n)
    if rd is None or rn is None:
        return []
    r = Fraction(rn, rd)
    if num < 0:
        return [-r] if n % 2 else []
    return [r, -r] if n % 2 == 0 else [r]


def _digits(z: FieldElem) -> int:
    return max(len(str(abs(z.a.numerator))), len(str(abs(z.b.numerator))), 1)


def _round_candidate(K: QuadField, c, d) -> FieldElem | None:
    twoc = int(mpmath.nint(2 * c))
    twod = int(mpmath.nint(2 * d))
    w = FieldElem(Fraction(twoc, 2), Fraction(twod, 2), K)
    return w if w.is_integral() else None


def nth_roots(x: FieldElem, n: int) -> list[FieldElem]:
    """All y in K with y**n == x (finite list, canonically sorted)."""
    if n < 1:
        raise ValueError("n must be positive")
    if x.is_zero():
        raise ZeroElement("n-th root of zero")
    K = x.K
    if K.is_rational:
        return sorted((FieldElem(r, 0, K) for r in _rational_roots(x.a, n)), key=canonical_key)
    if n == 1:
        return [x]
    m = x.denominator()
    z = x * (m**n)
    found: set[FieldElem] = set()
    dps = 2 * _digits(z) + 40
    with mpmath.workdps(dps):
        sq = mpmath.sqrt(abs(K.D))
        za, zb = mpmath.mpf(int(z.a * 2)) / 2, mpmath.mpf(int(z.b * 2)) / 2
        if K.is_imaginary:
            Z = mpmath.mpc(za, zb * sq)
            for k in range(n):
                y = mpmath.root(Z, n, k)
                w = _round_candidate(K, y.real, y.imag / sq)
                if w is not None and w**n == z:
                    found.add(w / m)
        else:
            X1 = za + zb * sq
            X2 = za - zb * sq
            nz = mpmath.mpf(int(z.norm()))
            if abs(X1) < abs(X2):
                X1 = nz / X2
            else:
                X2 = nz / X1
            roots1 = _real_roots(X1, n)
            roots2 = _real_roots(X2, n)
            for r1 in roots1:
                for r2 in roots2:
                    w = _round_candidate(K, (r1 + r2) / 2, (r1 - r2) / (2 * sq))
                    if w is not None and w**n == z:
                        found.add(w / m)
    return sorted(found, key=canonical_key)


def _real_roots(X, n):
    if X == 0:
        return []
    if n % 2:
        r = mpmath.root(abs(X), n)
        return [r if X > 0 else -r]
    if X < 0:
        return []
    r = mpmath.root(X, n)
    return [r, -r]


def nth_power_root(x: FieldElem, n: int) -> FieldElem | None:
    """A canonical y with y**n == x, or None when x is not an n-th power in K."""
    roots = nth_roots(x, n)
    return roots[0] if roots else None


def is_nth_power(x: FieldElem, n: int) -> bool:
    return bool(nth_roots(x, n))


# polynomials ---------------------------------------------------------------------


def _is_zero(c) -> bool:
    if isinstance(c, (FieldElem, Poly)):
        return c.is_zero()
    return c == 0


class Poly:
    """Univariate polynomial, coefficients low degree first.

    Coefficients may be ints, Fractions, FieldElems or Polys (the last gives
    bivariate polynomials, used by the isogeny identity checks).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    @staticmethod
    def const(c) -> "Poly":
        return Poly([c])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other):
        o = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.coeffs), len(o.coeffs))
        out = []
        for k in range(n):
            a = self.coeffs[k] if k < len(self.coeffs) else 0
            b = o.coeffs[k] if k < len(o.coeffs) else 0
            out.append(a + b)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-(other if isinstance(other, Poly) else Poly([other])))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __rmul__(self, other):
        return Poly([other * c for c in self.coeffs])

    def __pow__(self, n: int):
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(str(c) for c in self.coeffs))

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            terms.append(f"({c})*t^{k}" if k else f"({c})")
        return " + ".join(terms) if terms else "0"


def poly_from_factors(constant, factors: Sequence[tuple[Sequence, int]]) -> Poly:
    """constant * prod(f_i ** e_i), each f_i given as a low-first coefficient list."""
    out = Poly([constant])
    for coeffs, e in factors:
        out = out * (Poly(coeffs) ** e)
    return out


class RationalFunction:
    """num/den with Poly parts; used for exact identity checks."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        den = den if den is not None else Poly([1])
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self.num = num
        self.den = den

    def __add__(self, other):
        o = _as_rf(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, other):
        o = _as_rf(other)
        return RationalFunction(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, other):
        o = _as_rf(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return RationalFunction(self.num**n, self.den**n)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den
        )

    def is_identically_zero(self) -> bool:
        return self.num.is_zero()


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    return RationalFunction(Poly([x]))


def is_identically_zero(f) -> bool:
    if isinstance(f, RationalFunction):
        return f.is_identically_zero()
    if isinstance(f, Poly):
        return f.is_zero()
    return _is_zero(f)


# parsing -----------------------------------------------------------------------

_SYMBOLS = {"i": -1, "zeta3": -3, "w": -3}


def parse_elem(text: str, K: QuadField | None = None) -> FieldElem:
    """Parse expressions like ``3/2 - 5*sqrt(-33)``, ``2*i + 11`` or ``zeta3^2 - 8``.

    Recognised atoms: integers, ``sqrt(D)``, ``sqrtD`` (the generator of K),
    ``i`` and ``zeta3``. Operators: + - * / and ^ (or **) with integer exponents.
    When K is omitted it is inferred from the atoms used.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse field element {text!r}") from exc
    fields = set()

    def root(D: int) -> FieldElem:
        F = K if K is not None and K.D == D else field_make(D)
        fields.add(F)
        return F.sqrtD()

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return FieldElem(node.value)
        if isinstance(node, ast.Name):
            if node.id == "sqrtD":
                if K is None:
                    raise ValueError("sqrtD needs an explicit field")
                fields.add(K)
                return K.sqrtD()
            if node.id in _SYMBOLS:
                s = root(_SYMBOLS[node.id])
                return s if node.id == "i" else (s - 1) / 2
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id == "sqrt"
            and len(node.args) == 1
            and not node.keywords
        ):
            D = walk(node.args[0])
            if not D.is_rational() or D.a.denominator != 1:
                raise ValueError("sqrt expects an integer")
            return root(int(D.a))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                n = walk(node.right)
                if not n.is_rational() or n.a.denominator != 1:
                    raise ValueError("exponent must be an integer")
                return left ** int(n.a)
            right = walk(node.right)
            ops = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Div: "div"}
            for cls, name in ops.items():
                if isinstance(node.op, cls):
                    return elem_arith(left, right, name)
        raise ValueError(f"unsupported syntax in {text!r}")

    value = walk(tree)
    if len(fields) > 1:
        raise FieldMismatch(f"{text!r} mixes several quadratic fields")
    target = K if K is not None else (fields.pop() if fields else QQ)
    if not value.K.is_rational and value.K != target:
        raise FieldMismatch(f"{text!r} does not lie in {target}")
    return as_elem(value, target)
