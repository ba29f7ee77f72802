"""Weierstrass models, admissible changes of variables, twists and K-isomorphism."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import NotShortForm, Singular, ZeroD, ZeroU
from .numeric import QQ, FieldElem, QuadField, as_elem, nth_roots, parse_elem


@dataclass(frozen=True)
class Invariants:
    b2: FieldElem
    b4: FieldElem
    b6: FieldElem
    b8: FieldElem
    c4: FieldElem
    c6: FieldElem
    disc: FieldElem
    j: FieldElem


def _b_c_disc(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, c6, disc


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over K (nonsingular)."""

    a1: FieldElem
    a2: FieldElem
    a3: FieldElem
    a4: FieldElem
    a6: FieldElem
    K: QuadField = QQ

    @staticmethod
    def make(coeffs, K: QuadField | None = None) -> "WeierstrassModel":
        coeffs = list(coeffs)
        if len(coeffs) == 2:
            coeffs = [0, 0, 0] + coeffs
        if K is None:
            K = QQ
            for c in coeffs:
                if isinstance(c, FieldElem) and not c.K.is_rational:
                    K = c.K
        a = [as_elem(c, K) for c in coeffs]
        E = WeierstrassModel(*a, K=K)
        if E.disc.is_zero():
            raise Singular(f"singular model {E.coeffs}")
        return E

    @property
    def coeffs(self) -> tuple[FieldElem, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def invariants(self) -> Invariants:
        b2, b4, b6, b8, c4, c6, disc = _b_c_disc(*self.coeffs)
        if disc.is_zero():
            raise Singular("discriminant vanishes")
        return Invariants(b2, b4, b6, b8, c4, c6, disc, c4 * c4 * c4 / disc)

    @property
    def disc(self) -> FieldElem:
        return _b_c_disc(*self.coeffs)[-1]

    @property
    def j(self) -> FieldElem:
        return self.invariants.j

    def is_short(self) -> bool:
        return self.a1.is_zero() and self.a2.is_zero() and self.a3.is_zero()

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.coeffs)

    def to_json(self) -> dict:
        return {"field": self.K.to_json(), "a": [c.to_json() for c in self.coeffs]}

    @staticmethod
    def from_json(obj) -> "WeierstrassModel":
        K = QuadField.from_json(obj.get("field"))
        coeffs = []
        for c in obj["a"]:
            if isinstance(c, dict):
                x = FieldElem.from_json(c)
                coeffs.append(as_elem(x, K))
            elif isinstance(c, str):
                coeffs.append(as_elem(parse_elem(c, K), K))
            else:
                coeffs.append(as_elem(FieldElem(c), K))
        return WeierstrassModel.make(coeffs, K)

    def __str__(self) -> str:
        a1, a2, a3, a4, a6 = self.coeffs
        lhs = "y^2"
        if a1:
            lhs += f" + ({a1})*x*y"
        if a3:
            lhs += f" + ({a3})*y"
        rhs = "x^3"
        if a2:
            rhs += f" + ({a2})*x^2"
        if a4:
            rhs += f" + ({a4})*x"
        if a6:
            rhs += f" + ({a6})"
        return f"{lhs} = {rhs}"


def invariants(E: WeierstrassModel) -> Invariants:
    return E.invariants


@dataclass(frozen=True)
class Transformation:
    """[u, r, s, w]: x = u^2 x' + r, y = u^3 y' + s u^2 x' + w."""

    u: FieldElem
    r: FieldElem
    s: FieldElem
    w: FieldElem

    @staticmethod
    def make(u, r=0, s=0, w=0, K: QuadField = QQ) -> "Transformation":
        for v in (u, r, s, w):
            if isinstance(v, FieldElem) and not v.K.is_rational:
                K = v.K
        tau = Transformation(as_elem(u, K), as_elem(r, K), as_elem(s, K), as_elem(w, K))
        if tau.u.is_zero():
            raise ZeroU("u must be nonzero")
        return tau

    @staticmethod
    def identity(K: QuadField = QQ) -> "Transformation":
        return Transformation.make(1, 0, 0, 0, K)

    def then(self, other: "Transformation") -> "Transformation":
        """Apply self first, then other."""
        u1, r1, s1, w1 = self.u, self.r, self.s, self.w
        u2, r2, s2, w2 = other.u, other.r, other.s, other.w
        uu = u1 * u1
        return Transformation(
            u1 * u2,
            r1 + uu * r2,
            s1 + u1 * s2,
            w1 + uu * s1 * r2 + uu * u1 * w2,
        )

    def inverse(self) -> "Transformation":
        u, r, s, w = self.u, self.r, self.s, self.w
        return Transformation(1 / u, -r / (u * u), -s / u, (r * s - w) / (u * u * u))

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in ("u", "r", "s", "w")}


def transform(E: WeierstrassModel, tau: Transformation) -> WeierstrassModel:
    u, r, s, w = tau.u, tau.r, tau.s, tau.w
    if u.is_zero():
        raise ZeroU("u must be nonzero")
    a1, a2, a3, a4, a6 = E.coeffs
    ui = 1 / u
    ui2 = ui * ui
    ui3 = ui2 * ui
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * w
    n4 = a4 - s * a3 + 2 * r * a2 - (w + r * s) * a1 + 3 * r * r - 2 * s * w
    n6 = a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1
    K = E.K if not E.K.is_rational else u.K
    return WeierstrassModel.make([n1 * ui, n2 * ui2, n3 * ui3, n4 * ui2 * ui2, n6 * ui3 * ui3], K)


def rst(E: WeierstrassModel, r, s, w) -> WeierstrassModel:
    """Translation-only change of variables (u = 1), skipping the model checks."""
    a1, a2, a3, a4, a6 = E.coeffs
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * w
    n4 = a4 - s * a3 + 2 * r * a2 - (w + r * s) * a1 + 3 * r * r - 2 * s * w
    n6 = a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1
    return WeierstrassModel(n1, n2, n3, n4, n6, K=E.K)


def scale(E: WeierstrassModel, u) -> WeierstrassModel:
    """[u,0,0,0] without the model checks."""
    ui = 1 / u
    ui2 = ui * ui
    ui3 = ui2 * ui
    a1, a2, a3, a4, a6 = E.coeffs
    return WeierstrassModel(a1 * ui, a2 * ui2, a3 * ui3, a4 * ui2 * ui2, a6 * ui3 * ui3, K=E.K)


def quadratic_twist(E: WeierstrassModel, d) -> WeierstrassModel:
    if not E.is_short():
        raise NotShortForm("twist expects y^2 = x^3 + Ax + B")
    d = as_elem(d, E.K)
    if d.is_zero():
        raise ZeroD("twist parameter must be nonzero")
    K = E.K if not E.K.is_rational else d.K
    return WeierstrassModel.make([0, 0, 0, d * d * E.a4, d * d * d * E.a6], K)


def short_form(E: WeierstrassModel) -> tuple[WeierstrassModel, Transformation]:
    if E.is_short():
        return E, Transformation.identity(E.K)
    inv = E.invariants
    s = -E.a1 / 2
    r = -inv.b2 / 12
    w = -(E.a3 + r * E.a1) / 2
    tau = Transformation(as_elem(1, E.K), r, s, w)
    return transform(E, tau), tau


def is_isomorphic_over_K(E1: WeierstrassModel, E2: WeierstrassModel) -> Transformation | None:
    """A transformation taking E1 to E2 when the curves are K-isomorphic."""
    if E1.j != E2.j:
        return None
    K = E1.K if not E1.K.is_rational else E2.K
    S1, t1 = short_form(E1)
    S2, t2 = short_form(E2)
    A1, B1, A2, B2 = S1.a4, S1.a6, S2.a4, S2.a6
    if A1.is_zero():
        candidates = nth_roots(as_elem(B1 / B2, K), 6)
    elif B1.is_zero():
        candidates = nth_roots(as_elem(A1 / A2, K), 4)
    else:
        candidates = nth_roots(as_elem(A2 * B1 / (A1 * B2), K), 2)
    for u in candidates:
        if u**4 * A2 != A1 or u**6 * B2 != B1:
            continue
        tau = t1.then(Transformation(u, as_elem(0, K), as_elem(0, K), as_elem(0, K))).then(t2.inverse())
        if transform(E1, tau) == E2:
            return tau
    return None
