"""Twin classification of p-isogenous pairs, valuation criteria, and field enumeration."""

from __future__ import annotations

import copy
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product

from .ellmodel import WeierstrassModel, is_isomorphic_over_K
from .errors import (
    BadPair,
    ClassNumberNotOne,
    FieldMismatch,
    UnsupportedField,
    UnsupportedP,
)
from .families import (
    PRIMES,
    SELF_ISOGENY_COUNTS,
    equal_j_case,
    family_curve,
    family_j,
    fricke_exponent,
    special_j_pair,
)
from .ideals import (
    PrimeIdeal,
    elements_of_norm,
    factor_principal_ideal,
    principal_generator_of_power,
    split_prime,
    valuation,
)
from .localdata import (
    LocalData,
    local_data_all,
    minimal_discriminant_value,
    tate_local,
)
from .numeric import QQ, FieldElem, QuadField, as_elem, field_make, is_nth_power, parse_elem

NOT_TWIN = "NotTwin"
IDEAL_TWIN = "DiscIdealTwin"
TWIN = "DiscTwin"
ISOMORPHIC = "Isomorphic"
SINGULAR = "Singular"
NECESSARY = "Necessary"
NOT_NECESSARY = "NotNecessary"

STATUSES = (NOT_TWIN, IDEAL_TWIN, TWIN, ISOMORPHIC, SINGULAR)


@dataclass(frozen=True)
class TwinVerdict:
    status: str
    per_prime: tuple[tuple[PrimeIdeal, LocalData, LocalData], ...] = ()
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "per_prime": [
                {"prime": P.label(), "E1": a.to_json(), "E2": b.to_json()}
                for P, a, b in self.per_prime
            ],
        }


def _pair_local_data(E1: WeierstrassModel, E2: WeierstrassModel):
    d1 = {ld.prime: ld for ld in local_data_all(E1)}
    d2 = {ld.prime: ld for ld in local_data_all(E2)}
    out = []
    for P in sorted(set(d1) | set(d2), key=lambda P: P.sort_key()):
        a = d1.get(P) or tate_local(E1, P)
        b = d2.get(P) or tate_local(E2, P)
        out.append((P, a, b))
    return tuple(out)


def classify_pair(E1: WeierstrassModel, E2: WeierstrassModel) -> TwinVerdict:
    """Decide the twin status of two curves from their local data alone."""
    if E1.K != E2.K:
        raise FieldMismatch(f"curves over {E1.K} and {E2.K}")
    if is_isomorphic_over_K(E1, E2) is not None:
        return TwinVerdict(ISOMORPHIC, reason="isomorphic")
    rows = _pair_local_data(E1, E2)
    for P, a, b in rows:
        if a.f != b.f:
            return TwinVerdict(NOT_TWIN, rows, f"conductor-mismatch at {P.label()}")
    for P, a, b in rows:
        if a.vmin != b.vmin:
            return TwinVerdict(NOT_TWIN, rows, f"ideal-mismatch at {P.label()}")
    # equal ideals: local minimal discriminants agree iff the ratio is a 12th power
    # everywhere locally, hence globally since 8 does not divide 12
    for E in (E1, E2):
        assert E.j.is_integral(), "ideal twins must have integral j"
    if is_nth_power(E1.disc / E2.disc, 12):
        return TwinVerdict(TWIN, rows, "twin-criterion-met")
    return TwinVerdict(IDEAL_TWIN, rows, "discriminant-ratio-not-12th-power")


# valuation criteria -------------------------------------------------------------


def _field_of(t0, field: QuadField | None) -> QuadField:
    if field is not None:
        return field
    return t0.K if isinstance(t0, FieldElem) else QQ


def _valuation_condition(p: int, t0: FieldElem) -> bool:
    """nu_P(t0) = e*k with 0 <= k <= nu_P(p) at every prime P, e = 12/(p-1)."""
    e = fricke_exponent(p)
    for P, v in factor_principal_ideal(t0).terms:
        if P.p != p or v < 0 or v % e:
            return False
        if v // e > P.e:
            return False
    return True


def _isomorphic_or_singular(p: int, t0: FieldElem, K: QuadField) -> str | None:
    case = equal_j_case(p, t0, K)
    if case.kind == "SingularJ":
        return SINGULAR
    if case.kind == "IsomorphicCM":
        return ISOMORPHIC
    if case.kind == "EqualJ_Conditional" and field_make(case.cm_D) == K:
        return ISOMORPHIC
    return None


def valuation_criterion(p: int, t0, d0=1, field: QuadField | None = None) -> str:
    """Predicted status of (C_{p,1}(t0,d0), C_{p,2}(t0,d0)) from t0 alone, p in {3,5,7,13}."""
    if p == 2:
        raise UnsupportedP("p = 2 has a necessary condition only; use criterion_p2_necessary")
    if p not in PRIMES:
        raise UnsupportedP(f"no genus-zero family for p = {p}")
    K = _field_of(t0, field)
    t0 = as_elem(t0, K)
    if as_elem(d0, K).is_zero():
        return SINGULAR
    if t0.is_zero():
        return SINGULAR
    early = _isomorphic_or_singular(p, t0, K)
    if early is not None:
        return early
    if not _valuation_condition(p, t0):
        return NOT_TWIN
    if is_nth_power(t0 ** (p - 1), 12):
        return TWIN
    return IDEAL_TWIN


def criterion_p2_necessary(t0, field: QuadField | None = None) -> str:
    """Valuation condition for p = 2; holding it does not make the pair twins."""
    K = _field_of(t0, field)
    t0 = as_elem(t0, K)
    if t0.is_zero():
        return SINGULAR
    early = _isomorphic_or_singular(2, t0, K)
    if early is not None:
        return early
    return NECESSARY if _valuation_condition(2, t0) else NOT_NECESSARY


def _ramified(K: QuadField, p: int) -> bool:
    return not K.is_rational and split_prime(K, p)[0].kind == "ramified"


def special_j_criterion(p: int, j: int, field: QuadField = QQ) -> str:
    """Predicted status for the special pair with common j = 0 (p = 3) or j = 1728 (p = 2)."""
    K = field
    if (p, j) == (3, 0):
        if K.D == -3:
            return ISOMORPHIC
        if not _ramified(K, 3):
            return NOT_TWIN
        return TWIN if K.D == 3 else IDEAL_TWIN
    if (p, j) == (2, 1728):
        if K.D == -1:
            return ISOMORPHIC
        return NECESSARY if _ramified(K, 2) else NOT_TWIN
    raise BadPair(f"no special pair for (p, j) = ({p}, {j})")


# candidates ---------------------------------------------------------------------


@dataclass(frozen=True)
class TwinCandidate:
    p: int
    t0: FieldElem | None
    d0: FieldElem | None
    source: str
    predicted: str
    verdict: TwinVerdict | None = None
    j1: FieldElem | None = None
    j2: FieldElem | None = None
    dmin1: FieldElem | None = None
    dmin2: FieldElem | None = None
    special_j: int | None = None

    @property
    def status(self) -> str:
        return self.verdict.status if self.verdict is not None else self.predicted

    def curves(self) -> tuple[WeierstrassModel, WeierstrassModel]:
        if self.source == "special-j":
            return special_j_pair(self.p, self.special_j, self.d0)
        if self.t0 is None:
            raise BadPair(f"p = {self.p} row is not built from a family")
        return family_curve(self.p, 1, self.t0, self.d0), family_curve(self.p, 2, self.t0, self.d0)

    @property
    def ratio(self) -> FieldElem | None:
        if self.dmin1 is None or self.dmin2 is None:
            return None
        return self.dmin2 / self.dmin1

    def to_json(self) -> dict:
        def s(x):
            return None if x is None else str(x)

        return {
            "p": str(self.p),
            "t0": s(self.t0),
            "d0": s(self.d0),
            "source": self.source,
            "special_j": s(self.special_j),
            "predicted": self.predicted,
            "status": self.status,
            "reason": self.verdict.reason if self.verdict else None,
            "j1": s(self.j1),
            "j2": s(self.j2),
            "dmin1": s(self.dmin1),
            "dmin2": s(self.dmin2),
        }


def _key_coords(x: FieldElem) -> tuple[Fraction, Fraction]:
    if x.K.D == -3:
        return x.a + x.b, 2 * x.b  # a + b*zeta3
    return x.a, x.b


def candidate_key(x: FieldElem):
    """Order used to pick one parameter per class: small norm, then positive, small coordinates."""
    a, b = _key_coords(x)
    return (abs(x.norm()), b < 0, a < 0, abs(a), abs(b))


def _with_dmin(E: WeierstrassModel):
    try:
        return minimal_discriminant_value(E)
    except ClassNumberNotOne:  # only the ideal is canonical
        return None


def _build(p: int, t0: FieldElem, d0: FieldElem, source: str, predicted: str) -> TwinCandidate:
    E1 = family_curve(p, 1, t0, d0)
    E2 = family_curve(p, 2, t0, d0)
    return TwinCandidate(
        p, t0, d0, source, predicted, classify_pair(E1, E2), E1.j, E2.j, _with_dmin(E1), _with_dmin(E2)
    )


def _build_job(args) -> TwinCandidate:
    return _build(*args)


def _run_jobs(jobs, workers: int):
    if workers <= 1 or len(jobs) < 2:
        return [_build_job(a) for a in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_build_job, jobs, chunksize=4))


# twist choices that realise the rational twins of smallest conductor
RATIONAL_TWISTS = {
    (2, 1): -1, (2, -1): -3,
    (3, 1): 21, (3, -1): -39,
    (5, 1): -2, (5, -1): -1,
    (7, 1): -1, (7, -1): 1,
    (13, 1): 2, (13, -1): -1,
}


def enumerate_over_Q(workers: int = 1) -> list[TwinCandidate]:
    """The twins over Q up to twist: t0 = +-1 for each family, and the 37-isogenous class."""
    jobs = []
    for p in PRIMES:
        for t in (1, -1):
            t0 = as_elem(t, QQ)
            pred = criterion_p2_necessary(t0) if p == 2 else valuation_criterion(p, t0)
            jobs.append((p, t0, as_elem(RATIONAL_TWISTS[(p, t)], QQ), "unit-multiple", pred))
    out = _run_jobs(jobs, workers)
    row = load_tables()["extra_rational_twins"][0]
    out.append(
        TwinCandidate(
            int(row["p"]), None, None, "embedded", TWIN if row["dmin1"] == row["dmin2"] else IDEAL_TWIN,
            j1=parse_elem(row["j1"]), j2=parse_elem(row["j2"]),
            dmin1=parse_elem(row["dmin1"]), dmin2=parse_elem(row["dmin2"]),
        )
    )
    return out


def admissible_parameters(K: QuadField, p: int) -> list[FieldElem]:
    """All integral t0 in K satisfying the valuation condition for p (K imaginary quadratic)."""
    if not K.is_imaginary:
        raise UnsupportedField("enumeration needs a finite unit group")
    e = fricke_exponent(p)
    primes = split_prime(K, p)
    out = set()
    for ks in product(*(range(P.e + 1) for P in primes)):
        n = 1
        for P, k in zip(primes, ks):
            n *= P.norm ** (e * k)
        for x in elements_of_norm(K, n):
            if all(valuation(x, P) == e * k for P, k in zip(primes, ks)):
                out.add(x)
    return sorted(out, key=candidate_key)


def _predict(p: int, t0: FieldElem, K: QuadField) -> str:
    return criterion_p2_necessary(t0, K) if p == 2 else valuation_criterion(p, t0, 1, K)


def _pair_key(c: TwinCandidate):
    return frozenset((c.j1, c.j2))


def enumerate_imag_quad(
    K: QuadField, primes=PRIMES, include_rejected: bool = False, workers: int = 1
) -> list[TwinCandidate]:
    """Twin candidates over an imaginary quadratic field, one parameter per class of curve pairs.

    With include_rejected, Isomorphic and NotTwin parameters are kept and no
    deduplication happens; singular parameters are always dropped.
    """
    if K.is_rational or not K.is_imaginary:
        raise UnsupportedField("enumeration needs an imaginary quadratic field")
    jobs = []
    for p in primes:
        for t0 in admissible_parameters(K, p):
            pred = _predict(p, t0, K)
            if pred == SINGULAR:
                continue
            if pred == ISOMORPHIC and not include_rejected:
                continue
            case = equal_j_case(p, t0, K)
            if case.kind.startswith("EqualJ"):
                source = "equal-j"
            elif t0.norm() == 1:
                source = "unit-multiple"
            else:
                source = "ideal-power"
            jobs.append((p, t0, as_elem(1, K), source, pred))
    built = _run_jobs(jobs, workers)
    if not include_rejected:
        built = [c for c in built if c.status in (IDEAL_TWIN, TWIN)]
        seen = {}
        for c in sorted(built, key=lambda c: (c.p, candidate_key(c.t0))):
            seen.setdefault((c.p, _pair_key(c)), c)
        built = list(seen.values())
    for p, j in ((2, 1728), (3, 0)):
        if p not in primes:
            continue
        pred = special_j_criterion(p, j, K)
        if pred in (NOT_TWIN, ISOMORPHIC) and not include_rejected:
            continue
        d = as_elem(1, K)
        E1, E2 = special_j_pair(p, j, d)
        built.append(
            TwinCandidate(
                p, None, d, "special-j", pred, classify_pair(E1, E2), E1.j, E2.j,
                _with_dmin(E1), _with_dmin(E2), special_j=j,
            )
        )
    return sorted(built, key=_candidate_order)


def _candidate_order(c: TwinCandidate):
    return (c.p, c.source == "special-j", candidate_key(c.t0) if c.t0 is not None else ())


def scan_field(D: int, workers: int = 1) -> list[TwinCandidate]:
    if D == 1:
        return enumerate_over_Q(workers)
    return enumerate_imag_quad(field_make(D), workers=workers)


def self_isogeny_count(j: int, p: int) -> int:
    """p-isogenies E -> E for j in {0, 1728}: degree-one primes above p in the CM field."""
    D = {0: -3, 1728: -1}[j]
    return sum(1 for P in split_prime(field_make(D), p) if P.f == 1)


# table verification -------------------------------------------------------------


@lru_cache(maxsize=1)
def _tables_text() -> str:
    return resources.files("disctwins").joinpath("data/reference_tables.json").read_text()


def load_tables() -> dict:
    """A fresh copy of the shipped reference tables."""
    return json.loads(_tables_text())


@dataclass(frozen=True)
class Cell:
    table: str
    row: str
    column: str
    expected: str
    computed: str

    @property
    def ok(self) -> bool:
        return self.expected == self.computed

    def to_json(self) -> dict:
        return {
            "table": self.table,
            "row": self.row,
            "column": self.column,
            "expected": self.expected,
            "computed": self.computed,
            "ok": self.ok,
        }


@dataclass
class VerificationReport:
    cells: list[Cell] = field(default_factory=list)

    def add(self, table, row, column, expected, computed) -> None:
        self.cells.append(Cell(table, row, column, _norm_text(expected), _norm_text(computed)))

    @property
    def mismatches(self) -> list[Cell]:
        return [c for c in self.cells if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "cells": len(self.cells),
            "mismatches": len(self.mismatches),
            "rows": [c.to_json() for c in self.cells],
        }


def _norm_text(x) -> str:
    """Canonical text for comparing table cells written in different notations."""
    if isinstance(x, FieldElem):
        return str(x)
    if isinstance(x, str):
        try:
            return str(parse_elem(x))
        except Exception:
            return x
    return str(x)


def _elem(text: str, K: QuadField) -> FieldElem:
    return as_elem(parse_elem(text, K), K)


def _verify_rational_rows(data: dict, rep: VerificationReport) -> None:
    for row in data["rational_twins"]:
        p, t0, d0 = int(row["p"]), _elem(row["t0"], QQ), _elem(row["d0"], QQ)
        tag = f"p={p},t0={t0}"
        E1, E2 = family_curve(p, 1, t0, d0), family_curve(p, 2, t0, d0)
        m1, m2 = minimal_discriminant_value(E1), minimal_discriminant_value(E2)
        rep.add("4", tag, "j1", row["j1"], E1.j)
        rep.add("4", tag, "j2", row["j2"], E2.j)
        rep.add("4", tag, "dmin1", row["dmin1"], m1)
        rep.add("4", tag, "dmin2", row["dmin2"], m2)
        expect = TWIN if row["dmin1"] == row["dmin2"] else IDEAL_TWIN
        rep.add("4", tag, "status", expect, classify_pair(E1, E2).status)
    for row in data["extra_rational_twins"]:
        tag = f"p={row['p']},{row['label1']}"
        same = row["dmin1"] == row["dmin2"]
        rep.add("4", tag, "equal-dmin", "True", str(same))
    for row in data["potentially_good_obstructions"]:
        tag = f"p={row['p']},{row['class']}"
        v1, v2 = int(row["v1"]), int(row["v2"])
        integral = all(Fraction(row[k]).denominator == 1 for k in ("j1", "j2"))
        rep.add("4", tag, "integral-j", "True", str(integral))
        rep.add("4", tag, "valuations-differ-mod-12", "True", str((v1 - v2) % 12 != 0))
        rep.add("4", tag, "v1+v2", "12", str(v1 + v2))
    for row in data["nonintegral_j"]:
        tag = f"p={row['p']},{row['class']}"
        integral = all(Fraction(row[k]).denominator == 1 for k in ("j1", "j2"))
        rep.add("4", tag, "integral-j", "False", str(integral))


def _verify_q33_rows(data: dict, rep: VerificationReport) -> None:
    info = data["field_twins"]["-33"]
    K = field_make(-33)
    for p, rows in info["splittings"].items():
        got = sorted((str(P.p), str(P.pi), P.e) for P in split_prime(K, int(p)))
        want = sorted((a, str(_elem(b, K)), int(e)) for a, b, e in rows)
        rep.add("5", f"p={p}", "splitting", json.dumps(want), json.dumps(got))
    for g in info["generators"]:
        p, pi = int(g["prime"][0]), _elem(g["prime"][1], K)
        P = next(Q for Q in split_prime(K, p) if Q.pi == pi)
        x = principal_generator_of_power(P, int(g["power"]))
        want = _elem(g["generator"], K)
        unit_multiple = x is not None and (x / want).is_integral() and abs((x / want).norm()) == 1
        rep.add("5", f"({p},{pi})^{g['power']}", "generator-up-to-units", "True", str(unit_multiple))
    for row in info["rows"]:
        p, t0 = int(row["p"]), _elem(row["t0"], K)
        tag = f"p={p},t0={t0}"
        E1, E2 = family_curve(p, 1, t0), family_curve(p, 2, t0)
        rep.add("5", tag, "j1", _elem(row["j1"], K), E1.j)
        rep.add("5", tag, "j2", _elem(row["j2"], K), E2.j)
        rep.add("5", tag, "status", IDEAL_TWIN, classify_pair(E1, E2).status)
    for s in info["special_j"]:
        p, j = int(s["p"]), int(s["j"])
        E1, E2 = special_j_pair(p, j, as_elem(1, K))
        rep.add("5", f"special p={p},j={j}", "status", IDEAL_TWIN, classify_pair(E1, E2).status)


def _verify_gaussian_eisenstein_rows(data: dict, rep: VerificationReport) -> None:
    for D in ("-1", "-3"):
        K = field_make(int(D))
        for row in data["field_twins"][D]["rows"]:
            p = int(row["p"])
            t0 = _elem(row.get("t0_corrected", row["t0"]), K)
            tag = f"D={D},p={p},t0={row['t0']}"
            E1, E2 = family_curve(p, 1, t0), family_curve(p, 2, t0)
            rep.add("6", tag, "j1", _elem(row["j1"], K), E1.j)
            rep.add("6", tag, "j2", _elem(row["j2"], K), E2.j)
            ratio = minimal_discriminant_value(E2) / minimal_discriminant_value(E1)
            want = _elem(row["ratio"], K)
            rep.add("6", tag, "ratio", want, ratio)
            rep.add("6", tag, "status", TWIN if want == 1 else IDEAL_TWIN, classify_pair(E1, E2).status)


def _verify_equal_j_rows(data: dict, rep: VerificationReport) -> None:
    for row in data["equal_j_over_Q"]:
        p, t0, d0 = int(row["p"]), _elem(row["t0"], QQ), _elem(row["d0"], QQ)
        tag = f"p={p},t0={t0}"
        rep.add("equal-j", tag, "j1", row["j"], family_j(p, 1, t0))
        rep.add("equal-j", tag, "j2", row["j"], family_j(p, 2, t0))
        rep.add("equal-j", tag, "dmin1", row["dmin1"], minimal_discriminant_value(family_curve(p, 1, t0, d0)))
        rep.add("equal-j", tag, "dmin2", row["dmin2"], minimal_discriminant_value(family_curve(p, 2, t0, d0)))
        rep.add("equal-j", tag, "cm_D", str(row["cm_D"]), str(equal_j_case(p, t0, QQ).cm_D))


def _verify_modpoly(data: dict, rep: VerificationReport) -> None:
    for j, counts in data["self_isogeny_counts"].items():
        for p, n in counts.items():
            tag = f"j={j},p={p}"
            rep.add("modpoly", tag, "embedded", str(n), str(SELF_ISOGENY_COUNTS[int(j)][int(p)]))
            rep.add("modpoly", tag, "cm-splitting", str(n), str(self_isogeny_count(int(j), int(p))))


_VERIFIERS = {
    "4": _verify_rational_rows,
    "5": _verify_q33_rows,
    "6": _verify_gaussian_eisenstein_rows,
    "equal-j": _verify_equal_j_rows,
    "modpoly": _verify_modpoly,
}
TABLES = tuple(_VERIFIERS)


def verify_tables(which: str = "all", data: dict | None = None) -> VerificationReport:
    """Recompute every checkable cell of the reference tables."""
    data = copy.deepcopy(data) if data is not None else load_tables()
    names = TABLES if which == "all" else (which,)
    rep = VerificationReport()
    for name in names:
        if name not in _VERIFIERS:
            raise ValueError(f"unknown table {name!r}; choose from {', '.join(TABLES)} or all")
        _VERIFIERS[name](data, rep)
    return rep


__all__ = [
    "STATUSES",
    "TwinVerdict",
    "TwinCandidate",
    "classify_pair",
    "valuation_criterion",
    "criterion_p2_necessary",
    "special_j_criterion",
    "enumerate_over_Q",
    "enumerate_imag_quad",
    "admissible_parameters",
    "scan_field",
    "self_isogeny_count",
    "load_tables",
    "verify_tables",
    "VerificationReport",
    "Cell",
]
