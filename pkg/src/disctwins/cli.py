"""Command-line front end: disctwins <verb> [options]."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .ellmodel import WeierstrassModel
from .errors import DomainError
from .families import family_curve, family_disc, family_j
from .ideals import split_prime, valuation
from .localdata import (
    conductor_ideal,
    isogeny_valuation_check,
    local_data_all,
    minimal_discriminant_ideal,
    minimal_discriminant_value,
    tate_local,
)
from .numeric import QQ, FieldElem, QuadField, as_elem, field_make, parse_elem
from .twinscan import TABLES, classify_pair, scan_field, verify_tables

EXIT_OK, EXIT_DOMAIN, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2, 64

GRAMMAR = """\
field elements: integers and fractions combined with + - * / and ^k, using
  sqrt(D) or sqrtD, i (D=-1), zeta3 or w (D=-3); e.g. "3/2 - 5*sqrt(-33)"
curves: --a="a1,a2,a3,a4,a6" (or "A,B" for short form), or --curve file.json
  with {"field": {"D": "-33"}, "a": ["0", "0", "0", "-27", "sqrt(-33)"]}"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n{GRAMMAR}\n")
        sys.exit(EXIT_USAGE)


def _stringify(obj):
    """Integers and fractions become decimal strings; containers are walked."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, FieldElem):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def _field(D) -> QuadField:
    if D is None or int(D) == 1:
        return QQ
    return field_make(int(D))


def _elem(text: str, K: QuadField) -> FieldElem:
    return as_elem(parse_elem(text, None if K.is_rational else K), K)


def _elem_arg(text, json_text, K: QuadField) -> FieldElem:
    if json_text is not None:
        return as_elem(FieldElem.from_json(json.loads(json_text)), K)
    return _elem(text, K)


def _curve_from_obj(obj) -> WeierstrassModel:
    K = QuadField.from_json(obj.get("field"))
    coeffs = []
    for c in obj["a"]:
        if isinstance(c, dict):
            coeffs.append(as_elem(FieldElem.from_json(c), K))
        else:
            coeffs.append(_elem(str(c), K))
    return WeierstrassModel.make(coeffs, K)


def _curve_arg(path, coeffs, D) -> WeierstrassModel:
    if path is not None:
        with open(path) as fh:
            return _curve_from_obj(json.load(fh))
    if coeffs is None:
        raise _UsageError("a curve needs --curve FILE or --a COEFFS")
    K = _field(D)
    return WeierstrassModel.make([_elem(c, K) for c in coeffs.split(",")], K)


class _UsageError(Exception):
    pass


def curve_json(E: WeierstrassModel) -> dict:
    return {"field": {"D": E.K.D}, "a": [str(c) for c in E.coeffs]}


# verbs ---------------------------------------------------------------------------


def _cmd_invariants(args):
    E = _curve_arg(args.curve, args.a, args.D)
    inv = E.invariants
    row = {"curve": str(E)}
    row.update({k: getattr(inv, k) for k in ("b2", "b4", "b6", "b8", "c4", "c6", "disc", "j")})
    return {"curve": curve_json(E), "invariants": row}, [row], EXIT_OK


def _cmd_localdata(args):
    E = _curve_arg(args.curve, args.a, args.D)
    if args.prime is not None:
        lds = [tate_local(E, P) for P in split_prime(E.K, args.prime)]
    else:
        lds = list(local_data_all(E))
    rows = [dict(ld.to_json(), prime=ld.prime.label(), pi=str(ld.prime.pi)) for ld in lds]
    payload = {
        "curve": curve_json(E),
        "local": rows,
        "conductor": str(conductor_ideal(E)),
        "minimal_discriminant": str(minimal_discriminant_ideal(E)),
    }
    if E.K.is_rational or E.K.is_imaginary:
        try:
            payload["minimal_discriminant_value"] = minimal_discriminant_value(E)
        except DomainError:
            pass
    return payload, rows, EXIT_OK


def _family_args(args):
    K = _field(args.D)
    t0 = _elem_arg(args.t, args.t_json, K)
    d0 = _elem_arg(args.d, args.d_json, K)
    return K, t0, d0


def _cmd_family(args):
    K, t0, d0 = _family_args(args)
    E = family_curve(args.p, args.i, t0, d0)
    row = {
        "p": args.p,
        "i": args.i,
        "t0": t0,
        "d0": d0,
        "curve": str(E),
        "j_closed_form": family_j(args.p, args.i, t0),
        "disc_closed_form": family_disc(args.p, args.i, t0, d0),
        "j": E.j,
        "disc": E.disc,
    }
    return {"curve": curve_json(E), "family": row}, [row], EXIT_OK


def _pair_from_args(args):
    if args.curve1 or args.curve2:
        if not (args.curve1 and args.curve2):
            raise _UsageError("classify-pair needs both --curve1 and --curve2")
        return _curve_arg(args.curve1, None, None), _curve_arg(args.curve2, None, None)
    if args.p is None or args.t is None and args.t_json is None:
        raise _UsageError("give --curve1/--curve2 or a family pair via --p and --t")
    K, t0, d0 = _family_args(args)
    return family_curve(args.p, 1, t0, d0), family_curve(args.p, 2, t0, d0)


def _cmd_classify(args):
    E1, E2 = _pair_from_args(args)
    v = classify_pair(E1, E2)
    rows = [
        {
            "prime": P.label(),
            "kodaira1": str(a.kodaira),
            "kodaira2": str(b.kodaira),
            "f1": a.f,
            "f2": b.f,
            "vmin1": a.vmin,
            "vmin2": b.vmin,
        }
        for P, a, b in v.per_prime
    ]
    payload = {
        "status": v.status,
        "reason": v.reason,
        "curve1": curve_json(E1),
        "curve2": curve_json(E2),
        "per_prime": rows,
    }
    return payload, [{"status": v.status, "reason": v.reason}] + rows, EXIT_OK


def _cmd_scan(args):
    cands = scan_field(args.D, workers=args.workers)
    rows = [c.to_json() for c in cands]
    return {"D": args.D, "candidates": rows}, rows, EXIT_OK


def _cmd_verify(args):
    rep = verify_tables(args.table)
    bad = [c.to_json() for c in rep.mismatches]
    payload = {"table": args.table, "cells": len(rep.cells), "mismatches": bad}
    rows = [c.to_json() for c in rep.cells] if args.all_cells else bad
    summary = {"table": args.table, "cells": len(rep.cells), "mismatches": len(bad)}
    code = EXIT_OK if rep.ok else EXIT_MISMATCH
    return payload, [summary] + rows, code


def _cmd_isogeny(args):
    E1, E2 = _pair_from_args(args)
    primes = {ld.prime for ld in local_data_all(E1)} | {ld.prime for ld in local_data_all(E2)}
    rows, ok = [], True
    j1 = E1.j
    for P in sorted(primes, key=lambda P: P.sort_key()):
        a, b = tate_local(E1, P), tate_local(E2, P)
        jv = valuation(j1, P) if not j1.is_zero() else 0
        good = isogeny_valuation_check(a, b, args.p, jv)
        ok &= good
        rows.append(
            {
                "prime": P.label(),
                "reduction": a.reduction,
                "potential": a.potential,
                "delta1": a.vmin,
                "delta2": b.vmin,
                "kodaira1": str(a.kodaira),
                "kodaira2": str(b.kodaira),
                "relation_holds": good,
            }
        )
    payload = {"p": args.p, "holds": ok, "primes": rows}
    return payload, rows, EXIT_OK if ok else EXIT_MISMATCH


# output ----------------------------------------------------------------------------


def _flat(rows):
    rows = [_stringify(r) for r in rows]
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols, [[_cell(r.get(c)) for c in cols] for r in rows]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def render(payload, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_stringify(payload), indent=2, sort_keys=True) + "\n"
    cols, body = _flat(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(body)
        return buf.getvalue()
    widths = [max([len(c)] + [len(r[i]) for r in body]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in body]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--json", dest="format", action="store_const", const="json")
    common.add_argument("--workers", type=int, default=1)

    parser = _Parser(prog="disctwins", description="Discriminant twins among p-isogenous curves.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def curve_opts(p):
        p.add_argument("--curve", help="curve JSON file")
        p.add_argument("--a", help="comma-separated Weierstrass coefficients")
        p.add_argument("--D", type=int, default=1, help="field Q(sqrt(D)); 1 means Q")

    def family_opts(p, need_i: bool, required: bool):
        p.add_argument("--p", type=int, choices=(2, 3, 5, 7, 13), required=required)
        if need_i:
            p.add_argument("--i", type=int, choices=(1, 2), required=True)
        p.add_argument("--t")
        p.add_argument("--t-json", dest="t_json")
        p.add_argument("--d", default="1")
        p.add_argument("--d-json", dest="d_json")
        p.add_argument("--D", type=int, default=1)

    s = sub.add_parser("invariants", parents=[common], help="b/c invariants, discriminant, j")
    curve_opts(s)
    s.set_defaults(func=_cmd_invariants)

    s = sub.add_parser("localdata", parents=[common], help="Tate's algorithm at bad primes")
    curve_opts(s)
    s.add_argument("--prime", type=int, help="only primes above this rational prime")
    s.set_defaults(func=_cmd_localdata)

    s = sub.add_parser("family", parents=[common], help="the curve C_{p,i}(t, d)")
    family_opts(s, need_i=True, required=True)
    s.set_defaults(func=_cmd_family)

    s = sub.add_parser("classify-pair", parents=[common], help="twin status of two curves")
    s.add_argument("--curve1")
    s.add_argument("--curve2")
    family_opts(s, need_i=False, required=False)
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("scan-field", parents=[common], help="enumerate twins over Q or Q(sqrt(D)), D < 0")
    s.add_argument("--D", type=int, required=True)
    s.set_defaults(func=_cmd_scan)

    s = sub.add_parser("verify-paper", parents=[common], help="recompute the reference tables")
    s.add_argument("--table", choices=TABLES + ("all",), default="all")
    s.add_argument("--all-cells", action="store_true", help="list matching cells too")
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("isogeny-check", parents=[common], help="discriminant valuation relations of a family pair")
    family_opts(s, need_i=False, required=True)
    s.add_argument("--curve1")
    s.add_argument("--curve2")
    s.set_defaults(func=_cmd_isogeny)
    return parser


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "t", None) is None and getattr(args, "t_json", None) is None and args.verb == "family":
        parser.error("family needs --t or --t-json")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be at least 1")
    try:
        payload, rows, code = args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"disctwins: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    out.write(render(payload, rows, args.format))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
