"""Run Tate's algorithm on random family curves and tally Kodaira types and Ogg checks."""

import argparse
import random
import sys
from collections import Counter
from dataclasses import dataclass

from disctwins.errors import SingularParameter
from disctwins.families import PRIMES, family_curve
from disctwins.localdata import kodaira_from_mod12, relevant_primes, tate_local
from disctwins.ideals import valuation
from disctwins.numeric import QQ, FieldElem, field_make


@dataclass
class Config:
    curves: int = 500
    bound: int = 40
    seed: int = 0
    fields: tuple[int, ...] = (1, -1, -3, -33)


def parse_args() -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curves", type=int, default=500)
    ap.add_argument("--bound", type=int, default=40, help="coefficient bound for t and d")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--D", type=int, nargs="+", default=[1, -1, -3, -33])
    a = ap.parse_args()
    return Config(a.curves, a.bound, a.seed, tuple(a.D))


def random_element(rng, K, bound):
    a, b = rng.randint(-bound, bound), rng.randint(-bound, bound)
    return FieldElem(a, 0, K) if K.is_rational else K.from_omega(a, b)


def main() -> int:
    cfg = parse_args()
    rng = random.Random(cfg.seed)
    fields = [QQ if D == 1 else field_make(D) for D in cfg.fields]
    types, local, mod12_checked, mod12_bad, built = Counter(), 0, 0, 0, 0
    while built < cfg.curves:
        K, p, i = rng.choice(fields), rng.choice(PRIMES), rng.choice((1, 2))
        t, d = random_element(rng, K, cfg.bound), random_element(rng, K, cfg.bound // 3 + 1)
        if t.is_zero() or d.is_zero():
            continue
        try:
            E = family_curve(p, i, t, d)
        except SingularParameter:
            continue
        built += 1
        for P in relevant_primes(E):
            ld = tate_local(E, P)  # Ogg's formula is asserted on construction
            local += 1
            types[str(ld.kodaira)] += 1
            if P.p > 3 and (E.j.is_zero() or valuation(E.j, P) >= 0):
                mod12_checked += 1
                if kodaira_from_mod12(valuation(E.disc, P))[0] != ld.kodaira:
                    mod12_bad += 1
    print(f"{built} curves, {local} local computations, Ogg holds on all")
    print(f"mod-12 shortcut: {mod12_checked} checked, {mod12_bad} mismatches")
    for sym, n in types.most_common():
        print(f"  {sym:6} {n}")
    return 0 if mod12_bad == 0 else 2


if __name__ == "__main__":
    sys.exit(main())
