"""Enumerate twin candidates over several fields and tabulate statuses."""

import argparse
import csv
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from disctwins.families import PRIMES
from disctwins.numeric import field_make
from disctwins.twinscan import enumerate_imag_quad, enumerate_over_Q


@dataclass
class Config:
    fields: list[int] = field(default_factory=lambda: [1, -1, -3, -33])
    primes: tuple[int, ...] = PRIMES
    include_rejected: bool = False
    workers: int = 1
    csv_out: Path | None = None


def parse_args() -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--D", type=int, nargs="+", default=[1, -1, -3, -33], help="1 means Q")
    ap.add_argument("--primes", type=int, nargs="+", default=list(PRIMES))
    ap.add_argument("--include-rejected", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--csv", type=Path)
    a = ap.parse_args()
    return Config(a.D, tuple(a.primes), a.include_rejected, a.workers, a.csv)


def main() -> int:
    cfg = parse_args()
    rows = []
    for D in cfg.fields:
        start = time.perf_counter()
        if D == 1:
            cands = enumerate_over_Q(cfg.workers)
        else:
            cands = enumerate_imag_quad(
                field_make(D), cfg.primes, include_rejected=cfg.include_rejected, workers=cfg.workers
            )
        elapsed = time.perf_counter() - start
        tally = Counter(c.status for c in cands)
        # p = 2 and the special pairs only have a necessary condition to compare against
        comparable = [c for c in cands if c.verdict is not None and c.p != 2 and c.source != "special-j"]
        agree = sum(1 for c in comparable if c.predicted == c.status)
        print(
            f"D={D}: {len(cands)} candidates in {elapsed:.1f}s, {dict(tally)}, "
            f"criterion agrees on {agree}/{len(comparable)}"
        )
        for c in cands:
            rows.append(dict(D=str(D), **c.to_json()))
    if cfg.csv_out is not None and rows:
        with cfg.csv_out.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
