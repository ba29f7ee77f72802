"""Recompute every checkable cell of the reference tables and write a report."""

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from disctwins.twinscan import TABLES, verify_tables


@dataclass
class Config:
    table: str = "all"
    out: Path | None = None
    show_all: bool = False


def parse_args() -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--table", choices=TABLES + ("all",), default="all")
    ap.add_argument("--out", type=Path, help="write the full JSON report here")
    ap.add_argument("--show-all", action="store_true", help="print matching cells as well")
    a = ap.parse_args()
    return Config(a.table, a.out, a.show_all)


def main() -> int:
    cfg = parse_args()
    start = time.perf_counter()
    rep = verify_tables(cfg.table)
    elapsed = time.perf_counter() - start
    for c in rep.cells:
        if cfg.show_all or not c.ok:
            mark = "ok " if c.ok else "BAD"
            print(f"{mark} table {c.table:7} {c.row:40} {c.column:28} {c.computed}")
    print(f"{len(rep.cells)} cells, {len(rep.mismatches)} mismatches, {elapsed:.1f}s")
    if cfg.out is not None:
        report = dict(rep.to_json(), config={k: str(v) for k, v in asdict(cfg).items()}, seconds=elapsed)
        cfg.out.write_text(json.dumps(report, indent=2))
    return 0 if rep.ok else 2


if __name__ == "__main__":
    sys.exit(main())
