"""Boundary size against radius, with the Busemann/non-Busemann split.

For each group and each r the ball radius is 3r+4 unless --horizon is
given.  Output is one CSV row per (group, r).

    python scripts/boundary_scan.py --radii 1,2,3 Z Z^2 Dinf "Z x C3"
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from horoboundary import (annulus_boundary_approx, classify_boundary, enumerate_busemann_points,
                          grow_ball, make_group, parse_group, symmetrize_generators)
from horoboundary.errors import MemoryBudgetExceeded


@dataclass(frozen=True)
class ScanConfig:
    groups: tuple[str, ...]
    radii: tuple[int, ...] = (1, 2, 3)
    horizon: int | None = None
    gens: tuple[str, ...] = ()
    cap: int = 2_000_000


@dataclass
class Row:
    group: str
    r: int
    horizon: int
    elements: int
    annulus: int
    busemann: int
    unmatched: int
    stabilized: bool
    seconds: float
    note: str = field(default="")


def scan(cfg: ScanConfig):
    for text in cfg.groups:
        G = make_group(parse_group(text))
        S = symmetrize_generators(G, cfg.gens)
        for r in cfg.radii:
            R = cfg.horizon or 3 * r + 4
            t0 = time.perf_counter()
            try:
                ball = grow_ball(G, S, R, cap=cfg.cap)
            except MemoryBudgetExceeded as exc:
                yield Row(text, r, R, -1, -1, -1, -1, False, 0.0, str(exc))
                continue
            A = annulus_boundary_approx(ball, r)
            B = enumerate_busemann_points(ball, r)
            cls = classify_boundary(A, B)
            yield Row(text, r, R, len(ball), len(A), B.certified_count, len(cls.unmatched),
                      A.stabilized, round(time.perf_counter() - t0, 3))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawTextHelpFormatter)
    ap.add_argument("groups", nargs="+")
    ap.add_argument("--radii", default="1,2,3", help="comma-separated radii")
    ap.add_argument("--horizon", type=int, default=None)
    ap.add_argument("--gen", action="append", default=[])
    ap.add_argument("--cap", type=int, default=2_000_000)
    args = ap.parse_args()
    cfg = ScanConfig(tuple(args.groups), tuple(int(r) for r in args.radii.split(",")), args.horizon, tuple(args.gen), args.cap)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(list(Row.__dataclass_fields__))
    for row in scan(cfg):
        w.writerow(list(vars(row).values()))
        sys.stdout.flush()


if __name__ == "__main__":
    main()
