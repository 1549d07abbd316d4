"""Print sphere sizes |S_k| for a list of groups.

    python scripts/sphere_growth.py --radius 8 Z Z^2 Dinf Heis F2
"""

import argparse
from dataclasses import dataclass

from horoboundary import grow_ball, make_group, parse_group, symmetrize_generators


@dataclass(frozen=True)
class GrowthConfig:
    groups: tuple[str, ...]
    radius: int = 8
    cap: int = 5_000_000


def run(cfg: GrowthConfig) -> dict[str, list[int]]:
    out = {}
    for text in cfg.groups:
        G = make_group(parse_group(text))
        out[text] = grow_ball(G, symmetrize_generators(G), cfg.radius, cap=cfg.cap).sphere_sizes
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawTextHelpFormatter)
    ap.add_argument("groups", nargs="+")
    ap.add_argument("--radius", type=int, default=8)
    ap.add_argument("--cap", type=int, default=5_000_000)
    args = ap.parse_args()
    cfg = GrowthConfig(tuple(args.groups), args.radius, args.cap)
    sizes = run(cfg)
    width = max(len(g) for g in sizes)
    print(f"{'group':<{width}}  " + " ".join(f"{k:>6}" for k in range(cfg.radius + 1)))
    for g, row in sizes.items():
        print(f"{g:<{width}}  " + " ".join(f"{s:>6}" for s in row))


if __name__ == "__main__":
    main()
