"""Command-line front end.

Exit codes: 0 pass, 1 check failure, 2 configuration error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .action import compute_orbits, extract_character
from .cayley import grow_ball
from .errors import (ConfigError, HoroError, HorizonTooSmall, IdentityGenerator, InvalidGraph,
                     InvalidSpec, MemoryBudgetExceeded)
from .graphs import (GroveSpec, build_grove, graph_ball, read_edge_list, sphere_bound_check,
                     spine_ray)
from .groups import make_group, parse_group, symmetrize_generators
from .horo import (annulus_boundary_approx, classify_boundary, enumerate_busemann_points,
                   ray_limit)
from .verify import RunConfig, load_expectations, run_pipeline

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", default="Z", help="group DSL, e.g. 'Z^2', 'Dinf', 'Z x C3'")
    p.add_argument("--gen", action="append", default=[], metavar="WORD",
                   help="extra generator word (repeatable)")
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--horizon", type=int, default=None, help="ball radius R_max (default 3r+4)")
    p.add_argument("--window", type=int, default=2, help="annulus width")
    p.add_argument("--annuli", type=int, default=3, help="annuli compared for stabilisation")
    p.add_argument("--stability-window", type=int, default=None)
    p.add_argument("--sample-norm", type=int, default=None)
    p.add_argument("--cap", type=int, default=20_000_000, help="element cap for BFS")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _config(args) -> RunConfig:
    return RunConfig(
        group=args.group, gens=tuple(args.gen), radius=args.radius, horizon=args.horizon,
        window=args.window, annuli=args.annuli, stability_window=args.stability_window,
        sample_norm=args.sample_norm, cap=args.cap, out=args.out, format=args.format).validate()


def _ball(cfg: RunConfig, r_max: int | None = None):
    G = make_group(parse_group(cfg.group))
    S = symmetrize_generators(G, cfg.gens)
    return grow_ball(G, S, cfg.r_max if r_max is None else r_max, cap=cfg.cap)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(cfg: RunConfig, payload: dict, csv_text: str | None = None) -> None:
    if cfg.format == "csv":
        if csv_text is None:
            raise ConfigError("csv output is only available for sphere sizes and annulus counts")
        text = csv_text
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _annulus_csv(A) -> str:
    return _csv([[lo, hi, c] for (lo, hi), c in zip(A.annuli, A.annulus_counts)],
                ["annulus_lo", "annulus_hi", "count"])


# ---------------------------------------------------------------------------
# subcommands


def cmd_ball(args) -> int:
    cfg = _config(args)
    ball = _ball(cfg, cfg.radius if args.horizon is None else cfg.r_max)
    sizes = ball.sphere_sizes
    payload = {"group": cfg.group, "generators": list(ball.gens.labels), "r_max": ball.r_max,
               "sphere_sizes": sizes, "element_count": len(ball)}
    _emit(cfg, payload, _csv([[k, s] for k, s in enumerate(sizes)], ["radius", "sphere_size"]))
    return EXIT_OK


def cmd_boundary(args) -> int:
    cfg = _config(args)
    ball = _ball(cfg)
    A = annulus_boundary_approx(ball, cfg.radius, cfg.window, cfg.annuli)
    B = enumerate_busemann_points(ball, cfg.radius, stability_window=cfg.stability_window)
    cls = classify_boundary(A, B)
    matched = set(cls.matched)
    payload = {
        "config": cfg.to_dict(),
        "generators": list(ball.gens.labels),
        "functions": [{"values": list(h.values), "provenance": "annulus",
                       "certified": i in matched} for i, h in enumerate(A.functions)],
        "annuli": [list(a) for a in A.annuli],
        "annulus_counts": list(A.annulus_counts),
        "stabilized": A.stabilized,
        "busemann_count": B.certified_count,
        "unmatched": cls.unmatched,
    }
    _emit(cfg, payload, _annulus_csv(A))
    return EXIT_OK


def cmd_rays(args) -> int:
    cfg = _config(args)
    ball = _ball(cfg)
    B = enumerate_busemann_points(ball, cfg.radius, stability_window=cfg.stability_window)
    payload = {"config": cfg.to_dict(), "generators": list(ball.gens.labels), **B.to_dict()}
    _emit(cfg, payload)
    return EXIT_OK


def cmd_orbits(args) -> int:
    cfg = _config(args)
    ball = _ball(cfg)
    A = annulus_boundary_approx(ball, cfg.radius, cfg.window, cfg.annuli)
    orb = compute_orbits(ball, A, stabilizer_norm=cfg.sample_norm)
    _emit(cfg, {"config": cfg.to_dict(), **orb.to_dict()})
    return EXIT_OK


def cmd_character(args) -> int:
    cfg = _config(args)
    ball = _ball(cfg)
    A = annulus_boundary_approx(ball, cfg.radius, cfg.window, cfg.annuli)
    orb = compute_orbits(ball, A)
    if not orb.finite_orbit:
        _emit(cfg, {"config": cfg.to_dict(), "finite_orbit": False, "characters": []})
        return EXIT_FAIL
    chars = []
    for i, h in enumerate(A.functions):
        rep = extract_character(ball, orb, h, cfg.sample_norm)
        chars.append({"function": i, **rep.to_dict()})
    found = any(c["homomorphism"] and c["witness"] for c in chars)
    _emit(cfg, {"config": cfg.to_dict(), "finite_orbit": True, "characters": chars,
                "character_found": found})
    return EXIT_OK if found else EXIT_FAIL


def _graph_report(cfg: RunConfig, graph, spine: bool):
    gb = graph_ball(graph, cfg.r_max)
    A = annulus_boundary_approx(gb, cfg.radius, cfg.window, cfg.annuli)
    B = enumerate_busemann_points(gb, cfg.radius, stability_window=cfg.stability_window)
    cls = classify_boundary(A, B)
    out = {
        "config": cfg.to_dict(),
        "vertex_count": graph.n,
        "sphere_sizes": gb.sphere_sizes,
        "boundary": A.to_dict(),
        "busemann": B.to_dict(),
        "classification": cls.to_dict(),
        "sphere_bound": sphere_bound_check(gb, B, cfg.annuli).to_dict(),
    }
    if spine:
        h, cert = ray_limit(gb, spine_ray(gb), cfg.radius, cfg.stability_window)
        out["spine_limit"] = {"values": list(h.values), "certificate": cert.value,
                              "matches_boundary": h.values in A.value_set()}
    return out, A


def cmd_grove(args) -> int:
    cfg = _config(args)
    sizes = tuple(int(s) for s in args.sizes.split(","))
    grove = build_grove(GroveSpec(blocks=args.blocks, family=args.family, sizes=sizes))
    payload, A = _graph_report(cfg, grove.graph, spine=True)
    payload["grove"] = {"blocks": args.blocks, "family": args.family, "sizes": list(sizes)}
    _emit(cfg, payload, _annulus_csv(A))
    return EXIT_OK


def cmd_graph_boundary(args) -> int:
    cfg = _config(args)
    graph = read_edge_list(args.edges)
    payload, A = _graph_report(cfg, graph, spine=False)
    _emit(cfg, payload, _annulus_csv(A))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    table = load_expectations(args.expectations)
    report = run_pipeline(table["fixtures"], workers=args.workers, only=args.fixture or None)
    if cfg.format == "csv":
        rows = [[f["name"], f["status"], f.get("observed", {}).get("boundary_count"),
                 f.get("observed", {}).get("busemann_count"),
                 f.get("observed", {}).get("unmatched")] for f in report.fixtures]
        _emit(cfg, {}, _csv(rows, ["fixture", "status", "boundary_count", "busemann_count",
                                   "unmatched"]))
    else:
        text = report.to_json()
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    for f in report.fixtures:
        print(f"{f['name']}: {f['status']}", file=sys.stderr)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="horoboundary", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=fn)
        return p

    add("ball", cmd_ball, "sphere sizes of a word-metric ball (radius = --horizon or --radius)")
    add("boundary", cmd_boundary, "annulus approximation of the horofunction boundary")
    add("rays", cmd_rays, "certified Busemann points from geodesic rays")
    add("orbits", cmd_orbits, "orbits of the group action on boundary functions")
    add("character", cmd_character, "virtual characters from finite orbits")
    p = add("grove", cmd_grove, "grove graph (spine with finite blocks) boundary")
    p.add_argument("--blocks", type=int, default=24)
    p.add_argument("--family", choices=("complete", "path", "cycle"), default="complete")
    p.add_argument("--sizes", default="4", help="block size, or comma list per block")
    p = add("graph-boundary", cmd_graph_boundary, "boundary of a graph from an edge list")
    p.add_argument("edges", help="edge-list file: 'u v' lines, '#base v' directive")
    p = add("verify", cmd_verify, "run the fixture expectation table")
    p.add_argument("--expectations", default=None, help="expectation table (JSON)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--fixture", action="append", default=[], help="run only this fixture")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MemoryBudgetExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConfigError, InvalidSpec, IdentityGenerator, InvalidGraph, HorizonTooSmall,
            OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HoroError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
