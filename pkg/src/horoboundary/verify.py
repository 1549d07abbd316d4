"""Run configuration and the fixture verification pipeline."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .action import compute_orbits, extract_character
from .cayley import DEFAULT_CAP, geodesic_to, grow_ball
from .errors import ConfigError, HoroError, MemoryBudgetExceeded
from .graphs import GroveSpec, build_grove, graph_ball, sphere_bound_check, spine_ray
from .groups import make_group, parse_group, symmetrize_generators
from .horo import (Certificate, annulus_boundary_approx, classify_boundary,
                   enumerate_busemann_points, ray_limit)


@dataclass(frozen=True)
class RunConfig:
    group: str = "Z"
    gens: tuple[str, ...] = ()
    radius: int = 4
    horizon: int | None = None
    window: int = 2
    annuli: int = 3
    stability_window: int | None = None
    sample_norm: int | None = None
    cap: int = DEFAULT_CAP
    out: str | None = None
    format: str = "json"

    @property
    def r_max(self) -> int:
        return 3 * self.radius + 4 if self.horizon is None else self.horizon

    def validate(self) -> "RunConfig":
        for name in ("radius", "window", "annuli", "cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        for name in ("stability_window", "sample_norm"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.r_max < self.radius + self.window + 1:
            raise ConfigError(f"horizon {self.r_max} < radius + window + 1")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gens"] = list(self.gens)
        d["horizon"] = self.r_max
        d.pop("out")
        return d


def load_expectations(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files("horoboundary").joinpath("data/expectations.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        table = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad expectation table: {exc}") from exc
    for fx in table.get("fixtures", []):
        for key, exp in fx.get("expect", {}).items():
            if not isinstance(exp, dict) or "value" not in exp or "provenance" not in exp:
                raise ConfigError(f"fixture {fx.get('name')}: expectation {key!r} "
                                  "needs 'value' and 'provenance'")
    return table


def _fixture_config(fx: dict) -> RunConfig:
    return RunConfig(
        group=fx.get("group", "Z"), gens=tuple(fx.get("gens", ())),
        radius=fx.get("radius", 4), horizon=fx.get("horizon"), window=fx.get("window", 2),
        annuli=fx.get("annuli", 3), stability_window=fx.get("stability_window"),
        sample_norm=fx.get("sample_norm"), cap=fx.get("cap", DEFAULT_CAP)).validate()


def _cayley_observations(cfg: RunConfig, extra_radii: list[int]) -> dict[str, Any]:
    G = make_group(parse_group(cfg.group))
    S = symmetrize_generators(G, cfg.gens)
    ball = grow_ball(G, S, cfg.r_max, cap=cfg.cap)
    A = annulus_boundary_approx(ball, cfg.radius, cfg.window, cfg.annuli)
    B = enumerate_busemann_points(ball, cfg.radius, stability_window=cfg.stability_window)
    cls = classify_boundary(A, B)
    # at radius 1 the generator action would be compared on B_0 only
    orb = compute_orbits(ball, A) if cfg.radius >= 2 else None
    obs: dict[str, Any] = {
        "sphere_sizes": ball.sphere_sizes,
        "element_count": len(ball),
        "boundary_count": len(A),
        "annulus_counts": list(A.annulus_counts),
        "stabilized": A.stabilized,
        "busemann_count": B.certified_count,
        "ray_limit_count": len(B),
        "unmatched": len(cls.unmatched),
        "finite_orbit": None if orb is None else orb.finite_orbit,
        "orbit_sizes": None if orb is None else orb.orbit_sizes,
        "largest_closed_radius": None if orb is None else orb.largest_closed_radius,
    }
    characters = []
    if orb is not None and orb.finite_orbit:
        for h in A.functions:
            rep = extract_character(ball, orb, h, cfg.sample_norm)
            w = rep.witness
            characters.append({
                "homomorphism": rep.homomorphism,
                "additivity_checked": rep.additivity_checked,
                "sample_size": len(rep.sample),
                "witness": None if w is None else ball.spell(geodesic_to(ball, ball.elements[w])),
                "witness_h": None if w is None else h.values[w],
            })
    obs["characters"] = characters
    obs["character_found"] = any(c["homomorphism"] and c["witness"] is not None
                                 for c in characters)
    obs["witnesses"] = sorted({c["witness"] for c in characters if c["witness"] is not None})
    obs["witness_values"] = {c["witness"]: c["witness_h"] for c in characters
                             if c["witness"] is not None}
    obs["sphere_bound_holds"] = sphere_bound_check(ball, B, cfg.annuli).holds
    if extra_radii:
        counts = []
        for r in extra_radii:
            counts.append(len(annulus_boundary_approx(ball, r, cfg.window, cfg.annuli)))
        obs["counts_by_radius"] = counts
        obs["strictly_increasing"] = all(a < b for a, b in zip(counts, counts[1:]))
    return obs


def _grove_observations(fx: dict, cfg: RunConfig) -> dict[str, Any]:
    grove = build_grove(GroveSpec(blocks=fx["blocks"], family=fx.get("family", "complete"),
                                  sizes=tuple(fx.get("sizes", (1,)))))
    gb = graph_ball(grove.graph, cfg.r_max)
    A = annulus_boundary_approx(gb, cfg.radius, cfg.window, cfg.annuli)
    B = enumerate_busemann_points(gb, cfg.radius, stability_window=cfg.stability_window)
    cls = classify_boundary(A, B)
    spine_h, spine_cert = ray_limit(gb, spine_ray(gb), cfg.radius, cfg.stability_window)
    return {
        "sphere_sizes": gb.sphere_sizes,
        "element_count": len(gb),
        "boundary_count": len(A),
        "annulus_counts": list(A.annulus_counts),
        "stabilized": A.stabilized,
        "busemann_count": B.certified_count,
        "ray_limit_count": len(B),
        "unmatched": len(cls.unmatched),
        "spine_matches": spine_cert is Certificate.CERTIFIED and spine_h.values in A.value_set(),
        "sphere_bound_holds": sphere_bound_check(gb, B, cfg.annuli).holds,
    }


def _check(observed: dict, expect: dict) -> dict[str, dict]:
    checks = {}
    for key, exp in sorted(expect.items()):
        want = exp["value"]
        if key == "witnesses_include":
            got = observed.get("witness_values", {})
            ok = all(got.get(w) == v for w, v in want.items())
            checks[key] = {"expected": want, "observed": got, "pass": ok,
                           "provenance": exp["provenance"]}
            continue
        got = observed.get(key)
        checks[key] = {"expected": want, "observed": got, "pass": got == want,
                       "provenance": exp["provenance"]}
    return checks


def run_fixture(fx: dict) -> dict:
    name = fx["name"]
    try:
        cfg = _fixture_config(fx)
        if fx.get("kind", "cayley") == "grove":
            obs = _grove_observations(fx, cfg)
        else:
            obs = _cayley_observations(cfg, fx.get("radii", []))
    except MemoryBudgetExceeded as exc:
        return {"name": name, "status": "resource-cap", "error": str(exc)}
    except HoroError as exc:
        return {"name": name, "status": "error", "error": f"{type(exc).__name__}: {exc}"}
    checks = _check(obs, fx.get("expect", {}))
    status = "pass" if all(c["pass"] for c in checks.values()) else "fail"
    return {"name": name, "status": status, "config": cfg.to_dict(),
            "observed": obs, "checks": checks, "note": fx.get("note", "")}


@dataclass
class VerifyReport:
    fixtures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f["status"] == "pass" for f in self.fixtures)

    @property
    def exit_code(self) -> int:
        statuses = {f["status"] for f in self.fixtures}
        if statuses & {"fail", "error"}:
            return 1
        if "resource-cap" in statuses:
            return 3
        return 0

    def to_dict(self) -> dict:
        return {"passed": self.passed, "fixtures": self.fixtures,
                "summary": {f["name"]: f["status"] for f in self.fixtures}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def run_pipeline(fixtures: list[dict] | None = None, workers: int = 1,
                 only: list[str] | None = None) -> VerifyReport:
    """Run every fixture of the expectation table and compare."""
    if fixtures is None:
        fixtures = load_expectations()["fixtures"]
    if only:
        fixtures = [f for f in fixtures if f["name"] in only]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_fixture, fixtures))
    else:
        results = [run_fixture(f) for f in fixtures]
    return VerifyReport(sorted(results, key=lambda f: f["name"]))
