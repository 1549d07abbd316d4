"""Acceptance checks.  Each test prints one PASS/FAIL line and then asserts."""

import filecmp
import itertools
import random
import time

import networkx as nx
import pytest

from horoboundary import (annulus_boundary_approx, busemann_restriction, classify_boundary,
                          enumerate_busemann_points, grow_ball, make_group, parse_group,
                          symmetrize_generators)
from horoboundary.action import (act_on_function, compute_orbits, extract_character,
                                 power_geodesic_check)
from horoboundary.cli import main
from horoboundary.errors import DomainTooSmall, HorizonTooSmall, PreconditionFailed
from horoboundary.graphs import (GroveSpec, all_pairs_distances, build_grove, graph_ball,
                                 sphere_bound_check, spine_ray)
from horoboundary.horo import Certificate, ray_limit, restriction_at_index, restriction_violations

from conftest import cached_ball
from test_graphs import grove_distance, to_nx

SEED = 20240611
CASES = 1000


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number}: {title}"
                  + (f"  [{detail}]" if detail else ""))
        assert ok, detail
    return emit


def ball_for(group, gens, r_max):
    G = make_group(parse_group(group))
    return grow_ball(G, symmetrize_generators(G, gens), r_max)


def summary(ball, r, sw=None):
    A = annulus_boundary_approx(ball, r)
    B = enumerate_busemann_points(ball, r, stability_window=sw)
    return A, B, classify_boundary(A, B)


def test_criterion_1_integers(report):
    t0 = time.perf_counter()
    ball = ball_for("Z", (), 16)
    A, B, cls = summary(ball, 4)
    elapsed = time.perf_counter() - t0
    ys = [y[0] for y in ball.elements[:ball.size(4)]]
    expected = {tuple(-y for y in ys), tuple(ys)}
    ok = (A.value_set() == expected and B.certified_count == 2 and not cls.unmatched
          and elapsed < 1.0)
    report(1, "Z, S={+-1}, r=4: two functions y->-y and y->y, both certified, none unmatched, <1 s",
           ok, f"count={len(A)} certified={B.certified_count} unmatched={len(cls.unmatched)} "
               f"time={elapsed:.3f}s")


def test_criterion_2_integers_steps_one_two(report):
    ball = ball_for("Z", ("aa",), 20)
    A, B, cls = summary(ball, 4)
    orb = compute_orbits(ball, A)
    ok = (len(A) == 4 and B.certified_count == 4 and not cls.unmatched
          and orb.finite_orbit and orb.orbit_sizes == [2, 2])
    report(2, "Z, S={+-1,+-2}, r=4: four functions, all certified, finite orbits of size 2",
           ok, f"count={len(A)} certified={B.certified_count} orbits={orb.orbit_sizes} "
               f"closed={orb.finite_orbit}")


def test_criterion_3_infinite_dihedral(report):
    ball = ball_for("Dinf", (), 16)
    A, B, cls = summary(ball, 4)
    orb = compute_orbits(ball, A)
    ab = ball.group.evaluate("ab")
    found, additive = {}, True
    for h in A.functions:
        rep = extract_character(ball, orb, h)
        additive = additive and rep.homomorphism and rep.additivity_checked > 0
        if rep.witness is not None:
            found[ball.elements[rep.witness]] = h.values[rep.witness]
    ok = (len(A) == 2 and B.certified_count == 2 and not cls.unmatched
          and orb.orbit_sizes == [2] and found.get(ab) == -2 == -ball.distance(ab) and additive)
    report(3, "Dinf, r=4: two Busemann functions, one orbit of size 2, witness ab with h=-2, "
              "additive on the translation sample", ok,
           f"count={len(A)} orbits={orb.orbit_sizes} witness_ab={found.get(ab)} "
           f"additive={additive}")


def test_criterion_4_square_lattice(report):
    t0 = time.perf_counter()
    ball = ball_for("Z^2", (), 16)
    counts = [len(annulus_boundary_approx(ball, r)) for r in (1, 2, 3)]
    elapsed = time.perf_counter() - t0
    ok = counts[0] == 8 and counts[0] < counts[1] < counts[2] and elapsed < 10.0
    report(4, "Z^2 at horizon 16: counts at r=1,2,3 strictly increasing with r=1 count 8, <10 s",
           ok, f"counts={counts} time={elapsed:.2f}s")


def test_criterion_5_free_group(report):
    ball = cached_ball("F2", (), 10)
    counts = [enumerate_busemann_points(ball, r, stability_window=r + 1).certified_count
              for r in (1, 2, 3)]
    expected = [4 * 3 ** (r - 1) for r in (1, 2, 3)]
    report(5, "F2: certified Busemann count 4*3^(r-1) for r=1,2,3", counts == expected,
           f"counts={counts} expected={expected}")


def test_criterion_6_grove(report):
    grove = build_grove(GroveSpec(blocks=24, family="complete", sizes=(4,)))
    gb = graph_ball(grove.graph, 13)
    A, B, cls = summary(gb, 3)
    h, cert = ray_limit(gb, spine_ray(gb), 3)
    spine_ok = cert is Certificate.CERTIFIED and len(A) == 1 and A.functions[0].values == h.values
    identity_ok, checked = True, 0
    for N in range(2, 9):
        g = build_grove(GroveSpec(blocks=N, family="complete", sizes=(4,)))
        G = to_nx(g.graph)
        exact = dict(nx.all_pairs_shortest_path_length(G))
        block_dist = []
        for verts in g.block_vertices:
            d = dict(nx.all_pairs_shortest_path_length(G.subgraph(verts)))
            entry = {w: d[verts[0]][w] for w in verts}
            entry.update({(a, b): d[a][b] for a in verts for b in verts})
            block_dist.append(entry)
        mine = all_pairs_distances(g.graph)
        for u, v in itertools.product(range(g.graph.n), repeat=2):
            checked += 1
            if not exact[u][v] == mine[u][v] == grove_distance(g, block_dist, u, v):
                identity_ok = False
    ok = spine_ok and B.certified_count == 1 and not cls.unmatched and identity_ok
    report(6, "grove with K4 blocks, N=24, r=3: one function, equal to the spine ray limit; "
              "distance identity exact for N<=8", ok,
           f"count={len(A)} spine={cert.value} pairs_checked={checked} identity={identity_ok}")


# ---------------------------------------------------------------------------
# property suite

PROPERTY_FIXTURES = [
    ("Z", (), 16, 4),
    ("Z", ("aa",), 20, 4),
    ("Dinf", (), 16, 4),
    ("Z^2", (), 16, 3),
    ("F2", (), 8, 2),
    ("Z x C3", (), 20, 4),
    ("Heis", (), 9, 1),
]


def _random_branch(rng, space, length):
    pts = [0]
    while len(pts) <= length:
        up = space.up_neighbors(pts[-1]) if hasattr(space, "up_neighbors") else []
        reach = space.reach()
        up = [j for j in up if reach[j] >= length]
        if not up:
            break
        pts.append(rng.choice(up))
    return pts


def _monotone_failures(rng, space, r):
    bad = 0
    floor = [-d for d in space.dist[:space.size(r)]]
    for _ in range(CASES):
        prev = None
        for i in _random_branch(rng, space, space.r_max - r):
            row = restriction_at_index(space, i, r).values
            if any(v < f for v, f in zip(row, floor)):
                bad += 1
            if prev is not None and any(b > a for a, b in zip(prev, row)):
                bad += 1
            prev = row
    return bad


def _equivariance_failures(rng, ball, r):
    bad, done = 0, 0
    g = ball.group
    while done < CASES:
        x = ball.elements[rng.randrange(ball.size(2))]
        y = ball.elements[rng.randrange(ball.size(ball.r_max - r - 2))]
        xy = g.mul(x, y)
        if xy not in ball.index or ball.distance(xy) + r > ball.r_max:
            continue
        nx_ = ball.distance(x)
        if ball.distance(y) + r + nx_ > ball.r_max:
            continue
        done += 1
        lhs = act_on_function(ball, x, busemann_restriction(ball, y, r + nx_), r)
        if lhs != busemann_restriction(ball, xy, r):
            bad += 1
    return bad


def _power_failures(rng, ball, functions):
    bad, held = 0, 0
    for _ in range(CASES):
        h = rng.choice(functions)
        x = ball.elements[rng.randrange(1, ball.size(min(2, h.radius)))]
        try:
            ok, _ = power_geodesic_check(ball, x, h)
        except (PreconditionFailed, DomainTooSmall, HorizonTooSmall):
            continue
        held += 1
        m = ball.distance(x)
        for t in range(1, ball.r_max // m + 1):
            if ball.distance(ball.group.power(x, t)) != t * m:
                bad += 1
        bad += not ok
    return bad, held


def test_criterion_7_property_suite(report):
    rng = random.Random(SEED)
    details, failures = [], 0
    spaces = [(f"{g}{''.join('+' + w for w in gens)}", cached_ball(g, gens, R), r)
              for g, gens, R, r in PROPERTY_FIXTURES]
    grove = build_grove(GroveSpec(blocks=24, family="complete", sizes=(4,)))
    spaces.append(("grove", graph_ball(grove.graph, 13), 3))
    for name, space, r in spaces:
        A = annulus_boundary_approx(space, r)
        B = enumerate_busemann_points(space, r)
        emitted = list(A.functions) + list(B.functions)
        f_emit = sum(bool(restriction_violations(space, h)) for h in emitted)
        f_mono = _monotone_failures(rng, space, r)
        f_bound = 0 if sphere_bound_check(space, B).holds else 1
        f_eq = f_pow = held = 0
        if hasattr(space, "group"):
            f_eq = _equivariance_failures(rng, space, r)
            f_pow, held = _power_failures(rng, space, list(A.functions))
        total = f_emit + f_mono + f_bound + f_eq + f_pow
        failures += total
        details.append(f"{name}:{total}/{held}")
    report(7, f"property suite, {CASES} seeded cases per fixture: monotone rays with floor, "
              "equivariance, emitted functions valid, power lengths, sphere bound",
           failures == 0, "failures/power-cases " + " ".join(details))


def test_criterion_8_determinism(report, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code_a = main(["verify", "--out", str(a)])
    code_b = main(["verify", "--out", str(b), "--workers", "2"])
    same = filecmp.cmp(a, b, shallow=False)
    report(8, "verify run twice produces byte-identical JSON", same and code_a == code_b == 0,
           f"exit={code_a},{code_b} identical={same} bytes={a.stat().st_size}")
