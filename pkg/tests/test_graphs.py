import itertools

import networkx as nx
import pytest

from horoboundary import Certificate, annulus_boundary_approx, enumerate_busemann_points
from horoboundary.errors import HorizonTooSmall, InvalidGraph, InvalidSpec
from horoboundary.graphs import (GroveSpec, all_pairs_distances, build_grove, cayley_as_graph,
                                 from_edges, graph_ball, graph_boundary, parse_edge_list,
                                 path_graph, sphere_bound_check, spine_ray)
from horoboundary.horo import ray_limit

from conftest import cached_ball


def to_nx(graph):
    G = nx.Graph()
    G.add_nodes_from(range(graph.n))
    G.add_edges_from((u, v) for u, nb in enumerate(graph.adj) for v in nb)
    return G


def grove_distance(grove, block_dist, u, v):
    """Closed form: spine distance plus the hops into each block."""
    N = grove.spec.blocks

    def depth(w):
        if w < N:
            return 0
        n = grove.block_of[w]
        return 1 + block_dist[n][w]

    bu, bv = grove.block_of[u], grove.block_of[v]
    if u >= N and v >= N and bu == bv:
        return block_dist[bu][(u, v)]
    return depth(u) + abs(bu - bv) + depth(v)


@pytest.mark.parametrize("family", ["complete", "path", "cycle"])
@pytest.mark.parametrize("N", range(2, 9))
def test_grove_distance_identity(family, N):
    for size in range(1, 7):
        if family == "cycle" and size < 3:
            continue
        grove = build_grove(GroveSpec(blocks=N, family=family, sizes=(size,)))
        G = to_nx(grove.graph)
        exact = dict(nx.all_pairs_shortest_path_length(G))
        # distances inside each block, measured on the block alone
        block_dist = []
        for n, verts in enumerate(grove.block_vertices):
            H = G.subgraph(verts)
            d = dict(nx.all_pairs_shortest_path_length(H))
            entry = {w: d[verts[0]][w] for w in verts}
            entry.update({(a, b): d[a][b] for a in verts for b in verts})
            block_dist.append(entry)
        mine = all_pairs_distances(grove.graph)
        for u, v in itertools.product(range(grove.graph.n), repeat=2):
            assert exact[u][v] == mine[u][v] == grove_distance(grove, block_dist, u, v)


def test_grove_with_mixed_sizes_and_edges():
    grove = build_grove(GroveSpec(blocks=3, family="path", sizes=(1, 2, 3)))
    assert grove.graph.n == 3 + 6
    g2 = build_grove(GroveSpec(blocks=2, family="edges", edge_lists=(((0, 1),), ((0, 1), (1, 2)))))
    assert g2.graph.n == 2 + 5


@pytest.mark.parametrize("spec", [
    GroveSpec(blocks=1),
    GroveSpec(blocks=3, sizes=(1, 2)),
    GroveSpec(blocks=2, family="tree"),
    GroveSpec(blocks=2, family="edges", edge_lists=(((0, 2),), ())),
])
def test_bad_grove_specs(spec):
    with pytest.raises(InvalidSpec):
        build_grove(spec)


def test_grove_k4_one_point_boundary():
    grove = build_grove(GroveSpec(blocks=24, family="complete", sizes=(4,)))
    gb = graph_ball(grove.graph, 13)
    A = annulus_boundary_approx(gb, 3)
    B = enumerate_busemann_points(gb, 3)
    assert len(A) == 1 and B.certified_count == 1
    h, cert = ray_limit(gb, spine_ray(gb), 3)
    assert cert is Certificate.CERTIFIED
    assert A.functions[0].values == h.values
    assert sphere_bound_check(gb, B).holds


def test_comb_boundary_is_one_point():
    # hairs of length 5 on a spine
    comb = build_grove(GroveSpec(blocks=30, family="path", sizes=(5,)))
    A = graph_boundary(comb.graph, 2, 14)
    assert len(A) == 1


def test_path_from_the_middle_has_two_functions():
    g = path_graph(41, base=20)
    A = graph_boundary(g, 3, 16)
    assert len(A) == 2
    gb = graph_ball(g, 16)
    assert enumerate_busemann_points(gb, 3).certified_count == 2


def test_path_from_the_end_too_shallow():
    with pytest.raises(HorizonTooSmall):
        graph_ball(path_graph(5), 6)


@pytest.mark.parametrize("group,r,R", [("Z^2", 2, 8), ("Dinf", 3, 8), ("F2", 1, 5)])
def test_cayley_graph_agrees_with_group_ball(group, r, R):
    big = cached_ball(group, (), R + r + 1)
    small = cached_ball(group, (), R)
    gb = graph_ball(cayley_as_graph(big), R)
    # same spheres, same restriction sets (distances inside B_R are exact in B_{R+r+1})
    assert gb.sphere_sizes == small.sphere_sizes
    A_group = annulus_boundary_approx(small, r)
    A_graph = annulus_boundary_approx(gb, r)
    assert len(A_group) == len(A_graph)


def test_parse_edge_list():
    g = parse_edge_list("# a square\n#base c\na b\nb c\nc d\nd a\n")
    assert g.n == 4 and g.label(g.base) == "c"
    gb = graph_ball(g, 2)
    assert gb.sphere_sizes == [1, 2, 1]
    assert gb.index_of("a") == 3


@pytest.mark.parametrize("text", ["", "a b c\n", "#base\na b\n", "#base z\na b\n", "a a\n",
                                  "a b\nc d\n"])
def test_bad_edge_lists(text):
    with pytest.raises(InvalidGraph):
        parse_edge_list(text)


def test_graph_validation():
    with pytest.raises(InvalidGraph):
        from_edges(3, [(0, 1)])
    with pytest.raises(InvalidGraph):
        from_edges(2, [(0, 1)], base=5)


def test_sphere_bound_report():
    ball = cached_ball("F2", (), 6)
    rep = sphere_bound_check(ball, 10)
    assert rep.min_sphere == 4 * 3 ** 3 and rep.holds
    assert not rep.linear_growth
    z = cached_ball("Z", (), 10)
    rep = sphere_bound_check(z, 3)
    assert not rep.holds and rep.linear_growth
