"""General based graphs: groves, edge-list input and the sphere bound.

A ``GraphBall`` mirrors the Cayley ``Ball`` interface so the routines in
``horo`` run unchanged.  There is no left-invariance here, so distances
from a vertex are obtained by a BFS over the whole (finite) graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .cayley import Ball
from .errors import HorizonTooSmall, InvalidGraph, InvalidSpec, OutOfBall
from .horo import BoundaryApprox, Ray, annulus_boundary_approx, enumerate_busemann_points

DEFAULT_VERTEX_CAP = 2_000_000


@dataclass(frozen=True)
class Graph:
    adj: tuple[tuple[int, ...], ...]
    base: int = 0
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.adj)
        if not 0 <= self.base < n:
            raise InvalidGraph(f"base point {self.base} out of range")
        for u, nb in enumerate(self.adj):
            for v in nb:
                if v == u:
                    raise InvalidGraph(f"self-loop at {u}")
                if u not in self.adj[v]:
                    raise InvalidGraph(f"edge {u}-{v} is not symmetric")
        if len(bfs_distances(self, self.base)) != n:
            raise InvalidGraph("graph is not connected from the base point")

    @property
    def n(self) -> int:
        return len(self.adj)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)


def from_edges(n: int, edges: Iterable[tuple[int, int]], base: int = 0,
               labels: Sequence[str] = (), vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    if n > vertex_cap:
        raise InvalidGraph(f"{n} vertices exceed the cap {vertex_cap}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise InvalidGraph(f"self-loop at {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(tuple(tuple(sorted(s)) for s in nbrs), base, tuple(labels))


def parse_edge_list(text: str) -> Graph:
    """``u v`` per line; ``#base <v>`` sets the base point; other ``#`` lines
    are comments.  Labels are arbitrary tokens, numbered by first appearance."""
    ids: dict[str, int] = {}
    edges = []
    base_label = None

    def vid(tok):
        if tok not in ids:
            ids[tok] = len(ids)
        return ids[tok]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "base":
                if len(parts) != 2:
                    raise InvalidGraph(f"line {lineno}: malformed #base directive")
                base_label = parts[1]
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidGraph(f"line {lineno}: expected 'u v'")
        edges.append((vid(parts[0]), vid(parts[1])))
    if not ids:
        raise InvalidGraph("empty graph")
    if base_label is None:
        base = 0
    elif base_label in ids:
        base = ids[base_label]
    else:
        raise InvalidGraph(f"base vertex {base_label!r} does not occur in any edge")
    labels = [None] * len(ids)
    for tok, i in ids.items():
        labels[i] = tok
    return from_edges(len(ids), edges, base, labels)


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def bfs_distances(graph: Graph, source: int) -> dict[int, int]:
    dist = {source: 0}
    q = deque([source])
    adj = graph.adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if v not in dist:
                dist[v] = du
                q.append(v)
    return dist


def all_pairs_distances(graph: Graph) -> list[list[int]]:
    out = []
    for s in range(graph.n):
        d = bfs_distances(graph, s)
        out.append([d[v] for v in range(graph.n)])
    return out


# ---------------------------------------------------------------------------
# groves


@dataclass(frozen=True)
class GroveSpec:
    """Spine ``0..blocks-1`` with a finite graph hung off each spine vertex.

    ``sizes`` gives one block size per spine vertex (a single entry is
    repeated); ``attach`` the block vertex joined to the spine (default 0).
    ``family`` is ``complete``, ``path``, ``cycle`` or ``edges`` (then
    ``edge_lists`` supplies each block explicitly).
    """

    blocks: int
    family: str = "complete"
    sizes: tuple[int, ...] = (1,)
    attach: tuple[int, ...] = ()
    edge_lists: tuple[tuple[tuple[int, int], ...], ...] = ()


def _block_edges(family: str, size: int) -> list[tuple[int, int]]:
    if family == "complete":
        return [(i, j) for i in range(size) for j in range(i + 1, size)]
    if family == "path":
        return [(i, i + 1) for i in range(size - 1)]
    if family == "cycle":
        if size < 3:
            return [(i, i + 1) for i in range(size - 1)]
        return [(i, (i + 1) % size) for i in range(size)]
    raise InvalidSpec(f"unknown block family {family!r}")


@dataclass(frozen=True)
class Grove:
    graph: Graph
    spec: GroveSpec
    block_of: tuple[int, ...]          # spine index owning each vertex
    block_vertices: tuple[tuple[int, ...], ...]


def build_grove(spec: GroveSpec) -> Grove:
    N = spec.blocks
    if N < 2:
        raise InvalidSpec("a grove needs at least two spine vertices")
    if spec.family == "edges":
        if len(spec.edge_lists) != N:
            raise InvalidSpec("edge_lists must give one block per spine vertex")
        blocks = []
        for el in spec.edge_lists:
            size = 1 + max((max(e) for e in el), default=0)
            blocks.append((size, list(el)))
    else:
        sizes = spec.sizes if len(spec.sizes) != 1 else spec.sizes * N
        if len(sizes) != N:
            raise InvalidSpec("sizes must have one entry or one per block")
        blocks = [(s, _block_edges(spec.family, s)) for s in sizes]
    attach = spec.attach if spec.attach else (0,) * N
    if len(attach) == 1:
        attach = attach * N
    edges = [(i, i + 1) for i in range(N - 1)]
    labels = [str(i) for i in range(N)]
    block_of = list(range(N))
    block_vertices = []
    nxt = N
    for n, ((size, bedges), x) in enumerate(zip(blocks, attach)):
        if size < 1:
            raise InvalidSpec(f"block {n} is empty")
        if not 0 <= x < size:
            raise InvalidSpec(f"attachment vertex {x} not in block {n}")
        verts = tuple(range(nxt, nxt + size))
        for u, v in bedges:
            if not (0 <= u < size and 0 <= v < size):
                raise InvalidSpec(f"block {n} edge ({u},{v}) out of range")
            edges.append((verts[u], verts[v]))
        edges.append((n, verts[x]))
        labels.extend(f"{n}.{i}" for i in range(size))
        block_of.extend([n] * size)
        block_vertices.append(verts)
        nxt += size
    try:
        graph = from_edges(nxt, edges, 0, labels)
    except InvalidGraph as exc:
        raise InvalidSpec(f"block graphs must be connected: {exc}") from exc
    return Grove(graph, spec, tuple(block_of), tuple(block_vertices))


def path_graph(n: int, base: int = 0) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)], base)


def cayley_as_graph(ball: Ball) -> Graph:
    """The induced subgraph of a Cayley ball, vertex ids = ball indices."""
    edges = [(i, j) for i, row in enumerate(ball.nbr) for j in row if j > i]
    return from_edges(len(ball), edges, 0)


# ---------------------------------------------------------------------------
# based balls in graphs


@dataclass(eq=False)
class GraphBall:
    graph: Graph
    r_max: int
    order: list[int]
    pos: dict[int, int]
    dist: list[int]
    sphere_offsets: list[int]
    nbr: list[tuple[int, ...]]
    _cache: dict = field(default_factory=dict, repr=False)
    _reach: list[int] | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.order)

    def size(self, r: int | None = None) -> int:
        if r is None or r >= self.r_max:
            return len(self.order)
        if r < 0:
            return 0
        return self.sphere_offsets[r + 1]

    def sphere(self, k: int) -> range:
        return range(self.sphere_offsets[k], self.sphere_offsets[k + 1])

    @property
    def sphere_sizes(self) -> list[int]:
        o = self.sphere_offsets
        return [o[k + 1] - o[k] for k in range(self.r_max + 1)]

    def index_of(self, v) -> int:
        if isinstance(v, str):
            labels = self.graph.labels or tuple(str(i) for i in range(self.graph.n))
            try:
                v = labels.index(v)
            except ValueError:
                raise OutOfBall(f"no vertex labelled {v!r}") from None
        try:
            return self.pos[v]
        except (KeyError, TypeError):
            raise OutOfBall(f"vertex {v!r} not within distance {self.r_max}") from None

    def distances_from(self, i: int, r: int) -> list[int]:
        d = self._cache.get(i)
        if d is None:
            d = bfs_distances(self.graph, self.order[i])
            self._cache[i] = d
        return [d[v] for v in self.order[:self.size(r)]]

    def up_neighbors(self, i: int) -> list[int]:
        t = self.dist[i] + 1
        return [j for j in self.nbr[i] if self.dist[j] == t]

    def down_neighbors(self, i: int) -> list[int]:
        t = self.dist[i] - 1
        return [j for j in self.nbr[i] if self.dist[j] == t]

    def reach(self) -> list[int]:
        if self._reach is None:
            reach = list(self.dist)
            for k in range(self.r_max - 1, -1, -1):
                for i in self.sphere(k):
                    for j in self.up_neighbors(i):
                        if reach[j] > reach[i]:
                            reach[i] = reach[j]
            self._reach = reach
        return self._reach


def graph_ball(graph: Graph, r_max: int) -> GraphBall:
    """Vertices within ``r_max`` of the base, sphere by sphere, each sphere
    sorted by vertex id."""
    order = [graph.base]
    dist = [0]
    seen = {graph.base}
    offsets = [0, 1]
    frontier = [graph.base]
    for k in range(1, r_max + 1):
        new = sorted({v for u in frontier for v in graph.adj[u] if v not in seen})
        if not new:
            raise HorizonTooSmall(f"graph has no vertices at distance {k} from the base")
        seen.update(new)
        order.extend(new)
        dist.extend([k] * len(new))
        offsets.append(len(order))
        frontier = new
    pos = {v: i for i, v in enumerate(order)}
    nbr = [tuple(sorted(pos[w] for w in graph.adj[v] if w in pos)) for v in order]
    return GraphBall(graph, r_max, order, pos, dist, offsets, nbr)


def graph_boundary(graph: Graph, r: int, horizon: int, window: int = 2,
                   annuli: int = 3) -> BoundaryApprox:
    """Annulus surrogate of the horofunction boundary around the base point."""
    return annulus_boundary_approx(graph_ball(graph, horizon), r, window, annuli)


def graph_busemann_points(graph: Graph, r: int, horizon: int,
                          stability_window: int | None = None) -> BoundaryApprox:
    return enumerate_busemann_points(graph_ball(graph, horizon), r,
                                     stability_window=stability_window)


def spine_ray(gb: GraphBall, length: int | None = None) -> Ray:
    """The ray ``0, 1, 2, ...`` along a grove spine (vertex ids = spine positions)."""
    length = gb.r_max if length is None else length
    return Ray(points=tuple(gb.index_of(v) for v in range(length + 1)))


# ---------------------------------------------------------------------------
# sphere bound


@dataclass
class SphereBoundReport:
    busemann_count: int
    spheres: list[int]
    window_radii: list[int]
    min_sphere: int
    holds: bool
    growth_constant: float
    linear_growth: bool

    def to_dict(self) -> dict:
        return {
            "busemann_count": self.busemann_count,
            "window_radii": self.window_radii,
            "min_sphere": self.min_sphere,
            "holds": self.holds,
            "growth_constant": self.growth_constant,
            "linear_growth": self.linear_growth,
            "sphere_sizes": self.spheres,
        }


def sphere_bound_check(space, busemann: BoundaryApprox | int, window: int = 3) -> SphereBoundReport:
    """Compare the certified Busemann count with the smallest of the top
    ``window`` spheres of ``space``."""
    count = busemann if isinstance(busemann, int) else busemann.certified_count
    sizes = space.sphere_sizes
    R = len(sizes) - 1
    radii = list(range(max(1, R - window + 1), R + 1))
    smin = min(sizes[k] for k in radii)
    half = sizes[1:R // 2 + 1] or sizes[1:]
    linear = max(sizes[R // 2 + 1:] or [0]) <= max(half)
    growth = round(sum(sizes) / (R + 1), 6)
    return SphereBoundReport(count, sizes, radii, smin, count <= smin, growth, linear)
