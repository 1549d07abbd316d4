"""Word-metric balls in Cayley graphs, built by breadth-first search.

Elements of a ball are indexed in BFS order: sphere by sphere, and inside a
sphere by canonical key.  All downstream value vectors are laid out in this
order, so a function on ``B_r`` is simply a tuple of length ``ball.size(r)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import HorizonTooSmall, MemoryBudgetExceeded, OutOfBall
from .groups import Element, GeneratingSet, Group

DEFAULT_CAP = 20_000_000


@dataclass(eq=False)
class Ball:
    group: Group
    gens: GeneratingSet
    r_max: int
    elements: list
    index: dict
    dist: list[int]
    parent: list[int]
    parent_gen: list[int]
    sphere_offsets: list[int]
    nbr: list[tuple[int, ...]]
    _inv_cache: dict = field(default_factory=dict, repr=False)
    _reach: list[int] | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def size(self, r: int | None = None) -> int:
        """Number of elements of norm at most ``r``."""
        if r is None or r >= self.r_max:
            return len(self.elements)
        if r < 0:
            return 0
        return self.sphere_offsets[r + 1]

    def sphere(self, k: int) -> range:
        return range(self.sphere_offsets[k], self.sphere_offsets[k + 1])

    @property
    def sphere_sizes(self) -> list[int]:
        o = self.sphere_offsets
        return [o[k + 1] - o[k] for k in range(self.r_max + 1)]

    def index_of(self, x) -> int:
        value = x.value if isinstance(x, Element) else x
        try:
            return self.index[value]
        except (KeyError, TypeError):
            raise OutOfBall(f"{value!r} is not in the ball of radius {self.r_max}") from None

    def element(self, i: int) -> Element:
        return Element(self.group, self.elements[i])

    def distance(self, x) -> int:
        return self.dist[self.index_of(x)]

    def distance_between(self, x, y) -> int:
        """``d(x, y) = |x^-1 y|`` by left-invariance."""
        xv = x.value if isinstance(x, Element) else x
        yv = y.value if isinstance(y, Element) else y
        return self.distance(self.group.mul(self.group.inv(xv), yv))

    def _inverses(self, r: int) -> list:
        inv = self._inv_cache.get(r)
        if inv is None:
            g = self.group
            inv = [g.inv(v) for v in self.elements[:self.size(r)]]
            self._inv_cache[r] = inv
        return inv

    def distances_from(self, i: int, r: int) -> list[int]:
        """``[d(x_i, y) for y in B_r]`` in BFS order."""
        if self.dist[i] + r > self.r_max:
            raise HorizonTooSmall(f"need radius {self.dist[i] + r}, ball has {self.r_max}")
        x = self.elements[i]
        mul, index, dist = self.group.mul, self.index, self.dist
        return [dist[index[mul(yi, x)]] for yi in self._inverses(r)]

    def up_neighbors(self, i: int) -> list[int]:
        d = self.dist[i] + 1
        return [j for j in self.nbr[i] if j >= 0 and self.dist[j] == d]

    def down_neighbors(self, i: int) -> list[int]:
        d = self.dist[i] - 1
        return [j for j in self.nbr[i] if j >= 0 and self.dist[j] == d]

    def reach(self) -> list[int]:
        """Deepest sphere reachable from each element by stepping outward."""
        if self._reach is None:
            reach = list(self.dist)
            for k in range(self.r_max - 1, -1, -1):
                for i in self.sphere(k):
                    best = reach[i]
                    for j in self.up_neighbors(i):
                        if reach[j] > best:
                            best = reach[j]
                    reach[i] = best
            self._reach = reach
        return self._reach

    def spell(self, word: Sequence[int]) -> str:
        return "".join(self.gens.labels[j] for j in word)


def grow_ball(group: Group, gens: GeneratingSet, r_max: int,
              cap: int = DEFAULT_CAP) -> Ball:
    """All elements of norm at most ``r_max``, with exact distances."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    mul = group.mul
    members = gens.members
    ident = group.identity()
    elements = [ident]
    index = {ident: 0}
    dist = [0]
    parent = [-1]
    parent_gen = [-1]
    offsets = [0, 1]
    nbr: list[tuple[int, ...]] = []
    lo = 0
    for k in range(r_max + 1):
        hi = len(elements)
        found: dict = {}
        products = []
        for i in range(lo, hi):
            x = elements[i]
            row = []
            for j, s in enumerate(members):
                v = mul(x, s)
                row.append(v)
                if k < r_max and v not in index and v not in found:
                    found[v] = (i, j)
            products.append(row)
        if len(elements) + len(found) > cap:
            raise MemoryBudgetExceeded(
                f"ball of radius {r_max} exceeds element cap {cap} at sphere {k + 1}")
        for v in sorted(found):
            index[v] = len(elements)
            elements.append(v)
            dist.append(k + 1)
            p, j = found[v]
            parent.append(p)
            parent_gen.append(j)
        for row in products:
            nbr.append(tuple(index.get(v, -1) for v in row))
        if k < r_max:
            offsets.append(len(elements))
        lo = hi
    return Ball(group, gens, r_max, elements, index, dist, parent, parent_gen, offsets, nbr)


def distance_in_ball(ball: Ball, x) -> int:
    return ball.distance(x)


def sphere_sizes(ball: Ball) -> list[int]:
    return ball.sphere_sizes


def geodesic_to(ball: Ball, x) -> tuple[int, ...]:
    """Generator indices of a geodesic word from the identity to ``x``."""
    i = ball.index_of(x)
    word = []
    while i:
        word.append(ball.parent_gen[i])
        i = ball.parent[i]
    return tuple(reversed(word))


def walk(ball: Ball, word: Sequence[int], start: int = 0) -> list[int]:
    """Ball indices visited when reading ``word`` from ``start``."""
    pts = [start]
    for j in word:
        nxt = ball.nbr[pts[-1]][j]
        if nxt < 0:
            raise OutOfBall("path leaves the ball")
        pts.append(nxt)
    return pts


def verify_geodesic(ball: Ball, word: Sequence[int], start: int = 0) -> bool:
    """Check ``d(p_k, p_m) = k - m`` for every pair of prefix endpoints."""
    pts = walk(ball, word, start)
    vals = [ball.elements[i] for i in pts]
    for m in range(len(vals)):
        for k in range(m + 1, len(vals)):
            if ball.distance_between(vals[m], vals[k]) != k - m:
                return False
    return True


@dataclass
class GeodesicTree:
    """Prefix tree of finite geodesics from the identity.

    Node 0 is the root.  ``horizon[n]`` is the deepest sphere reachable by
    extending node ``n`` further outward inside the ball.
    """

    ball: Ball
    depth: int
    parent: list[int]
    element: list[int]
    gen: list[int]
    level: list[int]
    horizon: list[int]

    def __len__(self) -> int:
        return len(self.parent)

    def children(self, node: int) -> list[int]:
        return [n for n, p in enumerate(self.parent) if p == node]

    def nodes_at(self, t: int) -> list[int]:
        return [n for n, lv in enumerate(self.level) if lv == t]

    def viable(self, node: int, horizon: int) -> bool:
        return self.horizon[node] >= horizon

    def branch(self, node: int) -> list[int]:
        path = []
        while node >= 0:
            path.append(self.element[node])
            node = self.parent[node]
        return path[::-1]

    def word(self, node: int) -> tuple[int, ...]:
        w = []
        while node > 0:
            w.append(self.gen[node])
            node = self.parent[node]
        return tuple(reversed(w))


def geodesic_tree(ball: Ball, depth: int, max_nodes: int = 2_000_000) -> GeodesicTree:
    if depth > ball.r_max:
        raise HorizonTooSmall(f"depth {depth} exceeds ball radius {ball.r_max}")
    reach = ball.reach()
    parent, element, gen, level = [-1], [0], [-1], [0]
    frontier = [0]
    for t in range(depth):
        nxt = []
        for node in frontier:
            i = element[node]
            for j, k in enumerate(ball.nbr[i]):
                if k >= 0 and ball.dist[k] == t + 1:
                    parent.append(node)
                    element.append(k)
                    gen.append(j)
                    level.append(t + 1)
                    nxt.append(len(parent) - 1)
        if len(parent) > max_nodes:
            raise MemoryBudgetExceeded(f"geodesic tree exceeds {max_nodes} nodes")
        frontier = nxt
    horizon = [reach[i] for i in element]
    return GeodesicTree(ball, depth, parent, element, gen, level, horizon)
