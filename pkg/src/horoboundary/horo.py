"""Busemann-function restrictions and finite-radius boundary approximations.

Everything here works on a *space*: either a Cayley ``Ball`` or a based
``GraphBall``.  A space exposes BFS-ordered indices, ``dist`` to the base
point, ``size(r)``, ``distances_from(i, r)``, outward/inward neighbours and
``reach()``.  A function on ``B_r`` is a tuple of ints in BFS order.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import (HorizonTooSmall, NotAGeodesic, OutOfDomain, RadiusMismatch,
                     RayTooShort, UncertifiedLimit)


class Certificate(str, enum.Enum):
    CERTIFIED = "certified"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class RestrictedFunction:
    radius: int
    values: tuple[int, ...]
    space: Any = field(default=None, compare=False, hash=False, repr=False)

    def __call__(self, x) -> int:
        if self.space is None:
            raise OutOfDomain("function is not attached to a space")
        try:
            i = self.space.index_of(x)
        except Exception:
            raise OutOfDomain(f"{x!r} is outside the domain") from None
        if i >= len(self.values):
            raise OutOfDomain(f"{x!r} lies outside B_{self.radius}")
        return self.values[i]

    def __neg__(self) -> "RestrictedFunction":
        return RestrictedFunction(self.radius, tuple(-v for v in self.values), self.space)

    def truncate(self, r: int) -> "RestrictedFunction":
        if r > self.radius:
            raise OutOfDomain(f"cannot extend from radius {self.radius} to {r}")
        return RestrictedFunction(r, self.values[:self.space.size(r)], self.space)


def restriction_violations(space, h: RestrictedFunction) -> list[str]:
    """Empty list iff ``h`` vanishes at the base point, is integer valued,
    1-Lipschitz along edges of ``B_r`` and bounded below by ``-|y|``."""
    bad = []
    vals = h.values
    n = len(vals)
    if n != space.size(h.radius):
        bad.append(f"length {n} != |B_{h.radius}| = {space.size(h.radius)}")
        return bad
    if vals[0] != 0:
        bad.append("h(1) != 0")
    for i, v in enumerate(vals):
        if not isinstance(v, int):
            bad.append(f"non-integer value at {i}")
        if v < -space.dist[i]:
            bad.append(f"h < -|y| at {i}")
        for j in space.nbr[i]:
            if 0 <= j < n and abs(vals[j] - v) > 1:
                bad.append(f"Lipschitz violation on edge {i}-{j}")
    return bad


def restriction_at_index(space, i: int, r: int) -> RestrictedFunction:
    base = space.dist[i]
    return RestrictedFunction(r, tuple(d - base for d in space.distances_from(i, r)), space)


def busemann_restriction(space, x, r: int) -> RestrictedFunction:
    """``b_x(y) = d(x, y) - d(x, 1)`` for every ``y`` in ``B_r``."""
    i = space.index_of(x)
    if space.dist[i] + r > space.r_max:
        raise HorizonTooSmall(f"|x| + r = {space.dist[i] + r} exceeds horizon {space.r_max}")
    return restriction_at_index(space, i, r)


# ---------------------------------------------------------------------------
# rays


@dataclass(frozen=True)
class Ray:
    """A geodesic ray from the base point.

    Either an explicit branch of space indices (``points``) or a periodic
    word ``prefix + period + period + ...`` of generator indices.
    """

    points: tuple[int, ...] = ()
    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    @property
    def periodic(self) -> bool:
        return bool(self.period)

    def indices(self, space, limit: int | None = None) -> list[int]:
        if not self.periodic:
            pts = list(self.points)
            return pts if limit is None else pts[:limit + 1]
        # a geodesic from the base leaves B_{r_max} after r_max steps
        if limit is None:
            limit = space.r_max
        pts = [0]
        step = 0
        while len(pts) <= limit:
            if step < len(self.prefix):
                j = self.prefix[step]
            else:
                j = self.period[(step - len(self.prefix)) % len(self.period)]
            nxt = space.nbr[pts[-1]][j]
            if nxt < 0:
                break
            pts.append(nxt)
            step += 1
        return pts

    def to_dict(self, space=None) -> dict:
        if self.periodic:
            out = {"prefix": list(self.prefix), "period": list(self.period)}
            if space is not None and hasattr(space, "spell"):
                out["prefix_word"] = space.spell(self.prefix)
                out["period_word"] = space.spell(self.period)
            return out
        return {"points": list(self.points)}


def default_stability_window(r: int) -> int:
    return 2 * r + 2


def ray_limit(space, ray: Ray, r: int, stability_window: int | None = None
              ) -> tuple[RestrictedFunction, Certificate]:
    """Last computable ``b_{gamma_t}`` on ``B_r`` along ``ray``.

    Each coordinate sequence is checked to be non-increasing and bounded
    below by ``-|y|``.  The limit is CERTIFIED when every coordinate either
    sits on that floor or stayed constant over the final window.
    """
    window = default_stability_window(r) if stability_window is None else stability_window
    pts = ray.indices(space)
    if not pts or pts[0] != 0:
        raise NotAGeodesic("ray must start at the base point")
    usable = []
    for t, i in enumerate(pts):
        if space.dist[i] != t:
            raise NotAGeodesic(f"|gamma_{t}| = {space.dist[i]} != {t}")
        if t + r > space.r_max:
            break
        usable.append(i)
    if len(usable) < r + 2:
        raise RayTooShort(f"need {r + 1} steps inside the horizon, have {len(usable) - 1}")
    floor = [-d for d in space.dist[:space.size(r)]]
    rows = [restriction_at_index(space, i, r).values for i in usable]
    for t in range(1, len(rows)):
        prev, cur = rows[t - 1], rows[t]
        for y, (a, b) in enumerate(zip(prev, cur)):
            if b > a:
                raise NotAGeodesic(f"b_t(y) increased at t={t}, y={y}")
            if b < floor[y]:
                raise NotAGeodesic(f"b_t(y) below -|y| at t={t}, y={y}")
    last = rows[-1]
    anchor = rows[-window - 1] if len(rows) > window else None
    ok = all(v == f or (anchor is not None and anchor[y] == v)
             for y, (v, f) in enumerate(zip(last, floor)))
    cert = Certificate.CERTIFIED if ok else Certificate.HEURISTIC
    return RestrictedFunction(r, last, space), cert


def rays_equivalent(space, alpha: Ray, beta: Ray, r: int,
                    stability_window: int | None = None) -> bool:
    ha, ca = ray_limit(space, alpha, r, stability_window)
    hb, cb = ray_limit(space, beta, r, stability_window)
    if ca is not Certificate.CERTIFIED or cb is not Certificate.CERTIFIED:
        raise UncertifiedLimit("both ray limits must be certified at this radius")
    return ha.values == hb.values


# ---------------------------------------------------------------------------
# boundary approximations


@dataclass(frozen=True)
class BoundaryApprox:
    kind: str                      # "annulus" or "busemann"
    radius: int
    horizon: int
    window: int
    functions: tuple[RestrictedFunction, ...]
    provenance: tuple[str, ...]
    certified: tuple[bool, ...]
    annuli: tuple[tuple[int, int], ...] = ()
    annulus_counts: tuple[int, ...] = ()
    stabilized: bool = False
    rays: tuple[Ray | None, ...] = ()
    space: Any = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.functions)

    @property
    def certified_count(self) -> int:
        return sum(self.certified)

    def value_set(self, certified_only: bool = False) -> set[tuple[int, ...]]:
        return {h.values for h, c in zip(self.functions, self.certified)
                if c or not certified_only}

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "radius": self.radius,
            "horizon": self.horizon,
            "window": self.window,
            "functions": [
                {"values": list(h.values), "provenance": p, "certified": c}
                for h, p, c in zip(self.functions, self.provenance, self.certified)
            ],
            "annuli": [list(a) for a in self.annuli],
            "annulus_counts": list(self.annulus_counts),
            "stabilized": self.stabilized,
        }
        if self.rays:
            out["rays"] = [None if ray is None else ray.to_dict(self.space) for ray in self.rays]
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _sphere_restrictions(space, k: int, r: int) -> set[tuple[int, ...]]:
    return {restriction_at_index(space, i, r).values for i in space.sphere(k)}


def annulus_boundary_approx(space, r: int, w: int = 2, k: int = 3) -> BoundaryApprox:
    """Distinct ``b_x`` restrictions to ``B_r`` over ``R-r-w <= |x| <= R-r``.

    The same count is reported for the ``k`` annuli obtained by sliding the
    window inward one sphere at a time; equal counts mean the surrogate has
    stabilised at this horizon.
    """
    R = space.r_max
    if R < r + w + 1:
        raise HorizonTooSmall(f"horizon {R} < r + w + 1 = {r + w + 1}")
    per_sphere: dict[int, set] = {}
    annuli, counts = [], []
    top_set: set = set()
    for j in range(k):
        hi = R - r - j
        lo = hi - w
        if lo < 1:
            break
        acc: set = set()
        for s in range(lo, hi + 1):
            if s not in per_sphere:
                per_sphere[s] = _sphere_restrictions(space, s, r)
            acc |= per_sphere[s]
        if j == 0:
            top_set = acc
        annuli.append((lo, hi))
        counts.append(len(acc))
    annuli.reverse()
    counts.reverse()
    funcs = tuple(RestrictedFunction(r, v, space) for v in sorted(top_set))
    return BoundaryApprox(
        kind="annulus", radius=r, horizon=R, window=w, functions=funcs,
        provenance=("annulus",) * len(funcs), certified=(False,) * len(funcs),
        annuli=tuple(annuli), annulus_counts=tuple(counts),
        stabilized=len(counts) >= 2 and len(set(counts)) == 1, space=space)


def enumerate_busemann_points(space, r: int, depth: int | None = None,
                              stability_window: int | None = None) -> BoundaryApprox:
    """Distinct limits of geodesic rays from the base point, seen on ``B_r``.

    Walks the geodesic tree out to ``depth`` keeping only branches that can
    still be extended to the horizon.  Branches are merged whenever they end
    at the same point carrying the same restriction ``stability_window``
    steps earlier; this loses nothing because both the future of a branch and
    its certificate depend only on that pair.
    """
    R = space.r_max
    window = default_stability_window(r) if stability_window is None else stability_window
    if depth is None:
        depth = R - r
    if depth > R - r:
        raise HorizonTooSmall(f"depth {depth} > horizon - r = {R - r}")
    if depth < r + 1:
        raise HorizonTooSmall(f"depth {depth} leaves no room for rays of length r + 1")
    reach = space.reach()
    floor = tuple(-d for d in space.dist[:space.size(r)])

    def viable(i):
        return reach[i] >= R

    anchor_level = depth - window
    table: list[tuple[int, ...]] = []
    table_id: dict[tuple[int, ...], int] = {}

    def intern(vals):
        if vals not in table_id:
            table_id[vals] = len(table)
            table.append(vals)
        return table_id[vals]

    anchors: dict[int, set[int]] = {}
    if anchor_level >= 0:
        for i in space.sphere(anchor_level):
            if viable(i):
                anchors[i] = {intern(restriction_at_index(space, i, r).values)}
        for t in range(anchor_level + 1, depth + 1):
            level: dict[int, set[int]] = {}
            for i in space.sphere(t):
                if not viable(i):
                    continue
                acc: set[int] = set()
                for p in space.down_neighbors(i):
                    acc |= anchors.get(p, set())
                level[i] = acc
            anchors.update(level)

    classes: dict[tuple[int, ...], list] = {}
    for i in space.sphere(depth):
        if not viable(i):
            continue
        vals = restriction_at_index(space, i, r).values
        entry = classes.setdefault(vals, [None, None])  # [certifying (i, anchor), first i]
        if entry[1] is None:
            entry[1] = i
        if entry[0] is not None:
            continue
        if vals == floor:
            entry[0] = (i, None)
            continue
        for a in sorted(anchors.get(i, ())):
            av = table[a]
            if all(v == f or av[y] == v for y, (v, f) in enumerate(zip(vals, floor))):
                entry[0] = (i, a)
                break

    def branch(i, anchor):
        pts = [i]
        cur = i
        while space.dist[cur] > 0:
            downs = space.down_neighbors(cur)
            if anchor is not None and space.dist[cur] > anchor_level:
                downs = [p for p in downs if anchor in anchors.get(p, ())]
            cur = min(downs)
            pts.append(cur)
        return Ray(points=tuple(reversed(pts)))

    funcs, prov, certs, rays = [], [], [], []
    for vals in sorted(classes):
        cert_info, first = classes[vals]
        funcs.append(RestrictedFunction(r, vals, space))
        if cert_info is not None:
            prov.append("certified")
            certs.append(True)
            rays.append(branch(*cert_info))
        else:
            prov.append("ray-limit")
            certs.append(False)
            rays.append(branch(first, None))
    return BoundaryApprox(
        kind="busemann", radius=r, horizon=R, window=window, functions=tuple(funcs),
        provenance=tuple(prov), certified=tuple(certs), rays=tuple(rays), space=space)


@dataclass
class ClassificationReport:
    radius: int
    matched: list[int]
    unmatched: list[int]
    matched_by: dict[int, int]

    @property
    def all_busemann(self) -> bool:
        return not self.unmatched

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "matched": self.matched,
            "unmatched": self.unmatched,
            "matched_by": {str(k): v for k, v in sorted(self.matched_by.items())},
            "all_busemann": self.all_busemann,
        }


def classify_boundary(annulus: BoundaryApprox, busemann: BoundaryApprox) -> ClassificationReport:
    """Split annulus functions into those hit by a certified ray limit and the rest."""
    if annulus.radius != busemann.radius:
        raise RadiusMismatch(f"radii differ: {annulus.radius} vs {busemann.radius}")
    certified = {h.values: j for j, (h, c) in enumerate(zip(busemann.functions, busemann.certified)) if c}
    matched, unmatched, by = [], [], {}
    for i, h in enumerate(annulus.functions):
        if h.values in certified:
            matched.append(i)
            by[i] = certified[h.values]
        else:
            unmatched.append(i)
    return ClassificationReport(annulus.radius, matched, unmatched, by)


def floor_witnesses(space, h: RestrictedFunction) -> dict[int, int | None]:
    """For each radius ``rho <= r`` some index with ``h(x) = -|x| = -rho``."""
    out: dict[int, int | None] = {}
    for rho in range(h.radius + 1):
        out[rho] = next((i for i in space.sphere(rho) if h.values[i] == -rho), None)
    return out


def function_order(functions: Sequence[RestrictedFunction]) -> list[int]:
    return sorted(range(len(functions)), key=lambda i: functions[i].values)
