"""The group action ``x.h(y) = h(x^-1 y) - h(x^-1)`` on boundary functions.

Radius bookkeeping is explicit: acting by ``x`` needs ``h`` on
``B_{r + |x|}`` and produces a function on ``B_r``.  Kernel and stabilizer
samples are exhaustive over a norm ball and are only ever reported as samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cayley import Ball, geodesic_to, grow_ball, verify_geodesic
from .errors import (DomainTooSmall, HorizonTooSmall, NoFiniteOrbit, OutOfBall, OutOfDomain,
                     PreconditionFailed)
from .groups import Element, GeneratingSet
from .horo import (BoundaryApprox, Certificate, Ray, RestrictedFunction,
                   default_stability_window, enumerate_busemann_points)


def _act(ball: Ball, xi: int, h: RestrictedFunction, r: int) -> tuple[int, ...]:
    g = ball.group
    xinv = g.inv(ball.elements[xi])
    limit = len(h.values)
    index = ball.index
    base_i = index[xinv]
    if base_i >= limit:
        raise DomainTooSmall("x^-1 lies outside the domain of h")
    base = h.values[base_i]
    out = []
    for y in ball.elements[:ball.size(r)]:
        j = index.get(g.mul(xinv, y), limit)
        if j >= limit:
            raise DomainTooSmall("x^-1 y lies outside the domain of h")
        out.append(h.values[j] - base)
    return tuple(out)


def act_on_function(ball: Ball, x, h: RestrictedFunction, r: int | None = None
                    ) -> RestrictedFunction:
    """``(x.h)(y) = h(x^-1 y) - h(x^-1)`` for ``y`` in ``B_r``."""
    xi = ball.index_of(x)
    nx = ball.dist[xi]
    if r is None:
        r = h.radius - nx
    if r < 0 or r + nx > h.radius:
        raise DomainTooSmall(f"acting by |x|={nx} on radius {h.radius} cannot reach radius {r}")
    return RestrictedFunction(r, _act(ball, xi, h, r), ball)


def _fixes(ball: Ball, xi: int, h: RestrictedFunction, r: int) -> bool:
    return _act(ball, xi, h, r) == h.values[:ball.size(r)]


def stabilizer_sample(ball: Ball, h: RestrictedFunction, norm: int) -> list[int]:
    """Indices ``x`` with ``|x| <= norm`` and ``x.h = h`` on ``B_{r - norm}``."""
    r = h.radius - norm
    if r < 0:
        raise DomainTooSmall(f"norm {norm} exceeds function radius {h.radius}")
    return [i for i in range(ball.size(norm)) if _fixes(ball, i, h, r)]


# ---------------------------------------------------------------------------
# orbits


@dataclass
class OrbitReport:
    radius: int
    source_radius: int
    functions: list[RestrictedFunction]
    source: list[RestrictedFunction]
    source_to_function: list[int]
    generator_labels: list[str]
    permutations: list[list[int | None]]
    orbits: list[list[int]]
    closed: bool
    largest_closed_radius: int | None
    stabilizer_norm: int
    stabilizers: dict[int, list[int]] = field(default_factory=dict)
    ball: Ball | None = field(default=None, repr=False)

    @property
    def finite_orbit(self) -> bool:
        return self.closed

    @property
    def orbit_sizes(self) -> list[int]:
        return sorted(len(o) for o in self.orbits)

    def orbit_of(self, h: RestrictedFunction) -> list[int] | None:
        if h.radius < self.radius:
            return None
        vals = h.values[:len(self.functions[0].values)] if self.functions else ()
        for orb in self.orbits:
            if any(self.functions[i].values == vals for i in orb):
                return orb
        return None

    def to_dict(self) -> dict:
        b = self.ball
        return {
            "radius": self.radius,
            "source_radius": self.source_radius,
            "function_count": len(self.functions),
            "generators": self.generator_labels,
            "permutations": self.permutations,
            "orbits": self.orbits,
            "orbit_sizes": self.orbit_sizes,
            "closed": self.closed,
            "finite_orbit": self.finite_orbit,
            "largest_closed_radius": self.largest_closed_radius,
            "stabilizer_norm": self.stabilizer_norm,
            "stabilizer_sample_norms": {
                str(k): [b.dist[i] for i in v] if b is not None else v
                for k, v in sorted(self.stabilizers.items())
            },
        }


def _generator_action(ball: Ball, source: list[RestrictedFunction], gen_idx: list[int], r: int):
    """Action of each generator on the distinct truncations to ``B_r``."""
    truncs = sorted({h.values[:ball.size(r)] for h in source})
    pos = {v: i for i, v in enumerate(truncs)}
    src_map = [pos[h.values[:ball.size(r)]] for h in source]
    perms: list[list[int | None]] = []
    closed = True
    for gi in gen_idx:
        nx = ball.dist[gi]
        perm: list[int | None] = [None] * len(truncs)
        for h, t in zip(source, src_map):
            if r + nx > h.radius:
                raise DomainTooSmall(f"generator of norm {nx} needs radius {r + nx}")
            img = pos.get(_act(ball, gi, h, r))
            if img is None or (perm[t] is not None and perm[t] != img):
                closed = False
            if perm[t] is None:
                perm[t] = img
        if closed and sorted(p for p in perm if p is not None) != list(range(len(truncs))):
            closed = False
        perms.append(perm)
    return truncs, src_map, perms, closed


def _components(n: int, perms) -> list[list[int]]:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for perm in perms:
        for i, j in enumerate(perm):
            if j is not None:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def compute_orbits(ball: Ball, boundary: BoundaryApprox, gens: GeneratingSet | None = None,
                   stabilizer_norm: int | None = None) -> OrbitReport:
    """Orbit partition of the boundary functions under the generators.

    Functions are compared on ``B_r`` with ``r = radius - max |s|``.  When the
    set is not closed under the action the report says so and records the
    largest radius at which it is.
    """
    gens = ball.gens if gens is None else gens
    gen_idx = [ball.index_of(s) for s in gens.members]
    step = max(ball.dist[i] for i in gen_idx)
    source = list(boundary.functions)
    rb = boundary.radius
    r = rb - step
    if r < 0:
        raise DomainTooSmall(f"boundary radius {rb} too small for generators of norm {step}")
    truncs, src_map, perms, closed = _generator_action(ball, source, gen_idx, r)
    largest = r if closed else None
    if not closed:
        for rr in range(r - 1, -1, -1):
            if _generator_action(ball, source, gen_idx, rr)[3]:
                largest = rr
                break
    orbits = _components(len(truncs), perms)
    norm = max(1, rb // 2) if stabilizer_norm is None else stabilizer_norm
    stabs: dict[int, list[int]] = {}
    for orb in orbits:
        rep = next(k for k, t in enumerate(src_map) if t == orb[0])
        stabs[rep] = stabilizer_sample(ball, source[rep], norm)
    return OrbitReport(
        radius=r, source_radius=rb,
        functions=[RestrictedFunction(r, v, ball) for v in truncs],
        source=source, source_to_function=src_map,
        generator_labels=list(gens.labels), permutations=perms, orbits=orbits,
        closed=closed, largest_closed_radius=largest, stabilizer_norm=norm,
        stabilizers=stabs, ball=ball)


# ---------------------------------------------------------------------------
# kernel samples


def _kernel_indices(ball: Ball, boundary: BoundaryApprox, max_norm: int) -> list[int]:
    r = boundary.radius - max_norm
    if r < 1:
        raise DomainTooSmall(f"boundary radius {boundary.radius} leaves nothing to compare "
                             f"at norm {max_norm}")
    funcs = boundary.functions
    return [i for i in range(ball.size(max_norm)) if all(_fixes(ball, i, h, r) for h in funcs)]


def action_kernel_sample(ball: Ball, boundary: BoundaryApprox, max_norm: int) -> list[Element]:
    """Elements of norm at most ``max_norm`` fixing every boundary function."""
    return [ball.element(i) for i in _kernel_indices(ball, boundary, max_norm)]


def f_subgroup_sample(ball: Ball, boundary: BoundaryApprox, max_norm: int) -> list[Element]:
    """Kernel-sample elements on which every boundary function vanishes."""
    return [ball.element(i) for i in _kernel_indices(ball, boundary, max_norm)
            if all(h.values[i] == 0 for h in boundary.functions)]


def psi_map(boundary: BoundaryApprox, x) -> tuple[int, ...]:
    """``(h_1(x), ..., h_d(x))`` in the boundary's sorted function order."""
    out = []
    for h in boundary.functions:
        out.append(h(x))
    return tuple(out)


# ---------------------------------------------------------------------------
# characters


@dataclass
class CharacterReport:
    h: RestrictedFunction
    sample_norm: int
    sample: list[int]
    additivity_checked: int
    additivity_failures: list[tuple[int, int]]
    witness: int | None
    psi: dict[int, tuple[int, ...]]
    ball: Ball | None = field(default=None, repr=False)

    @property
    def homomorphism(self) -> bool:
        return not self.additivity_failures

    def to_dict(self) -> dict:
        b = self.ball
        spell = (lambda i: b.spell(geodesic_to(b, b.elements[i]))) if b is not None else str
        out = {
            "radius": self.h.radius,
            "sample_norm": self.sample_norm,
            "sample_size": len(self.sample),
            "sample_norms": [b.dist[i] for i in self.sample] if b is not None else [],
            "additivity_checked": self.additivity_checked,
            "additivity_failed": len(self.additivity_failures),
            "homomorphism": self.homomorphism,
            "witness": None,
            "psi": {spell(i): list(v) for i, v in sorted(self.psi.items())},
        }
        if self.witness is not None:
            w = self.witness
            out["witness"] = {"word": spell(w), "h": self.h.values[w],
                              "norm": b.dist[w] if b is not None else None}
        return out


def extract_character(ball: Ball, orbit: OrbitReport, h: RestrictedFunction,
                      sample_norm: int | None = None) -> CharacterReport:
    """Check that ``h`` is additive on its stabilizer sample and look for a
    non-trivial ``y`` there with ``h(y) = -|y|``."""
    if not orbit.finite_orbit or orbit.orbit_of(h) is None:
        raise NoFiniteOrbit("h does not lie in a finite orbit at this radius")
    norm = max(1, h.radius // 2) if sample_norm is None else sample_norm
    sample = stabilizer_sample(ball, h, norm)
    g = ball.group
    limit = len(h.values)
    checked, failures = 0, []
    for a in sample:
        for b in sample:
            j = ball.index.get(g.mul(ball.elements[a], ball.elements[b]), limit)
            if j >= limit:
                continue
            checked += 1
            if h.values[j] != h.values[a] + h.values[b]:
                failures.append((a, b))
    witness = next((i for i in sample if i != 0 and h.values[i] == -ball.dist[i]), None)
    psi = {i: tuple(f.values[i] for f in orbit.source) for i in sample}
    return CharacterReport(h, norm, sample, checked, failures, witness, psi, ball)


def power_geodesic_check(ball: Ball, x, h: RestrictedFunction) -> tuple[bool, Ray]:
    """Confirm ``|x^t| = t|x|`` inside the ball and that the periodic word
    ``(geodesic to x)^infinity`` is a geodesic.

    Requires ``h(x) = |x|``, ``h`` 1-Lipschitz on its domain and ``x.h = h``
    (so ``h`` is additive along powers of ``x``).
    """
    xi = ball.index_of(x)
    m = ball.dist[xi]
    if m == 0:
        raise PreconditionFailed("x must not be the identity")
    if xi >= len(h.values):
        raise DomainTooSmall("x lies outside the domain of h")
    if h.values[xi] != m:
        raise PreconditionFailed(f"h(x) = {h.values[xi]} != |x| = {m}")
    n = len(h.values)
    for i in range(n):
        for j in ball.nbr[i]:
            if 0 <= j < n and abs(h.values[i] - h.values[j]) > 1:
                raise PreconditionFailed("h is not 1-Lipschitz")
    if not _fixes(ball, xi, h, h.radius - m):
        raise PreconditionFailed("x does not fix h")
    tmax = ball.r_max // m
    if tmax < 2:
        raise HorizonTooSmall(f"ball radius {ball.r_max} allows fewer than two powers of x")
    g = ball.group
    xv = ball.elements[xi]
    p = g.identity()
    powers_ok = True
    for t in range(1, tmax + 1):
        p = g.mul(p, xv)
        if ball.distance(p) != t * m:
            powers_ok = False
            break
    period = geodesic_to(ball, xv)
    ray = Ray(period=period)
    length = tmax * m
    word = [period[k % m] for k in range(length)]
    try:
        geo_ok = verify_geodesic(ball, word)
    except OutOfBall:
        geo_ok = False
    return powers_ok and geo_ok, ray


@dataclass
class InjectivityReport:
    radius: int
    x_word: str
    u_labels: list[str]
    samples: list[str]
    limits_differ: dict[str, bool]
    certified: dict[str, bool]
    distinct_limits: int
    busemann_estimate: int
    bound_holds: bool

    @property
    def lemma_prediction_holds(self) -> bool:
        return all(v for k, v in self.limits_differ.items() if k != "")

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "x": self.x_word,
            "generators": self.u_labels,
            "kernel_sample": self.samples,
            "limits_differ": self.limits_differ,
            "certified": self.certified,
            "distinct_limits": self.distinct_limits,
            "kernel_sample_size": len(self.samples),
            "busemann_estimate": self.busemann_estimate,
            "bound_holds": self.bound_holds,
            "lemma_prediction_holds": self.lemma_prediction_holds,
        }


def _translate_limit(uball: Ball, g, x, r: int, window: int):
    grp = uball.group
    p = g
    rows = []
    while True:
        i = uball.index.get(p)
        if i is None or uball.dist[i] + r > uball.r_max:
            break
        base = uball.dist[i]
        rows.append(tuple(d - base for d in uball.distances_from(i, r)))
        p = grp.mul(p, x)
    if len(rows) < 2:
        raise HorizonTooSmall("U-ball too small to follow g x^t")
    cert = len(rows) > window and rows[-window - 1] == rows[-1]
    return rows[-1], cert


def kernel_injectivity_probe(ball: Ball, h: RestrictedFunction, x, gens_extended: GeneratingSet,
                             samples: list | None = None, r: int = 2,
                             horizon: int | None = None,
                             stability_window: int | None = None) -> InjectivityReport:
    """Compare the limits of ``g x^t`` and ``x^t`` in the Cayley graph of
    ``U = S + {x, x^-1}`` for ``g`` in the kernel sample of ``h``.

    Distinct limits for every non-trivial ``g`` means ``g -> g.lim x^t`` is
    injective on the sample, so the sample size bounds the Busemann count of
    ``U`` from below.
    """
    ok, _ = power_geodesic_check(ball, x, h)
    if not ok:
        raise PreconditionFailed("power_geodesic_check failed for x")
    grp = ball.group
    xv = x.value if isinstance(x, Element) else x
    if xv not in gens_extended.members:
        raise PreconditionFailed("gens_extended must contain x")
    if samples is None:
        norm = max(1, h.radius // 2)
        samples = [ball.elements[i] for i in stabilizer_sample(ball, h, norm) if h.values[i] == 0]
    else:
        samples = [s.value if isinstance(s, Element) else s for s in samples]
    R = ball.r_max if horizon is None else horizon
    uball = grow_ball(grp, gens_extended, R)
    window = default_stability_window(r) if stability_window is None else stability_window
    base_lim, base_cert = _translate_limit(uball, grp.identity(), xv, r, window)

    def label(v):
        return ball.spell(geodesic_to(ball, v)) if v in ball.index else repr(v)

    differ, certs, lims = {}, {}, set()
    for g in samples:
        lim, cert = _translate_limit(uball, g, xv, r, window)
        key = label(g)
        differ[key] = lim != base_lim
        certs[key] = cert and base_cert
        lims.add(lim)
    est = enumerate_busemann_points(uball, r, stability_window=stability_window).certified_count
    return InjectivityReport(
        radius=r, x_word=label(xv), u_labels=list(gens_extended.labels),
        samples=[label(g) for g in samples], limits_differ=differ, certified=certs,
        distinct_limits=len(lims), busemann_estimate=est,
        bound_holds=len(samples) <= est)
