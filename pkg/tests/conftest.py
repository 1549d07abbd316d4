import functools

from horoboundary import grow_ball, make_group, parse_group, symmetrize_generators


@functools.lru_cache(maxsize=None)
def cached_ball(group: str, gens: tuple = (), r_max: int = 10):
    G = make_group(parse_group(group))
    return grow_ball(G, symmetrize_generators(G, gens), r_max)


def as_dict(space, values):
    """Restriction values keyed by raw element value."""
    return {space.elements[i]: v for i, v in enumerate(values)}
