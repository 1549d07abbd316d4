"""Translate kernel elements by powers of a fixed element and compare the
limits, in Z x C3 with standard and with diagonal generators.

With diagonal generators the element x = a has length 1 and the torsion
kernel elements give the same limit as the identity.
"""

from horoboundary import annulus_boundary_approx, grow_ball, make_group, parse_group
from horoboundary import symmetrize_generators
from horoboundary.action import kernel_injectivity_probe


def probe(gens):
    G = make_group(parse_group("Z x C3"))
    S = symmetrize_generators(G, gens)
    ball = grow_ball(G, S, 20)
    A = annulus_boundary_approx(ball, 4)
    x = G.evaluate("a")
    h = next(f for f in A.functions if f(x) == 1)
    return kernel_injectivity_probe(ball, h, x, S, r=2)


if __name__ == "__main__":
    for gens in [(), ("ab", "abb")]:
        rep = probe(gens)
        print(f"generators {list(rep.u_labels)}")
        print(f"  kernel sample {rep.samples}")
        print(f"  limits differ from x^t: {rep.limits_differ}")
        print(f"  distinct limits {rep.distinct_limits}, Busemann estimate {rep.busemann_estimate}")
