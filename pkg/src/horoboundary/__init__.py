"""Finite-radius horofunction and Busemann boundaries of Cayley graphs."""

from .cayley import Ball, geodesic_to, geodesic_tree, grow_ball, verify_geodesic
from .groups import (Element, GeneratingSet, GroupSpec, make_group, parse_group,
                     symmetrize_generators)
from .horo import (BoundaryApprox, Certificate, Ray, RestrictedFunction,
                   annulus_boundary_approx, busemann_restriction, classify_boundary,
                   enumerate_busemann_points, ray_limit, rays_equivalent)

__all__ = [
    "Ball", "BoundaryApprox", "Certificate", "Element", "GeneratingSet", "GroupSpec", "Ray",
    "RestrictedFunction", "annulus_boundary_approx", "busemann_restriction",
    "classify_boundary", "enumerate_busemann_points", "geodesic_to", "geodesic_tree",
    "grow_ball", "make_group", "parse_group", "ray_limit", "rays_equivalent",
    "symmetrize_generators", "verify_geodesic",
]
