"""psi-lambda edge-invariant coordinates on Teichmueller spaces of ideally
triangulated surfaces with boundary."""

from .hexagon import HexGeometry, lengths_from_theta, tangent_law_residual, theta_from_lengths
from .polytope import build_polytope, check_membership, export_hrep, parse_hrep
from .psi import F, M, Metric, PsiVector, forward_map, psi_edge
from .solver import SolveOptions, invert, jacobian
from .triangulation import (
    GluingSpec,
    build_complex,
    enumerate_fundamental_cycles,
    enumerate_fundamental_paths,
    load_complex,
    ring_complex,
    two_hexagon_complex,
)

__all__ = [
    "F", "GluingSpec", "HexGeometry", "M", "Metric", "PsiVector", "SolveOptions",
    "build_complex", "build_polytope", "check_membership", "enumerate_fundamental_cycles",
    "enumerate_fundamental_paths", "export_hrep", "forward_map", "invert", "jacobian",
    "lengths_from_theta", "load_complex", "parse_hrep", "psi_edge", "ring_complex",
    "tangent_law_residual", "theta_from_lengths", "two_hexagon_complex",
]
