"""Rigorous upper bounds for error-correcting codes.

Symmetry-reduced linear and semidefinite programs over Hamming spaces,
Hamming balls and projective spaces, with exact rational certification
of every semidefinite bound.
"""

from .blockdiag import BlockKernel, KernelLevel, build_kernel, validate_kernel_small
from .bounds import (
    BoundResult,
    ball_sdp_bound,
    delsarte_equivalence_gap,
    delsarte_lp_bound,
    projective_sdp_bound,
    reduced_theta_prime,
    theta_bound,
    triple_sdp_bound,
    unsymmetrized_theta_prime,
)
from .exactmath import binomial, gaussian_binomial, hahn, krawtchouk
from .schemes import (
    Graph,
    PairOrbit,
    SpaceSpec,
    avg_radial,
    distance_graph,
    ghd,
    graph_alpha_bruteforce,
    graph_chromatic_bruteforce,
    pair_orbits,
    radial,
    space_points,
)
from .solvers import SdpProblem, SdpSolution, solve_lp_exact, solve_sdp

__version__ = "0.1.0"

__all__ = [
    "BlockKernel",
    "BoundResult",
    "Graph",
    "KernelLevel",
    "PairOrbit",
    "SdpProblem",
    "SdpSolution",
    "SpaceSpec",
    "avg_radial",
    "ball_sdp_bound",
    "binomial",
    "build_kernel",
    "delsarte_equivalence_gap",
    "delsarte_lp_bound",
    "distance_graph",
    "gaussian_binomial",
    "ghd",
    "graph_alpha_bruteforce",
    "graph_chromatic_bruteforce",
    "hahn",
    "krawtchouk",
    "pair_orbits",
    "projective_sdp_bound",
    "q_krawtchouk",
    "radial",
    "reduced_theta_prime",
    "solve_lp_exact",
    "solve_sdp",
    "space_points",
    "theta_bound",
    "triple_sdp_bound",
    "unsymmetrized_theta_prime",
    "validate_kernel_small",
]
