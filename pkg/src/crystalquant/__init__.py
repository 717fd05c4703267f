"""crystalquant: 2D Wasserstein quantization workbench.

Centroidal Laguerre tessellations for the entropy-penalized quantization
energy, crystallization diagnostics against the triangular lattice, and an
independent re-verification of the numerical bounds behind the asymptotic
optimality of the hexagonal tiling.
"""

from .energy_model import (
    ALPHA_BAR,
    C6,
    C_INF,
    KAPPA,
    c_n,
    dm_h_alpha,
    dm_h_one,
    dn_c_n,
    g_alpha,
    h_alpha,
    h_one,
    hexagon_reference_distances,
)
from .errors import (
    DegeneratePolygon,
    DomainError,
    DuplicateSite,
    EmptyCellWarning,
    EmptyInput,
    InternalError,
    InvalidOrder,
    PartitionGapError,
    VerificationFailure,
)
from .geometry import (
    ConvexPolygon,
    HalfPlane,
    area,
    centroid,
    clip_halfplane,
    contains,
    diameter,
    edge_count,
    regular_ngon,
    scaled,
    second_moment_about,
    unit_square,
)
from .laguerre import (
    LaguerreDiagram,
    WeightedSite,
    laguerre_diagram,
    neighbor_graph,
    voronoi_diagram,
)
from .lloyd_solver import (
    LatticePerturbed,
    RandomUniform,
    SolveResult,
    SolverConfig,
    adapt_particle_count,
    init_configuration,
    interior_mass_violations,
    lloyd_step,
    multistart,
    solve,
)
from .quantization import (
    Configuration,
    EnergyBreakdown,
    Frame,
    config_energy,
    constrained_ratio,
    defect,
    heuristic_delta,
    merge_delta,
    optimal_weights,
    partition_energy,
    rescale_volume,
    rescaled_ratio,
)
from .stability import StabilityReport, analyze, configuration_defect
from .svg_render import render_diagram
from .verification import (
    Claim,
    VerificationReport,
    check_alpha_one,
    check_convexity_brackets,
    check_corollary_convexity,
    check_mass_lower_bound_chain,
    check_shape_and_tail,
    compute_xi,
    run_all,
)

__version__ = "0.1.0"
