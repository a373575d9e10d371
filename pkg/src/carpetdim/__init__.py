"""Self-affine carpets with a non-unique measure of full dimension.

From a single curvature input B > 2 the package synthesizes parameters for a
planar self-affine carpet whose dimension objective attains its maximum at
two distinct Bernoulli measures, certifies that fact numerically, and builds,
renders, and samples the resulting attractor.
"""

from .carpet import (AffineMap, BoxCountReport, GeometryError, IfsSpec,
                     box_count, build_ifs, chaos_game, depth_rectangles,
                     hausdorff_dimension, rasterize)
from .construct import (ConstructionError, ConstructionOptions,
                        FeasibilityReport, choose_alphabet, compute_A,
                        compute_lambda, compute_U, compute_V, synthesize,
                        validate_feasibility)
from .entropy import (CarpetSpec, DerivedConstants, binary_entropy, curvature,
                      gap_g, majorant_F, objective_f, objective_f_prime,
                      pressure_bernoulli, shannon_entropy,
                      uniform_conditional_weights)
from .maximize import (MaximizerReport, global_maxima, golden_section_max,
                       simplex_bruteforce, verify_gap_nonpositive)

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "BoxCountReport",
    "CarpetSpec",
    "ConstructionError",
    "ConstructionOptions",
    "DerivedConstants",
    "FeasibilityReport",
    "GeometryError",
    "IfsSpec",
    "MaximizerReport",
    "binary_entropy",
    "box_count",
    "build_ifs",
    "chaos_game",
    "choose_alphabet",
    "compute_A",
    "compute_U",
    "compute_V",
    "compute_lambda",
    "curvature",
    "depth_rectangles",
    "gap_g",
    "global_maxima",
    "golden_section_max",
    "hausdorff_dimension",
    "majorant_F",
    "objective_f",
    "objective_f_prime",
    "pressure_bernoulli",
    "rasterize",
    "shannon_entropy",
    "simplex_bruteforce",
    "synthesize",
    "uniform_conditional_weights",
    "validate_feasibility",
    "verify_gap_nonpositive",
]
