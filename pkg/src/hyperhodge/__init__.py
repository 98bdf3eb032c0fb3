"""Exact invariants of classical and GKZ hypergeometric differential systems.

Calculators for irreducibility, singularity profiles, regular and irregular
Hodge spectra, the rescaled-module connection and V-filtration, and the
GKZ-to-classical reduction, all over exact rational arithmetic and each
cross-checked by an independent operator-rewriting kernel.
"""

from .errors import (BlockShapeError, DegenerateHullError, DomainError,
                     NotInLatticeError, ParseError, ReducibleError, SizeError)
from .exact import IntMat, Rat, ceil_rat, det, kernel_basis, rank, snf
from .gkz import (AssumptionReport, GaleData, GkzSystem, Polytope,
                  ReductionResult, check_assumptions, convex_hull, gale_dual,
                  gkz_rees_generators, holonomic_rank, lattice_binomials,
                  matrix_for_hyper, normalized_volume, params_from_gale,
                  reduce_to_hyper)
from .hodge import (FiltrationStep, HodgeSpectrum, fedorov_numbers,
                    filtration_shift, irregular_filtration,
                    irregular_hodge_numbers, qbar_operators,
                    unnormalized_jumps)
from .hyper import (HypergeometricParams, SingularityProfile,
                    hypergeometric_operator, is_irreducible, kummer_twist,
                    normalize_params, parse_params, singularity_profile)
from .ore import (IdealGenerators, LambdaPoly, OrePoly, format_lambda_op,
                  format_op, normal_form, op_mul, substitute)
from .rescale import (ConnectionMatrices, GradedPiece, IrregularContext,
                      VFiltrationStep, classical_restriction,
                      connection_matrices, curvature_check, graded_piece,
                      jordan_block_sizes, q_basis, rees_pair,
                      rescaled_generators, v_step, verify_connection)
from .verify import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport", "BlockShapeError", "CheckResult",
    "ConnectionMatrices", "DegenerateHullError", "DomainError",
    "FiltrationStep", "GaleData", "GkzSystem", "GradedPiece",
    "HodgeSpectrum", "HypergeometricParams", "IdealGenerators", "IntMat",
    "IrregularContext", "LambdaPoly", "NotInLatticeError", "OrePoly",
    "ParseError", "Polytope", "Rat", "ReducibleError", "ReductionResult",
    "SingularityProfile", "SizeError", "VFiltrationStep", "ceil_rat",
    "check_assumptions", "classical_restriction", "connection_matrices",
    "convex_hull", "curvature_check", "det", "fedorov_numbers",
    "filtration_shift", "format_lambda_op", "format_op", "gale_dual",
    "gkz_rees_generators", "graded_piece", "holonomic_rank",
    "hypergeometric_operator", "irregular_filtration",
    "irregular_hodge_numbers", "is_irreducible", "jordan_block_sizes",
    "kernel_basis", "kummer_twist", "lattice_binomials", "matrix_for_hyper",
    "normal_form", "normalize_params", "normalized_volume", "op_mul",
    "params_from_gale", "parse_params", "q_basis", "qbar_operators",
    "rank", "reduce_to_hyper", "rees_pair", "rescaled_generators",
    "run_checks", "singularity_profile", "snf", "substitute",
    "unnormalized_jumps", "v_step", "verify_connection",
]
