"""Exact Jordan matrix rings over commutative involutive rings, and
reconstruction of the implementing element of 2-local and local derivations."""
from .ring import (
    GAUSSIAN, RATIONAL, Ring, RingId, RingValue, fixed_decompose, make_ring,
    parse_ring_id, polynomial, prime_field, star,
)
from .matrix import (
    HermitianMatrix, SquareMatrix, adjoint, commutator, component, corner_compress,
    hermitian_spanning_set, identity, is_self_adjoint, is_skew_adjoint,
    jordan_product, matrix_unit, peirce, skew_spanning_set, sym_unit, zeros,
)
from .derivation import (
    DerivationReport, InnerDerivation, JordanPairDerivation, apply_inner,
    apply_jordan_pairs, check_derivation, reduce_to_commutator,
)
from .solver import NoSolution, SolutionSpace, check_local, check_two_local, find_witness
from .reconstruct import (
    NotJointlyInner, ReconstructionResult, TwoLocalOracle, VerificationFailed,
    oracle_from_inner, reconstruct_local, reconstruct_two_local,
)
from .mapalg import (
    OmegaMap, SpatialDerivation, WeightedChain, reconstruct_local_spatial,
    reconstruct_two_local_spatial,
)

__version__ = "0.1.0"

__all__ = [
    "GAUSSIAN", "RATIONAL", "Ring", "RingId", "RingValue", "fixed_decompose", "make_ring",
    "parse_ring_id", "polynomial", "prime_field", "star",
    "HermitianMatrix", "SquareMatrix", "adjoint", "commutator", "component", "corner_compress",
    "hermitian_spanning_set", "identity", "is_self_adjoint", "is_skew_adjoint",
    "jordan_product", "matrix_unit", "peirce", "skew_spanning_set", "sym_unit", "zeros",
    "DerivationReport", "InnerDerivation", "JordanPairDerivation", "apply_inner",
    "apply_jordan_pairs", "check_derivation", "reduce_to_commutator",
    "NoSolution", "SolutionSpace", "check_local", "check_two_local", "find_witness",
    "NotJointlyInner", "ReconstructionResult", "TwoLocalOracle", "VerificationFailed",
    "oracle_from_inner", "reconstruct_local", "reconstruct_two_local",
    "OmegaMap", "SpatialDerivation", "WeightedChain", "reconstruct_local_spatial",
    "reconstruct_two_local_spatial",
]
