"""Eigenvalues, eigenvectors, and Jordan structure of large low-rank matrix
products, computed from the small companion product and lifted back."""

from .densekit import (
    DEFAULT_TOL,
    FLOPS,
    FlopCounter,
    RankDeficiencyWarning,
    Tolerances,
    cholesky,
    eig_dense,
    matmul,
    numeric_rank,
    svd,
    symmetric_eig,
)
from .factorize import rank_reduce, symmetric_factor, truncated_svd_factor
from .jordan import (
    AmbiguousRankError,
    JordanStructure,
    StabilizationError,
    StructureCheck,
    StructurePrediction,
    WeyrSequence,
    blocks_from_weyr,
    predict_zero_structure,
    rank_one_chain,
    verify_structure,
    weyr_sequence,
    zero_structure,
)
from .lowrank import (
    EigenResult,
    FactorPair,
    JordanChain,
    dense_flop_model,
    flop_model,
    lift,
    lift_jordan_chain,
    lowrank_eig,
    nonzero_filter,
    residual,
    small_product,
    spectral_mismatch,
)
from .mmio import read_matrix_market, write_matrix_market
from .report import RunReport
from .symmetric import (
    ReducedSymmetric,
    SignDiagonal,
    SymmetricFactorization,
    apply_congruence,
    generalized_spd_eig,
    reduce_to_sign,
    symmetric_lowrank_eig,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousRankError",
    "DEFAULT_TOL",
    "EigenResult",
    "FLOPS",
    "FactorPair",
    "FlopCounter",
    "JordanChain",
    "JordanStructure",
    "RankDeficiencyWarning",
    "ReducedSymmetric",
    "RunReport",
    "SignDiagonal",
    "StabilizationError",
    "StructureCheck",
    "StructurePrediction",
    "SymmetricFactorization",
    "Tolerances",
    "WeyrSequence",
    "apply_congruence",
    "blocks_from_weyr",
    "cholesky",
    "dense_flop_model",
    "eig_dense",
    "flop_model",
    "generalized_spd_eig",
    "lift",
    "lift_jordan_chain",
    "lowrank_eig",
    "matmul",
    "nonzero_filter",
    "numeric_rank",
    "predict_zero_structure",
    "rank_one_chain",
    "rank_reduce",
    "read_matrix_market",
    "reduce_to_sign",
    "residual",
    "small_product",
    "spectral_mismatch",
    "svd",
    "symmetric_eig",
    "symmetric_factor",
    "symmetric_lowrank_eig",
    "truncated_svd_factor",
    "verify_structure",
    "weyr_sequence",
    "write_matrix_market",
    "zero_structure",
]
