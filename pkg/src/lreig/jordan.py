"""Zero-eigenvalue Jordan structure of a factored product.

At nonzero eigenvalues the Jordan block sizes of ``a @ b`` and ``b @ a``
coincide, but at zero they do not: when both factors have full rank r, every
zero block of the small product grows by exactly one in the big product, and
the remaining null directions contribute 1x1 blocks.  This module measures
block structure through the nullity sequence of matrix powers (the Weyr
characteristic), predicts the big product's zero structure from the small
one, and verifies the prediction by brute force at desk scale.

Jordan structure is discontinuous in the matrix entries, so measurement is
restricted to matrices whose rank decisions are unambiguous: any singular
value falling inside a guard band around the rank cutoff makes the routines
refuse rather than guess.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.linalg import LinAlgError

from .densekit import DEFAULT_TOL, EPS, as_matrix, as_vector, matmul
from .lowrank import JordanChain, small_product

__all__ = [
    "AmbiguousRankError",
    "StabilizationError",
    "WeyrSequence",
    "JordanStructure",
    "StructurePrediction",
    "StructureCheck",
    "guarded_rank",
    "weyr_sequence",
    "blocks_from_weyr",
    "zero_structure",
    "predict_zero_structure",
    "verify_structure",
    "rank_one_chain",
]

# Singular values within [GUARD_LOW, GUARD_HIGH] times the rank cutoff make
# rank decisions ambiguous; structure measurement refuses such inputs.
GUARD_LOW = 0.01
GUARD_HIGH = 100.0

# Default relative rank cutoff for structure measurement.  The generic
# max(shape)*eps cutoff would put LAPACK's O(eps)*sigma_1 rounding junk on
# exactly singular matrices inside the guard band; sqrt(eps) leaves at least
# two orders of margin on both sides for integer-friendly fixtures.  An
# explicitly configured rank_rtol is honored as given.
STRUCTURE_RANK_RTOL = float(np.sqrt(EPS))

# Brute-force verification densifies the big product; keep it at desk scale.
MAX_DENSE_DIM = 200


class AmbiguousRankError(LinAlgError):
    """A singular value fell inside the guard band around the rank cutoff,
    so no trustworthy rank decision exists."""


class StabilizationError(RuntimeError):
    """The nullity sequence failed to stabilize within the allowed number of
    powers; carries the partial sequence."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = tuple(partial)


@dataclass(frozen=True)
class WeyrSequence:
    """Nullities of successive powers ``(m - lam*I)^j`` up to stabilization.

    The sequence is strictly increasing until its final value, which may be
    repeated once to witness stabilization, and its first differences are
    nonincreasing (each difference counts the blocks of size >= j).
    """

    eigenvalue: complex
    nullities: tuple

    def __post_init__(self):
        nullities = tuple(int(w) for w in self.nullities)
        if not nullities:
            raise ValueError("nullity sequence must be nonempty")
        if any(w < 1 for w in nullities):
            raise ValueError(f"nullities must be positive, got {nullities}")
        diffs = np.diff((0,) + nullities)
        if any(d < 0 for d in diffs):
            raise ValueError(f"nullity sequence must be nondecreasing: {nullities}")
        if any(diffs[j + 1] > diffs[j] for j in range(len(diffs) - 1)):
            raise ValueError(
                f"first differences must be nonincreasing (they count blocks "
                f"of size >= j): {nullities}"
            )
        if any(d == 0 for d in diffs[:-1]):
            raise ValueError(
                f"sequence must be strictly increasing until the final "
                f"repeated value: {nullities}"
            )
        object.__setattr__(self, "eigenvalue", complex(self.eigenvalue))
        object.__setattr__(self, "nullities", nullities)


@dataclass(frozen=True)
class JordanStructure:
    """Multiset of Jordan block sizes at one eigenvalue, sorted descending.

    The number of blocks is the geometric multiplicity; their sum is the
    algebraic multiplicity.  An empty size list means the eigenvalue is
    absent.
    """

    eigenvalue: complex
    block_sizes: tuple

    def __post_init__(self):
        sizes = tuple(sorted((int(k) for k in self.block_sizes), reverse=True))
        if any(k < 1 for k in sizes):
            raise ValueError(f"block sizes must be positive, got {sizes}")
        object.__setattr__(self, "eigenvalue", complex(self.eigenvalue))
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def geometric_multiplicity(self):
        return len(self.block_sizes)

    @property
    def algebraic_multiplicity(self):
        return sum(self.block_sizes)


@dataclass(frozen=True)
class StructurePrediction:
    """Predicted zero-eigenvalue structure of the big product, derived from
    the measured structure of the small one.

    For full-rank factors the prediction has exactly ``n - r`` blocks: each
    of the ``l`` zero blocks of the small product grown by one, plus
    ``n - r - l`` singleton blocks.
    """

    predicted: JordanStructure
    source: JordanStructure
    n: int
    r: int

    def __post_init__(self):
        ell = self.source.geometric_multiplicity
        spare = self.n - self.r
        if self.predicted.geometric_multiplicity != spare:
            raise ValueError(
                f"prediction must contain exactly n - r = {spare} blocks, got "
                f"{self.predicted.geometric_multiplicity}"
            )
        expected_sum = spare + self.source.algebraic_multiplicity
        if self.predicted.algebraic_multiplicity != expected_sum:
            raise ValueError(
                f"predicted sizes must sum to (n - r) + sum(source) = "
                f"{expected_sum}, got {self.predicted.algebraic_multiplicity}"
            )
        del ell


class StructureCheck(NamedTuple):
    predicted: StructurePrediction
    measured: JordanStructure
    match: bool


def guarded_rank(m, cfg=DEFAULT_TOL):
    """Numerical rank, refusing to decide when any singular value falls in
    the guard band ``[GUARD_LOW, GUARD_HIGH] * cutoff``.

    Unless ``cfg.rank_rtol`` is set explicitly, the cutoff is
    ``STRUCTURE_RANK_RTOL * sigma_1``, coarser than the generic SVD cutoff
    so that rounding-level singular values of exactly singular matrices fall
    clearly below the band instead of inside it.
    """
    m = as_matrix(m)
    if min(m.shape) == 0:
        return 0
    sigma = np.linalg.svd(m, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    rtol = cfg.rank_rtol if cfg.rank_rtol is not None else STRUCTURE_RANK_RTOL
    cutoff = rtol * float(sigma[0])
    in_band = (sigma >= GUARD_LOW * cutoff) & (sigma <= GUARD_HIGH * cutoff)
    if in_band.any():
        offender = float(sigma[in_band][0])
        raise AmbiguousRankError(
            f"singular value {offender:.3e} lies inside the ambiguity band "
            f"[{GUARD_LOW * cutoff:.3e}, {GUARD_HIGH * cutoff:.3e}] around the "
            f"rank cutoff; rank decision refused"
        )
    return int(np.count_nonzero(sigma > cutoff))


def weyr_sequence(m, eigenvalue, cfg=DEFAULT_TOL, kmax=None):
    """Nullity sequence of ``(m - eigenvalue*I)^j`` for j = 1, 2, ...

    Powers are built by repeated multiplication (rescaled to unit Frobenius
    norm to avoid overflow; rescaling leaves ranks unchanged) and the rank
    of each power is measured from the power itself.  Iteration stops once
    the nullity stabilizes or saturates the dimension; failing to stabilize
    within ``kmax`` powers (default n + 1) raises ``StabilizationError``
    carrying the partial sequence.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got {m.shape[0]}x{m.shape[1]}")
    n = m.shape[0]
    if kmax is None:
        kmax = n + 1
    kmax = int(kmax)
    if kmax < 1:
        raise ValueError(f"kmax must be at least 1, got {kmax}")
    p = m - eigenvalue * np.eye(n, dtype=m.dtype)
    power = p.copy()
    nullities = []
    for j in range(1, kmax + 1):
        w = n - guarded_rank(power, cfg)
        if j == 1 and w == 0:
            raise ValueError(
                f"{eigenvalue!r} is not a numerical eigenvalue: the first "
                f"power already has full rank"
            )
        nullities.append(w)
        if j >= 2 and (w == nullities[-2] or w == n):
            return WeyrSequence(eigenvalue, tuple(nullities))
        power = power @ p
        nrm = np.linalg.norm(power)
        if nrm > 0:
            power = power / nrm
    raise StabilizationError(
        f"nullity sequence did not stabilize within {kmax} powers: "
        f"{tuple(nullities)}",
        nullities,
    )


def blocks_from_weyr(w):
    """Convert a nullity sequence into Jordan block sizes (the conjugate
    partition): the j-th first difference counts the blocks of size >= j.

    Malformed sequences are rejected by ``WeyrSequence`` validation.
    """
    nullities = w.nullities
    diffs = [nullities[0]] + [
        nullities[j] - nullities[j - 1] for j in range(1, len(nullities))
    ]
    sizes = []
    for j, d in enumerate(diffs, start=1):
        nxt = diffs[j] if j < len(diffs) else 0
        sizes.extend([j] * (d - nxt))
    return JordanStructure(w.eigenvalue, tuple(sizes))


def zero_structure(m, cfg=DEFAULT_TOL, kmax=None):
    """Jordan structure of a square matrix at eigenvalue zero; empty when
    the matrix has full numerical rank."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got {m.shape[0]}x{m.shape[1]}")
    if m.shape[0] == 0 or guarded_rank(m, cfg) == m.shape[0]:
        return JordanStructure(0.0, ())
    return blocks_from_weyr(weyr_sequence(m, 0.0, cfg, kmax))


def predict_zero_structure(n, r, ba_zero):
    """Predict the zero-eigenvalue Jordan structure of the big product from
    the measured structure of the small one.

    With full-rank factors, every zero block of the small product (sizes
    k1..kl) grows by one, and ``n - r - l`` singleton blocks fill the rest
    of the null space, giving exactly ``n - r`` blocks in total.  More zero
    blocks than spare dimensions (l > n - r) is impossible for full-rank
    factors, so such input is rejected.
    """
    n = int(n)
    r = int(r)
    if n < 1 or r < 0 or r > n:
        raise ValueError(f"need 0 <= r <= n with n positive, got n={n}, r={r}")
    if ba_zero.eigenvalue != 0:
        raise ValueError(
            f"source structure must be at eigenvalue 0, got "
            f"{ba_zero.eigenvalue!r}"
        )
    if ba_zero.algebraic_multiplicity > r:
        raise ValueError(
            f"source block sizes sum to {ba_zero.algebraic_multiplicity}, "
            f"which exceeds the small dimension r={r}"
        )
    ell = ba_zero.geometric_multiplicity
    if ell > n - r:
        raise ValueError(
            f"{ell} zero blocks in the small product but only n - r = "
            f"{n - r} spare dimensions: the factors cannot both have full "
            f"rank r (rank(a) = rank(b) = r is required)"
        )
    sizes = tuple(k + 1 for k in ba_zero.block_sizes) + (1,) * (n - r - ell)
    return StructurePrediction(JordanStructure(0.0, sizes), ba_zero, n, r)


def verify_structure(pair, cfg=DEFAULT_TOL, kmax=None):
    """Predict the big product's zero structure from the small product and
    check it against a brute-force measurement.

    Returns ``StructureCheck(predicted, measured, match)``.  The big product
    is formed explicitly, so the outer dimension is capped at
    ``MAX_DENSE_DIM``; both factors must have full (unambiguous) rank r.
    """
    n, r = pair.n, pair.r
    if n > MAX_DENSE_DIM:
        raise ValueError(
            f"verification densifies the {n}x{n} product; refusing beyond "
            f"n={MAX_DENSE_DIM}"
        )
    rank_a = guarded_rank(pair.a, cfg)
    rank_b = guarded_rank(pair.b, cfg)
    if rank_a < r or rank_b < r:
        raise ValueError(
            f"structure prediction requires full-rank factors "
            f"(rank(a) = rank(b) = r = {r}), got rank(a) = {rank_a}, "
            f"rank(b) = {rank_b}; reduce the rank first"
        )
    ba_zero = zero_structure(small_product(pair), cfg, kmax)
    predicted = predict_zero_structure(n, r, ba_zero)
    measured = zero_structure(matmul(pair.a, pair.b), cfg, kmax)
    match = predicted.predicted.block_sizes == measured.block_sizes
    return StructureCheck(predicted, measured, match)


def rank_one_chain(a, b, cfg=DEFAULT_TOL):
    """Length-2 zero-eigenvalue Jordan chain of the rank-one matrix
    ``outer(a, b)`` built from orthogonal vectors.

    When ``b^T a = 0`` the matrix ``m = outer(a, b)`` annihilates ``a`` but
    maps ``b`` to ``kappa * a`` with ``kappa = b^T b``, so ``[a, b/kappa]``
    is a chain with unit coupling: ``m @ a = 0`` and ``m @ (b/kappa) = a``.
    Non-orthogonal inputs are rejected with the offending inner product.
    """
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    if a.size != b.size:
        raise ValueError(f"vectors differ in length: {a.size} versus {b.size}")
    anorm = float(np.linalg.norm(a))
    bnorm = float(np.linalg.norm(b))
    if anorm == 0.0 or bnorm == 0.0:
        raise ValueError("both vectors must be nonzero")
    ip = complex(b @ a)  # plain transpose, matching the rank-one matrix
    if abs(ip) > cfg.zero_eig_atol * anorm * bnorm:
        raise ValueError(
            f"vectors are not orthogonal: b^T a = {ip:.6e} exceeds "
            f"{cfg.zero_eig_atol:g} * |a| * |b|"
        )
    kappa = complex(b @ b)
    if abs(kappa) <= EPS * bnorm**2:
        raise LinAlgError(
            "coupling scalar b^T b vanishes (isotropic vector); the chain "
            "cannot be normalized"
        )
    if not np.iscomplexobj(a) and not np.iscomplexobj(b):
        kappa = kappa.real
    return JordanChain(0.0, np.column_stack([a, b / kappa]))
