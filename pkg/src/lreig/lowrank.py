"""Eigenpairs and Jordan chains of a large product ``a @ b`` recovered from
the small companion product ``b @ a``.

Whenever both products are square their nonzero eigenvalues coincide, with
multiplicities, and eigenvectors transfer as ``v -> a @ v``; the same holds
for Jordan chains at nonzero eigenvalues.  Only eigenvalues transfer this
way: the singular values of ``a @ b`` and ``b @ a`` are unrelated (zero or
nonzero), so nothing here infers singular structure of one product from the
other.

The big ``n x n`` product is never formed; every operation works in
``O(n*r + r^2)`` memory.
"""

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.linalg import LinAlgError

from .densekit import (
    DEFAULT_TOL,
    FLOPS,
    RankDeficiencyWarning,
    as_matrix,
    as_vector,
    eig_dense,
    matmul,
    numeric_rank,
)

__all__ = [
    "FactorPair",
    "EigenResult",
    "JordanChain",
    "small_product",
    "nonzero_filter",
    "lift",
    "lowrank_eig",
    "lift_jordan_chain",
    "residual",
    "chain_defect",
    "flop_model",
    "dense_flop_model",
    "spectral_mismatch",
]


@dataclass(frozen=True)
class FactorPair:
    """Low-rank representation ``x = a @ b`` with ``a`` of shape (n, r) and
    ``b`` of shape (r, n).

    The inner dimension must not exceed the outer one (r <= n); when r > n
    the product ``a @ b`` is already the smaller of the two products and
    should be eigendecomposed directly.
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.a, "factor a")
        b = as_matrix(self.b, "factor b")
        if a.shape[1] != b.shape[0] or a.shape[0] != b.shape[1]:
            raise ValueError(
                f"factors do not compose to a square product: a is "
                f"{a.shape[0]}x{a.shape[1]}, b is {b.shape[0]}x{b.shape[1]}"
            )
        if a.shape[1] > a.shape[0]:
            raise ValueError(
                f"inner dimension r={a.shape[1]} exceeds outer dimension "
                f"n={a.shape[0]}; the product a @ b is already the smaller "
                f"eigenproblem, so solve it directly with eig_dense (or "
                f"refactor at lower rank)"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self):
        return self.a.shape[0]

    @property
    def r(self):
        return self.a.shape[1]

    def norm_scale(self):
        """Frobenius-norm product ``|a|_F * |b|_F`` used to normalize residuals."""
        return float(np.linalg.norm(self.a) * np.linalg.norm(self.b))


@dataclass(frozen=True)
class EigenResult:
    """Nonzero eigenpairs of a factored product.

    eigenvalues
        Complex array of the eigenvalues that survived the zero filter.
    small_vectors
        Eigenvectors of the small product (r x r0), or None.
    vectors
        Lifted eigenvectors of the big product, column i equal to
        ``a @ small_vectors[:, i]``, unnormalized; or None.
    residuals
        Per-column normalized residuals
        ``|a @ (b @ w) - lam * w| / (|a|_F |b|_F |w|)``; or None.
    dropped
        Number of eigenvalues filtered out as numerically zero.
    """

    eigenvalues: np.ndarray
    small_vectors: np.ndarray | None
    vectors: np.ndarray | None
    residuals: np.ndarray | None
    dropped: int

    @property
    def max_residual(self):
        if self.residuals is None or self.residuals.size == 0:
            return 0.0
        return float(self.residuals.max())


@dataclass(frozen=True)
class JordanChain:
    """Chain vectors v1..vk for one Jordan block: ``M v1 = lam v1`` and
    ``M v_{j+1} = lam v_{j+1} + v_j`` against the matrix it is declared for.
    """

    eigenvalue: complex
    vectors: np.ndarray

    def __post_init__(self):
        vectors = as_matrix(self.vectors, "chain vectors")
        if vectors.shape[1] == 0:
            raise ValueError("a Jordan chain needs at least one vector")
        object.__setattr__(self, "eigenvalue", complex(self.eigenvalue))
        object.__setattr__(self, "vectors", vectors)

    @property
    def length(self):
        return self.vectors.shape[1]


def small_product(pair):
    """The r x r product ``b @ a`` (2*n*r^2 model flops)."""
    return matmul(pair.b, pair.a)


def nonzero_filter(eigenvalues, scale, cfg=DEFAULT_TOL):
    """Indices of eigenvalues to treat as nonzero, order preserved.

    Keeps index i when ``|eigenvalues[i]| > zero_eig_atol * scale``; the
    caller normally passes the Frobenius norm of the matrix the eigenvalues
    came from as ``scale``.
    """
    lam = np.asarray(eigenvalues, dtype=np.complex128).ravel()
    scale = float(scale)
    if scale < 0:
        raise ValueError(f"scale must be nonnegative, got {scale}")
    return np.flatnonzero(np.abs(lam) > cfg.zero_eig_atol * scale)


def lift(a, v):
    """Map eigenvectors of the small product to the big one: ``w = a @ v``.

    Columns correspond index-wise to eigenvalues; they are returned exactly
    as ``a @ v``, without renormalization.
    """
    return matmul(a, v)


def residual(pair, eigenvalue, w):
    """Normalized eigenpair residual, computed without forming ``a @ b``.

    ``|a @ (b @ w) - eigenvalue * w| / (|a|_F * |b|_F * |w|)``
    """
    w = as_vector(w, "eigenvector")
    wnorm = float(np.linalg.norm(w))
    if wnorm == 0.0:
        raise ValueError("eigenvector must be nonzero")
    defect = np.linalg.norm(pair.a @ (pair.b @ w) - eigenvalue * w)
    scale = pair.norm_scale() * wnorm
    if scale == 0.0:
        return float(defect)
    return float(defect / scale)


def lowrank_eig(pair, want_vectors=False, cfg=DEFAULT_TOL):
    """Nonzero eigenpairs of ``x = a @ b`` via the small product ``b @ a``.

    Eigendecomposes the r x r product, filters numerically zero eigenvalues
    against ``zero_eig_atol * |b @ a|_F``, and (optionally) lifts the
    surviving eigenvectors as ``w_i = a @ v_i``, attaching per-column
    residual diagnostics.  The n x n product is never formed.

    A ``RankDeficiencyWarning`` is issued when the small product has lower
    numerical rank than r, in which case a lower-rank refactorization (see
    ``factorize.rank_reduce``) is possible.
    """
    if pair.r == 0:
        empty = np.zeros(0, dtype=np.complex128)
        if want_vectors:
            return EigenResult(
                empty,
                np.zeros((0, 0), dtype=np.complex128),
                np.zeros((pair.n, 0), dtype=np.complex128),
                np.zeros(0),
                0,
            )
        return EigenResult(empty, None, None, None, 0)

    small = small_product(pair)
    scale = float(np.linalg.norm(small))
    if numeric_rank(small, cfg) < pair.r:
        warnings.warn(
            "small product b @ a is rank deficient; a lower-rank "
            "refactorization is possible (see factorize.rank_reduce)",
            RankDeficiencyWarning,
            stacklevel=2,
        )
    values, vecs = eig_dense(small, want_vectors)
    keep = nonzero_filter(values, scale, cfg)
    dropped = int(values.size - keep.size)
    kept = values[keep]
    if not want_vectors:
        return EigenResult(kept, None, None, None, dropped)
    v = vecs[:, keep]
    w = lift(pair.a, v)
    res = np.array(
        [residual(pair, kept[i], w[:, i]) for i in range(kept.size)], dtype=np.float64
    )
    return EigenResult(kept, v, w, res, dropped)


def chain_defect(apply_matrix, eigenvalue, vectors, scale):
    """Worst normalized defect of the chain recurrence
    ``M v_j - lam v_j - v_{j-1}`` (with v_0 = 0) over the chain columns.

    ``apply_matrix`` maps a vector to ``M @ vector``; ``scale`` normalizes
    the defect together with each column norm.
    """
    vectors = as_matrix(vectors, "chain vectors")
    worst = 0.0
    for j in range(vectors.shape[1]):
        vj = vectors[:, j]
        d = apply_matrix(vj) - eigenvalue * vj
        if j > 0:
            d = d - vectors[:, j - 1]
        vnorm = float(np.linalg.norm(vj))
        if vnorm == 0.0:
            return float("inf")
        denom = scale * vnorm if scale > 0 else vnorm
        worst = max(worst, float(np.linalg.norm(d) / denom))
    return worst


def lift_jordan_chain(pair, chain, cfg=DEFAULT_TOL):
    """Lift a Jordan chain of ``b @ a`` at a nonzero eigenvalue to one of
    ``a @ b``.

    The input chain (v1..vk, declared against the small product) is checked
    against the chain recurrence, then mapped to ``a @ v1 .. a @ vk``.  The
    lifted vectors are verified to keep full column rank k and to satisfy
    the recurrence against the big product, evaluated without forming it.

    Chains at a numerically zero eigenvalue are rejected: zero-eigenvalue
    block sizes change between the two products, so use the ``jordan``
    module (``predict_zero_structure`` / ``verify_structure``) instead.
    """
    small = small_product(pair)
    scale = float(np.linalg.norm(small))
    lam = complex(chain.eigenvalue)
    if abs(lam) <= cfg.zero_eig_atol * scale:
        raise ValueError(
            f"chain eigenvalue {lam} is numerically zero; zero-eigenvalue "
            f"structure does not lift unchanged -- use the jordan module "
            f"(predict_zero_structure / verify_structure)"
        )
    if chain.vectors.shape[0] != pair.r:
        raise ValueError(
            f"chain vectors have {chain.vectors.shape[0]} rows but the small "
            f"product is {pair.r}x{pair.r}"
        )
    defect = chain_defect(lambda v: small @ v, lam, chain.vectors, scale)
    if defect > cfg.residual_rtol:
        raise ValueError(
            f"chain is not valid against b @ a: recurrence defect {defect:.3e} "
            f"exceeds {cfg.residual_rtol:g}"
        )
    lifted = lift(pair.a, chain.vectors)
    k = chain.length
    if numeric_rank(lifted, cfg) < k:
        raise LinAlgError(
            f"lifted chain lost column rank (< {k}): factor a does not have "
            f"full column rank"
        )
    big_scale = pair.norm_scale()
    defect = chain_defect(
        lambda v: pair.a @ (pair.b @ v), lam, lifted, big_scale
    )
    if defect > cfg.residual_rtol:
        raise LinAlgError(
            f"lifted chain fails the recurrence against a @ b: defect "
            f"{defect:.3e} exceeds {cfg.residual_rtol:g}"
        )
    return JordanChain(lam, lifted)


# c in the cost model 2nr^2 + c*r^3, keyed by (symmetric, want_vectors).
_SMALL_EIG_COST = {
    (False, False): Fraction(9),
    (True, False): Fraction(4, 3),
    (False, True): Fraction(25),
    (True, True): Fraction(9),
}


def flop_model(n, r, symmetric=False, want_vectors=False):
    """Model flop count ``2*n*r^2 + c*r^3`` for the factored eigensolve.

    ``c`` is 4/3 (symmetric) or 9 (general) for eigenvalues only, and 9 or
    25 when eigenvectors are also requested.  The result is reported as the
    nearest integer.
    """
    n = int(n)
    r = int(r)
    if n < 1 or r < 1:
        raise ValueError(f"dimensions must be positive, got n={n}, r={r}")
    if r > n:
        raise ValueError(f"inner dimension r={r} exceeds n={n}")
    c = _SMALL_EIG_COST[(bool(symmetric), bool(want_vectors))]
    return int(round(2 * n * r * r + c * r**3))


def dense_flop_model(n, symmetric=False, want_vectors=False):
    """Model flop count ``c*n^3`` for eigendecomposing the full matrix."""
    n = int(n)
    if n < 1:
        raise ValueError(f"dimension must be positive, got n={n}")
    c = _SMALL_EIG_COST[(bool(symmetric), bool(want_vectors))]
    return int(round(c * n**3))


def spectral_mismatch(x, y):
    """Largest pair distance between two same-length spectra.

    Both spectra are sorted lexicographically by (real, imag); each value of
    the first is then greedily paired with the nearest unused value of the
    second.  Returns the largest absolute pair distance, so two spectra
    agree as multisets to tolerance ``tol`` iff the result is <= ``tol``.
    """
    xs = np.sort_complex(np.asarray(x, dtype=np.complex128).ravel())
    ys = np.sort_complex(np.asarray(y, dtype=np.complex128).ravel())
    if xs.size != ys.size:
        raise ValueError(
            f"spectra have different sizes: {xs.size} versus {ys.size}"
        )
    if xs.size == 0:
        return 0.0
    used = np.zeros(ys.size, dtype=bool)
    worst = 0.0
    for a in xs:
        dist = np.abs(ys - a)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        used[j] = True
        worst = max(worst, float(dist[j]))
    return worst
