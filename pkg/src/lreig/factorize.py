"""Producing low-rank factorizations from dense matrices, and reducing the
inner dimension of factorizations that are not full rank.

The factorizers here are deterministic truncated decompositions (SVD for the
general case, a truncated eigendecomposition for the symmetric case); they
are intended for desk-scale inputs and as reference plumbing in front of the
low-rank eigensolvers.  The rank reducer never touches n x n data: it works
through thin QR factors and an r x r core.
"""

import warnings

import numpy as np

from .densekit import (
    DEFAULT_TOL,
    RankDeficiencyWarning,
    as_matrix,
    numeric_rank,
    svd,
    symmetric_eig,
)
from .lowrank import FactorPair
from .symmetric import SymmetricFactorization

__all__ = ["truncated_svd_factor", "symmetric_factor", "rank_reduce"]


def truncated_svd_factor(x, rank=None, cfg=DEFAULT_TOL):
    """Factor a square matrix as ``x ~ a @ b`` by truncated SVD.

    ``a = u_r * sigma_r`` and ``b = vh_r`` keep the ``rank`` dominant
    singular triplets (numeric rank when not given), so the reconstruction
    error equals the energy of the discarded tail.  A rank request beyond
    the numeric rank is clamped with a ``RankDeficiencyWarning`` reporting
    the achieved error; both returned factors always have full rank.
    """
    x = as_matrix(x, "matrix")
    n = x.shape[0]
    if x.shape[0] != x.shape[1]:
        raise ValueError(f"matrix must be square, got {x.shape[0]}x{x.shape[1]}")
    u, sigma, vh = svd(x)
    cutoff = cfg.rank_cutoff(sigma, x.shape)
    nrank = int(np.count_nonzero(sigma > cutoff))
    if rank is None:
        r = nrank
    else:
        r = int(rank)
        if r < 0 or r > n:
            raise ValueError(f"rank must lie in [0, {n}], got {r}")
        if r > nrank:
            achieved = float(np.sqrt(np.sum(sigma[nrank:] ** 2)))
            warnings.warn(
                f"requested rank {r} exceeds the numeric rank {nrank}; "
                f"truncating to {nrank} (reconstruction error ~ {achieved:.3e})",
                RankDeficiencyWarning,
                stacklevel=2,
            )
            r = nrank
    a = u[:, :r] * sigma[:r]
    b = vh[:r]
    return FactorPair(a, b)


def symmetric_factor(x, cfg=DEFAULT_TOL):
    """Factor a symmetric (Hermitian) matrix as ``x ~ atilde @ stilde @
    atilde^T`` with a nonsingular diagonal middle factor.

    ``atilde`` holds the eigenvectors of the numerically nonzero
    eigenvalues (ordered by descending magnitude) and ``stilde`` the
    eigenvalues themselves, so the middle factor is nonsingular by
    construction.
    """
    x = as_matrix(x, "matrix")
    d, q = symmetric_eig(x)
    mags = np.abs(d)
    cutoff = cfg.rank_cutoff(np.sort(mags)[::-1], x.shape)
    keep = np.flatnonzero(mags > cutoff)
    keep = keep[np.argsort(-mags[keep], kind="stable")]
    return SymmetricFactorization(q[:, keep], np.diag(d[keep]))


def rank_reduce(pair, cfg=DEFAULT_TOL):
    """Shrink a factor pair to the numeric rank of its product.

    Thin QR factors of ``a`` and ``b^H`` expose the r x r core
    ``ra @ rb^H``, whose singular values are exactly those of ``a @ b``;
    truncating the core's SVD yields factors of inner dimension
    ``numeric_rank(a @ b)`` while preserving the product.  Full-rank input
    is returned unchanged, so the operation is idempotent.
    """
    if pair.r == 0:
        return pair
    qa, ra = np.linalg.qr(pair.a, mode="reduced")
    qb, rb = np.linalg.qr(pair.b.conj().T, mode="reduced")
    core = ra @ rb.conj().T
    u, sigma, vh = svd(core)
    cutoff = cfg.rank_cutoff(sigma, (pair.n, pair.n))
    rtil = int(np.count_nonzero(sigma > cutoff))
    if rtil == pair.r:
        return pair
    a = qa @ (u[:, :rtil] * sigma[:rtil])
    b = vh[:rtil] @ qb.conj().T
    return FactorPair(a, b)
