"""Dense matrix kernels: products, factorizations, and small eigensolvers.

Everything operates on plain numpy arrays (2-D, finite entries, float64 or
complex128).  These routines back the low-rank solvers and double as the
brute-force reference path at desk scale.
"""

from dataclasses import dataclass

import numpy as np
from numpy.linalg import LinAlgError
from scipy.linalg import get_lapack_funcs

__all__ = [
    "EPS",
    "FLOPS",
    "FlopCounter",
    "RankDeficiencyWarning",
    "Tolerances",
    "DEFAULT_TOL",
    "as_matrix",
    "as_vector",
    "matmul",
    "svd",
    "numeric_rank",
    "eig_dense",
    "symmetric_eig",
    "cholesky",
]

EPS = float(np.finfo(np.float64).eps)

# Relative Frobenius asymmetry tolerated before an input is rejected as
# non-Hermitian; anything below is symmetrized away.
HERMITIAN_RTOL = 1e-13


class RankDeficiencyWarning(UserWarning):
    """An input has lower numerical rank than its nominal inner dimension."""


@dataclass(frozen=True)
class Tolerances:
    """Numerical cutoffs shared across the package.

    rank_rtol
        Relative singular-value cutoff for rank decisions.  ``None`` selects
        ``max(nrows, ncols) * eps``, the usual SVD convention.
    zero_eig_atol
        Eigenvalues with ``|lam| <= zero_eig_atol * scale`` count as zero,
        where ``scale`` is the Frobenius norm of the matrix they came from.
        The default ``sqrt(eps)`` separates structural zeros from genuinely
        small eigenvalues at desk scale.
    residual_rtol
        Acceptance threshold for normalized eigenpair residuals.
    """

    rank_rtol: float | None = None
    zero_eig_atol: float = float(np.sqrt(EPS))
    residual_rtol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rtol", "zero_eig_atol", "residual_rtol"):
            value = getattr(self, name)
            if name == "rank_rtol" and value is None:
                continue
            if not 0.0 <= value < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {value!r}")

    def rank_cutoff(self, sigma, shape):
        """Absolute singular-value cutoff for a matrix of the given shape."""
        rtol = self.rank_rtol if self.rank_rtol is not None else max(shape) * EPS
        top = float(sigma[0]) if len(sigma) else 0.0
        return rtol * top


DEFAULT_TOL = Tolerances()


class FlopCounter:
    """Running tally of *model* flop counts charged by the dense kernels.

    The tally reflects standard operation counts (``2*m*k*n`` for a matrix
    product), not the instructions a BLAS actually executes.  Diagnostics
    such as residual evaluation are not charged.
    """

    def __init__(self):
        self.count = 0

    def add(self, flops):
        self.count += int(flops)

    def reset(self):
        self.count = 0


FLOPS = FlopCounter()


def as_matrix(a, name="matrix"):
    """Coerce input to a 2-D float64/complex128 array with finite entries."""
    m = np.asarray(a)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if np.iscomplexobj(m):
        m = m.astype(np.complex128, copy=False)
    else:
        m = m.astype(np.float64, copy=False)
    if m.size and not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_vector(a, name="vector"):
    """Coerce input to a 1-D float64/complex128 array with finite entries."""
    v = np.asarray(a)
    if v.ndim == 2 and 1 in v.shape:
        v = v.ravel()
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {np.asarray(a).shape}")
    if np.iscomplexobj(v):
        v = v.astype(np.complex128, copy=False)
    else:
        v = v.astype(np.float64, copy=False)
    if v.size and not np.isfinite(v).all():
        raise ValueError(f"{name} contains non-finite entries")
    return v


def _require_square(m, name="matrix"):
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got {m.shape[0]}x{m.shape[1]}")


def _symmetrize(m, name="matrix"):
    """Reject matrices that are not Hermitian to working accuracy, then
    return the exactly Hermitian average."""
    nrm = np.linalg.norm(m)
    if nrm > 0 and np.linalg.norm(m - m.conj().T) > HERMITIAN_RTOL * nrm:
        raise ValueError(
            f"{name} is not Hermitian within {HERMITIAN_RTOL:g} relative tolerance"
        )
    return (m + m.conj().T) / 2.0


def matmul(a, b):
    """Matrix product ``a @ b``.

    Charges ``2 * nrows(a) * ncols(a) * ncols(b)`` model flops to the global
    counter.  Raises ``ValueError`` naming both shapes when the inner
    dimensions disagree.
    """
    a = as_matrix(a, "left factor")
    b = as_matrix(b, "right factor")
    if a.shape[1] != b.shape[0]:
        raise ValueError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by "
            f"{b.shape[0]}x{b.shape[1]}: inner dimensions differ"
        )
    FLOPS.add(2 * a.shape[0] * a.shape[1] * b.shape[1])
    return a @ b


def svd(m):
    """Thin singular value decomposition ``m = u @ diag(sigma) @ vh``.

    Returns
    -------
    u : ndarray, shape (nrows, k)
    sigma : ndarray, shape (k,), nonincreasing and nonnegative
    vh : ndarray, shape (k, ncols)

    with ``k = min(nrows, ncols)``.
    """
    m = as_matrix(m)
    try:
        return np.linalg.svd(m, full_matrices=False)
    except LinAlgError as exc:
        raise LinAlgError(
            f"SVD did not converge on a {m.shape[0]}x{m.shape[1]} matrix "
            f"(LAPACK iterative stage failed): {exc}"
        ) from exc


def numeric_rank(m, cfg=DEFAULT_TOL):
    """Count of singular values above ``rank_rtol * sigma_max``.

    The zero matrix has rank 0.
    """
    m = as_matrix(m)
    if min(m.shape) == 0:
        return 0
    sigma = np.linalg.svd(m, compute_uv=False)
    return int(np.count_nonzero(sigma > cfg.rank_cutoff(sigma, m.shape)))


def eig_dense(m, want_vectors=False):
    """Eigenvalues (and optionally right eigenvectors) of a square matrix.

    Returns ``(values, vectors)`` where ``values`` is a complex array with
    all ``n`` eigenvalues counted with multiplicity and ``vectors`` is a
    complex ``n x n`` matrix of unit-norm columns, or ``None`` when not
    requested.  Each returned column satisfies
    ``norm(m @ v - lam * v) <= tol * norm(m)`` for well-conditioned
    desk-scale inputs.
    """
    m = as_matrix(m)
    _require_square(m)
    n = m.shape[0]
    if n == 0:
        vec = np.zeros((0, 0), dtype=np.complex128) if want_vectors else None
        return np.zeros(0, dtype=np.complex128), vec
    try:
        if want_vectors:
            values, vectors = np.linalg.eig(m)
            return (
                values.astype(np.complex128, copy=False),
                vectors.astype(np.complex128, copy=False),
            )
        values = np.linalg.eigvals(m)
        return values.astype(np.complex128, copy=False), None
    except LinAlgError as exc:
        raise LinAlgError(
            f"dense eigensolver did not converge on a {n}x{n} matrix: {exc}"
        ) from exc


def symmetric_eig(m):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(values, q)`` with real eigenvalues in nondecreasing order and
    orthonormal eigenvector columns, so ``m = q @ diag(values) @ q.conj().T``.
    The input must be Hermitian to ``1e-13`` relative accuracy and is
    symmetrized before factorization.
    """
    m = as_matrix(m)
    _require_square(m)
    ms = _symmetrize(m)
    return np.linalg.eigh(ms)


def cholesky(m):
    """Cholesky factor ``L`` of a Hermitian positive definite matrix.

    ``L`` is lower triangular with positive real diagonal and satisfies
    ``L @ L.conj().T = m``.  An indefinite or singular input raises
    ``LinAlgError`` naming the pivot at which factorization broke down.
    """
    m = as_matrix(m)
    _require_square(m)
    ms = _symmetrize(m)
    if ms.shape[0] == 0:
        return ms.copy()
    (potrf,) = get_lapack_funcs(("potrf",), (ms,))
    c, info = potrf(ms, lower=True, clean=True)
    if info > 0:
        raise LinAlgError(
            f"matrix is not positive definite: Cholesky failed at pivot {info}"
        )
    if info < 0:
        raise LinAlgError(f"invalid argument {-info} passed to the Cholesky routine")
    return c
