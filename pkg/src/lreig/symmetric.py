"""Symmetry-preserving eigendecomposition of a factored symmetric matrix.

A symmetric (or Hermitian) low-rank matrix ``x = atilde @ stilde @ atilde^T``
is reduced by congruence to ``x = a @ diag(signs) @ a^T`` with a +/-1 sign
diagonal, then solved through the symmetric-definite generalized problem
``(a^T a) v = lam * diag(signs) * v``.  This keeps the eigenvalues real and
the lifted eigenvectors ``w = a @ v`` exactly orthonormal, which the general
nonsymmetric route does not guarantee.

For complex Hermitian inputs every transpose below is the conjugate
transpose; real inputs stay real throughout.
"""

from dataclasses import dataclass

import numpy as np
from numpy.linalg import LinAlgError
from scipy.linalg import solve_triangular

from .densekit import (
    DEFAULT_TOL,
    EPS,
    as_matrix,
    cholesky,
    matmul,
    numeric_rank,
    symmetric_eig,
)

__all__ = [
    "SignDiagonal",
    "SymmetricFactorization",
    "ReducedSymmetric",
    "reduce_to_sign",
    "apply_congruence",
    "generalized_spd_eig",
    "symmetric_lowrank_eig",
]

# Congruence factors with condition number beyond this are refused rather
# than inverted.
MAX_CONGRUENCE_COND = 1e14


@dataclass(frozen=True)
class SignDiagonal:
    """Diagonal of +/-1 entries, the canonical congruence form of a
    nonsingular symmetric matrix."""

    signs: np.ndarray

    def __post_init__(self):
        signs = np.asarray(self.signs)
        if signs.ndim != 1:
            raise ValueError(f"signs must be 1-D, got shape {signs.shape}")
        signs = signs.astype(np.int64, copy=False)
        if signs.size and not np.all(np.abs(signs) == 1):
            raise ValueError("every sign must be exactly +1 or -1")
        object.__setattr__(self, "signs", signs)

    def __len__(self):
        return self.signs.size

    @property
    def inertia(self):
        """(count of +1 entries, count of -1 entries)."""
        pos = int(np.count_nonzero(self.signs > 0))
        return pos, self.signs.size - pos

    def matrix(self):
        return np.diag(self.signs.astype(np.float64))


@dataclass(frozen=True)
class SymmetricFactorization:
    """Factored symmetric matrix ``x = atilde @ stilde @ atilde^T`` with a
    symmetric nonsingular middle factor."""

    atilde: np.ndarray
    stilde: np.ndarray

    def __post_init__(self):
        atilde = as_matrix(self.atilde, "factor atilde")
        stilde = as_matrix(self.stilde, "middle factor")
        r = atilde.shape[1]
        if stilde.shape != (r, r):
            raise ValueError(
                f"middle factor must be {r}x{r} to match the {atilde.shape[0]}"
                f"x{r} outer factor, got {stilde.shape[0]}x{stilde.shape[1]}"
            )
        nrm = np.linalg.norm(stilde)
        if nrm > 0 and np.linalg.norm(stilde - stilde.conj().T) > 1e-13 * nrm:
            raise ValueError("middle factor is not Hermitian within 1e-13 relative")
        if numeric_rank(stilde) < r:
            raise ValueError(
                "middle factor is numerically singular; refactor at lower rank"
            )
        object.__setattr__(self, "atilde", atilde)
        object.__setattr__(self, "stilde", stilde)

    @property
    def n(self):
        return self.atilde.shape[0]

    @property
    def r(self):
        return self.atilde.shape[1]


@dataclass(frozen=True)
class ReducedSymmetric:
    """Reduced form ``x = a @ diag(signs) @ a^T`` with a sign diagonal."""

    a: np.ndarray
    s: SignDiagonal

    def __post_init__(self):
        a = as_matrix(self.a, "factor a")
        if len(self.s) != a.shape[1]:
            raise ValueError(
                f"sign diagonal has {len(self.s)} entries but the factor has "
                f"{a.shape[1]} columns"
            )
        object.__setattr__(self, "a", a)

    @property
    def n(self):
        return self.a.shape[0]

    @property
    def r(self):
        return self.a.shape[1]


def reduce_to_sign(stilde, cfg=DEFAULT_TOL):
    """Congruence-reduce a symmetric nonsingular matrix to a sign diagonal.

    Returns ``(wc, s)`` with ``wc @ stilde @ wc^T = diag(s.signs)``.  The
    reduction goes through the eigendecomposition ``stilde = q diag(d) q^T``
    with ``wc = |d|^{-1/2} q^T``, which also delivers the inertia.  Signs are
    ordered with the +1 entries first.
    """
    stilde = as_matrix(stilde, "middle factor")
    if stilde.shape[0] != stilde.shape[1]:
        raise ValueError(
            f"middle factor must be square, got {stilde.shape[0]}x{stilde.shape[1]}"
        )
    d, q = symmetric_eig(stilde)
    if d.size:
        cutoff = cfg.rank_cutoff(np.abs(d[np.argsort(-np.abs(d))]), stilde.shape)
        if np.abs(d).min() <= cutoff:
            raise LinAlgError(
                "middle factor is numerically singular; reduce the "
                "factorization rank first (see factorize.rank_reduce)"
            )
    order = np.argsort(-d, kind="stable")  # positive entries first
    d = d[order]
    q = q[:, order]
    wc = (q / np.sqrt(np.abs(d))).conj().T
    signs = np.where(d > 0, 1, -1).astype(np.int64)
    return wc, SignDiagonal(signs)


def apply_congruence(fact, wc, s):
    """Push the congruence into the outer factor: ``a = atilde @ wc^{-1}``.

    The inverse is applied through triangular-free linear solves, never
    formed explicitly.  Refuses congruence factors with condition number
    beyond ``MAX_CONGRUENCE_COND``.
    """
    wc = as_matrix(wc, "congruence factor")
    r = fact.r
    if wc.shape != (r, r):
        raise ValueError(
            f"congruence factor must be {r}x{r}, got {wc.shape[0]}x{wc.shape[1]}"
        )
    if len(s) != r:
        raise ValueError(f"sign diagonal has {len(s)} entries, expected {r}")
    if r:
        cond = float(np.linalg.cond(wc))
        if not np.isfinite(cond) or cond > MAX_CONGRUENCE_COND:
            raise LinAlgError(
                f"congruence factor is too ill-conditioned to invert "
                f"(cond estimate {cond:.2e})"
            )
        a = np.linalg.solve(wc.T, fact.atilde.T).T
    else:
        a = fact.atilde.copy()
    return ReducedSymmetric(a, s)


def generalized_spd_eig(g, s):
    """Solve the symmetric-definite generalized problem
    ``g @ v = diag(s) @ v * lam`` for positive definite ``g``.

    Returns ``(v, lam)`` normalized so that ``v^T g v = I`` and
    ``v^T diag(s) v = diag(1/lam)``; every eigenvalue is real and nonzero
    because the definiteness lives entirely in ``g`` (the sign diagonal is
    indefinite in general, making this a symmetric-definite pencil with one
    definite member).  Columns are ordered by descending ``|lam|``, ties
    broken with the positive eigenvalue first.

    Reduction: Cholesky ``g = l l^T``, eigendecompose the congruent
    ``m = l^{-1} diag(s) l^{-T} = q diag(mu) q^T``, then ``lam = 1/mu`` and
    ``v = l^{-T} q``.
    """
    g = as_matrix(g, "left pencil member")
    r = g.shape[0]
    if g.shape[0] != g.shape[1]:
        raise ValueError(f"left pencil member must be square, got {g.shape}")
    if len(s) != r:
        raise ValueError(f"sign diagonal has {len(s)} entries, expected {r}")
    if r == 0:
        return np.zeros((0, 0)), np.zeros(0)
    try:
        ell = cholesky(g)
    except LinAlgError as exc:
        raise LinAlgError(
            "left pencil member is not positive definite; the factor is rank "
            "deficient, so refactor at lower rank first"
        ) from exc
    smat = s.signs.astype(ell.dtype if not np.iscomplexobj(ell) else np.float64)
    t1 = solve_triangular(ell, np.diag(smat), lower=True)
    m = solve_triangular(ell, t1.conj().T, lower=True)
    m = (m + m.conj().T) / 2.0
    mu, q = np.linalg.eigh(m)
    if np.abs(mu).min() <= EPS * np.abs(mu).max():
        raise LinAlgError(
            "generalized eigenvalues collapsed to zero; the pencil is not "
            "definite enough to solve reliably"
        )
    lam = 1.0 / mu
    v = solve_triangular(ell.conj().T, q, lower=False)
    order = np.lexsort((-np.sign(lam), -np.abs(lam)))
    return v[:, order], lam[order]


def symmetric_lowrank_eig(reduced, cfg=DEFAULT_TOL):
    """Nonzero eigendecomposition ``x = a diag(signs) a^T = w diag(lam) w^T``.

    Forms the small Gram matrix ``g = a^T a``, solves the generalized
    problem against the sign diagonal, and lifts ``w = a @ v``.  Because
    ``w^T w = v^T g v = I`` the lifted eigenvectors are orthonormal, and all
    eigenvalues are real.  The n x n matrix is never formed.

    Requires the reduced factor to have full column rank; otherwise the Gram
    matrix is not definite and the caller should refactor at lower rank.
    """
    a = reduced.a
    r = reduced.r
    if r and numeric_rank(a, cfg) < r:
        raise LinAlgError(
            "reduced factor has deficient column rank; rerun the symmetric "
            "factorization at lower rank (see factorize.symmetric_factor)"
        )
    if r == 0:
        return np.zeros(0), np.zeros((reduced.n, 0))
    g = matmul(a.conj().T, a)
    v, lam = generalized_spd_eig(g, reduced.s)
    w = matmul(a, v)
    return lam, w
