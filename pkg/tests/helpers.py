"""Shared brute-force oracles and integer fixture builders for the tests.

The factor fixtures are built so that the small product equals a known
integer matrix in (conjugated) Jordan form; all transformations are integer
unimodular, so every rank and block-size decision is exact.
"""

import numpy as np


def triple_loop_matmul(a, b):
    """Naive three-loop matrix product, the reference for the BLAS path."""
    a = np.asarray(a)
    b = np.asarray(b)
    m, k = a.shape
    k2, n = b.shape
    assert k == k2
    dtype = np.result_type(a.dtype, b.dtype, np.float64)
    out = np.zeros((m, n), dtype=dtype)
    for i in range(m):
        for j in range(n):
            acc = 0
            for t in range(k):
                acc += a[i, t] * b[t, j]
            out[i, j] = acc
    return out


def jordan_block(size, eigenvalue):
    """Single Jordan block J_size(eigenvalue) as a float array."""
    j = np.eye(size) * eigenvalue
    for i in range(size - 1):
        j[i, i + 1] = 1.0
    return j


def block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at : at + k, at : at + k] = b
        at += k
    return out


def jordan_matrix(zero_sizes=(), nonzero=()):
    """Jordan-form matrix with zero blocks of the given sizes followed by
    1x1 blocks at the given nonzero values."""
    blocks = [jordan_block(k, 0.0) for k in zero_sizes]
    blocks.extend(jordan_block(1, v) for v in nonzero)
    if not blocks:
        return np.zeros((0, 0))
    return block_diag(blocks)


def random_unimodular(n, rng, steps=None, bound=40):
    """Integer matrix with determinant +/-1 and its exact integer inverse.

    Built from elementary row operations; entries are kept below ``bound``
    so all later arithmetic stays exact in float64.
    """
    u = np.eye(n, dtype=np.int64)
    uinv = np.eye(n, dtype=np.int64)
    if steps is None:
        steps = 3 * n
    for _ in range(steps):
        i, j = rng.integers(0, n, size=2)
        if i == j:
            continue
        c = int(rng.choice([-2, -1, 1, 2]))
        # row op on u: u <- E u with E = I + c e_j e_i^T
        trial_u = u.copy()
        trial_u[j] += c * u[i]
        # matching column op on the inverse: uinv <- uinv E^{-1}
        trial_inv = uinv.copy()
        trial_inv[:, i] -= c * uinv[:, j]
        if np.abs(trial_u).max() > bound or np.abs(trial_inv).max() > bound:
            continue
        u, uinv = trial_u, trial_inv
    assert (u @ uinv == np.eye(n, dtype=np.int64)).all()
    return u, uinv


def embed_small_matrix(n, small, rng=None, mix=True):
    """Integer factors (a, b) with b @ a similar to ``small`` and both
    factors of full rank r.

    The canonical construction uses a = [I; 0] and b = [small | e] where the
    extra columns pin the zero rows of ``small`` so rank(b) = r; it follows
    that a @ b = [[small, e], [0, 0]].  Optional integer unimodular mixing
    conjugates the small product (and similarity-transforms the big one)
    without leaving exact arithmetic.

    Returns (a, b, qinv) where ``qinv`` maps chain vectors of ``small`` to
    chain vectors of ``b @ a`` (v -> qinv @ v).
    """
    small = np.asarray(small, dtype=np.int64)
    r = small.shape[0]
    assert small.shape == (r, r) and r <= n
    zero_rows = [i for i in range(r) if not small[i].any()]
    extra = np.zeros((r, n - r), dtype=np.int64)
    for slot, row in enumerate(zero_rows):
        assert slot < n - r, "more zero rows than spare columns"
        extra[row, slot] = 1
    a = np.vstack([np.eye(r, dtype=np.int64), np.zeros((n - r, r), dtype=np.int64)])
    b = np.hstack([small, extra])
    qinv = np.eye(r, dtype=np.int64)
    if mix and rng is not None:
        q, qinv = random_unimodular(r, rng, bound=25)
        p, pinv = random_unimodular(n, rng, bound=25)
        a = p @ a @ q
        b = qinv @ b @ pinv
    return a, b, qinv


def zero_partitions(max_sum):
    """All partitions (sorted descending) with sum 0..max_sum, the empty
    partition included."""
    out = [()]
    for total in range(1, max_sum + 1):
        out.extend(_partitions(total))
    return out


def _partitions(total, cap=None):
    if cap is None:
        cap = total
    if total == 0:
        return [()]
    parts = []
    for first in range(min(total, cap), 0, -1):
        for rest in _partitions(total - first, first):
            parts.append((first,) + rest)
    return parts
