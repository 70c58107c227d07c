"""Dense linear algebra over the prime field GF(p).

Matrices are numpy integer arrays; every result is reduced into ``[0, p)``.
"""

from __future__ import annotations

import numpy as np


def rref(M, p):
    """Reduced row-echelon form of ``M`` over GF(p).

    Returns ``(R, pivots)`` where ``R`` has the same shape as ``M`` and
    ``pivots`` lists the pivot column of each nonzero row of ``R``.
    """
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        col = R[:, c].copy()
        col[r] = 0
        R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M, p):
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def row_space(M, p):
    """Basis (as rows, in RREF) of the row space of ``M``, plus pivot columns."""
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        width = M.shape[1] if M.ndim == 2 else 0
        return np.zeros((0, width), dtype=np.int64), []
    R, pivots = rref(M, p)
    return R[: len(pivots)], pivots


def nullspace(M, p):
    """Basis of ``{x : M x = 0}`` as the rows of the returned array."""
    M = np.asarray(M, dtype=np.int64) % p
    n = M.shape[1]
    R, pivots = rref(M, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-R[row, f]) % p
    return basis


def inverse(M, p):
    """Inverse of a square matrix over GF(p); raises ``ValueError`` if singular."""
    M = np.asarray(M, dtype=np.int64) % p
    n = M.shape[0]
    R, pivots = rref(np.hstack([M, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular mod %d" % p)
    return R[:, n:]


def quotient_map(W_rows, n, p):
    """Coordinates on ``GF(p)^n / span(W_rows)``.

    Returns ``(proj, lift)``: ``proj`` is ``(n - w) x n`` and sends a column
    vector to its class written in the non-pivot coordinates; ``lift`` is
    ``n x (n - w)`` with ``proj @ lift = I``.
    """
    W_rows = np.asarray(W_rows, dtype=np.int64).reshape(-1, n)
    basis, pivots = row_space(W_rows, p)
    keep = [c for c in range(n) if c not in pivots]
    eye = np.eye(n, dtype=np.int64)
    # v -> v - sum_k v[pivot_k] * basis_k kills every pivot coordinate
    reduce = eye.copy()
    for k, pc in enumerate(pivots):
        reduce = (reduce - np.outer(basis[k], eye[pc])) % p
    return reduce[keep, :], eye[:, keep]
