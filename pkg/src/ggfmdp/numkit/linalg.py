"""Dense linear algebra: LU solves and spectral radius estimation.

Matrices here are small (tens of states), so an in-house partial-pivot LU
is plenty and keeps the singularity threshold explicit.
"""

import numpy as np

from ..errors import NoConvergence, ShapeMismatch, SingularMatrix

SINGULARITY_THRESHOLD = 1e-12


def lu_factor(A):
    """Partial-pivot LU decomposition. Returns (LU, perm)."""
    A = np.array(A, dtype=np.float64)
    n, m = A.shape
    if n != m:
        raise ShapeMismatch(f"matrix must be square, got {n}x{m}")
    perm = np.arange(n)
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) < SINGULARITY_THRESHOLD:
            raise SingularMatrix(f"pivot {abs(A[p, k]):.3e} below threshold at column {k}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        A[k + 1 :, k] /= A[k, k]
        A[k + 1 :, k + 1 :] -= np.outer(A[k + 1 :, k], A[k, k + 1 :])
    if abs(A[n - 1, n - 1]) < SINGULARITY_THRESHOLD:
        raise SingularMatrix(f"pivot {abs(A[n - 1, n - 1]):.3e} below threshold at column {n - 1}")
    return A, perm


def lu_solve(A, b):
    """Solve A x = b by LU with partial pivoting.

    `b` may be a vector or a matrix of stacked right-hand sides.
    """
    LU, perm = lu_factor(A)
    b = np.asarray(b, dtype=np.float64)
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else np.array(b)
    n = LU.shape[0]
    if B.shape[0] != n:
        raise ShapeMismatch(f"rhs length {B.shape[0]} does not match matrix size {n}")
    X = B[perm].astype(np.float64)
    for k in range(1, n):  # forward: L has unit diagonal
        X[k] -= LU[k, :k] @ X[:k]
    for k in range(n - 1, -1, -1):  # backward
        X[k] -= LU[k, k + 1 :] @ X[k + 1 :]
        X[k] /= LU[k, k]
    return X[:, 0] if vector else X


def spectral_radius(A, tol=1e-10, max_squarings=200):
    """Spectral radius via Gelfand's formula on repeated squarings.

    Tracks log ||A^(2^k)||_inf with renormalization so huge or tiny powers
    never overflow; stops once the 2^-k-th root stabilizes within `tol`.
    """
    A = np.asarray(A, dtype=np.float64)
    n, m = A.shape
    if n != m:
        raise ShapeMismatch(f"matrix must be square, got {n}x{m}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    norm = np.abs(A).sum(axis=1).max()
    if norm == 0.0:
        return 0.0
    B = A / norm
    log_norm = np.log(norm)  # log ||A^(2^k)||_inf
    est = norm
    for k in range(1, max_squarings + 1):
        B = B @ B
        step = np.abs(B).sum(axis=1).max()
        if step == 0.0:
            return 0.0  # nilpotent
        log_norm = 2.0 * log_norm + np.log(step)
        B = B / step
        new_est = np.exp(log_norm / 2.0**k)
        if abs(new_est - est) < tol:
            return float(new_est)
        est = new_est
    raise NoConvergence(f"spectral radius estimate did not stabilize in {max_squarings} squarings")
