from . import *
import numpy as np
import scipy.linalg


def _as_columns(vectors, d=None):
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if not vectors:
        return np.zeros((d or 0, 0))
    return np.stack(vectors, axis=1)


def rank(M, rtol=RANK_RTOL):
    """Numerical rank by pivoted QR, relative to the largest column norm."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    scale = np.linalg.norm(M, axis=0).max()
    if scale == 0:
        return 0
    R = scipy.linalg.qr(M, mode='r', pivoting=True)[0]
    diag = np.abs(np.diag(R))
    return int(np.sum(diag > rtol * scale))


def extend_basis(basis, candidates, rtol=RANK_RTOL, scale=None):
    """
    Greedy pivoting: walk candidates in order and keep each one that is not in the
    span of basis plus the candidates kept so far. Returns the indices of kept
    candidates. The threshold is relative to the largest vector norm involved.
    """
    basis = [np.asarray(b, dtype=float) for b in basis]
    candidates = [np.asarray(c, dtype=float) for c in candidates]
    vectors = basis + candidates
    if not vectors:
        return []
    if scale is None:
        scale = max(np.linalg.norm(v) for v in vectors)
    if scale == 0:
        return []
    Q = np.zeros((len(vectors[0]), 0))

    def push(v):
        nonlocal Q
        res = v - Q @ (Q.T @ v)
        res = res - Q @ (Q.T @ res)
        nrm = np.linalg.norm(res)
        if nrm <= rtol * scale:
            return False
        Q = np.column_stack([Q, res / nrm])
        return True

    for b in basis:
        push(b)
    return [i for i, v in enumerate(candidates) if push(v)]


def rref(M, rtol=RANK_RTOL):
    """Reduced row echelon form of the rows of M with zero rows removed."""
    A = np.array(M, dtype=float, copy=True)
    if A.size == 0:
        return A.reshape(0, A.shape[-1] if A.ndim == 2 else 0)
    scale = np.abs(A).max()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(A[r:, c])))
        if abs(A[p, c]) <= rtol * scale:
            A[r:, c] = 0.0
            continue
        A[[r, p]] = A[[p, r]]
        A[r] = A[r] / A[r, c]
        others = [i for i in range(rows) if i != r]
        A[others] -= np.outer(A[others, c], A[r])
        r += 1
    A[np.abs(A) <= rtol * scale] = 0.0
    return A[:r]


def row_echelon_basis(vectors, d=None, rtol=RANK_RTOL):
    """Basis of span(vectors) as RREF rows, shape (rank, d)."""
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if not vectors:
        return np.zeros((0, d or 0))
    return rref(np.stack(vectors), rtol=rtol)


def in_span(v, basis, tol=SPAN_TOL):
    """Least-squares membership test: relative residual of v against the rows of basis."""
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if nv == 0:
        return True
    B = np.atleast_2d(np.asarray(basis, dtype=float))
    if B.size == 0:
        return False
    coef, *_ = np.linalg.lstsq(B.T, v, rcond=None)
    return bool(np.linalg.norm(B.T @ coef - v) <= tol * max(nv, 1.0))


def complete_basis(basis, d, rtol=RANK_RTOL):
    """Extend the rows of basis by standard unit vectors to a basis of R^d."""
    basis = [np.asarray(b, dtype=float) for b in basis]
    eye = list(np.eye(d))
    kept = extend_basis(basis, eye, rtol=rtol, scale=max([1.0] + [np.linalg.norm(b) for b in basis]))
    return [eye[i] for i in kept]
