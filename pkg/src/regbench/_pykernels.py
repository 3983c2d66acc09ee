"""Pure numpy versions of the dense kernels.

Same signatures and results (to rounding) as the compiled ``_ckernels``
module; selected automatically when the extension is not built.
"""

import numpy as np


def householder_qr(A, b):
    """Triangularize ``A`` with Householder reflections applied also to ``b``.

    Returns ``(R, qtb)`` where ``R`` is the ``k x k`` upper triangle and
    ``qtb`` the first ``k`` entries of ``Q^T b``. ``A`` is ``n x k`` with
    ``n >= k``. Inputs are not modified.
    """
    A = np.array(A, dtype=np.float64, order="C", copy=True)
    b = np.array(b, dtype=np.float64, copy=True)
    n, k = A.shape
    for j in range(k):
        x = A[j:, j]
        norm = np.sqrt(x @ x)
        if norm == 0.0:
            continue
        alpha = -norm if x[0] >= 0.0 else norm
        v = x.copy()
        v[0] -= alpha
        vv = v @ v
        if vv == 0.0:
            continue
        scale = 2.0 / vv
        A[j:, j:] -= np.outer(v, scale * (v @ A[j:, j:]))
        b[j:] -= (scale * (v @ b[j:])) * v
        A[j, j] = alpha
        A[j + 1:, j] = 0.0
    return np.triu(A[:k, :k]), b[:k].copy()


def jacobi_eigh(S, tol, max_sweeps):
    """Cyclic Jacobi eigenvalue iteration for a symmetric matrix.

    Sweeps until the off-diagonal Frobenius norm drops below
    ``tol * ||S||_F``. Returns ``(w, V, sweeps)`` with unsorted
    eigenvalues ``w`` and eigenvectors in the columns of ``V``;
    ``sweeps`` is -1 if ``max_sweeps`` was exhausted.
    """
    A = np.array(S, dtype=np.float64, order="C", copy=True)
    p = A.shape[0]
    V = np.eye(p)
    target = tol * np.sqrt(np.sum(A * A))
    for sweep in range(max_sweeps + 1):
        off = np.sqrt(2.0 * np.sum(np.triu(A, 1) ** 2))
        if not off > target:
            return np.diag(A).copy(), V, sweep
        if sweep == max_sweeps:
            break
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = A[i, j]
                if aij == 0.0:
                    continue
                tau = (A[j, j] - A[i, i]) / (2.0 * aij)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ai = A[:, i].copy()
                aj = A[:, j]
                A[:, i] = c * ai - s * aj
                A[:, j] = s * ai + c * aj
                ri = A[i, :].copy()
                rj = A[j, :]
                A[i, :] = c * ri - s * rj
                A[j, :] = s * ri + c * rj
                A[i, j] = A[j, i] = 0.0
                vi = V[:, i].copy()
                vj = V[:, j]
                V[:, i] = c * vi - s * vj
                V[:, j] = s * vi + c * vj
    return np.diag(A).copy(), V, -1
