"""Dense linear algebra and distribution tails used throughout the package."""

from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.linalg import solve_triangular

from . import _backend
from .errors import ConvergenceError, NumericError, RankDeficiencyError

RANK_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a symmetric matrix.

    ``values`` are sorted in descending order and ``vectors[:, i]`` is the
    unit eigenvector for ``values[i]``, signed so that its largest-magnitude
    component is positive.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.T


def _as_matrix(X, name="X"):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {X.shape}")
    if X.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite entries")
    return X


def solve_least_squares(X, y):
    """Least-squares coefficients ``b`` minimizing ``||y - X b||``.

    Uses Householder QR; ``X^T X`` is never formed.

    Parameters
    ----------
    X : array_like, shape (n, k)
        Design matrix, typically with a leading column of ones.
    y : array_like, shape (n,)

    Returns
    -------
    numpy.ndarray, shape (k,)

    Raises
    ------
    RankDeficiencyError
        If ``|R[j, j]| <= 1e-10 * max_i |R[i, i]|`` for some column ``j``;
        the first such ``j`` is reported.
    """
    X = _as_matrix(X)
    y = np.asarray(y, dtype=np.float64)
    n, k = X.shape
    if y.shape != (n,):
        raise ValueError(f"y has shape {y.shape}, expected ({n},)")
    if n < k:
        raise NumericError(f"underdetermined system: {n} rows, {k} columns")
    if not np.all(np.isfinite(y)):
        raise ValueError("y contains non-finite entries")
    R, qty = _backend.householder_qr(X, y)
    rdiag = np.abs(np.diag(R))
    scale = rdiag.max()
    bad = np.flatnonzero(rdiag <= RANK_TOL * scale)
    if bad.size:
        raise RankDeficiencyError(int(bad[0]))
    return solve_triangular(R, qty, lower=False, check_finite=False)


def sym_eigen(S):
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi."""
    S = _as_matrix(S, "S")
    p, q = S.shape
    if p != q:
        raise ValueError(f"S must be square, got {S.shape}")
    scale = max(1.0, float(np.max(np.abs(S))))
    if np.max(np.abs(S - S.T)) > 1e-12 * scale:
        raise ValueError("S is not symmetric")
    S = 0.5 * (S + S.T)
    w, V, sweeps = _backend.jacobi_eigh(S, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    order = np.argsort(-w, kind="stable")
    w = w[order]
    V = V[:, order]
    lead = np.argmax(np.abs(V), axis=0)
    signs = np.where(V[lead, np.arange(p)] < 0, -1.0, 1.0)
    return EigenDecomposition(values=w, vectors=V * signs)


def condition_number(X, standardize=True):
    """Ratio of the largest to the smallest singular value of ``X``.

    By default each column is centered and scaled to unit sample standard
    deviation first. Rank-deficient input (including a constant column when
    standardizing) returns ``inf``.
    """
    X = _as_matrix(X)
    if standardize:
        if X.shape[0] < 2:
            return np.inf
        sd = X.std(axis=0, ddof=1)
        if np.any(sd == 0.0):
            return np.inf
        X = (X - X.mean(axis=0)) / sd
    s = np.linalg.svd(X, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= RANK_TOL * s[0] or X.shape[0] < X.shape[1]:
        return np.inf
    return float(s[0] / s[-1])


def chi2_sf(x, df):
    """Upper tail ``P(X > x)`` of a chi-square variable with ``df`` degrees of freedom."""
    if not x >= 0:
        raise ValueError(f"chi2_sf needs x >= 0, got {x}")
    if not df > 0:
        raise ValueError(f"chi2_sf needs df > 0, got {df}")
    return float(special.gammaincc(0.5 * df, 0.5 * x))


def f_sf(F, df1, df2):
    """Upper tail ``P(X > F)`` of an F(df1, df2) variable."""
    if not F >= 0:
        raise ValueError(f"f_sf needs F >= 0, got {F}")
    if not (df1 >= 1 and df2 >= 1):
        raise ValueError(f"f_sf needs df1, df2 >= 1, got ({df1}, {df2})")
    if np.isinf(F):
        return 0.0
    x = df2 / (df2 + df1 * F)
    return float(special.betainc(0.5 * df2, 0.5 * df1, x))
