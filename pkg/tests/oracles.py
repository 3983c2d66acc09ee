"""Brute-force reference implementations used only by the tests.

Nothing here is imported by the package; each routine follows a different
computational path from the code it checks.
"""

import itertools
import math

import numpy as np
from scipy import integrate

from regbench.data import SynthSpec, generate_synthetic


def gaussian_elimination_solve(A, b):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting."""
    A = [list(map(float, row)) for row in A]
    b = list(map(float, b))
    n = len(A)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0.0:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(col + 1, n):
            f = A[r][col] / A[col][col]
            if f:
                for c in range(col, n):
                    A[r][c] -= f * A[col][c]
                b[r] -= f * b[col]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        s = b[r] - sum(A[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / A[r][r]
    return np.array(x)


def normal_equation_ols(X, y):
    """``(X^T X)^-1 X^T y`` by elimination on the normal equations."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return gaussian_elimination_solve(X.T @ X, X.T @ y)


def r2_of_subset(X, y, cols):
    n = len(y)
    design = np.column_stack([np.ones(n)] + [X[:, c] for c in cols])
    b = normal_equation_ols(design, y)
    resid = y - design @ b
    tss = np.sum((y - y.mean()) ** 2)
    return 1.0 - float(resid @ resid) / tss


def best_subset(X, y, size, max_p=12):
    """Exhaustive search for the size-``size`` subset with the largest R^2.

    Ties resolve to the lexicographically first subset.
    """
    p = X.shape[1]
    if p > max_p:
        raise ValueError(f"best_subset limited to p <= {max_p}")
    best = None
    for cols in itertools.combinations(range(p), size):
        r2 = r2_of_subset(X, y, cols)
        if best is None or r2 > best[1]:
            best = (cols, r2)
    return best


def f_sf_quadrature(F, d1, d2):
    """Upper F tail by adaptive quadrature of the density."""
    log_beta = math.lgamma(d1 / 2) + math.lgamma(d2 / 2) - math.lgamma((d1 + d2) / 2)

    def pdf(x):
        if x <= 0.0:
            return 0.0
        return math.exp(0.5 * d1 * math.log(d1 * x) + 0.5 * d2 * math.log(d2)
                        - 0.5 * (d1 + d2) * math.log(d1 * x + d2) - math.log(x) - log_beta)

    if F == 0.0:
        return 1.0
    head, _ = integrate.quad(pdf, 0.0, F, epsabs=1e-13, epsrel=1e-12, limit=200)
    return 1.0 - head


def estimator_mse_ensemble(spec, trials, base_seed=1000):
    """Refit OLS on ``trials`` fresh draws of ``spec``.

    Returns ``(variance, bias2, mse)`` arrays over the coefficient vector
    (intercept first) against the generator's true coefficients.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    est = []
    truth = None
    for t in range(trials):
        d, tr = generate_synthetic(SynthSpec(**{**spec.to_dict(), "seed": base_seed + t}))
        X = d.values[:, :-1]
        y = d.values[:, -1]
        design = np.column_stack([np.ones(len(y)), X])
        est.append(normal_equation_ols(design, y))
        truth = np.concatenate([[tr.intercept], tr.coefficients])
    est = np.array(est)
    mean = est.mean(axis=0)
    variance = np.mean((est - mean) ** 2, axis=0)
    bias2 = (mean - truth) ** 2
    mse = np.mean((est - truth) ** 2, axis=0)
    return variance, bias2, mse


def procrustes_align(A, B):
    """Rotate ``A`` to best match ``B`` (orthogonal Procrustes)."""
    U, _, Vt = np.linalg.svd(A.T @ B)
    return A @ (U @ Vt)
