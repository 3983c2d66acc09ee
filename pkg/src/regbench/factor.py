"""Factor extraction (principal components, maximum likelihood, GLS) and
regression of a response on the extracted factor scores."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DataError, NumericError
from .mlr import _observed, _response, ols
from .numeric import sym_eigen

METHODS = ("pca", "ml", "gls")
UNIQUENESS_FLOOR = 0.005


@dataclass(frozen=True, eq=False)
class FactorModel:
    """Result of a factor extraction on a ``p x p`` correlation matrix.

    ``score_coefficients`` maps standardized variables to factor scores:
    ``scores = Z @ score_coefficients``. ``history`` holds the discrepancy
    after each accepted iteration (ML and GLS only).
    """

    method: str
    m: int
    loadings: np.ndarray
    uniquenesses: np.ndarray
    eigenvalues: np.ndarray
    score_coefficients: np.ndarray
    converged: bool
    iterations: int
    discrepancy: float
    history: tuple = ()

    @property
    def communalities(self):
        return np.sum(self.loadings**2, axis=1)

    def implied_correlation(self):
        return self.loadings @ self.loadings.T + np.diag(self.uniquenesses)


def correlation_matrix(X, names=None):
    """Pearson correlation matrix of the columns of ``X``."""
    X = np.asarray(X, dtype=np.float64)
    n, p = X.shape
    if n < 2:
        raise DataError("correlation needs at least two rows")
    sd = X.std(axis=0, ddof=1)
    for j in np.flatnonzero(~(sd > 0)):
        label = names[j] if names is not None else j
        raise DataError(f"column {label!r} has zero variance")
    Z = (X - X.mean(axis=0)) / sd
    R = Z.T @ Z / (n - 1)
    R = np.clip(0.5 * (R + R.T), -1.0, 1.0)
    np.fill_diagonal(R, 1.0)
    return R


def choose_num_factors(eigenvalues, rule="kaiser"):
    """Number of factors to retain.

    ``"kaiser"`` keeps eigenvalues above 1 (at least one); an integer is a
    fixed count, clamped to ``p``.
    """
    ev = np.asarray(eigenvalues, dtype=np.float64)
    p = ev.size
    if rule == "kaiser":
        return max(1, int(np.sum(ev > 1.0)))
    if isinstance(rule, bool) or not isinstance(rule, (int, np.integer)) or rule < 1:
        raise ValueError(f"invalid factor rule {rule!r}")
    return int(min(rule, p))


def _check_corr(R, m):
    R = np.asarray(R, dtype=np.float64)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError(f"correlation matrix must be square, got {R.shape}")
    p = R.shape[0]
    if not np.allclose(np.diag(R), 1.0, atol=1e-8):
        raise ValueError("correlation matrix must have a unit diagonal")
    if not 1 <= m <= p:
        raise ValueError(f"need 1 <= m <= p, got m={m}, p={p}")
    return R, p


def _sign_columns(L):
    lead = np.argmax(np.abs(L), axis=0)
    signs = np.where(L[lead, np.arange(L.shape[1])] < 0, -1.0, 1.0)
    return L * signs, signs


def extract_pca(R, m):
    """Principal-component extraction: loadings ``v_j sqrt(lambda_j)``.

    Scores are standardized component scores, ``Z v_j / sqrt(lambda_j)``.
    """
    R, p = _check_corr(R, m)
    eig = sym_eigen(R)
    lam = eig.values[:m]
    if not np.all(lam > 1e-12 * max(eig.values[0], 1.0)):
        raise NumericError(f"component {int(np.argmin(lam > 0))} has a non-positive eigenvalue")
    V = eig.vectors[:, :m]
    L = V * np.sqrt(lam)
    psi = np.maximum(1.0 - np.sum(L**2, axis=1), 0.0)
    resid = R - L @ L.T - np.diag(psi)
    return FactorModel(
        method="pca", m=m, loadings=L, uniquenesses=psi, eigenvalues=eig.values,
        score_coefficients=V / np.sqrt(lam), converged=True, iterations=0,
        discrepancy=0.5 * float(np.sum(resid**2)),
    )


class _Objective:
    """Concentrated ML or GLS discrepancy as a function of the uniquenesses."""

    def __init__(self, R, m, method):
        self.R = R
        self.m = m
        self.method = method
        p = R.shape[0]
        self.logdet_R = 2.0 * np.sum(np.log(np.diag(cho_factor(R, lower=True)[0])))
        self.R_inv = cho_solve(cho_factor(R, lower=True), np.eye(p))
        self.p = p

    def loadings(self, psi):
        """Optimal loadings for fixed uniquenesses."""
        root = np.sqrt(psi)
        if self.method == "ml":
            eig = sym_eigen(self.R / np.outer(root, root))
            theta = eig.values[: self.m]
            omega = eig.vectors[:, : self.m]
            scale = np.sqrt(np.maximum(theta - 1.0, 0.0))
        else:
            eig = sym_eigen(self.R_inv * np.outer(root, root))
            gamma = eig.values[::-1][: self.m]
            omega = eig.vectors[:, ::-1][:, : self.m]
            scale = np.sqrt(np.maximum(1.0 / gamma - 1.0, 0.0))
        return root[:, None] * omega * scale

    def evaluate(self, psi):
        """``(F, gradient, weight)``; weight is the metric used in the Hessian."""
        L = self.loadings(psi)
        sigma = L @ L.T + np.diag(psi)
        if self.method == "ml":
            c = cho_factor(sigma, lower=True)
            sigma_inv = cho_solve(c, np.eye(self.p))
            logdet = 2.0 * np.sum(np.log(np.diag(c[0])))
            F = logdet + np.sum(self.R * sigma_inv) - self.logdet_R - self.p
            W = sigma_inv
        else:
            E = np.eye(self.p) - self.R_inv @ sigma
            F = 0.5 * np.sum(E * E.T)
            W = self.R_inv
        grad = np.einsum("ij,jk,ki->i", W, sigma - self.R, W)
        return max(float(F), 0.0), grad, W, L

    def hessian(self, W, L):
        """Fisher-type Hessian with the loadings profiled out."""
        cols = np.any(L != 0.0, axis=0)
        P = W
        if cols.any():
            Lc = L[:, cols]
            WL = W @ Lc
            P = W - WL @ np.linalg.solve(Lc.T @ WL, WL.T)
        return P * P


def _extract_iterative(R, m, method, tol, max_iter):
    R, p = _check_corr(R, m)
    if (p - m) ** 2 < p + m:
        raise NumericError(f"{m} factors are not identified from {p} variables: need (p - m)^2 >= p + m")
    eig_R = sym_eigen(R)
    if not eig_R.values[-1] > 1e-12:
        raise NumericError("correlation matrix is not positive definite")
    try:
        obj = _Objective(R, m, method)
    except np.linalg.LinAlgError as exc:
        raise NumericError("correlation matrix is not positive definite") from exc

    lo, hi = UNIQUENESS_FLOOR, 1.0
    psi = np.clip(1.0 / np.diag(obj.R_inv), lo, hi)  # 1 - squared multiple correlation
    F, grad, W, L = obj.evaluate(psi)
    history = [F]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        free = ~(((psi <= lo) & (grad > 0)) | ((psi >= hi) & (grad < 0)))
        if not free.any():
            converged = True
            break
        H = obj.hessian(W, L)[np.ix_(free, free)]
        g = grad[free]
        try:
            d_free = -np.linalg.solve(H + 1e-12 * np.trace(H) / H.shape[0] * np.eye(H.shape[0]), g)
        except np.linalg.LinAlgError:
            d_free = -g
        if not g @ d_free < 0:
            d_free = -g
        d = np.zeros(p)
        d[free] = d_free
        t = 1.0
        accepted = None
        for _ in range(40):
            trial = np.clip(psi + t * d, lo, hi)
            F_new, grad_new, W_new, L_new = obj.evaluate(trial)
            if F_new <= F:
                accepted = (trial, F_new, grad_new, W_new, L_new)
                break
            t *= 0.5
        if accepted is None:
            converged = True  # no descent direction left at working precision
            break
        change = F - accepted[1]
        moved = float(np.max(np.abs(accepted[0] - psi)))
        psi, F, grad, W, L = accepted
        history.append(F)
        if change < tol and moved < tol:
            converged = True
            break

    L, _ = _sign_columns(obj.loadings(psi))
    return FactorModel(
        method=method, m=m, loadings=L, uniquenesses=psi, eigenvalues=eig_R.values,
        score_coefficients=obj.R_inv @ L, converged=converged, iterations=it,
        discrepancy=F, history=tuple(history),
    )


def extract_ml(R, m, tol=1e-6, max_iter=500):
    """Maximum-likelihood factor extraction.

    Minimizes ``ln det S + tr(R S^-1) - ln det R - p`` over
    ``S = L L^T + Psi``. For fixed ``Psi`` the optimal ``L`` comes from the
    top ``m`` eigenpairs of ``Psi^-1/2 R Psi^-1/2``; ``Psi`` is updated by
    projected Newton steps with backtracking, so the discrepancy never
    increases. Uniquenesses are kept in ``[0.005, 1]``. Iteration stops
    once both the discrepancy and every uniqueness change by less than
    ``tol`` in one step.
    """
    return _extract_iterative(R, m, "ml", tol, max_iter)


def extract_gls(R, m, tol=1e-6, max_iter=500):
    """Generalized least-squares factor extraction.

    Minimizes ``0.5 tr[(I - R^-1 S)^2]``; for fixed ``Psi`` the optimal
    loadings come from the ``m`` smallest eigenpairs of
    ``Psi^1/2 R^-1 Psi^1/2``. Same update scheme as :func:`extract_ml`.
    """
    return _extract_iterative(R, m, "gls", tol, max_iter)


def extract(R, m, method, **kwargs):
    if method == "pca":
        return extract_pca(R, m)
    if method == "ml":
        return extract_ml(R, m, **kwargs)
    if method == "gls":
        return extract_gls(R, m, **kwargs)
    raise ValueError(f"unknown extraction method {method!r}")


def factor_scores(fm, Z, check=True):
    """Factor scores of standardized rows ``Z``.

    Regression (Thomson) scores ``Z R^-1 L`` for ML and GLS, standardized
    component scores for PCA. With ``check`` the columns of ``Z`` must have
    mean 0 and sample sd 1 to within 1e-6.
    """
    Z = np.asarray(Z, dtype=np.float64)
    if check:
        if Z.shape[0] < 2:
            raise ValueError("need at least two rows")
        if (np.max(np.abs(Z.mean(axis=0))) > 1e-6
                or np.max(np.abs(Z.std(axis=0, ddof=1) - 1.0)) > 1e-6):
            raise ValueError("Z must be standardized (mean 0, sd 1)")
    return Z @ fm.score_coefficients


@dataclass(frozen=True, eq=False)
class FactorRegressionFit:
    """Regression of the response on factor scores of the predictors.

    ``implied_intercept`` and ``implied_coefficients`` express the same
    predictions directly on the original (unstandardized) predictors.
    """

    response: str
    predictors: tuple
    means: np.ndarray
    sds: np.ndarray
    factor_model: FactorModel
    score_regression: object
    implied_intercept: float
    implied_coefficients: np.ndarray

    @property
    def regression(self):
        return self.score_regression

    @property
    def n(self):
        return self.score_regression.n

    @property
    def k(self):
        return self.factor_model.m + 1

    @property
    def n_vars(self):
        return len(self.predictors)

    def standardize(self, d):
        return (_observed(d, list(self.predictors)) - self.means) / self.sds

    def regressor_matrix(self, d):
        """Factor scores of the rows of ``d``."""
        return factor_scores(self.factor_model, self.standardize(d), check=False)

    def predict(self, rows):
        reg = self.score_regression
        return reg.intercept + self.regressor_matrix(rows) @ reg.coefficients

    def predict_implied(self, rows):
        X = _observed(rows, list(self.predictors))
        return self.implied_intercept + X @ self.implied_coefficients


def fit_factor_regression(train, response, method="pca", rule="kaiser", tol=1e-6, max_iter=500):
    """Standardize, extract ``m`` factors, and regress ``response`` on the scores."""
    if method not in METHODS:
        raise ValueError(f"unknown extraction method {method!r}")
    names = train.predictors(response)
    X = _observed(train, names)
    y = _response(train, response)
    if train.n <= len(names) + 1:
        raise NumericError(f"need n > p + 1, got n={train.n}, p={len(names)}")
    R = correlation_matrix(X, names)
    means = X.mean(axis=0)
    sds = X.std(axis=0, ddof=1)
    Z = (X - means) / sds
    m = choose_num_factors(sym_eigen(R).values, rule)
    if method == "pca":
        fm = extract_pca(R, m)
    else:
        fm = _extract_iterative(R, m, method, tol, max_iter)
    scores = Z @ fm.score_coefficients
    reg = ols(scores, y, [f"F{j + 1}" for j in range(m)], response, n_vars=len(names))
    beta_z = fm.score_coefficients @ reg.coefficients
    implied = beta_z / sds
    return FactorRegressionFit(
        response=response, predictors=tuple(names), means=means, sds=sds,
        factor_model=fm, score_regression=reg,
        implied_intercept=float(reg.intercept - means @ implied),
        implied_coefficients=implied,
    )
