"""Multiple linear regression: full least-squares fit, forward selection
and stepwise (forward with backward elimination) selection."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DataError, NumericError
from .metrics import adjusted_r2, f_statistic
from .numeric import RANK_TOL, f_sf, solve_least_squares


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """Least-squares fit ``y = a + X b + e`` on the ``selected`` columns.

    ``k`` counts the intercept, so ``df = (k - 1, n - k)``. ``n_vars`` is
    the number of candidate predictors offered to the method, which can
    exceed ``len(selected)`` after variable selection.
    """

    response: str
    selected: tuple
    intercept: float
    coefficients: np.ndarray
    n: int
    k: int
    fitted: np.ndarray
    residuals: np.ndarray
    tss: float
    ess: float
    rss: float
    r2: float
    adj_r2_raw: float
    adj_r2_reported: float
    f_value: float
    df: tuple
    f_p: float
    sigma2: float
    n_vars: int

    @property
    def regression(self):
        return self

    def predict(self, rows):
        return predict(self, rows)

    def regressor_matrix(self, d):
        return _observed(d, list(self.selected))


@dataclass(frozen=True)
class SelectionStep:
    action: str  # "added" | "removed"
    name: str
    f_value: float
    p_value: float
    r2: float


@dataclass(frozen=True)
class SelectionTrace:
    steps: tuple = field(default_factory=tuple)

    def replay(self):
        """Selected set obtained by applying the steps in order."""
        current = []
        for s in self.steps:
            if s.action == "added":
                current.append(s.name)
            else:
                current.remove(s.name)
        return tuple(current)


def _observed(d, names):
    X = d.matrix(names)
    if names and np.any(d.missing[:, [d.index(nm) for nm in names]]):
        raise DataError(f"dataset {d.name!r} has missing values in the model columns")
    return X


def _response(d, response):
    j = d.index(response)
    if np.any(d.missing[:, j]):
        raise DataError(f"response {response!r} has missing values")
    return d.values[:, j]


def ols(X, y, names, response, n_vars=None):
    """Fit ``y`` on the columns of ``X`` plus an intercept.

    Parameters
    ----------
    X : ndarray, shape (n, q)
        Regressors without the intercept column (``q`` may be 0).
    y : ndarray, shape (n,)
    names : sequence of str
        Labels of the ``q`` regressors.
    response : str
    n_vars : int, optional
        Candidate predictor count to record; defaults to ``q``.
    """
    X = np.asarray(X, dtype=np.float64).reshape(len(y), -1)
    n, q = X.shape
    k = q + 1
    if n <= k:
        raise NumericError(f"need more rows than regressors: n={n}, k={k}")
    design = np.column_stack([np.ones(n), X])
    b = solve_least_squares(design, y)
    fitted = design @ b
    resid = y - fitted
    ybar = float(np.mean(y))
    tss = float(np.sum((y - ybar) ** 2))
    if not tss > 0.0:
        raise NumericError(f"response {response!r} is constant")
    ess = float(np.sum((fitted - ybar) ** 2))
    rss = float(resid @ resid)
    r2 = min(1.0, max(0.0, ess / tss)) if k > 1 else 0.0
    adj_raw, adj = adjusted_r2(r2, n, k)
    if k == 1:
        F, df, p = 0.0, (0, n - 1), 1.0
    else:
        F, df1, df2, p = f_statistic(r2, k, n)
        df = (df1, df2)
    return RegressionFit(
        response=response, selected=tuple(names), intercept=float(b[0]),
        coefficients=b[1:].copy(), n=n, k=k, fitted=fitted, residuals=resid,
        tss=tss, ess=ess, rss=rss, r2=r2, adj_r2_raw=adj_raw, adj_r2_reported=adj,
        f_value=F, df=df, f_p=p, sigma2=rss / (n - k),
        n_vars=q if n_vars is None else n_vars,
    )


def fit_full(train, response):
    """Least-squares fit of ``response`` on every predictor column."""
    names = train.predictors(response)
    X = _observed(train, names)
    y = _response(train, response)
    if train.n <= len(names) + 1:
        raise NumericError(f"need n > p + 1, got n={train.n}, p={len(names)}")
    return ols(X, y, names, response, n_vars=len(names))


def _orthonormal_basis(X_sel, n):
    Q, _ = np.linalg.qr(np.column_stack([np.ones(n), X_sel]))
    return Q


def _best_entry(X, y, selected, candidates):
    """Partial F of each candidate given the current model; returns the best.

    ``(index, F, p, rss_new)`` or ``None`` when no candidate is usable.
    """
    n = len(y)
    Q = _orthonormal_basis(X[:, selected], n)
    e = y - Q @ (Q.T @ y)
    rss = float(e @ e)
    k_new = len(selected) + 2
    if not candidates or n - k_new < 1:
        return None
    C = X[:, candidates]
    Rc = C - Q @ (Q.T @ C)
    Rc = Rc - Q @ (Q.T @ Rc)
    norm2 = np.sum(Rc * Rc, axis=0)
    usable = norm2 > (RANK_TOL**2) * np.sum(C * C, axis=0)
    if not usable.any():
        return None
    gain = np.zeros(len(candidates))
    gain[usable] = (Rc[:, usable].T @ e) ** 2 / norm2[usable]
    rss_new = np.maximum(rss - gain, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        F = np.where(rss_new > 0.0, gain / (rss_new / (n - k_new)), math.inf)
    F = np.where(usable, F, -math.inf)
    best = int(np.argmax(F))
    Fb = float(F[best])
    return candidates[best], Fb, f_sf(Fb, 1, n - k_new), float(rss_new[best])


def _rss(X, y, cols):
    n = len(y)
    design = np.column_stack([np.ones(n), X[:, cols]])
    r = y - design @ solve_least_squares(design, y)
    return float(r @ r)


def _worst_member(X, y, selected):
    """Included variable with the largest removal p-value: ``(pos, F, p)``."""
    n = len(y)
    k = len(selected) + 1
    rss = _rss(X, y, selected)
    worst = None
    for pos in range(len(selected)):
        rest = selected[:pos] + selected[pos + 1:]
        drop = _rss(X, y, rest) - rss
        F = math.inf if rss <= 0.0 else max(drop, 0.0) / (rss / (n - k))
        p = f_sf(F, 1, n - k)
        if worst is None or p > worst[2]:
            worst = (pos, F, p)
    return worst


def _prepare(train, response):
    names = train.predictors(response)
    X = _observed(train, names)
    y = _response(train, response)
    if train.n <= len(names) + 1:
        raise NumericError(f"need n > p + 1, got n={train.n}, p={len(names)}")
    tss = float(np.sum((y - y.mean()) ** 2))
    if not tss > 0.0:
        raise NumericError(f"response {response!r} is constant")
    return names, X, y, tss


def _try_enter(X, y, selected, names, alpha_enter, tss, steps):
    candidates = [j for j in range(X.shape[1]) if j not in selected]
    best = _best_entry(X, y, selected, candidates)
    if best is None:
        return False
    j, F, p, rss_new = best
    if not (p < alpha_enter or alpha_enter >= 1.0):
        return False
    selected.append(j)
    steps.append(SelectionStep("added", names[j], F, p, 1.0 - rss_new / tss))
    return True


def fit_forward(train, response, alpha_enter=0.05):
    """Forward selection by partial F.

    Starting from the intercept-only model, the candidate with the largest
    partial F enters while its p-value is below ``alpha_enter`` (ties go to
    the lowest column index). ``alpha_enter >= 1`` admits every candidate.

    Returns
    -------
    (RegressionFit, SelectionTrace)
    """
    names, X, y, tss = _prepare(train, response)
    selected, steps = [], []
    while _try_enter(X, y, selected, names, alpha_enter, tss, steps):
        pass
    fit = ols(X[:, selected], y, [names[j] for j in selected], response, n_vars=len(names))
    return fit, SelectionTrace(tuple(steps))


def fit_stepwise(train, response, alpha_enter=0.05, alpha_remove=0.10):
    """Forward selection with a backward elimination sweep after each entry.

    After every forward step, included variables whose partial-F p-value
    exceeds ``alpha_remove`` are removed one at a time (largest p first).
    Stops when a full pass neither adds nor removes anything.
    """
    if not alpha_remove > alpha_enter:
        raise ValueError("alpha_remove must exceed alpha_enter")
    names, X, y, tss = _prepare(train, response)
    selected, steps = [], []
    limit = 10 * max(1, len(names))
    for _ in range(limit):
        changed = _try_enter(X, y, selected, names, alpha_enter, tss, steps)
        while selected:
            pos, F, p = _worst_member(X, y, selected)
            if not p > alpha_remove:
                break
            j = selected.pop(pos)
            r2 = 1.0 - _rss(X, y, selected) / tss
            steps.append(SelectionStep("removed", names[j], F, p, r2))
            changed = True
        if not changed:
            break
    else:
        raise ConvergenceError(f"stepwise selection did not settle in {limit} iterations")
    fit = ols(X[:, selected], y, [names[j] for j in selected], response, n_vars=len(names))
    return fit, SelectionTrace(tuple(steps))


def predict(fit, rows):
    """``a + sum_j b_j x_j`` for every row of ``rows``.

    Other fitted models (factor regressions) are delegated to their own
    ``predict``.
    """
    if not isinstance(fit, RegressionFit):
        return fit.predict(rows)
    X = _observed(rows, list(fit.selected))
    return fit.intercept + X @ fit.coefficients
