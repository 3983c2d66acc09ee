"""Goodness-of-fit criteria for one fitted model on a train/test split."""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DataError
from .numeric import condition_number, f_sf
from .preprocess import jarque_bera


def adjusted_r2(r2, n, k):
    """Adjusted R^2, ``1 - (1 - r2)(n - 1)/(n - k)``, raw and clamped at 0.

    ``k`` counts the intercept.
    """
    if n <= k:
        raise ValueError(f"adjusted R^2 needs n > k, got n={n}, k={k}")
    raw = 1.0 - (1.0 - r2) * (n - 1) / (n - k)
    return raw, max(0.0, raw)


def f_statistic(r2, k, n):
    """Overall regression F test.

    Returns ``(F, df1, df2, p)`` with ``df = (k - 1, n - k)``. ``r2 == 1``
    gives ``F = inf`` and ``p = 0``.
    """
    if n <= k or k < 2:
        raise ValueError(f"F statistic needs n > k >= 2, got n={n}, k={k}")
    if not 0.0 <= r2 <= 1.0:
        raise ValueError(f"r2 must lie in [0, 1], got {r2}")
    df1, df2 = k - 1, n - k
    if r2 == 1.0:
        return math.inf, df1, df2, 0.0
    F = (r2 / df1) / ((1.0 - r2) / df2)
    return F, df1, df2, f_sf(F, df1, df2)


def prediction_errors(y, y_hat):
    """Test-set ``(mse, mae, rmse)``."""
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.shape != y_hat.shape or y.ndim != 1:
        raise ValueError(f"length mismatch: {y.shape} vs {y_hat.shape}")
    if y.size == 0:
        raise ValueError("no observations")
    r = y - y_hat
    mse = float(np.mean(r * r))
    return mse, float(np.mean(np.abs(r))), math.sqrt(mse)


def modified_efficiency(y, y_hat, baseline_mean):
    """Legates-McCabe coefficient ``1 - sum|y - y_hat| / sum|y - baseline|``."""
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.shape != y_hat.shape:
        raise ValueError(f"length mismatch: {y.shape} vs {y_hat.shape}")
    denom = float(np.sum(np.abs(y - baseline_mean)))
    if not denom > 0.0:
        raise ValueError("every response equals the baseline; efficiency undefined")
    return 1.0 - float(np.sum(np.abs(y - y_hat))) / denom


@dataclass(frozen=True)
class MetricsReport:
    """The comparison criteria for one (dataset, method) cell.

    Errors (``mse``, ``mae``, ``rmse``, ``e1_mod``, ``jb_*``) are measured on
    the test set; ``r2``, ``adj_r2_*`` and the F test come from the
    training fit.
    """

    mse: float
    mae: float
    rmse: float
    r2: float
    adj_r2_raw: float
    adj_r2_reported: float
    cn: float
    n_vars: int
    f_value: float
    df: tuple
    f_p: float
    e1_mod: float
    jb_stat: float
    jb_p: float

    def to_dict(self):
        d = asdict(self)
        d["df"] = list(self.df)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["df"] = tuple(d["df"])
        return cls(**d)


def evaluate(fit, train, test, standardize_cn=True):
    """Assemble the :class:`MetricsReport` of ``fit`` (trained on ``train``).

    ``fit`` is a :class:`~regbench.mlr.RegressionFit` or a
    :class:`~regbench.factor.FactorRegressionFit`. The condition number is
    taken over the training regressors the fit actually used (selected
    variables, or factor scores); with no regressors it is 1.
    """
    if train.names != test.names:
        raise DataError("train and test datasets have different columns")
    reg = fit.regression
    y_test = test.column(fit.response)
    y_hat = fit.predict(test)
    mse, mae, rmse = prediction_errors(y_test, y_hat)
    Z = fit.regressor_matrix(train)
    cn = condition_number(Z, standardize=standardize_cn) if Z.shape[1] else 1.0
    baseline = float(np.mean(train.column(fit.response)))
    e1 = modified_efficiency(y_test, y_hat, baseline)
    try:
        jb, jb_p = jarque_bera(y_test - y_hat)
    except DataError:
        # constant residuals (exact fit) or fewer than four test rows
        jb, jb_p = 0.0, 1.0
    return MetricsReport(
        mse=mse, mae=mae, rmse=rmse,
        r2=reg.r2, adj_r2_raw=reg.adj_r2_raw, adj_r2_reported=reg.adj_r2_reported,
        cn=cn, n_vars=fit.n_vars,
        f_value=reg.f_value, df=reg.df, f_p=reg.f_p,
        e1_mod=e1, jb_stat=jb, jb_p=jb_p,
    )
