"""Small dataset builders shared by the test modules."""

import numpy as np

from regbench.data import CONTINUOUS, PREDICTOR, RESPONSE, ColumnMeta, Dataset


def make_dataset(X, y, names=None, response="y", name="t"):
    X = np.asarray(X, dtype=float).reshape(len(y), -1)
    names = list(names or [f"x{j + 1}" for j in range(X.shape[1])])
    cols = tuple(ColumnMeta(nm, CONTINUOUS, PREDICTOR) for nm in names)
    cols += (ColumnMeta(response, CONTINUOUS, RESPONSE),)
    values = np.column_stack([X, np.asarray(y, dtype=float)])
    return Dataset(name, cols, values, np.zeros(values.shape, bool))


def suppressor_design(n=200, seed=0, noise=0.5, eps=0.5):
    """``y = x2 + x3 + eps`` with ``x1 = x2 + x3 + u``.

    ``x1`` has the largest marginal correlation with ``y`` so forward
    selection takes it first, yet ``{x2, x3}`` is the best pair and makes
    ``x1`` redundant.
    """
    g = np.random.default_rng(seed)
    x2, x3 = g.normal(size=(2, n))
    x1 = x2 + x3 + noise * g.normal(size=n)
    y = x2 + x3 + eps * g.normal(size=n)
    return make_dataset(np.column_stack([x1, x2, x3]), y)
