"""The reference implementations are checked against closed forms before
they are trusted as oracles."""

import numpy as np
import pytest

from regbench.data import SynthSpec

from helpers import suppressor_design
from oracles import (
    best_subset,
    estimator_mse_ensemble,
    f_sf_quadrature,
    gaussian_elimination_solve,
    normal_equation_ols,
    procrustes_align,
)


def test_hand_regression():
    X = np.column_stack([np.ones(3), [0.0, 1.0, 2.0]])
    assert normal_equation_ols(X, [1.0, 1.0, 2.0]) == pytest.approx([5 / 6, 1 / 2], abs=1e-14)


def test_identity_design():
    y = np.array([3.0, -1.0, 2.5])
    assert normal_equation_ols(np.eye(3), y) == pytest.approx(y)


def test_elimination_pivots_and_detects_singularity():
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert gaussian_elimination_solve(A, [2.0, 3.0]) == pytest.approx([3.0, 2.0])
    with pytest.raises(ZeroDivisionError):
        gaussian_elimination_solve(np.ones((2, 2)), [1.0, 1.0])


@pytest.mark.parametrize("F", [0.0, 0.5, 1.0, 3.0, 20.0])
def test_f_quadrature_closed_form(F):
    # F(2, 2) has survival function 1 / (1 + F)
    assert f_sf_quadrature(F, 2, 2) == pytest.approx(1.0 / (1.0 + F), abs=1e-8)


def test_best_subset_single_true_predictor():
    g = np.random.default_rng(0)
    X = g.normal(size=(100, 5))
    y = 3.0 * X[:, 3] + 0.1 * g.normal(size=100)
    assert best_subset(X, y, 1)[0] == (3,)


def test_best_subset_guard():
    with pytest.raises(ValueError):
        best_subset(np.zeros((20, 13)), np.zeros(20), 1)


def test_suppressor_construction():
    d = suppressor_design()
    X, y = d.matrix(d.predictors()), d.column("y")
    assert best_subset(X, y, 1)[0] == (0,)
    assert best_subset(X, y, 2)[0] == (1, 2)


def test_ensemble_identity_and_unbiasedness():
    trials = 1000
    variance, bias2, mse = estimator_mse_ensemble(SynthSpec(n=40, p=3, seed=0), trials)
    assert np.max(np.abs(mse - (variance + bias2))) <= 1e-12
    se = np.sqrt(variance / trials)
    assert np.all(np.sqrt(bias2) < 3 * se)


def test_ensemble_needs_trials():
    with pytest.raises(ValueError):
        estimator_mse_ensemble(SynthSpec(n=20, p=2), 0)


def test_procrustes_undoes_rotation():
    g = np.random.default_rng(1)
    L = g.normal(size=(6, 2))
    t = 0.7
    Q = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    assert procrustes_align(L @ Q, L) == pytest.approx(L, abs=1e-12)
