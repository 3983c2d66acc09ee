import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regbench.errors import RankDeficiencyError
from regbench.numeric import chi2_sf, condition_number, f_sf, solve_least_squares, sym_eigen

from oracles import f_sf_quadrature, normal_equation_ols


class TestLeastSquares:
    def test_hand_normal_equations(self):
        # Sxx = 2, Sxy = 1: slope 1/2, intercept 4/3 - 1/2
        X = np.column_stack([np.ones(3), [0.0, 1.0, 2.0]])
        b = solve_least_squares(X, [1.0, 1.0, 2.0])
        assert b == pytest.approx([5 / 6, 1 / 2], abs=1e-14)

    def test_response_as_predictor(self, rng):
        y = rng.normal(size=20)
        b = solve_least_squares(np.column_stack([np.ones(20), y]), y)
        assert b == pytest.approx([0.0, 1.0], abs=1e-12)

    def test_matches_normal_equations(self, rng):
        X = np.column_stack([np.ones(50), rng.normal(size=(50, 4))])
        y = rng.normal(size=50)
        assert np.max(np.abs(solve_least_squares(X, y) - normal_equation_ols(X, y))) <= 1e-8

    def test_duplicate_column_names_index(self, rng):
        x = rng.normal(size=30)
        X = np.column_stack([np.ones(30), x, rng.normal(size=30), x])
        with pytest.raises(RankDeficiencyError) as info:
            solve_least_squares(X, rng.normal(size=30))
        assert info.value.column == 3

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            solve_least_squares(np.ones((3, 2)), [1.0, 2.0])

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(5, 80), p=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
    def test_gradient_vanishes(self, n, p, seed):
        g = np.random.default_rng(seed)
        p = min(p, n - 2)
        X = np.column_stack([np.ones(n), g.normal(size=(n, p))])
        y = g.normal(size=n) * 10 + 3
        b = solve_least_squares(X, y)
        grad = X.T @ (y - X @ b)
        assert np.max(np.abs(grad)) <= 1e-8 * np.max(np.abs(X.T @ y))


class TestSymEigen:
    def test_identity(self):
        e = sym_eigen(np.eye(3))
        assert e.values == pytest.approx([1, 1, 1])
        assert np.array_equal(e.vectors, np.eye(3))

    def test_two_by_two_correlation(self):
        e = sym_eigen([[1.0, 0.8], [0.8, 1.0]])
        assert e.values == pytest.approx([1.8, 0.2], abs=1e-14)
        assert e.vectors[:, 0] == pytest.approx([2**-0.5, 2**-0.5])

    def test_diagonal(self):
        e = sym_eigen(np.diag([1.0, 2.0]))
        assert e.values == pytest.approx([2.0, 1.0])
        assert np.allclose(np.abs(e.vectors), [[0, 1], [1, 0]])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            sym_eigen([[1.0, 0.5], [0.4, 1.0]])

    def test_sign_convention(self, rng):
        A = rng.normal(size=(6, 6))
        e = sym_eigen(A + A.T)
        lead = e.vectors[np.argmax(np.abs(e.vectors), axis=0), np.arange(6)]
        assert np.all(lead > 0)

    @settings(max_examples=40, deadline=None)
    @given(p=st.integers(1, 25), seed=st.integers(0, 2**32 - 1))
    def test_reconstruction_and_orthogonality(self, p, seed):
        A = np.random.default_rng(seed).normal(size=(p, p)) * 3
        S = A + A.T
        e = sym_eigen(S)
        norm = np.max(np.abs(S))
        assert np.max(np.abs(e.vectors.T @ e.vectors - np.eye(p))) <= 1e-10
        assert np.max(np.abs(e.reconstruct() - S)) <= 1e-9 * norm
        assert abs(e.values.sum() - np.trace(S)) <= 1e-10 * max(1.0, np.sum(np.abs(np.diag(S))))
        assert np.all(np.diff(e.values) <= 0)
        for i in range(p):
            resid = S @ e.vectors[:, i] - e.values[i] * e.vectors[:, i]
            assert np.linalg.norm(resid) <= 1e-8 * np.linalg.norm(S, 2)


class TestConditionNumber:
    def test_orthonormal_columns(self, rng):
        Q, _ = np.linalg.qr(rng.normal(size=(10, 4)))
        assert condition_number(Q, standardize=False) == pytest.approx(1.0)

    def test_orthogonal_columns_with_norms(self):
        X = np.array([[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]])
        assert condition_number(X, standardize=False) == pytest.approx(2.0)

    def test_duplicate_column_is_infinite(self, rng):
        x = rng.normal(size=12)
        X = np.column_stack([x, rng.normal(size=12), x])
        assert condition_number(X) == math.inf
        assert condition_number(X, standardize=False) == math.inf

    def test_empty(self):
        with pytest.raises(ValueError):
            condition_number(np.zeros((0, 0)))

    def test_permutation_invariant(self, rng):
        X = rng.normal(size=(30, 5))
        assert condition_number(X[:, [4, 2, 0, 1, 3]]) == pytest.approx(condition_number(X), rel=1e-12)

    def test_column_scaling_of_orthogonal_columns(self, rng):
        Q, _ = np.linalg.qr(rng.normal(size=(10, 3)))
        Q[:, 1] *= 7.5
        assert condition_number(Q, standardize=False) == pytest.approx(7.5)


class TestTails:
    def test_chi2_closed_forms(self):
        assert chi2_sf(0.0, 2) == 1.0
        assert chi2_sf(2.0, 2) == pytest.approx(math.exp(-1.0), abs=1e-12)
        assert chi2_sf(0.6667, 2) == pytest.approx(math.exp(-0.6667 / 2), abs=1e-12)

    def test_chi2_domain(self):
        with pytest.raises(ValueError):
            chi2_sf(-1.0, 2)

    def test_f_limits(self):
        assert f_sf(0.0, 3, 100) == 1.0
        assert f_sf(1e6, 3, 100) < 1e-12

    def test_f_matches_quadrature(self):
        assert f_sf(1.0, 2, 10) == pytest.approx(f_sf_quadrature(1.0, 2, 10), abs=1e-6)

    @pytest.mark.parametrize("F,d1,d2", [(0.3, 1, 5), (2.5, 4, 30), (7.0, 13, 200), (1.1, 19, 4092)])
    def test_f_against_quadrature_grid(self, F, d1, d2):
        assert f_sf(F, d1, d2) == pytest.approx(f_sf_quadrature(F, d1, d2), abs=1e-6)

    def test_f_domain(self):
        with pytest.raises(ValueError):
            f_sf(1.0, 0, 5)
        with pytest.raises(ValueError):
            f_sf(-0.1, 1, 5)

    @settings(max_examples=50, deadline=None)
    @given(a=st.floats(0, 50), b=st.floats(0, 50), df=st.integers(1, 30), df2=st.integers(1, 300))
    def test_monotone_and_bounded(self, a, b, df, df2):
        lo, hi = sorted((a, b))
        assert 0.0 <= chi2_sf(hi, df) <= chi2_sf(lo, df) <= 1.0
        assert 0.0 <= f_sf(hi, df, df2) <= f_sf(lo, df, df2) <= 1.0
