import io
import math

import numpy as np
import pytest

from regbench.data import (
    CATEGORICAL,
    CONTINUOUS,
    IGNORED,
    RESPONSE,
    ColumnMeta,
    Dataset,
    SynthSpec,
    apply_missing_policy,
    generate_synthetic,
    load_csv,
    save_csv,
    true_coefficients,
)
from regbench.errors import DataError, ParseError
from regbench.mlr import fit_full
from regbench.numeric import condition_number


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoad:
    def test_fixture(self, fixture_csv):
        d = load_csv(fixture_csv)
        assert (d.n, d.p) == (10, 5)
        assert d.missing_count() == 2
        assert d.meta("region").kind == CATEGORICAL
        assert d.meta("spend").kind == CONTINUOUS
        # first-appearance coding
        assert d.column("region")[:4].tolist() == [0, 1, 2, 0]
        assert math.isnan(d.column("income")[2])

    def test_missing_tokens(self, tmp_path):
        d = load_csv(write(tmp_path, "a,b\n1,?\n,2\nNA,3\n4,5\n"))
        assert d.missing.sum() == 3
        assert d.meta("a").kind == CONTINUOUS

    def test_quoted_fields(self, tmp_path):
        d = load_csv(write(tmp_path, 'a,b\n"1",x\n"2","y, z"\n'))
        assert d.column("b").tolist() == [0, 1]

    def test_ragged_row_reports_line(self, tmp_path):
        with pytest.raises(ParseError) as info:
            load_csv(write(tmp_path, "a,b\n1,2\n3\n"))
        assert info.value.line == 3
        assert "line 3" in str(info.value)

    def test_non_numeric_under_schema(self, tmp_path):
        schema = [ColumnMeta("a", CONTINUOUS, "predictor"), ColumnMeta("b", CONTINUOUS, RESPONSE)]
        with pytest.raises(ParseError) as info:
            load_csv(write(tmp_path, "a,b\n1,2\n3,4\nfoo,5\n"), schema=schema)
        assert info.value.line == 4

    def test_schema_sets_roles(self, tmp_path):
        schema = [ColumnMeta("a", CONTINUOUS, IGNORED), ColumnMeta("b", CONTINUOUS, RESPONSE)]
        d = load_csv(write(tmp_path, "a,b\n1,2\n3,4\n"), schema=schema)
        assert d.response == "b" and d.meta("a").role == IGNORED

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(tmp_path / "absent.csv")

    def test_header_only(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(write(tmp_path, "a,b\n"))


class TestDataset:
    def test_immutable(self, fixture_csv):
        d = load_csv(fixture_csv)
        with pytest.raises(ValueError):
            d.values[0, 0] = 1.0

    def test_invariants(self):
        cols = (ColumnMeta("a", CONTINUOUS, "predictor"), ColumnMeta("b", CONTINUOUS, RESPONSE))
        with pytest.raises(DataError):
            Dataset("x", cols, np.array([[1.0, np.inf]]), np.zeros((1, 2), bool))
        with pytest.raises(DataError):
            Dataset("x", cols[:1], np.ones((2, 1)), np.zeros((2, 1), bool))
        with pytest.raises(DataError):
            Dataset("x", (cols[0], cols[0]), np.ones((2, 2)), np.zeros((2, 2), bool))

    def test_with_roles(self, fixture_csv):
        d = load_csv(fixture_csv).with_roles("spend", ignored=["region"])
        assert d.response == "spend"
        assert d.predictors() == ["age", "income", "visits"]
        with pytest.raises(DataError):
            d.with_roles("nope")


class TestRoundTrip:
    def test_fixture_round_trip(self, fixture_csv, tmp_path):
        d = load_csv(fixture_csv)
        save_csv(d, tmp_path / "out.csv")
        e = load_csv(tmp_path / "out.csv")
        assert np.array_equal(d.missing, e.missing)
        assert d.equals(e, tol=1e-12)

    def test_synthetic_round_trip_exact(self, tmp_path):
        d, _ = generate_synthetic(SynthSpec(n=40, p=4, collinearity=0.3, seed=9))
        buf = io.StringIO()
        save_csv(d, buf)
        p = write(tmp_path, buf.getvalue())
        e = load_csv(p)
        assert np.array_equal(d.values, e.values)


class TestMissingPolicy:
    def test_listwise(self, fixture_csv):
        d = load_csv(fixture_csv)
        out = apply_missing_policy(d, "listwise-delete")
        assert out.n == 8 and not out.missing.any()
        assert out.n == int(np.sum(~d.missing.any(axis=1)))

    def test_mean_impute_middle(self, tmp_path):
        d = load_csv(write(tmp_path, "a,b\n1,5\nNA,6\n3,7\n"))
        out = apply_missing_policy(d, "mean-impute")
        assert out.column("a").tolist() == [1.0, 2.0, 3.0]
        assert not out.missing.any()

    @pytest.mark.parametrize("policy", ["listwise-delete", "mean-impute"])
    def test_identity_without_missing(self, policy):
        d, _ = generate_synthetic(SynthSpec(n=20, p=3, seed=1))
        assert apply_missing_policy(d, policy).equals(d)

    def test_all_rows_dropped(self, tmp_path):
        d = load_csv(write(tmp_path, "a,b\n1,NA\nNA,2\n"))
        with pytest.raises(DataError):
            apply_missing_policy(d, "listwise-delete")

    def test_ignored_columns_do_not_drop_rows(self, fixture_csv):
        d = load_csv(fixture_csv).with_roles("spend", ignored=["income", "visits"])
        assert apply_missing_policy(d, "listwise-delete").n == 10

    def test_unknown_policy(self, fixture_csv):
        with pytest.raises(ValueError):
            apply_missing_policy(load_csv(fixture_csv), "drop-everything")


class TestSynthetic:
    def test_deterministic(self):
        s = SynthSpec(n=60, p=4, collinearity=0.5, outlier_fraction=0.1, skew=0.5, seed=77)
        a, ta = generate_synthetic(s)
        b, tb = generate_synthetic(s)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(ta.outlier_rows, tb.outlier_rows)

    def test_seed_matters(self):
        a, _ = generate_synthetic(SynthSpec(n=30, p=2, seed=1))
        b, _ = generate_synthetic(SynthSpec(n=30, p=2, seed=2))
        assert not np.array_equal(a.values, b.values)

    def test_collinear_condition_number(self):
        d, _ = generate_synthetic(SynthSpec(n=200, p=5, collinearity=0.999, seed=3))
        assert condition_number(d.matrix(d.predictors())) > 100

    def test_outlier_count(self):
        _, truth = generate_synthetic(SynthSpec(n=100, p=3, outlier_fraction=0.1, seed=4))
        assert len(truth.outlier_rows) == 10
        assert len(set(truth.outlier_rows)) == 10

    def test_noise_free_recovery(self):
        d, truth = generate_synthetic(SynthSpec(n=50, p=6, collinearity=0.4, noise_sd=1e-12, seed=8))
        fit = fit_full(d, "y")
        assert abs(fit.intercept - truth.intercept) <= 1e-6
        assert np.max(np.abs(fit.coefficients - truth.coefficients)) <= 1e-6

    def test_skew_makes_first_predictor_positive(self):
        d, _ = generate_synthetic(SynthSpec(n=100, p=2, skew=1.0, seed=5))
        assert np.all(d.column("x1") > 0)

    def test_true_coefficients(self):
        assert true_coefficients(3).tolist() == [1.0, -1.25, 1.5]

    @pytest.mark.parametrize(
        "kwargs",
        [dict(n=0, p=2), dict(n=10, p=0), dict(n=10, p=2, collinearity=1.0),
         dict(n=10, p=2, noise_sd=0.0), dict(n=10, p=2, outlier_fraction=1.0),
         dict(n=10, p=2, skew=-0.1), dict(n=10, p=2, seed=-1)],
    )
    def test_invalid_spec(self, kwargs):
        with pytest.raises((DataError, ValueError)):
            SynthSpec(**kwargs)
