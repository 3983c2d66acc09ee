"""Benchmark multiple linear regression against factor-analysis regression."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .bench import BenchConfig, ComparisonTable, emit_report, load_config, run_benchmark
from .data import (ColumnMeta, Dataset, SynthSpec, apply_missing_policy, generate_synthetic,
                   load_csv, save_csv)
from .factor import (FactorModel, FactorRegressionFit, choose_num_factors, correlation_matrix,
                     extract_gls, extract_ml, extract_pca, factor_scores, fit_factor_regression)
from .metrics import (MetricsReport, adjusted_r2, evaluate, f_statistic, modified_efficiency,
                      prediction_errors)
from .mlr import RegressionFit, SelectionTrace, fit_forward, fit_full, fit_stepwise, predict
from .numeric import chi2_sf, condition_number, f_sf, solve_least_squares, sym_eigen
from .preprocess import (SplitSpec, boxplot_stats, jarque_bera, log_transform, skewness_kurtosis,
                         split, zscore)

__all__ = [
    "BACKEND", "BenchConfig", "ColumnMeta", "ComparisonTable", "Dataset", "FactorModel",
    "FactorRegressionFit", "MetricsReport", "RegressionFit", "SelectionTrace", "SplitSpec",
    "SynthSpec", "adjusted_r2", "apply_missing_policy", "boxplot_stats", "chi2_sf",
    "choose_num_factors", "condition_number", "correlation_matrix", "emit_report", "evaluate",
    "extract_gls", "extract_ml", "extract_pca", "f_sf", "f_statistic", "factor_scores",
    "fit_factor_regression", "fit_forward", "fit_full", "fit_stepwise", "generate_synthetic",
    "jarque_bera", "load_config", "load_csv", "log_transform", "modified_efficiency", "predict",
    "prediction_errors", "run_benchmark", "save_csv", "skewness_kurtosis", "solve_least_squares",
    "split", "sym_eigen", "zscore",
]
