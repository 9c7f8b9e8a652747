"""Standardized estimation against the worked study: coefficients, R²,
inference, and the normal-equation/variance identities.
"""

import numpy as np
import pytest

from pathtrek.errors import (
    DegreesOfFreedomExhausted,
    SingularMatrix,
    VariableMissing,
)
from pathtrek.estimation import coefficient_inference, fit_standardized
from pathtrek.pathspec import parse_model

from conftest import NAMES, OBSERVED_R, make_corr


def test_single_parent_equals_raw_correlation(revised_refit, observed_corr):
    eq = revised_refit.equation("X2")
    assert eq.parents == ("X1",)
    assert eq.beta[0] == observed_corr.value("X1", "X2") == 0.531
    assert eq.r_squared == pytest.approx(0.531 ** 2, abs=1e-12)


def test_revised_equations_match_published(revised_refit):
    eq3 = revised_refit.equation("X3")
    assert eq3.beta == pytest.approx((0.405, 0.204), abs=1e-3)
    eq4 = revised_refit.equation("X4")
    assert eq4.parents == ("X1", "X2", "X3")
    assert eq4.beta == pytest.approx((0.239, 0.216, 0.217), abs=1e-3)
    eqy = revised_refit.equation("Y")
    assert eqy.parents == ("X2", "X3", "X4")
    assert eqy.beta == pytest.approx((0.145, 0.084, 0.782), abs=1e-3)


def test_revised_r_squared(revised_refit):
    r2 = revised_refit.r_squared()
    assert r2["X2"] == pytest.approx(0.282, abs=1e-3)
    assert r2["X3"] == pytest.approx(0.294, abs=1e-3)
    assert r2["X4"] == pytest.approx(0.299, abs=1e-3)
    assert r2["Y"] == pytest.approx(0.805, abs=1e-3)


def test_disturbance_identity(revised_refit, observed_corr):
    for y, eq in revised_refit.equations.items():
        r_py = [observed_corr.value(p, y) for p in eq.parents]
        explained = sum(b * r for b, r in zip(eq.beta, r_py))
        assert eq.disturbance ** 2 + explained == pytest.approx(1.0, abs=1e-9)


def test_normal_equation_residual(revised_refit, observed_corr):
    for y, eq in revised_refit.equations.items():
        r_pp = observed_corr.submatrix(eq.parents)
        r_py = np.array([observed_corr.value(p, y) for p in eq.parents])
        resid = np.abs(r_pp @ np.array(eq.beta) - r_py).max()
        assert resid <= 1e-10


def test_initial_y_equation(observed_corr, initial_model):
    fit = coefficient_inference(fit_standardized(observed_corr, initial_model))
    eqy = fit.equation("Y")
    assert eqy.parents == ("X1", "X2", "X3", "X4")
    assert eqy.beta == pytest.approx((0.0471, 0.1294, 0.0706, 0.7724), abs=1e-3)
    # only the first predictor is non-significant at 0.05
    assert eqy.p[0] == pytest.approx(0.211, abs=2e-3)
    assert eqy.significant == (False, True, True, True)
    # the X4 equation reduces to the raw correlation
    assert fit.equation("X4").beta[0] == pytest.approx(0.431, abs=1e-12)


def test_inference_matches_direct_formula(revised_refit, observed_corr):
    fit = coefficient_inference(revised_refit)
    n = observed_corr.n
    for y, eq in fit.equations.items():
        inv = np.linalg.inv(observed_corr.submatrix(eq.parents))
        df = n - len(eq.parents) - 1
        for j in range(len(eq.parents)):
            se = np.sqrt((1 - eq.r_squared) * inv[j, j] / df)
            assert eq.se[j] == pytest.approx(se, rel=1e-10)
            assert eq.t[j] == pytest.approx(eq.beta[j] / se, rel=1e-10)
        assert all(0.0 <= p <= 1.0 for p in eq.p)


def test_single_predictor_significance(observed_corr):
    m = parse_model("var X1\nvar X2\npath X1 -> X2\n")
    fit = coefficient_inference(fit_standardized(observed_corr, m))
    assert fit.equation("X2").p[0] < 0.001


def test_degrees_of_freedom_exhausted(revised_model):
    corr = make_corr(NAMES, OBSERVED_R, 4)  # n == max parents + 1
    fit = fit_standardized(corr, revised_model)
    with pytest.raises(DegreesOfFreedomExhausted):
        coefficient_inference(fit)


def test_variable_missing(observed_corr):
    m = parse_model("var X1\nvar Q\npath X1 -> Q\n")
    with pytest.raises(VariableMissing):
        fit_standardized(observed_corr, m)


def test_singular_parent_block():
    r = np.array([
        [1.0, 1.0, 0.5],
        [1.0, 1.0, 0.5],
        [0.5, 0.5, 1.0],
    ])
    corr = make_corr(("A", "B", "C"), r, 50)
    m = parse_model("var A\nvar B\nvar C\npath A -> C\npath B -> C\n")
    with pytest.raises(SingularMatrix, match="C"):
        fit_standardized(corr, m)


def test_no_endogenous_rejected(observed_corr):
    m = parse_model("var X1\nvar X2\n")
    with pytest.raises(ValueError, match="endogenous"):
        fit_standardized(observed_corr, m)


def test_annotated_model_carries_fit(revised_refit):
    annotated = revised_refit.annotated_model()
    assert annotated.is_annotated
    assert annotated.coefficient("X1", "X2") == 0.531
    assert annotated.coefficient("X4", "Y") == pytest.approx(0.782, abs=1e-3)


def test_r_squared_in_range_random_pd_matrices(revised_model):
    gen = np.random.default_rng(99)
    for _ in range(100):
        w = gen.uniform(-1, 1, (5, 8))
        cov = w @ w.T + np.diag(gen.uniform(0.5, 2.0, 5))
        d = np.sqrt(np.diag(cov))
        r = cov / np.outer(d, d)
        corr = make_corr(NAMES, r, 200)
        fit = fit_standardized(corr, revised_model)
        for eq in fit.equations.values():
            assert 0.0 <= eq.r_squared <= 1.0


def test_equations_independent(observed_corr, initial_model):
    # removing one equation's arrow leaves the others bit-identical
    fit_full = fit_standardized(observed_corr, initial_model)
    reduced = initial_model.with_arrows(
        [a for a in initial_model.arrows if (a.source, a.target) != ("X1", "Y")]
    )
    fit_reduced = fit_standardized(observed_corr, reduced)
    for y in ("X2", "X3", "X4"):
        assert fit_full.equation(y).beta == fit_reduced.equation(y).beta
