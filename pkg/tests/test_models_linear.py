import math

import numpy as np
import pytest
from scipy.optimize import minimize

from tenderscreen import models as M
from tenderscreen.errors import SingleClassData
from tenderscreen.features import TrainingData


def make_data(X, y, names=None):
    X = np.asarray(X, dtype=np.float64)
    names = tuple(names or (f"x{i}" for i in range(X.shape[1])))
    return TrainingData(
        X=X,
        y=np.asarray(y, dtype=np.float64),
        feature_names=names,
        feature_mode="expanded",
        tender_ids=tuple(str(i) for i in range(len(y))),
    )


def test_logit_separable_direction():
    x = np.linspace(-5, 5, 40).reshape(-1, 1)
    y = (x[:, 0] > 0).astype(float)
    model = M.train_logit(make_data(x, y))
    assert model.predict_proba(np.array([10.0])) > 0.99


def test_logit_no_signal_gives_half():
    # every feature row appears once per class: labels carry no information,
    # so the fit is intercept-only and probabilities sit at the base rate
    rng = np.random.default_rng(0)
    half = rng.normal(size=(200, 3))
    X = np.vstack([half, half])
    y = np.array([0.0] * 200 + [1.0] * 200)
    model = M.train_logit(make_data(X, y))
    p = model.predict_proba(X)
    assert np.all(np.abs(p - 0.5) < 0.02)


def test_logit_matches_independent_optimizer():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(100, 4))
    beta_true = np.array([1.0, -2.0, 0.5, 0.0])
    y = (rng.uniform(size=100) < 1 / (1 + np.exp(-(0.3 + X @ beta_true)))).astype(float)
    data = make_data(X, y)
    model = M.train_logit(data)

    # oracle: scipy BFGS on the same standardized log-likelihood
    mean, sd = X.mean(0), X.std(0, ddof=1)
    Xs = (X - mean) / sd
    A = np.hstack([np.ones((100, 1)), Xs])

    def nll(b):
        eta = A @ b
        return float(np.sum(np.logaddexp(0, eta) - y * eta))

    res = minimize(nll, np.zeros(5), method="BFGS", tol=1e-12)
    assert res.fun == pytest.approx(
        nll(np.array([model.parameters["intercept"], *model.parameters["coef"]])), abs=1e-8
    )
    got = np.array([model.parameters["intercept"], *model.parameters["coef"]])
    assert np.max(np.abs(got - res.x)) < 1e-6


def test_logit_single_class_raises():
    X = np.zeros((10, 2))
    with pytest.raises(SingleClassData):
        M.train_logit(make_data(X, np.ones(10)))


def test_logit_nonconvergence_reported_not_raised():
    x = np.linspace(-5, 5, 40).reshape(-1, 1)
    y = (x[:, 0] > 0).astype(float)
    model = M.train_logit(make_data(x, y), M.LogitConfig(max_iter=2))
    assert model.diagnostics["converged"] is False
    assert 0.0 <= model.predict_proba(np.array([1.0])) <= 1.0


def test_lasso_total_penalty_limit():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(200, 5))
    y = (rng.uniform(size=200) < 0.3).astype(float)
    model = M.train_lasso_logit(make_data(X, y), M.LassoConfig(lambda_grid=(1e6,)))
    coef = np.array(model.parameters["coef"])
    assert np.all(coef == 0.0)
    base = y.mean()
    assert model.parameters["intercept"] == pytest.approx(math.log(base / (1 - base)), abs=1e-6)


def test_lasso_unpenalized_limit_matches_logit():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(300, 5))
    beta = np.array([1.0, -0.5, 0.25, 0.0, 0.0])
    y = (rng.uniform(size=300) < 1 / (1 + np.exp(-(X @ beta)))).astype(float)
    data = make_data(X, y)
    mle = M.train_logit(data)
    l0 = M.train_lasso_logit(data, M.LassoConfig(lambda_grid=(0.0,), max_outer=300, tol=1e-11))
    diff = np.max(np.abs(np.array(mle.parameters["coef"]) - np.array(l0.parameters["coef"])))
    assert diff < 1e-4


def test_lasso_recovers_sparse_signal():
    rng = np.random.default_rng(5)
    n = 500
    X = rng.normal(size=(n, 11))
    eta = 2.0 * X[:, 0]  # feature 0 is signal, 1..10 noise
    y = (rng.uniform(size=n) < 1 / (1 + np.exp(-eta))).astype(float)
    model = M.train_lasso_logit(make_data(X, y), M.LassoConfig(seed=1))
    coef = np.array(model.parameters["coef"])
    assert coef[0] > 0
    assert int(np.sum(coef[1:] == 0.0)) >= 8


def test_lasso_deterministic():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(150, 6))
    y = (rng.uniform(size=150) < 1 / (1 + np.exp(-X[:, 0]))).astype(float)
    data = make_data(X, y)
    a = M.train_lasso_logit(data, M.LassoConfig(seed=9))
    b = M.train_lasso_logit(data, M.LassoConfig(seed=9))
    assert a.serialize() == b.serialize()
