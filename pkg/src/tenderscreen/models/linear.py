"""Logistic regression, plain and L1-penalized.

The unpenalized fit is damped Newton on the Bernoulli log-likelihood; the
lasso is glmnet-style: an outer quadratic approximation around the current
fit and an inner cyclic coordinate descent with soft-thresholding, run down
a descending lambda path with warm starts. Features are standardized
internally and the constants stored in the artifact, so callers always pass
raw feature values.
"""

from __future__ import annotations

import math

import numpy as np

try:  # optional accelerator; the fallback runs the identical arithmetic
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap if not (args and callable(args[0])) else args[0]

from ..features import TrainingData
from .artifact import ModelArtifact, register_predictor
from .common import (
    check_two_classes,
    derive_rng,
    log_loss,
    sigmoid,
    standardize_apply,
    standardize_fit,
    stratified_folds,
)
from .configs import LassoConfig, LogitConfig


def _predict_linear(artifact, X):
    p = artifact.parameters
    mean = np.asarray(p["standardize_mean"])
    sd = np.asarray(p["standardize_sd"])
    coef = np.asarray(p["coef"])
    eta = p["intercept"] + standardize_apply(X, mean, sd) @ coef
    return sigmoid(eta)


register_predictor("logit", _predict_linear)
register_predictor("lasso_logit", _predict_linear)


def _newton_logistic(Xs: np.ndarray, y: np.ndarray, max_iter: int, tol: float):
    """Damped Newton MLE on [1 | Xs]. Returns (intercept, coef, diagnostics)."""
    n, p = Xs.shape
    A = np.hstack([np.ones((n, 1)), Xs])
    beta = np.zeros(p + 1)
    prob = sigmoid(A @ beta)
    loss = log_loss(y, prob)
    grad_max = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        grad = A.T @ (y - prob) / n
        grad_max = float(np.max(np.abs(grad)))
        if grad_max < tol:
            break
        w = prob * (1.0 - prob)
        H = (A * w[:, None]).T @ A / n
        ridge = 1e-12
        while True:
            try:
                step = np.linalg.solve(H + ridge * np.eye(p + 1), grad)
                break
            except np.linalg.LinAlgError:
                ridge *= 100.0
        # halve the step while it fails to decrease the loss
        scale = 1.0
        for _ in range(40):
            cand = beta + scale * step
            cand_prob = sigmoid(A @ cand)
            cand_loss = log_loss(y, cand_prob)
            if cand_loss <= loss + 1e-14:
                break
            scale *= 0.5
        beta = beta + scale * step
        prob = sigmoid(A @ beta)
        loss = log_loss(y, prob)
    converged = grad_max < tol
    diag = {"converged": converged, "iterations": it, "grad_max_norm": grad_max}
    return float(beta[0]), beta[1:], diag


def train_logit(data: TrainingData, config: LogitConfig = LogitConfig()) -> ModelArtifact:
    """Maximum-likelihood logistic regression.

    Non-convergence (e.g. separable data) is reported in diagnostics; the
    artifact is still returned.
    """
    check_two_classes(data.y)
    mean, sd = standardize_fit(data.X)
    Xs = standardize_apply(data.X, mean, sd)
    intercept, coef, diag = _newton_logistic(Xs, data.y, config.max_iter, config.tol)
    params = {
        "intercept": intercept,
        "coef": coef.tolist(),
        "standardize_mean": mean.tolist(),
        "standardize_sd": sd.tolist(),
    }
    return ModelArtifact(
        family="logit",
        feature_mode=data.feature_mode,
        feature_names=data.feature_names,
        training_config=config,
        parameters=params,
        diagnostics=diag,
    )


@njit(cache=True)
def _cd_gram(q, G, lam, beta, tol, max_sweeps=1000):
    """Cyclic coordinate descent on the quadratic
    (1/2) beta' G beta - q' beta + lam * |beta[1:]|_1 (index 0 unpenalized).

    Works entirely on the (p+1)x(p+1) Gram matrix, so a sweep costs O(p^2)
    regardless of the sample count. beta is updated in place.
    """
    p1 = len(q)
    gv = G @ beta  # maintained gradient term
    for _ in range(max_sweeps):
        max_delta = 0.0
        for j in range(p1):
            gjj = G[j, j]
            if gjj <= 0:
                continue
            rho = q[j] - gv[j] + gjj * beta[j]
            if j == 0:
                new = rho / gjj
            elif rho > lam:
                new = (rho - lam) / gjj
            elif rho < -lam:
                new = (rho + lam) / gjj
            else:
                new = 0.0
            d = new - beta[j]
            if d != 0.0:
                for i in range(p1):
                    gv[i] += G[i, j] * d
                beta[j] = new
                if abs(d) > max_delta:
                    max_delta = abs(d)
        if max_delta < tol:
            break
    return beta


def _lasso_path(Xs, y, lambdas, max_outer, tol):
    """Fit the descending-lambda path with warm starts.

    Outer loop: IRLS quadratic approximation; inner loop: coordinate
    descent with soft-thresholding. Returns [(intercept, coef)] aligned
    with lambdas.
    """
    n, p = Xs.shape
    A = np.hstack([np.ones((n, 1)), Xs])
    ybar = float(np.clip(y.mean(), 1e-12, 1 - 1e-12))
    beta = np.zeros(p + 1)
    beta[0] = math.log(ybar / (1.0 - ybar))
    out = []
    for lam in lambdas:
        for _ in range(max_outer):
            old = beta.copy()
            eta = A @ beta
            prob = sigmoid(eta)
            w = np.clip(prob * (1.0 - prob), 1e-5, None)
            z = eta + (y - prob) / w
            Aw = A * w[:, None]
            q = Aw.T @ z / n
            G = Aw.T @ A / n
            beta = _cd_gram(q, G, lam, beta, tol)
            if np.max(np.abs(beta - old)) < 10 * tol:
                break
        out.append((float(beta[0]), beta[1:].copy()))
    return out


def _auto_lambda_grid(Xs, y, n_lambda, min_ratio):
    n = Xs.shape[0]
    lam_max = float(np.max(np.abs(Xs.T @ (y - y.mean()))) / n)
    lam_max = max(lam_max, 1e-10)
    return np.geomspace(lam_max, lam_max * min_ratio, n_lambda)


def train_lasso_logit(data: TrainingData, config: LassoConfig = LassoConfig()) -> ModelArtifact:
    """L1-penalized logistic regression with CV-chosen penalty.

    The penalty weight is selected by k-fold cross-validated log-loss over
    a log-spaced grid (ties prefer the stronger penalty); coefficients at
    the selected value are refit on all data and zeros are exact.
    """
    check_two_classes(data.y)
    y = data.y
    mean, sd = standardize_fit(data.X)
    Xs = standardize_apply(data.X, mean, sd)

    if config.lambda_grid is not None:
        lambdas = np.asarray(sorted(config.lambda_grid, reverse=True), dtype=np.float64)
    else:
        lambdas = _auto_lambda_grid(Xs, y, config.n_lambda, config.lambda_min_ratio)

    cv_losses = None
    if len(lambdas) > 1:
        folds = stratified_folds(y, config.cv_folds, derive_rng(config.seed, 11))
        totals = np.zeros(len(lambdas))
        for k in range(config.cv_folds):
            tr = folds != k
            va = ~tr
            fits = _lasso_path(Xs[tr], y[tr], lambdas, config.max_outer, config.tol)
            for i, (b0, cf) in enumerate(fits):
                pv = sigmoid(b0 + Xs[va] @ cf)
                totals[i] += log_loss(y[va], pv)
        cv_losses = totals / config.cv_folds
        best = int(np.argmin(cv_losses))  # descending grid: first hit is the largest lambda
        chosen = float(lambdas[best])
        path_lambdas = lambdas[: best + 1]
    else:
        chosen = float(lambdas[0])
        path_lambdas = lambdas

    fits = _lasso_path(Xs, y, path_lambdas, config.max_outer, config.tol)
    b0, coef = fits[-1]
    params = {
        "intercept": b0,
        "coef": coef.tolist(),
        "standardize_mean": mean.tolist(),
        "standardize_sd": sd.tolist(),
        "lambda": chosen,
    }
    diag = {
        "n_zero_coefficients": int(np.sum(coef == 0.0)),
        "zero_features": [data.feature_names[j] for j in range(len(coef)) if coef[j] == 0.0],
    }
    if cv_losses is not None:
        diag["cv_log_loss"] = [float(v) for v in cv_losses]
        diag["lambda_grid"] = [float(v) for v in lambdas]
    return ModelArtifact(
        family="lasso_logit",
        feature_mode=data.feature_mode,
        feature_names=data.feature_names,
        training_config=config,
        parameters=params,
        diagnostics=diag,
    )
