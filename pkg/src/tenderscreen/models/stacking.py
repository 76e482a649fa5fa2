"""Super learner: cross-validation-weighted average of base classifiers.

Out-of-fold probability predictions of every base learner form a stacking
matrix; non-negative least squares against the labels, normalized onto the
probability simplex, gives the ensemble weights (identical base columns
share their weight uniformly; an all-zero solution falls back to uniform).
Base learners are then refit on the full data. A base learner that throws
is logged and carries weight zero.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy.optimize import nnls

from ..features import TrainingData
from .artifact import ModelArtifact, register_predictor
from .boosting import train_gradient_boosting
from .common import check_two_classes, derive_rng, stratified_folds
from .configs import SuperConfig
from .forest import train_random_forest
from .linear import train_lasso_logit, train_logit
from .neural import train_neural_net

_BASE_TRAINERS = {
    "logit": train_logit,
    "lasso_logit": train_lasso_logit,
    "random_forest": train_random_forest,
    "gradient_boosting": train_gradient_boosting,
    "neural_net": train_neural_net,
}


def _predict_super(artifact, X):
    models = artifact._cache.get("models")
    if models is None:
        models = [ModelArtifact.from_json(m) for m in artifact.parameters["base_models"]]
        artifact._cache["models"] = models
    weights = artifact.parameters["weights"]
    p = np.zeros(X.shape[0])
    for w, m in zip(weights, models):
        if w > 0:
            p += w * m.predict_proba(X)
    return p


register_predictor("super_learner", _predict_super)


def _derived_seed(seed: int, *path: int) -> int:
    return int(np.random.SeedSequence([int(seed), *path]).generate_state(1)[0])


def simplex_weights(Z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """NNLS weights normalized to sum 1, duplicate columns sharing uniformly."""
    k = Z.shape[1]
    groups: dict[bytes, list[int]] = {}
    for j in range(k):
        groups.setdefault(Z[:, j].tobytes(), []).append(j)
    reps = [cols[0] for cols in groups.values()]
    w_rep, _ = nnls(Z[:, reps], y)
    w = np.zeros(k)
    for rep_w, cols in zip(w_rep, groups.values()):
        for j in cols:
            w[j] = rep_w / len(cols)
    total = w.sum()
    if total <= 0:
        return np.full(k, 1.0 / k)
    return w / total


def train_super_learner(
    data: TrainingData, config: SuperConfig = SuperConfig()
) -> ModelArtifact:
    check_two_classes(data.y)
    y = data.y
    n = len(y)
    bases = list(config.base_learners)
    k = len(bases)
    folds = stratified_folds(y, config.folds, derive_rng(config.seed, 17))

    Z = np.full((n, k), 0.5)
    failed: list[str | None] = [None] * k
    for j, base_cfg in enumerate(bases):
        trainer = _BASE_TRAINERS[base_cfg.family]
        try:
            for f in range(config.folds):
                tr = np.nonzero(folds != f)[0]
                va = np.nonzero(folds == f)[0]
                # fold seeds derive from the base's own seed, not its slot,
                # so literal duplicates yield identical stacking columns
                cfg = dataclasses.replace(
                    base_cfg, seed=_derived_seed(config.seed, base_cfg.seed, f)
                )
                fit = trainer(data.subset(tr), cfg)
                Z[va, j] = fit.predict_proba(data.X[va])
        except Exception as exc:  # noqa: BLE001 - any base failure downgrades to weight 0
            failed[j] = f"{type(exc).__name__}: {exc}"

    ok = [j for j in range(k) if failed[j] is None]
    if not ok:
        raise RuntimeError("every base learner failed: " + "; ".join(filter(None, failed)))
    weights = np.zeros(k)
    weights[ok] = simplex_weights(Z[:, ok], y)

    base_models = []
    for j, base_cfg in enumerate(bases):
        if failed[j] is not None or weights[j] == 0.0:
            # keep placeholder alignment; zero-weight learners are not refit
            base_models.append(None)
            continue
        cfg = dataclasses.replace(
            base_cfg, seed=_derived_seed(config.seed, base_cfg.seed, config.folds)
        )
        base_models.append(_BASE_TRAINERS[base_cfg.family](data, cfg))

    ensemble_cv = Z @ weights
    stack_losses = {
        "ensemble": float(np.mean((ensemble_cv - y) ** 2)),
        "bases": [float(np.mean((Z[:, j] - y) ** 2)) for j in range(k)],
    }
    params = {
        "weights": [float(w) for w in weights],
        "base_families": [b.family for b in bases],
        "base_models": [
            (m.to_json() if m is not None else _zero_weight_stub(bases[j], data))
            for j, m in enumerate(base_models)
        ],
    }
    diag = {
        "stacking_squared_loss": stack_losses,
        "base_failures": failed,
    }
    return ModelArtifact(
        family="super_learner",
        feature_mode=data.feature_mode,
        feature_names=data.feature_names,
        training_config=config,
        parameters=params,
        diagnostics=diag,
    )


def _zero_weight_stub(base_cfg, data: TrainingData) -> dict:
    """Inert constant model standing in for a zero-weight or failed base."""
    return {
        "schema_version": 1,
        "family": "logit",
        "feature_mode": data.feature_mode,
        "feature_names": list(data.feature_names),
        "training_config": {"family": "logit", "seed": 0, "max_iter": 0, "tol": 0.0},
        "parameters": {
            "intercept": 0.0,
            "coef": [0.0] * len(data.feature_names),
            "standardize_mean": [0.0] * len(data.feature_names),
            "standardize_sd": [1.0] * len(data.feature_names),
        },
        "diagnostics": {"zero_weight_stub": True},
    }
