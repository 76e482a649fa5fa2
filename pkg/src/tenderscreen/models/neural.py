"""Single-hidden-layer network trained by mini-batch gradient descent.

Sigmoid activations throughout, log-loss objective, weights drawn from a
seeded uniform distribution scaled by 1/sqrt(fan_in), biases starting at
zero. hidden_units = 0 degenerates to a plain logistic regression trained
by the same descent loop. Features are standardized internally.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidConfig
from ..features import TrainingData
from .artifact import ModelArtifact, register_predictor
from .common import (
    check_two_classes,
    derive_rng,
    log_loss,
    sigmoid,
    standardize_apply,
    standardize_fit,
)
from .configs import NeuralConfig


def init_weights(d: int, hidden: int, rng: np.random.Generator) -> dict:
    if hidden == 0:
        bound = 1.0 / np.sqrt(d)
        return {"w": rng.uniform(-bound, bound, size=d), "b": 0.0}
    b1 = 1.0 / np.sqrt(d)
    b2 = 1.0 / np.sqrt(hidden)
    return {
        "W1": rng.uniform(-b1, b1, size=(d, hidden)),
        "b1": np.zeros(hidden),
        "W2": rng.uniform(-b2, b2, size=hidden),
        "b2": 0.0,
    }


def forward(weights: dict, X: np.ndarray) -> np.ndarray:
    if "w" in weights:
        return sigmoid(X @ weights["w"] + weights["b"])
    H = sigmoid(X @ weights["W1"] + weights["b1"])
    return sigmoid(H @ weights["W2"] + weights["b2"])


def gradients(weights: dict, X: np.ndarray, y: np.ndarray) -> dict:
    """Mean log-loss gradients for every weight, by backpropagation."""
    m = len(y)
    if "w" in weights:
        p = sigmoid(X @ weights["w"] + weights["b"])
        delta = (p - y) / m
        return {"w": X.T @ delta, "b": float(delta.sum())}
    H = sigmoid(X @ weights["W1"] + weights["b1"])
    p = sigmoid(H @ weights["W2"] + weights["b2"])
    delta_out = (p - y) / m
    gW2 = H.T @ delta_out
    gb2 = float(delta_out.sum())
    delta_hidden = np.outer(delta_out, weights["W2"]) * H * (1.0 - H)
    gW1 = X.T @ delta_hidden
    gb1 = delta_hidden.sum(axis=0)
    return {"W1": gW1, "b1": gb1, "W2": gW2, "b2": gb2}


def _predict_neural(artifact, X):
    p = artifact.parameters
    mean = np.asarray(p["standardize_mean"])
    sd = np.asarray(p["standardize_sd"])
    Xs = standardize_apply(X, mean, sd)
    weights = {
        k: (np.asarray(v) if isinstance(v, list) else v)
        for k, v in p["weights"].items()
    }
    return forward(weights, Xs)


register_predictor("neural_net", _predict_neural)


def train_neural_net(
    data: TrainingData, config: NeuralConfig = NeuralConfig()
) -> ModelArtifact:
    if config.hidden_units < 0 or config.epochs < 0 or config.learning_rate <= 0:
        raise InvalidConfig("hidden_units/epochs must be >= 0 and learning_rate > 0")
    check_two_classes(data.y)
    y = data.y
    mean, sd = standardize_fit(data.X)
    Xs = standardize_apply(data.X, mean, sd)
    n, d = Xs.shape
    rng = derive_rng(config.seed, 3)
    weights = init_weights(d, config.hidden_units, rng)
    batch = max(1, min(config.batch_size, n))
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            rows = order[start : start + batch]
            grads = gradients(weights, Xs[rows], y[rows])
            for k, g in grads.items():
                weights[k] = weights[k] - config.learning_rate * g
    params = {
        "weights": {
            k: (v.tolist() if isinstance(v, np.ndarray) else float(v))
            for k, v in weights.items()
        },
        "hidden_units": config.hidden_units,
        "standardize_mean": mean.tolist(),
        "standardize_sd": sd.tolist(),
    }
    diag = {"train_log_loss": log_loss(y, forward(weights, Xs))}
    return ModelArtifact(
        family="neural_net",
        feature_mode=data.feature_mode,
        feature_names=data.feature_names,
        training_config=config,
        parameters=params,
        diagnostics=diag,
    )
