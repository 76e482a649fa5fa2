"""Gradient boosting on the logistic loss.

Stage-wise additive model: starting from the base-rate log-odds, every
round fits a depth-limited regression tree to the current negative
gradient (y minus predicted probability) and adds it scaled by the
learning rate. Leaf values are plain residual means, i.e. gradient descent
in function space, which keeps the training loss non-increasing for small
rates.
"""

from __future__ import annotations

import math

import numpy as np

from ..features import TrainingData
from .artifact import ModelArtifact, register_predictor
from .common import PROB_CLIP, check_two_classes, log_loss, sigmoid
from .configs import BoostConfig
from .tree import Tree, grow_tree


def _boost_trees(artifact) -> list[Tree]:
    trees = artifact._cache.get("trees")
    if trees is None:
        trees = [Tree.from_json(t) for t in artifact.parameters["trees"]]
        artifact._cache["trees"] = trees
    return trees


def _predict_boosting(artifact, X):
    p = artifact.parameters
    F = np.full(X.shape[0], p["f0"])
    lr = p["learning_rate"]
    for tree in _boost_trees(artifact):
        F += lr * tree.predict_value(X)
    return sigmoid(F)


register_predictor("gradient_boosting", _predict_boosting)


def train_gradient_boosting(
    data: TrainingData, config: BoostConfig = BoostConfig()
) -> ModelArtifact:
    check_two_classes(data.y)
    X, y = data.X, data.y
    base = float(np.clip(y.mean(), PROB_CLIP, 1 - PROB_CLIP))
    f0 = math.log(base / (1.0 - base))
    F = np.full(len(y), f0)
    trees = []
    loss_trace = [log_loss(y, sigmoid(F))]
    for _ in range(config.n_rounds):
        residual = y - sigmoid(F)
        tree = grow_tree(
            X, residual, criterion="sse",
            min_leaf=config.min_leaf, max_depth=config.depth,
        )
        F = F + config.learning_rate * tree.predict_value(X)
        trees.append(tree.to_json())
        loss_trace.append(log_loss(y, sigmoid(F)))
    params = {"f0": f0, "learning_rate": config.learning_rate, "trees": trees}
    diag = {"train_log_loss": loss_trace}
    return ModelArtifact(
        family="gradient_boosting",
        feature_mode=data.feature_mode,
        feature_names=data.feature_names,
        training_config=config,
        parameters=params,
        diagnostics=diag,
    )
