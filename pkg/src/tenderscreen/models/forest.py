"""Random forest of unpruned Gini trees.

Each tree grows on a bootstrap resample with every split restricted to
mtry features drawn without replacement (default: square root of the
feature count). The forest probability is the fraction of trees voting
class 1. Per-tree RNG streams derive from (seed, tree index), so the result
is independent of any execution schedule.
"""

from __future__ import annotations

import math

import numpy as np

from ..features import TrainingData
from .artifact import ModelArtifact, register_predictor
from .common import check_two_classes, derive_rng
from .configs import ForestConfig
from .tree import Tree, grow_tree


def _forest_trees(artifact) -> list[Tree]:
    trees = artifact._cache.get("trees")
    if trees is None:
        trees = [Tree.from_json(t) for t in artifact.parameters["trees"]]
        artifact._cache["trees"] = trees
    return trees


def _predict_forest(artifact, X):
    votes = np.zeros(X.shape[0])
    for tree in _forest_trees(artifact):
        votes += tree.predict_value(X) >= 0.5
    return votes / len(artifact.parameters["trees"])


register_predictor("random_forest", _predict_forest)


def train_random_forest(
    data: TrainingData, config: ForestConfig = ForestConfig()
) -> ModelArtifact:
    check_two_classes(data.y)
    X, y = data.X, data.y
    n, p = X.shape
    mtry = config.mtry if config.mtry is not None else max(1, int(math.floor(math.sqrt(p))))
    size = config.resample_size if config.resample_size is not None else n
    trees = []
    for t in range(config.n_trees):
        rng = derive_rng(config.seed, t)
        idx = rng.integers(0, n, size=size)
        tree = grow_tree(
            X[idx], y[idx], criterion="gini",
            min_leaf=config.min_leaf, mtry=mtry, rng=rng,
        )
        trees.append(tree.to_json())
    params = {"trees": trees, "mtry": mtry}
    return ModelArtifact(
        family="random_forest",
        feature_mode=data.feature_mode,
        feature_names=data.feature_names,
        training_config=config,
        parameters=params,
    )
