"""Classification tree for the category manager's tool.

Grown greedily on the Gini criterion over the raw screens, then pruned by
cost-complexity with the penalty chosen by k-fold cross-validated accuracy
(ties prefer the stronger penalty, i.e. the simpler tree). The artifact
keeps a printable diagram so a manager can walk the node tests by hand.
"""

from __future__ import annotations

import math

import numpy as np

from ..features import TrainingData
from .artifact import ModelArtifact, register_predictor
from .common import derive_rng, stratified_folds
from .configs import CartConfig
from .tree import Tree, decision_path, grow_tree, prune_at, prune_path, render_tree


def _predict_cart(artifact, X):
    tree = artifact._cache.get("tree")
    if tree is None:
        tree = Tree.from_json(artifact.parameters["tree"])
        artifact._cache["tree"] = tree
    return tree.predict_value(X)


register_predictor("cart", _predict_cart)


def _candidate_alphas(path) -> list[float]:
    alphas = sorted({a for a, _ in path})
    cands = [alphas[0]]
    for lo, hi in zip(alphas, alphas[1:]):
        cands.append(math.sqrt(lo * hi) if lo > 0 else hi / 2.0)
    if len(alphas) > 1:
        cands.append(alphas[-1])
    return cands


def train_cart(data: TrainingData, config: CartConfig = CartConfig()) -> ModelArtifact:
    """Grow and CV-prune a classification tree.

    Single-class data degenerates to a single leaf predicting that class.
    """
    X, y = data.X, data.y
    full = grow_tree(
        X, y, criterion="gini", min_leaf=config.min_leaf, max_depth=config.max_depth
    )
    chosen_alpha = 0.0
    cv_accuracy = None
    tree = full
    if config.prune and not full.is_leaf(0) and config.cv_folds >= 2:
        path = prune_path(full)
        cands = _candidate_alphas(path)
        folds = stratified_folds(y, config.cv_folds, derive_rng(config.seed, 7))
        correct = np.zeros(len(cands))
        for k in range(config.cv_folds):
            tr = folds != k
            va = ~tr
            if y[tr].min() == y[tr].max() or va.sum() == 0:
                continue
            fold_tree = grow_tree(
                X[tr], y[tr], criterion="gini",
                min_leaf=config.min_leaf, max_depth=config.max_depth,
            )
            fold_path = prune_path(fold_tree)
            for i, alpha in enumerate(cands):
                sub = fold_tree
                for a, cut in fold_path:
                    if a <= alpha:
                        sub = cut
                    else:
                        break
                pred = (sub.predict_value(X[va]) >= 0.5).astype(np.float64)
                correct[i] += float((pred == y[va]).sum())
        best = 0
        for i in range(1, len(cands)):
            if correct[i] >= correct[best]:
                best = i
        chosen_alpha = float(cands[best])
        cv_accuracy = float(correct[best] / len(y))
        tree = prune_at(full, chosen_alpha)

    params = {"tree": tree.to_json()}
    diag = {
        "depth": tree.depth(),
        "n_leaves": len(tree.leaves()),
        "alpha": chosen_alpha,
        "cv_accuracy": cv_accuracy,
    }
    return ModelArtifact(
        family="cart",
        feature_mode=data.feature_mode,
        feature_names=data.feature_names,
        training_config=config,
        parameters=params,
        diagnostics=diag,
    )


def cart_tree(model: ModelArtifact) -> Tree:
    if model.family != "cart":
        raise ValueError("not a classification-tree model")
    return Tree.from_json(model.parameters["tree"])


def render_cart(model: ModelArtifact) -> str:
    return render_tree(cart_tree(model), model.feature_names)


def cart_decision_path(model: ModelArtifact, x) -> list[dict]:
    return decision_path(cart_tree(model), np.asarray(x, dtype=np.float64), model.feature_names)
