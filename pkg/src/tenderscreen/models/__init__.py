"""Classifier families and the trained-model artifact."""

from .artifact import ModelArtifact, classify, predict_proba
from .boosting import train_gradient_boosting
from .cart import cart_decision_path, cart_tree, render_cart, train_cart
from .configs import (
    BoostConfig,
    CartConfig,
    ForestConfig,
    LassoConfig,
    LogitConfig,
    NeuralConfig,
    SuperConfig,
    config_for_family,
    config_from_json,
    config_to_json,
)
from .forest import train_random_forest
from .linear import train_lasso_logit, train_logit
from .neural import train_neural_net
from .stacking import train_super_learner

_TRAINERS = {
    "logit": train_logit,
    "lasso_logit": train_lasso_logit,
    "cart": train_cart,
    "random_forest": train_random_forest,
    "gradient_boosting": train_gradient_boosting,
    "neural_net": train_neural_net,
    "super_learner": train_super_learner,
}

FAMILIES = tuple(_TRAINERS)


def train(data, config) -> ModelArtifact:
    """Train whatever family the config describes."""
    return _TRAINERS[config.family](data, config)


__all__ = [
    "ModelArtifact",
    "classify",
    "predict_proba",
    "train",
    "FAMILIES",
    "train_logit",
    "train_lasso_logit",
    "train_cart",
    "train_random_forest",
    "train_gradient_boosting",
    "train_neural_net",
    "train_super_learner",
    "cart_tree",
    "render_cart",
    "cart_decision_path",
    "LogitConfig",
    "LassoConfig",
    "CartConfig",
    "ForestConfig",
    "BoostConfig",
    "NeuralConfig",
    "SuperConfig",
    "config_for_family",
    "config_to_json",
    "config_from_json",
]
