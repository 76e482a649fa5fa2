"""Training configurations, one dataclass per classifier family.

Every config carries the master seed; training is a pure function of
(data, config), so equal configs on equal data give bit-identical models.
Hyperparameters the source material does not pin (boosting depth/rounds,
network size, super-learner base budgets) are engineering defaults and can
be overridden freely.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field


@dataclass(frozen=True)
class LogitConfig:
    seed: int = 0
    max_iter: int = 10_000
    tol: float = 1e-8  # max-norm of the mean log-loss gradient

    family = "logit"


@dataclass(frozen=True)
class LassoConfig:
    seed: int = 0
    lambda_grid: tuple[float, ...] | None = None  # None -> automatic log-spaced path
    cv_folds: int = 10
    n_lambda: int = 50
    lambda_min_ratio: float = 1e-3
    max_outer: int = 25
    tol: float = 1e-8

    family = "lasso_logit"


@dataclass(frozen=True)
class CartConfig:
    seed: int = 0
    cv_folds: int = 10
    min_leaf: int = 5
    max_depth: int | None = None
    prune: bool = True

    family = "cart"


@dataclass(frozen=True)
class ForestConfig:
    seed: int = 0
    n_trees: int = 1000
    mtry: int | None = None  # None -> floor(sqrt(n_features))
    min_leaf: int = 1
    resample_size: int | None = None  # None -> training-set size

    family = "random_forest"


@dataclass(frozen=True)
class BoostConfig:
    seed: int = 0
    n_rounds: int = 200
    depth: int = 3
    learning_rate: float = 0.1
    min_leaf: int = 1

    family = "gradient_boosting"


@dataclass(frozen=True)
class NeuralConfig:
    seed: int = 0
    hidden_units: int = 8
    epochs: int = 500
    learning_rate: float = 0.01
    batch_size: int = 32

    family = "neural_net"


def _default_bases() -> tuple:
    # leaner budgets than the standalone defaults keep 10-fold stacking tractable
    return (
        ForestConfig(n_trees=300),
        LassoConfig(cv_folds=5, n_lambda=30),
        BoostConfig(n_rounds=150),
        NeuralConfig(epochs=300, learning_rate=0.05, batch_size=64),
    )


@dataclass(frozen=True)
class SuperConfig:
    seed: int = 0
    folds: int = 10
    base_learners: tuple = field(default_factory=_default_bases)

    family = "super_learner"


ANY_CONFIG = (
    LogitConfig | LassoConfig | CartConfig | ForestConfig | BoostConfig
    | NeuralConfig | SuperConfig
)

_BY_FAMILY = {
    c.family: c
    for c in (LogitConfig, LassoConfig, CartConfig, ForestConfig, BoostConfig,
              NeuralConfig, SuperConfig)
}


def config_for_family(family: str, **overrides):
    if family not in _BY_FAMILY:
        raise ValueError(f"unknown model family {family!r}")
    return _BY_FAMILY[family](**overrides)


def config_to_json(config) -> dict:
    out: dict = {"family": config.family}
    for f in dataclasses.fields(config):
        v = getattr(config, f.name)
        if f.name == "base_learners":
            v = [config_to_json(b) for b in v]
        elif isinstance(v, tuple):
            v = list(v)
        out[f.name] = v
    return out


def config_from_json(obj: dict):
    obj = dict(obj)
    family = obj.pop("family")
    cls = _BY_FAMILY[family]
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name not in obj:
            continue
        v = obj[f.name]
        if f.name == "base_learners":
            v = tuple(config_from_json(b) for b in v)
        elif isinstance(v, list):
            v = tuple(v)
        kwargs[f.name] = v
    return cls(**kwargs)
