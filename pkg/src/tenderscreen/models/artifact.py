"""Trained-model container with canonical JSON persistence.

A ModelArtifact is immutable: family tag, feature schema, the training
config that produced it, and a family-specific parameter block of plain
JSON types. predict_proba dispatches through a registry the family modules
fill in at import time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SchemaMismatch
from ..jsonutil import canonical_json, content_id
from .configs import config_from_json, config_to_json

RAW_SCREENS = "raw_screens"
EXPANDED = "expanded"

SCHEMA_VERSION = 1

_PREDICTORS: dict = {}


def register_predictor(family: str, fn) -> None:
    _PREDICTORS[family] = fn


@dataclass(frozen=True)
class ModelArtifact:
    family: str
    feature_mode: str
    feature_names: tuple[str, ...]
    training_config: object
    parameters: dict
    diagnostics: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    # per-instance scratch for predictors (e.g. parsed forest trees); never serialized
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def predict_proba(self, X) -> np.ndarray:
        """Class-1 probability for each row of X (or a single vector)."""
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.shape[1] != len(self.feature_names):
            raise SchemaMismatch(
                f"model expects {len(self.feature_names)} features "
                f"({self.feature_mode}), got {X.shape[1]}"
            )
        p = _PREDICTORS[self.family](self, X)
        p = np.clip(p, 0.0, 1.0)
        return float(p[0]) if single else p

    def classify(self, X, threshold: float = 0.5):
        p = self.predict_proba(X)
        if isinstance(p, float):
            return int(p >= threshold)
        return (p >= threshold).astype(np.int64)

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "family": self.family,
            "feature_mode": self.feature_mode,
            "feature_names": list(self.feature_names),
            "training_config": config_to_json(self.training_config),
            "parameters": self.parameters,
            "diagnostics": self.diagnostics,
        }

    def serialize(self) -> str:
        return canonical_json(self.to_json())

    @property
    def model_id(self) -> str:
        return content_id(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> "ModelArtifact":
        return cls(
            family=obj["family"],
            feature_mode=obj["feature_mode"],
            feature_names=tuple(obj["feature_names"]),
            training_config=config_from_json(obj["training_config"]),
            parameters=obj["parameters"],
            diagnostics=obj.get("diagnostics", {}),
            schema_version=obj.get("schema_version", SCHEMA_VERSION),
        )


def predict_proba(model: ModelArtifact, X):
    return model.predict_proba(X)


def classify(model: ModelArtifact, X, threshold: float = 0.5):
    """1 iff the predicted probability is at or above the threshold."""
    return model.classify(X, threshold)
