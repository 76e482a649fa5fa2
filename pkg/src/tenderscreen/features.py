"""Bridges tenders to model inputs.

Two feature modes exist: the manager's classification tree reads the eight
raw screens; every other learner reads the 44-value expansion (screens,
squares, pairwise products).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, Label, Tender
from .errors import EmptyInput
from .screens import FEATURE_NAMES, SCREEN_NAMES, ScreenPolicy, compute_screens, expand_features

RAW_SCREENS = "raw_screens"
EXPANDED = "expanded"


def feature_names_for(mode: str) -> tuple[str, ...]:
    if mode == RAW_SCREENS:
        return SCREEN_NAMES
    if mode == EXPANDED:
        return FEATURE_NAMES
    raise ValueError(f"unknown feature mode {mode!r}")


@dataclass(frozen=True)
class LabeledExample:
    tender_id: str
    features: tuple[float, ...]
    label: int  # 0 = competition, 1 = cartel

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")


@dataclass(frozen=True)
class TrainingData:
    """Matrix view of labeled examples, the input every trainer takes."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    feature_mode: str
    tender_ids: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.y)

    def subset(self, idx) -> "TrainingData":
        idx = np.asarray(idx)
        return TrainingData(
            X=self.X[idx],
            y=self.y[idx],
            feature_names=self.feature_names,
            feature_mode=self.feature_mode,
            tender_ids=tuple(self.tender_ids[i] for i in np.atleast_1d(idx)),
        )


def tender_features(
    tender_or_bids, mode: str = EXPANDED, policy: ScreenPolicy = ScreenPolicy()
) -> np.ndarray | None:
    """Feature vector for one tender; None when the policy marks it unusable."""
    sv = compute_screens(tender_or_bids, policy)
    if not sv.defined:
        return None
    if mode == RAW_SCREENS:
        return np.asarray(sv.values(), dtype=np.float64)
    return np.asarray(expand_features(sv).values, dtype=np.float64)


def from_examples(examples: list[LabeledExample], mode: str) -> TrainingData:
    if not examples:
        raise EmptyInput("no labeled examples")
    X = np.asarray([e.features for e in examples], dtype=np.float64)
    y = np.asarray([e.label for e in examples], dtype=np.float64)
    return TrainingData(
        X=X,
        y=y,
        feature_names=feature_names_for(mode),
        feature_mode=mode,
        tender_ids=tuple(e.tender_id for e in examples),
    )


def labeled_examples(
    dataset: Dataset, mode: str = EXPANDED, policy: ScreenPolicy = ScreenPolicy()
) -> list[LabeledExample]:
    """Screens each labeled tender; unlabeled or policy-dropped ones are skipped."""
    out = []
    for t in dataset.tenders:
        if t.label is Label.unknown:
            continue
        feats = tender_features(t, mode, policy)
        if feats is None:
            continue
        out.append(
            LabeledExample(
                tender_id=t.tender_id,
                features=tuple(float(v) for v in feats),
                label=1 if t.label is Label.cartel else 0,
            )
        )
    return out


def training_data(
    dataset: Dataset, mode: str = EXPANDED, policy: ScreenPolicy = ScreenPolicy()
) -> TrainingData:
    return from_examples(labeled_examples(dataset, mode, policy), mode)


def screening_matrix(
    dataset: Dataset, mode: str = EXPANDED, policy: ScreenPolicy = ScreenPolicy()
):
    """(X, tender_ids) over all usable tenders, labels not required."""
    rows, ids = [], []
    for t in dataset.tenders:
        feats = tender_features(t, mode, policy)
        if feats is None:
            continue
        rows.append(feats)
        ids.append(t.tender_id)
    if not rows:
        raise EmptyInput("no usable tenders")
    return np.asarray(rows, dtype=np.float64), tuple(ids)
