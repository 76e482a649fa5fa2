"""Numeric helpers shared by the model families."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyClass, SingleClassData

PROB_CLIP = 1e-6  # probabilities are clipped to [PROB_CLIP, 1-PROB_CLIP] in log-losses


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    """Independent stream keyed by (seed, path); order of use never matters."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, path)]))


def sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_loss(y: np.ndarray, p: np.ndarray) -> float:
    p = np.clip(p, PROB_CLIP, 1.0 - PROB_CLIP)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def standardize_fit(X: np.ndarray):
    """Column means and sds on training data; constant columns get sd 1."""
    mean = X.mean(axis=0)
    sd = X.std(axis=0, ddof=1) if X.shape[0] > 1 else np.ones(X.shape[1])
    sd = np.where(sd == 0, 1.0, sd)
    return mean, sd


def standardize_apply(X, mean, sd):
    return (np.asarray(X, dtype=np.float64) - mean) / sd


def check_two_classes(y: np.ndarray) -> None:
    if len(np.unique(y)) < 2:
        raise SingleClassData("training data contains a single class")


def stratified_folds(y: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Fold id per example, class-balanced. Every class needs >= k members
    for all folds to see both classes; smaller classes still spread evenly."""
    y = np.asarray(y)
    fold = np.empty(len(y), dtype=np.int64)
    for cls in np.unique(y):
        idx = np.nonzero(y == cls)[0]
        idx = idx[rng.permutation(len(idx))]
        fold[idx] = np.arange(len(idx)) % k
    return fold


def stratified_split_indices(y: np.ndarray, ratio: float, rng: np.random.Generator):
    """Label-stratified partition into (train, test) index arrays.

    The train side gets round(ratio*n) examples overall, allocated per class
    by largest remainder. Raises EmptyClass if any class would be missing
    from either side.
    """
    y = np.asarray(y)
    n = len(y)
    n_train = int(round(ratio * n))
    classes = sorted(np.unique(y).tolist())
    quotas = {}
    remainders = []
    allotted = 0
    for cls in classes:
        n_c = int((y == cls).sum())
        exact = ratio * n_c
        quotas[cls] = int(np.floor(exact))
        allotted += quotas[cls]
        remainders.append((-(exact - np.floor(exact)), cls))
    remainders.sort()
    i = 0
    while allotted < n_train and i < len(remainders):
        quotas[remainders[i][1]] += 1
        allotted += 1
        i += 1
    train_parts, test_parts = [], []
    for cls in classes:
        idx = np.nonzero(y == cls)[0]
        idx = idx[rng.permutation(len(idx))]
        q = quotas[cls]
        if q == 0 or q == len(idx):
            raise EmptyClass(f"class {cls} absent from one side of the split")
        train_parts.append(idx[:q])
        test_parts.append(idx[q:])
    train = np.sort(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return train, test
