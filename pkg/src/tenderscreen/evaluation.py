"""Model evaluation: splits, metrics, resampled intervals, sweeps, importances.

Ratios with zero denominators are reported as None (an explicit undefined
marker), never silently coerced to 0, so aggregate numbers stay honest.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput
from .features import TrainingData
from .models import ModelArtifact, train
from .models.common import derive_rng, stratified_split_indices

DEFAULT_SWEEP_GRID = tuple(round(0.50 + 0.01 * k, 2) for k in range(46))


@dataclass(frozen=True)
class Metrics:
    ccr: float
    precision: float | None
    recall: float | None
    f1: float | None
    fpr: float | None
    confusion: tuple[int, int, int, int]  # (tp, fp, fn, tn)

    def to_json(self) -> dict:
        tp, fp, fn, tn = self.confusion
        return {
            "ccr": self.ccr,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "fpr": self.fpr,
            "confusion": {"tp": tp, "fp": fp, "fn": fn, "tn": tn},
        }


def split(data: TrainingData, ratio: float = 0.75, seed: int = 0):
    """Label-stratified random partition into (train, test)."""
    rng = derive_rng(seed, 1)
    train_idx, test_idx = stratified_split_indices(data.y, ratio, rng)
    return data.subset(train_idx), data.subset(test_idx)


def compute_metrics(predictions, threshold: float = 0.5) -> Metrics:
    """Confusion-matrix metrics at a threshold.

    predictions is a sequence of (probability, label) pairs; a prediction
    counts as positive when probability >= threshold.
    """
    preds = list(predictions)
    if not preds:
        raise EmptyInput("no predictions")
    tp = fp = fn = tn = 0
    for p, label in preds:
        positive = bool(p >= threshold)
        if label == 1:
            tp, fn = tp + positive, fn + (not positive)
        else:
            fp, tn = fp + positive, tn + (not positive)
    total = tp + fp + fn + tn
    ccr = (tp + tn) / total
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    if precision is None or recall is None or (precision + recall) == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    fpr = fp / (fp + tn) if (fp + tn) > 0 else None
    return Metrics(ccr=ccr, precision=precision, recall=recall, f1=f1, fpr=fpr,
                   confusion=(tp, fp, fn, tn))


def model_metrics(model: ModelArtifact, data: TrainingData, threshold: float = 0.5) -> Metrics:
    probs = model.predict_proba(data.X)
    return compute_metrics(list(zip(probs, data.y)), threshold)


@dataclass(frozen=True)
class MetricInterval:
    lower: float
    upper: float
    median: float
    n_defined: int
    n_replicates: int

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


METRIC_NAMES = ("ccr", "precision", "recall", "f1", "fpr")


def resample_intervals(
    data: TrainingData,
    model_config,
    B: int = 2000,
    ratio: float = 0.75,
    alpha: float = 0.05,
    seed: int = 0,
    threshold: float = 0.5,
) -> dict[str, MetricInterval | None]:
    """Percentile prediction intervals over B fresh random splits.

    Every replicate redraws a stratified train/test partition without
    replacement, trains a fresh model (seeds derived from (seed, b)) and
    scores the test set. Undefined metric values are excluded per metric;
    interval endpoints use the lower/higher order statistics so B = 2
    yields [min, max].
    """
    if B < 2:
        raise ValueError("need at least 2 replicates")
    values: dict[str, list[float]] = {m: [] for m in METRIC_NAMES}
    for b in range(B):
        rep_seed = int(np.random.SeedSequence([seed, b]).generate_state(1)[0])
        tr, te = split(data, ratio, seed=rep_seed)
        cfg = dataclasses.replace(model_config, seed=rep_seed)
        model = train(tr, cfg)
        m = model_metrics(model, te, threshold)
        for name in METRIC_NAMES:
            v = getattr(m, name)
            if v is not None:
                values[name].append(v)
    out: dict[str, MetricInterval | None] = {}
    lo_pct, hi_pct = 100 * alpha / 2, 100 * (1 - alpha / 2)
    for name in METRIC_NAMES:
        vals = sorted(values[name])
        if not vals:
            out[name] = None
            continue
        arr = np.asarray(vals)
        out[name] = MetricInterval(
            lower=float(np.percentile(arr, lo_pct, method="lower")),
            upper=float(np.percentile(arr, hi_pct, method="higher")),
            median=float(np.median(arr)),
            n_defined=len(vals),
            n_replicates=B,
        )
    return out


def threshold_sweep(predictions, grid=DEFAULT_SWEEP_GRID) -> list[dict]:
    """(threshold, ccr, fpr) across the grid for fixed predictions."""
    preds = list(predictions)
    if not preds:
        raise EmptyInput("no predictions")
    out = []
    for t in grid:
        m = compute_metrics(preds, t)
        out.append({"threshold": t, "ccr": m.ccr, "fpr": m.fpr})
    return out


@dataclass(frozen=True)
class ImportanceReport:
    importances: dict[str, float]  # normalized so the top feature scores 1
    raw_drops: dict[str, float]
    degenerate: bool  # every permutation left the metric unchanged or better

    def to_json(self) -> dict:
        return {
            "importances": self.importances,
            "raw_drops": self.raw_drops,
            "degenerate": self.degenerate,
        }


def permutation_importance(
    model: ModelArtifact,
    data: TrainingData,
    metric: str = "ccr",
    repeats: int = 5,
    threshold: float = 0.5,
    seed: int = 0,
) -> ImportanceReport:
    """Mean held-out metric drop when each feature column is shuffled.

    Values are divided by the maximum drop so the top feature scores 1;
    if nothing drops the report is flagged degenerate and left unnormalized.
    """
    if metric not in ("ccr", "f1"):
        raise ValueError("metric must be 'ccr' or 'f1'")

    def score(X):
        m = compute_metrics(list(zip(model.predict_proba(X), data.y)), threshold)
        v = getattr(m, metric)
        return 0.0 if v is None else v

    baseline = score(data.X)
    n = len(data.y)
    drops = {}
    for j, name in enumerate(data.feature_names):
        total = 0.0
        for r in range(repeats):
            rng = derive_rng(seed, j, r)
            Xp = data.X.copy()
            Xp[:, j] = Xp[rng.permutation(n), j]
            total += baseline - score(Xp)
        drops[name] = total / repeats
    max_drop = max(drops.values())
    if max_drop <= 0:
        return ImportanceReport(importances=dict(drops), raw_drops=dict(drops), degenerate=True)
    return ImportanceReport(
        importances={k: v / max_drop for k, v in drops.items()},
        raw_drops=dict(drops),
        degenerate=False,
    )


@dataclass(frozen=True)
class EvaluationReport:
    family: str
    config: dict
    split_seed: int
    split_ratio: float
    threshold: float
    point_metrics: Metrics
    intervals: dict | None = None
    sweep: list | None = None
    importances: ImportanceReport | None = None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "config": self.config,
            "split_seed": self.split_seed,
            "split_ratio": self.split_ratio,
            "threshold": self.threshold,
            "point_metrics": self.point_metrics.to_json(),
            "intervals": (
                {k: (v.to_json() if v else None) for k, v in self.intervals.items()}
                if self.intervals is not None
                else None
            ),
            "sweep": self.sweep,
            "importances": self.importances.to_json() if self.importances else None,
        }
