"""Screening outputs: traffic lights, cluster tables, firm-interaction
matrix and suspicioucy rates over firm clusters.

Display percentages round half-up (one decimal in tables, integers in
matrix cells); every comparison and stored number stays exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .data import Dataset, Procedure, Tender
from .errors import EmptyInput, InvalidThresholds, TooManyFirms


class Light(enum.IntEnum):
    green = 0
    suspicious = 1
    very_suspicious = 2

    @property
    def label(self) -> str:
        return self.name


def traffic_light(probability: float, t1: float = 0.5, t2: float = 0.7) -> Light:
    """green below t1, suspicious in [t1, t2), very_suspicious at or above t2."""
    if not (0.0 < t1 < t2 < 1.0):
        raise InvalidThresholds(f"need 0 < t1 < t2 < 1, got t1={t1}, t2={t2}")
    if not (0.0 <= probability <= 1.0):
        raise ValueError(f"probability {probability} outside [0, 1]")
    if probability < t1:
        return Light.green
    if probability < t2:
        return Light.suspicious
    return Light.very_suspicious


@dataclass(frozen=True)
class Verdict:
    tender_id: str
    probability: float
    light: Light
    model_id: str

    def to_json(self) -> dict:
        return {
            "tender_id": self.tender_id,
            "probability": self.probability,
            "light": self.light.label,
            "model_id": self.model_id,
        }


def make_verdict(tender_id: str, probability: float, model_id: str,
                 t1: float = 0.5, t2: float = 0.7) -> Verdict:
    return Verdict(tender_id, probability, traffic_light(probability, t1, t2), model_id)


def round_half_up(x: float, digits: int = 1) -> float:
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def format_count_share(count: int, total: int) -> str:
    pct = round_half_up(100.0 * count / total, 1) if total else 0.0
    return f"{count:,} ({pct}%)"


def summarize(verdicts, threshold: float = 0.5) -> dict:
    """Counts and shares of flagged vs non-flagged tenders at a threshold."""
    verdicts = list(verdicts)
    if not verdicts:
        raise EmptyInput("no verdicts")
    total = len(verdicts)
    flagged = sum(1 for v in verdicts if v.probability >= threshold)
    clear = total - flagged
    return {
        "threshold": threshold,
        "total": total,
        "suspicious": {
            "count": flagged,
            "share": flagged / total,
            "display": format_count_share(flagged, total),
        },
        "non_suspicious": {
            "count": clear,
            "share": clear / total,
            "display": format_count_share(clear, total),
        },
    }


def _group_key(tender: Tender, group_by: str) -> str:
    if group_by == "region":
        return tender.region or "unknown"
    if group_by == "procedure":
        return "unknown" if tender.procedure is Procedure.unknown else tender.procedure.value
    if group_by == "year":
        return str(tender.year) if tender.year is not None else "unknown"
    raise ValueError(f"group_by must be region, procedure or year, not {group_by!r}")


def cluster_breakdown(
    verdicts,
    dataset: Dataset,
    group_by: str,
    threshold: float = 0.5,
    min_group_size: int = 0,
) -> list[dict]:
    """Suspicious / non-suspicious shares per metadata group.

    Groups below min_group_size are omitted; unknown metadata pools under
    "unknown", listed last. Shares within a group sum to 100%.
    """
    verdicts = list(verdicts)
    if not verdicts:
        raise EmptyInput("no verdicts")
    by_id = {t.tender_id: t for t in dataset.tenders}
    groups: dict[str, list[Verdict]] = {}
    for v in verdicts:
        tender = by_id.get(v.tender_id)
        if tender is None:
            continue
        groups.setdefault(_group_key(tender, group_by), []).append(v)
    rows = []
    for name, vs in groups.items():
        total = len(vs)
        if total < min_group_size:
            continue
        flagged = sum(1 for v in vs if v.probability >= threshold)
        rows.append(
            {
                "group": name,
                "total": total,
                "suspicious_count": flagged,
                "suspicious_share": flagged / total,
                "suspicious_display": format_count_share(flagged, total),
                "non_suspicious_count": total - flagged,
                "non_suspicious_share": (total - flagged) / total,
                "non_suspicious_display": format_count_share(total - flagged, total),
            }
        )
    known = [r for r in rows if r["group"] != "unknown"]
    unknown = [r for r in rows if r["group"] == "unknown"]
    known.sort(key=lambda r: (-r["suspicious_share"], r["group"]))
    return known + unknown


@dataclass(frozen=True)
class InteractionCell:
    suspicious: int
    total: int

    @property
    def display(self) -> str:
        pct = round_half_up(100.0 * self.suspicious / self.total, 0) if self.total else 0.0
        return f"{int(pct)}% ({self.suspicious}/{self.total})"


@dataclass(frozen=True)
class InteractionMatrix:
    firms: tuple[str, ...]
    cells: dict  # (i, j) with i <= j -> InteractionCell; pairs that never co-bid are absent
    threshold: float

    def cell(self, i: int, j: int) -> InteractionCell | None:
        if i > j:
            i, j = j, i
        return self.cells.get((i, j))

    def to_json(self) -> dict:
        return {
            "firms": list(self.firms),
            "threshold": self.threshold,
            "cells": [
                {
                    "row": self.firms[i],
                    "col": self.firms[j],
                    "suspicious": c.suspicious,
                    "total": c.total,
                    "display": c.display,
                }
                for (i, j), c in sorted(self.cells.items())
            ],
        }

    def render(self) -> str:
        if not self.firms:
            return "(no firms meet the interaction criteria)"
        width = max(12, max(len(f) for f in self.firms) + 2)
        head = " " * width + "".join(f"{f:>{width}}" for f in self.firms)
        lines = [head]
        for i, f in enumerate(self.firms):
            row = [f"{f:>{width}}"]
            for j in range(len(self.firms)):
                c = self.cells.get((i, j)) if i <= j else None
                row.append(f"{c.display if c else '':>{width}}")
            lines.append("".join(row))
        return "\n".join(lines)


def interaction_matrix(
    dataset: Dataset, verdicts, threshold: float = 0.5, min_suspicious: int = 3
) -> InteractionMatrix:
    """Co-participation counts among repeat-suspicious firms.

    A firm enters the matrix with at least min_suspicious suspicious tenders
    and at least one co-bid with another such firm. The diagonal holds each
    firm's own (suspicious, total) tender counts; cell (i, j) counts tenders
    where both firms bid. Rows are ordered by suspicious count descending,
    then firm id.
    """
    flagged_ids = {v.tender_id for v in verdicts if v.probability >= threshold}
    verdict_ids = {v.tender_id for v in verdicts}
    sus_count: dict[str, int] = {}
    tot_count: dict[str, int] = {}
    for t in dataset.tenders:
        if t.tender_id not in verdict_ids:
            continue
        for firm in set(t.firms):
            tot_count[firm] = tot_count.get(firm, 0) + 1
            if t.tender_id in flagged_ids:
                sus_count[firm] = sus_count.get(firm, 0) + 1
    heavy = {f for f, c in sus_count.items() if c >= min_suspicious}
    co_bid: dict[frozenset, list[int]] = {}
    for t in dataset.tenders:
        if t.tender_id not in verdict_ids:
            continue
        present = sorted(set(t.firms) & heavy)
        for a in range(len(present)):
            for b in range(a + 1, len(present)):
                key = frozenset((present[a], present[b]))
                s, tot = co_bid.get(key, (0, 0))
                co_bid[key] = [s + (t.tender_id in flagged_ids), tot + 1]
    interacting = set()
    for pair in co_bid:
        interacting |= pair
    firms = sorted(interacting, key=lambda f: (-sus_count.get(f, 0), f))
    index = {f: i for i, f in enumerate(firms)}
    cells: dict[tuple[int, int], InteractionCell] = {}
    for f in firms:
        i = index[f]
        cells[(i, i)] = InteractionCell(sus_count.get(f, 0), tot_count.get(f, 0))
    for pair, (s, tot) in co_bid.items():
        a, b = sorted(index[f] for f in pair)
        cells[(a, b)] = InteractionCell(s, tot)
    return InteractionMatrix(firms=tuple(firms), cells=cells, threshold=threshold)


@dataclass(frozen=True)
class ClusterRate:
    cluster: tuple[str, ...]
    mode: str  # with_diagonal | without_diagonal
    suspicious: int
    total: int

    @property
    def rate(self) -> float | None:
        return self.suspicious / self.total if self.total > 0 else None

    def to_json(self) -> dict:
        return {
            "cluster": list(self.cluster),
            "mode": self.mode,
            "suspicious": self.suspicious,
            "total": self.total,
            "rate": self.rate,
        }


def suspicioucy_rates(
    matrix_firms,
    dataset: Dataset,
    verdicts,
    mode: str = "with_diagonal",
    threshold: float = 0.5,
    max_firms: int = 20,
) -> list[ClusterRate]:
    """Suspicious-to-total tender ratio for every subset of matrix_firms.

    with_diagonal counts tenders involving at least one cluster firm;
    without_diagonal requires at least two. All 2^k subsets are returned
    (empty and singleton clusters included, flagged by their degenerate
    totals), sorted by rate descending, ties by larger total then cluster.
    """
    if mode not in ("with_diagonal", "without_diagonal"):
        raise ValueError(f"unknown mode {mode!r}")
    firms = list(matrix_firms)
    k = len(firms)
    if k > max_firms:
        raise TooManyFirms(f"{k} firms would enumerate 2^{k} clusters (max {max_firms})")
    index = {f: i for i, f in enumerate(firms)}
    flagged_ids = {v.tender_id for v in verdicts if v.probability >= threshold}
    verdict_ids = {v.tender_id for v in verdicts}
    masks, flags = [], []
    for t in dataset.tenders:
        if t.tender_id not in verdict_ids:
            continue
        m = 0
        for firm in set(t.firms):
            if firm in index:
                m |= 1 << index[firm]
        masks.append(m)
        flags.append(t.tender_id in flagged_ids)
    out = []
    for cluster_mask in range(1 << k):
        total = suspicious = 0
        for m, f in zip(masks, flags):
            hit = m & cluster_mask
            if mode == "with_diagonal":
                involved = hit != 0
            else:
                involved = (hit & (hit - 1)) != 0  # two or more member firms bid
            if involved:
                total += 1
                suspicious += f
        members = tuple(firms[i] for i in range(k) if cluster_mask >> i & 1)
        out.append(ClusterRate(cluster=members, mode=mode, suspicious=suspicious, total=total))
    out.sort(
        key=lambda c: (
            0 if c.total > 0 else 1,  # defined rates first
            -(c.rate or 0.0),
            -c.total,
            c.cluster,
        )
    )
    return out


@dataclass(frozen=True)
class ScreeningReport:
    model_id: str
    t1: float
    t2: float
    verdicts: tuple[Verdict, ...]
    summary: dict
    summary_very: dict
    clusters: dict
    interactions: InteractionMatrix
    suspicioucy: dict

    def to_json(self) -> dict:
        return {
            "model_id": self.model_id,
            "thresholds": {"suspicious": self.t1, "very_suspicious": self.t2},
            "verdicts": [v.to_json() for v in self.verdicts],
            "summary": self.summary,
            "summary_very_suspicious": self.summary_very,
            "clusters": self.clusters,
            "interactions": self.interactions.to_json(),
            "suspicioucy": self.suspicioucy,
        }


def build_screening_report(
    dataset: Dataset,
    verdicts,
    model_id: str,
    t1: float = 0.5,
    t2: float = 0.7,
    suspicioucy_max_firms: int = 12,
    suspicioucy_top: int = 20,
) -> ScreeningReport:
    """Full centralized-screening report over screened tenders.

    The suspicioucy enumeration runs over the interaction-matrix firms,
    truncated to the first suspicioucy_max_firms rows (matrix order) to
    keep the 2^k enumeration bounded.
    """
    verdicts = tuple(verdicts)
    matrix = interaction_matrix(dataset, verdicts, threshold=t1)
    cluster_firms = list(matrix.firms[:suspicioucy_max_firms])
    sus = {
        mode: [
            c.to_json()
            for c in suspicioucy_rates(cluster_firms, dataset, verdicts, mode, t1)[:suspicioucy_top]
        ]
        for mode in ("with_diagonal", "without_diagonal")
    }
    sus["firms"] = cluster_firms
    return ScreeningReport(
        model_id=model_id,
        t1=t1,
        t2=t2,
        verdicts=verdicts,
        summary=summarize(verdicts, t1),
        summary_very=summarize(verdicts, t2),
        clusters={
            g: cluster_breakdown(verdicts, dataset, g, threshold=t1)
            for g in ("region", "procedure", "year")
        },
        interactions=matrix,
        suspicioucy=sus,
    )
