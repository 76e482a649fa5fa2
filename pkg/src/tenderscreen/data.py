"""Tender domain model, CSV ingestion and wrangling rules.

A tender is one procurement auction with its sealed bids. Ingestion parses a
CSV into Tender objects without touching the bids; wrangling then collapses
per-firm variants to the firm's lowest bid and removes tenders that end up
with fewer than three bids, logging both counts.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import MissingColumn, NonPositiveBid, UnparsableRow

REQUIRED_COLUMNS = ("tender_id", "firm_id", "bid_value")
OPTIONAL_COLUMNS = ("date", "region", "procedure", "variant_id", "label")


class Procedure(str, Enum):
    open = "open"
    invitation = "invitation"
    unknown = "unknown"


class Label(str, Enum):
    competition = "competition"
    cartel = "cartel"
    unknown = "unknown"


@dataclass(frozen=True)
class Bid:
    tender_id: str
    firm_id: str
    amount: float
    variant_id: str | None = None

    def __post_init__(self):
        if not self.amount > 0:
            raise ValueError(f"bid amount must be > 0, got {self.amount}")


@dataclass(frozen=True)
class Tender:
    """One auction. Bids are kept sorted ascending by amount (stable)."""

    tender_id: str
    bids: tuple[Bid, ...]
    date: str | None = None  # ISO date or bare year; None when unknown
    region: str | None = None
    procedure: Procedure = Procedure.unknown
    label: Label = Label.unknown

    def __post_init__(self):
        object.__setattr__(
            self, "bids", tuple(sorted(self.bids, key=lambda b: b.amount))
        )

    @property
    def n_bids(self) -> int:
        return len(self.bids)

    @property
    def amounts(self) -> tuple[float, ...]:
        return tuple(b.amount for b in self.bids)

    @property
    def firms(self) -> tuple[str, ...]:
        return tuple(b.firm_id for b in self.bids)

    @property
    def year(self) -> int | None:
        if not self.date:
            return None
        head = self.date.strip()[:4]
        return int(head) if head.isdigit() else None


@dataclass(frozen=True)
class WranglingLog:
    dropped_tenders: int = 0
    collapsed_variants: int = 0

    def to_json(self) -> dict:
        return {
            "dropped_tenders": self.dropped_tenders,
            "collapsed_variants": self.collapsed_variants,
        }


@dataclass(frozen=True)
class Dataset:
    tenders: tuple[Tender, ...]
    provenance: str = ""
    wrangling_log: WranglingLog = field(default_factory=WranglingLog)

    def __len__(self) -> int:
        return len(self.tenders)

    def by_id(self, tender_id: str) -> Tender:
        for t in self.tenders:
            if t.tender_id == tender_id:
                return t
        raise KeyError(tender_id)


def _parse_procedure(raw: str | None) -> Procedure:
    if not raw or not raw.strip():
        return Procedure.unknown
    key = raw.strip().lower()
    if key in ("open", "open procedure"):
        return Procedure.open
    if key in ("invitation", "on invitation", "procedure on invitation"):
        return Procedure.invitation
    return Procedure.unknown


def _parse_label(raw: str | None) -> Label:
    if not raw or not raw.strip():
        return Label.unknown
    key = raw.strip().lower()
    if key in ("1", "cartel", "collusion"):
        return Label.cartel
    if key in ("0", "competition", "comp"):
        return Label.competition
    return Label.unknown


def ingest_csv(
    path,
    delimiter: str = ",",
    column_map: dict[str, str] | None = None,
    provenance: str | None = None,
) -> Dataset:
    """Parse a tender CSV into a Dataset. Wrangling is NOT applied here.

    The file must carry a header with tender_id, firm_id and bid_value;
    date, region, procedure, variant_id and label are optional. column_map
    renames file columns to canonical ones, e.g. {"price": "bid_value"}.

    Raises MissingColumn, UnparsableRow or NonPositiveBid; any bad row
    aborts the ingest so no silent partial loads happen.
    """
    column_map = column_map or {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        header = reader.fieldnames or []
        canonical = [column_map.get(c, c) for c in header]
        for col in REQUIRED_COLUMNS:
            if col not in canonical:
                raise MissingColumn(f"required column {col!r} not in header {header}")
        rows = []
        for i, raw in enumerate(reader, start=1):
            rows.append((i, {column_map.get(k, k): v for k, v in raw.items() if k}))

    bids_by_tender: dict[str, list[Bid]] = {}
    meta: dict[str, dict] = {}
    seen_keys: set[tuple] = set()
    for i, row in rows:
        tid = (row.get("tender_id") or "").strip()
        fid = (row.get("firm_id") or "").strip()
        if not tid:
            raise UnparsableRow(i, "empty tender_id")
        if not fid:
            raise UnparsableRow(i, "empty firm_id")
        raw_amount = (row.get("bid_value") or "").strip()
        try:
            amount = float(raw_amount)
        except ValueError:
            raise UnparsableRow(i, f"bid_value {raw_amount!r} is not a number")
        if not amount > 0:
            raise NonPositiveBid(i, raw_amount)
        variant = (row.get("variant_id") or "").strip() or None
        key = (tid, fid, variant)
        if key in seen_keys:
            raise UnparsableRow(i, f"duplicate bid key {key}")
        seen_keys.add(key)
        bids_by_tender.setdefault(tid, []).append(
            Bid(tender_id=tid, firm_id=fid, amount=amount, variant_id=variant)
        )
        if tid not in meta:
            meta[tid] = {
                "date": (row.get("date") or "").strip() or None,
                "region": (row.get("region") or "").strip() or None,
                "procedure": _parse_procedure(row.get("procedure")),
                "label": _parse_label(row.get("label")),
            }

    tenders = tuple(
        Tender(tender_id=tid, bids=tuple(bids), **meta[tid])
        for tid, bids in bids_by_tender.items()
    )
    return Dataset(tenders=tenders, provenance=provenance or str(path))


def wrangle(dataset: Dataset) -> Dataset:
    """Apply the sample-construction rules.

    Per tender: a firm submitting several variants is reduced to its lowest
    bid (ties keep the first submitted); tenders left with fewer than three
    bids are dropped. Idempotent, and total: never raises.
    """
    kept: list[Tender] = []
    dropped = 0
    collapsed = 0
    for tender in dataset.tenders:
        lowest: dict[str, Bid] = {}
        for bid in tender.bids:  # already amount-sorted, stable
            if bid.firm_id not in lowest:
                lowest[bid.firm_id] = bid
            else:
                collapsed += 1
        bids = tuple(lowest.values())
        if len(bids) < 3:
            dropped += 1
            continue
        kept.append(replace(tender, bids=bids))
    log = WranglingLog(
        dropped_tenders=dataset.wrangling_log.dropped_tenders + dropped,
        collapsed_variants=dataset.wrangling_log.collapsed_variants + collapsed,
    )
    return Dataset(tenders=tuple(kept), provenance=dataset.provenance, wrangling_log=log)


def write_csv(dataset: Dataset, path, delimiter: str = ",") -> None:
    """Emit the same schema ingest_csv reads (round-trip safe)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow(list(REQUIRED_COLUMNS) + list(OPTIONAL_COLUMNS))
        for t in dataset.tenders:
            label = "" if t.label is Label.unknown else t.label.value
            proc = "" if t.procedure is Procedure.unknown else t.procedure.value
            for b in t.bids:
                writer.writerow(
                    [
                        t.tender_id,
                        b.firm_id,
                        repr(b.amount),
                        t.date or "",
                        t.region or "",
                        proc,
                        b.variant_id or "",
                        label,
                    ]
                )
