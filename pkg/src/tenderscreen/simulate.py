"""Synthetic labeled tenders for training and benchmarks.

Competitive tenders draw independent log-normal markups around a common
cost, so bids scatter. Cartel tenders have a designated winner with cover
bids placed in a tight band above it: depressed coefficient of variation,
isolated low bid. The two regimes deliberately overlap (small samples make
some competitive tenders look tight), so trained classifiers keep realistic
error rates. This is a test instrument, not a behavioral cartel model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .data import Bid, Dataset, Label, Procedure, Tender, WranglingLog
from .errors import InvalidConfig
from .models.common import derive_rng

# Competitive tenders get a per-tender tightness multiplier on the markup sd,
# log-uniform with E[m^2] = 1 so the marginal markup sd stays as configured.
# The spread of project types is what keeps classifiers honestly imperfect.
_TIGHTNESS_LOG_HALF_RANGE = 0.9
_TIGHTNESS_NORM = math.sqrt(
    math.sinh(2 * _TIGHTNESS_LOG_HALF_RANGE) / (2 * _TIGHTNESS_LOG_HALF_RANGE)
)


def _default_regions() -> tuple[str, ...]:
    return ("R1", "R2", "R3", "R4", "R5", "R6")


def _default_years() -> tuple[int, ...]:
    return tuple(range(2015, 2022))


@dataclass(frozen=True)
class SimConfig:
    n_tenders: int = 1500
    cartel_share: float = 0.5
    bids_min: int = 3
    bids_max: int = 8
    competitive_markup_sd: float = 0.05
    cartel_cover_spread: float = 0.06  # width of the relative cover band
    cartel_winner_discount: float = 0.010  # winner's relative gap below the band
    seed: int = 0
    firm_pool: int = 40
    cartel_firms: tuple[str, ...] | None = None  # None -> first 12 pool firms
    regions: tuple[str, ...] = field(default_factory=_default_regions)
    years: tuple[int, ...] = field(default_factory=_default_years)
    procedures: tuple[str, ...] = ("open", "invitation")

    def validate(self) -> None:
        if self.n_tenders < 1:
            raise InvalidConfig("n_tenders must be >= 1")
        if not 0.0 <= self.cartel_share <= 1.0:
            raise InvalidConfig("cartel_share must lie in [0, 1]")
        if self.bids_min < 3 or self.bids_max < self.bids_min:
            raise InvalidConfig("need bids_max >= bids_min >= 3")
        if self.competitive_markup_sd <= 0:
            raise InvalidConfig("competitive_markup_sd must be > 0")
        if self.cartel_cover_spread <= 0 or self.cartel_winner_discount < 0:
            raise InvalidConfig("cartel spread must be > 0 and discount >= 0")
        if self.firm_pool < self.bids_max:
            raise InvalidConfig("firm_pool smaller than bids_max")
        if self.cartel_firms is not None and len(self.cartel_firms) < self.bids_max:
            raise InvalidConfig("cartel firm set smaller than bids_max")


def generate(config: SimConfig = SimConfig()) -> Dataset:
    """Deterministic labeled Dataset; same config, same bytes."""
    config.validate()
    pool = tuple(f"F{i:03d}" for i in range(1, config.firm_pool + 1))
    cartel_firms = config.cartel_firms
    if cartel_firms is None:
        cartel_firms = pool[: max(config.bids_max, min(12, config.firm_pool))]

    n_cartel = int(round(config.cartel_share * config.n_tenders))
    labels = [Label.cartel] * n_cartel + [Label.competition] * (config.n_tenders - n_cartel)
    order = derive_rng(config.seed, 999).permutation(config.n_tenders)
    labels = [labels[i] for i in order]

    tenders = []
    for t in range(config.n_tenders):
        rng = derive_rng(config.seed, t)
        n_bids = int(rng.integers(config.bids_min, config.bids_max + 1))
        cost = float(math.exp(rng.normal(13.0, 1.0)))
        label = labels[t]
        if label is Label.cartel:
            firms = rng.choice(len(cartel_firms), size=n_bids, replace=False)
            firms = [cartel_firms[i] for i in firms]
            winner = cost
            lo = 1.0 + config.cartel_winner_discount
            hi = lo + config.cartel_cover_spread
            amounts = [winner] + [winner * rng.uniform(lo, hi) for _ in range(n_bids - 1)]
        else:
            firms = rng.choice(len(pool), size=n_bids, replace=False)
            firms = [pool[i] for i in firms]
            tightness = (
                math.exp(_TIGHTNESS_LOG_HALF_RANGE * rng.uniform(-1.0, 1.0))
                / _TIGHTNESS_NORM
            )
            sd_t = config.competitive_markup_sd * tightness
            sig = math.sqrt(math.log(1.0 + sd_t**2))
            amounts = [
                cost * math.exp(rng.normal(-sig**2 / 2.0, sig)) for _ in range(n_bids)
            ]
        tender_id = f"T{t + 1:05d}"
        bids = tuple(
            Bid(tender_id=tender_id, firm_id=f, amount=a) for f, a in zip(firms, amounts)
        )
        tenders.append(
            Tender(
                tender_id=tender_id,
                bids=bids,
                date=str(rng.choice(config.years)),
                region=str(rng.choice(config.regions)),
                procedure=Procedure(str(rng.choice(config.procedures))),
                label=label,
            )
        )
    return Dataset(
        tenders=tuple(tenders),
        provenance=f"simulate(seed={config.seed}, n={config.n_tenders})",
        wrangling_log=WranglingLog(),
    )
