"""Bid-distribution screens and their expanded feature set.

Eight summary statistics of a tender's sorted bids: cv, spd, diffp, rd,
rdalt, rdnor, skew and kstest, in that canonical order everywhere. All of
them are ratios of quantities homogeneous of degree one in the bids, so
rescaling every bid by a positive constant leaves the vector unchanged.

Conventions pinned here:
  * standard deviations use the sample (n-1) form, including the sd of the
    losing bids in rd;
  * skew is the adjusted Fisher-Pearson coefficient and defined as 0 when
    the bids have zero variance;
  * kstest compares b_i/sd against the ranks i/(n+1) literally; setting
    kstest_centered swaps in (b_i - mean)/sd for users who want a
    standardized statistic;
  * a zero denominator is resolved by the degeneracy policy: "strict"
    raises, "cap" substitutes a sentinel (0 when the numerator is 0 too),
    "drop" leaves the value undefined so the tender can be discarded.

Note the literature names nine screens but only eight have stated
formulas; this module implements the eight listed above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .data import Tender
from .errors import DegenerateTender, TooFewBids, UndefinedScreen

SCREEN_NAMES = ("cv", "spd", "diffp", "rd", "rdalt", "rdnor", "skew", "kstest")

_SQUARE_NAMES = tuple(f"{n}^2" for n in SCREEN_NAMES)
_PRODUCT_PAIRS = tuple(
    (i, j) for i in range(len(SCREEN_NAMES)) for j in range(len(SCREEN_NAMES)) if i < j
)
_PRODUCT_NAMES = tuple(f"{SCREEN_NAMES[i]}*{SCREEN_NAMES[j]}" for i, j in _PRODUCT_PAIRS)

#: 44 labels: 8 raw screens, their squares, then the 28 pairwise products.
FEATURE_NAMES = SCREEN_NAMES + _SQUARE_NAMES + _PRODUCT_NAMES


@dataclass(frozen=True)
class ScreenPolicy:
    """How to resolve zero denominators; cap is the model-pipeline default."""

    mode: str = "cap"  # strict | cap | drop
    cap_sentinel: float = 1e6
    kstest_centered: bool = False

    def __post_init__(self):
        if self.mode not in ("strict", "cap", "drop"):
            raise ValueError(f"unknown degeneracy mode {self.mode!r}")


@dataclass(frozen=True)
class ScreenVector:
    cv: float | None
    spd: float | None
    diffp: float | None
    rd: float | None
    rdalt: float | None
    rdnor: float | None
    skew: float | None
    kstest: float | None
    n_bids: int

    def values(self) -> tuple[float | None, ...]:
        return tuple(getattr(self, n) for n in SCREEN_NAMES)

    @property
    def defined(self) -> bool:
        return all(v is not None for v in self.values())

    def to_json(self) -> dict:
        out: dict = {n: getattr(self, n) for n in SCREEN_NAMES}
        out["n_bids"] = self.n_bids
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ScreenVector":
        kwargs = {n: obj[n] for n in SCREEN_NAMES}
        return cls(n_bids=int(obj["n_bids"]), **kwargs)


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]
    names: tuple[str, ...] = FEATURE_NAMES

    def to_json(self) -> dict:
        return dict(zip(self.names, self.values))


def _sample_sd(xs) -> float:
    n = len(xs)
    mean = math.fsum(xs) / n
    return math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / (n - 1))


def _ratio(numerator: float, denominator: float, policy: ScreenPolicy, what: str):
    if denominator != 0:
        return numerator / denominator
    if policy.mode == "strict":
        raise DegenerateTender(f"zero denominator in {what}")
    if policy.mode == "drop":
        return None
    return 0.0 if numerator == 0 else policy.cap_sentinel


def compute_screens(tender_or_bids, policy: ScreenPolicy = ScreenPolicy()) -> ScreenVector:
    """Compute the eight screens for one tender.

    Accepts a Tender or a bare sequence of bid amounts; sorting happens
    internally so input order never matters. Requires at least three bids.
    """
    if isinstance(tender_or_bids, Tender):
        amounts = tender_or_bids.amounts
    else:
        amounts = tuple(float(a) for a in tender_or_bids)
    n = len(amounts)
    if n < 3:
        raise TooFewBids(f"need >= 3 bids, got {n}")
    if min(amounts) <= 0:
        raise ValueError("bid amounts must be > 0")
    b = sorted(amounts)

    mean = math.fsum(b) / n
    sd = _sample_sd(b)

    cv = sd / mean  # mean > 0 since bids are positive
    spd = (b[-1] - b[0]) / b[0]
    diffp = (b[1] - b[0]) / b[0]

    gap = b[1] - b[0]
    rd = _ratio(gap, _sample_sd(b[1:]), policy, "rd")
    # mean gap among the losing bids b_2..b_n, and among all bids
    rdalt = _ratio(gap, (b[-1] - b[1]) / (n - 2), policy, "rdalt")
    rdnor = _ratio(gap, (b[-1] - b[0]) / (n - 1), policy, "rdnor")

    if sd == 0:
        skew = 0.0
        # b_i/sd diverges for positive bids, so the cap numerator is b_1 > 0
        kstest = _ratio(b[0], 0.0, policy, "kstest")
    else:
        skew = (n / ((n - 1) * (n - 2))) * math.fsum(((x - mean) / sd) ** 3 for x in b)
        shift = mean if policy.kstest_centered else 0.0
        d_plus = max((x - shift) / sd - i / (n + 1) for i, x in enumerate(b, start=1))
        d_minus = max(i / (n + 1) - (x - shift) / sd for i, x in enumerate(b, start=1))
        kstest = max(d_plus, d_minus)

    return ScreenVector(
        cv=cv, spd=spd, diffp=diffp, rd=rd, rdalt=rdalt, rdnor=rdnor,
        skew=skew, kstest=kstest, n_bids=n,
    )


def expand_features(screens: ScreenVector) -> FeatureVector:
    """Expand the raw screens with their squares and pairwise interactions.

    Returns 44 values in the fixed order of FEATURE_NAMES. Raises
    UndefinedScreen if any screen is still the undefined marker.
    """
    raw = screens.values()
    for name, v in zip(SCREEN_NAMES, raw):
        if v is None:
            raise UndefinedScreen(f"screen {name!r} is undefined")
    squares = tuple(v * v for v in raw)
    products = tuple(raw[i] * raw[j] for i, j in _PRODUCT_PAIRS)
    return FeatureVector(values=raw + squares + products)


def screens_csv_rows(dataset, policy: ScreenPolicy = ScreenPolicy()):
    """One (tender_id, label, n_bids, *screens) row per tender, for export."""
    header = ["tender_id", "label", "n_bids", *SCREEN_NAMES]
    rows = [header]
    for t in dataset.tenders:
        sv = compute_screens(t, policy)
        rows.append(
            [t.tender_id, t.label.value, sv.n_bids]
            + [("" if v is None else repr(v)) for v in sv.values()]
        )
    return rows
