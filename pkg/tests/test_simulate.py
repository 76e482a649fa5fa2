import math

import numpy as np
import pytest

from tenderscreen.data import Label, ingest_csv, wrangle, write_csv
from tenderscreen.errors import InvalidConfig
from tenderscreen.screens import compute_screens
from tenderscreen.simulate import SimConfig, generate


def test_cartel_share_boundaries():
    ds = generate(SimConfig(n_tenders=50, cartel_share=0.0, seed=1))
    assert all(t.label is Label.competition for t in ds.tenders)
    ds = generate(SimConfig(n_tenders=50, cartel_share=1.0, seed=1))
    assert all(t.label is Label.cartel for t in ds.tenders)


def test_same_seed_identical():
    a = generate(SimConfig(n_tenders=80, seed=9))
    b = generate(SimConfig(n_tenders=80, seed=9))
    assert a == b
    c = generate(SimConfig(n_tenders=80, seed=10))
    assert a != c


def test_generated_tenders_survive_wrangle_unchanged(sim_small):
    wrangled = wrangle(sim_small)
    assert len(wrangled) == len(sim_small)
    assert wrangled.wrangling_log.dropped_tenders == 0
    assert wrangled.wrangling_log.collapsed_variants == 0
    for t in sim_small.tenders:
        assert t.n_bids >= 3
        assert len(set(t.firms)) == t.n_bids


def test_label_balance_matches_share():
    for share in (0.3, 0.5, 0.8):
        n = 400
        ds = generate(SimConfig(n_tenders=n, cartel_share=share, seed=2))
        got = sum(1 for t in ds.tenders if t.label is Label.cartel) / n
        bound = 3 * math.sqrt(share * (1 - share) / n)
        assert abs(got - share) <= bound


def test_cartel_cv_depressed_vs_competitive():
    ds = generate(SimConfig(n_tenders=1000, seed=4))
    cvs = {Label.cartel: [], Label.competition: []}
    for t in ds.tenders:
        cvs[t.label].append(compute_screens(t).cv)
    cartel = np.asarray(cvs[Label.cartel])
    comp = np.asarray(cvs[Label.competition])
    assert cartel.mean() < comp.mean()
    pooled_se = math.sqrt(cartel.var(ddof=1) / len(cartel) + comp.var(ddof=1) / len(comp))
    assert (comp.mean() - cartel.mean()) > 3 * pooled_se


def test_csv_round_trip(tmp_path):
    ds = generate(SimConfig(n_tenders=40, seed=5))
    path = tmp_path / "sim.csv"
    write_csv(ds, path)
    back = ingest_csv(path)
    assert len(back) == 40
    for t in ds.tenders:
        got = back.by_id(t.tender_id)
        assert got.amounts == t.amounts
        assert got.label is t.label


def test_invalid_configs():
    with pytest.raises(InvalidConfig):
        generate(SimConfig(n_tenders=0))
    with pytest.raises(InvalidConfig):
        generate(SimConfig(cartel_share=1.5))
    with pytest.raises(InvalidConfig):
        generate(SimConfig(bids_min=2))
    with pytest.raises(InvalidConfig):
        generate(SimConfig(firm_pool=4, bids_max=8))
    with pytest.raises(InvalidConfig):
        generate(SimConfig(cartel_firms=("F1", "F2")))
