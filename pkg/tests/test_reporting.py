import itertools

import pytest

from tenderscreen.data import Bid, Dataset, Tender
from tenderscreen.errors import EmptyInput, InvalidThresholds, TooManyFirms
from tenderscreen.reporting import (
    Light,
    Verdict,
    cluster_breakdown,
    interaction_matrix,
    make_verdict,
    round_half_up,
    summarize,
    suspicioucy_rates,
    traffic_light,
)


def test_traffic_light_bands():
    assert traffic_light(0.3) is Light.green
    assert traffic_light(0.55) is Light.suspicious
    assert traffic_light(0.85) is Light.very_suspicious
    assert traffic_light(0.5) is Light.suspicious  # inclusive lower bound
    assert traffic_light(0.7) is Light.very_suspicious
    with pytest.raises(InvalidThresholds):
        traffic_light(0.5, t1=0.7, t2=0.5)
    with pytest.raises(InvalidThresholds):
        traffic_light(0.5, t1=0.0, t2=0.7)


def test_traffic_light_monotone():
    grid = [i / 100 for i in range(101)]
    lights = [traffic_light(p) for p in grid]
    for a, b in zip(lights, lights[1:]):
        assert a <= b


def verd(tid, p):
    return make_verdict(tid, p, "m1")


def test_summarize_table_five_format():
    verdicts = [verd(f"T{i}", 0.9) for i in range(102)]
    verdicts += [verd(f"U{i}", 0.1) for i in range(1104)]
    s = summarize(verdicts, 0.5)
    assert s["suspicious"]["display"] == "102 (8.5%)"
    assert s["non_suspicious"]["display"] == "1,104 (91.5%)"
    assert s["suspicious"]["count"] + s["non_suspicious"]["count"] == 1206


def test_summarize_all_green_and_partition():
    verdicts = [verd(f"T{i}", 0.2) for i in range(7)]
    s = summarize(verdicts, 0.5)
    assert s["suspicious"]["display"] == "0 (0.0%)"
    assert s["non_suspicious"]["count"] == 7


def test_summarize_empty_raises():
    with pytest.raises(EmptyInput):
        summarize([], 0.5)


def test_round_half_up():
    assert round_half_up(8.45, 1) == 8.5
    assert round_half_up(8.44999, 1) == 8.4
    assert round_half_up(21.875, 0) == 22.0


def tender_with(tid, firms, region=None, procedure="open", year="2016"):
    from tenderscreen.data import Procedure

    bids = tuple(
        Bid(tender_id=tid, firm_id=f, amount=100.0 + i) for i, f in enumerate(firms)
    )
    return Tender(
        tender_id=tid,
        bids=bids,
        region=region,
        date=year,
        procedure=Procedure(procedure),
    )


def test_cluster_breakdown_shares():
    tenders = [tender_with(f"T{i}", ["A", "B", "C"], region="ZH") for i in range(10)]
    ds = Dataset(tenders=tuple(tenders))
    verdicts = [verd(f"T{i}", 0.9 if i < 2 else 0.1) for i in range(10)]
    rows = cluster_breakdown(verdicts, ds, "region")
    assert len(rows) == 1
    row = rows[0]
    assert row["suspicious_display"] == "2 (20.0%)"
    assert row["non_suspicious_display"] == "8 (80.0%)"
    assert row["suspicious_share"] + row["non_suspicious_share"] == 1.0


def test_cluster_breakdown_weighted_recombination():
    tenders = [tender_with(f"T{i}", ["A", "B", "C"], region="ZH" if i % 2 else "BE") for i in range(20)]
    ds = Dataset(tenders=tuple(tenders))
    verdicts = [verd(f"T{i}", 0.9 if i % 5 == 0 else 0.1) for i in range(20)]
    rows = cluster_breakdown(verdicts, ds, "region")
    overall = sum(r["suspicious_count"] for r in rows) / sum(r["total"] for r in rows)
    assert overall == pytest.approx(4 / 20)


def test_cluster_breakdown_unknown_group_and_min_size():
    tenders = [tender_with("T1", ["A", "B", "C"], region=None)]
    ds = Dataset(tenders=tuple(tenders))
    rows = cluster_breakdown([verd("T1", 0.9)], ds, "region")
    assert rows[0]["group"] == "unknown"
    assert cluster_breakdown([verd("T1", 0.9)], ds, "region", min_group_size=2) == []


def make_interaction_fixture():
    """4 firms; A and B co-bid in 3 suspicious tenders, C joins some, D rare."""
    tenders = []
    verdicts = []

    def add(tid, firms, p):
        tenders.append(tender_with(tid, firms))
        verdicts.append(verd(tid, p))

    add("T1", ["A", "B", "f1"], 0.9)
    add("T2", ["A", "B", "f2"], 0.9)
    add("T3", ["A", "B", "C"], 0.9)
    add("T4", ["A", "C", "f3"], 0.9)
    add("T5", ["B", "C", "f4"], 0.1)
    add("T6", ["C", "f5", "f6"], 0.9)
    add("T7", ["D", "f7", "f8"], 0.9)
    add("T8", ["A", "D", "f9"], 0.1)
    return Dataset(tenders=tuple(tenders)), verdicts


def test_interaction_matrix_hand_fixture():
    ds, verdicts = make_interaction_fixture()
    matrix = interaction_matrix(ds, verdicts, threshold=0.5, min_suspicious=3)
    # suspicious counts: A=4 (T1-T4), B=3 (T1,T2,T3), C=3 (T3,T4,T6), D=1
    assert matrix.firms == ("A", "B", "C")
    i = {f: k for k, f in enumerate(matrix.firms)}
    assert matrix.cell(i["A"], i["A"]).suspicious == 4
    assert matrix.cell(i["A"], i["A"]).total == 5
    assert matrix.cell(i["A"], i["B"]).suspicious == 3
    assert matrix.cell(i["A"], i["B"]).total == 3
    assert matrix.cell(i["A"], i["C"]).suspicious == 2  # T3, T4
    assert matrix.cell(i["A"], i["C"]).total == 2
    assert matrix.cell(i["B"], i["C"]).suspicious == 1  # T3; T5 not flagged
    assert matrix.cell(i["B"], i["C"]).total == 2


def test_interaction_cell_display_format():
    ds, verdicts = make_interaction_fixture()
    tenders = list(ds.tenders)
    # firm Z: 7 suspicious of 32 -> "22% (7/32)" like the paper's table
    for k in range(32):
        tid = f"Z{k}"
        tenders.append(tender_with(tid, ["Z", "W", f"Y{k}"]))
        verdicts.append(verd(tid, 0.9 if k < 7 else 0.1))
    ds = Dataset(tenders=tuple(tenders))
    matrix = interaction_matrix(ds, verdicts, threshold=0.5, min_suspicious=3)
    i = {f: k for k, f in enumerate(matrix.firms)}
    assert matrix.cell(i["Z"], i["Z"]).display == "22% (7/32)"


def test_interaction_never_cobid_cell_absent():
    tenders = []
    verdicts = []
    for k in range(3):
        tenders.append(tender_with(f"P{k}", ["P", f"XA{k}", f"XB{k}"]))
        verdicts.append(verd(f"P{k}", 0.9))
        tenders.append(tender_with(f"Q{k}", ["Q", f"XA{k}", f"XB{k}"]))
        verdicts.append(verd(f"Q{k}", 0.9))
    # P and Q need one co-bid with ANOTHER heavy firm to enter; add P+Q tender
    tenders.append(tender_with("R", ["P", "Q", "XC"]))
    verdicts.append(verd("R", 0.9))
    ds = Dataset(tenders=tuple(tenders))
    matrix = interaction_matrix(ds, verdicts)
    i = {f: k for k, f in enumerate(matrix.firms)}
    assert matrix.cell(i["P"], i["Q"]) is not None
    # remove the joint tender: neither qualifies anymore (no interaction)
    ds2 = Dataset(tenders=tuple(t for t in ds.tenders if t.tender_id != "R"))
    v2 = [v for v in verdicts if v.tender_id != "R"]
    assert interaction_matrix(ds2, v2).firms == ()


def brute_force_rates(firms, ds, verdicts, mode, threshold=0.5):
    flagged = {v.tender_id for v in verdicts if v.probability >= threshold}
    out = {}
    for r in range(len(firms) + 1):
        for combo in itertools.combinations(firms, r):
            sus = tot = 0
            for t in ds.tenders:
                present = sum(1 for f in set(t.firms) if f in combo)
                need = 1 if mode == "with_diagonal" else 2
                if present >= need:
                    tot += 1
                    sus += t.tender_id in flagged
            out[tuple(sorted(combo))] = (sus, tot)
    return out


def test_suspicioucy_rates_match_brute_force():
    ds, verdicts = make_interaction_fixture()
    firms = ["A", "B", "C"]
    for mode in ("with_diagonal", "without_diagonal"):
        expected = brute_force_rates(firms, ds, verdicts, mode)
        got = suspicioucy_rates(firms, ds, verdicts, mode)
        assert len(got) == 8
        for c in got:
            key = tuple(sorted(c.cluster))
            assert (c.suspicious, c.total) == expected[key], (mode, key)


def test_suspicioucy_empty_cluster_undefined():
    ds, verdicts = make_interaction_fixture()
    rates = suspicioucy_rates(["A", "B"], ds, verdicts, "without_diagonal")
    empty = [c for c in rates if c.cluster == ()][0]
    assert empty.total == 0 and empty.rate is None
    assert rates[-1].rate is None  # undefined rates sort last


def test_suspicioucy_twelve_firms_enumerates_4096():
    ds, verdicts = make_interaction_fixture()
    firms = [f"F{i}" for i in range(12)]
    rates = suspicioucy_rates(firms, ds, verdicts, "with_diagonal")
    assert len(rates) == 4096


def test_suspicioucy_too_many_firms():
    ds, verdicts = make_interaction_fixture()
    with pytest.raises(TooManyFirms):
        suspicioucy_rates([f"F{i}" for i in range(21)], ds, verdicts, "with_diagonal")


def test_suspicioucy_counts_monotone_under_inclusion():
    ds, verdicts = make_interaction_fixture()
    firms = ["A", "B", "C"]
    rates = {tuple(sorted(c.cluster)): c for c in
             suspicioucy_rates(firms, ds, verdicts, "with_diagonal")}
    for sub in rates:
        for sup in rates:
            if set(sub) <= set(sup):
                assert rates[sub].suspicious <= rates[sup].suspicious
                assert rates[sub].total <= rates[sup].total
