"""Command-line pipeline: simulate, ingest, screens, train, evaluate,
sweep, importance, screen, report, serve.

Exit codes: 0 success, 1 domain error, 2 usage error. --json switches
stdout to machine-readable JSON. Output files never embed timestamps, so
a rerun with the same seed is byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import models as M
from .data import ingest_csv, wrangle, write_csv
from .errors import ScreeningError
from .evaluation import (
    EvaluationReport,
    model_metrics,
    permutation_importance,
    resample_intervals,
    split,
    threshold_sweep,
)
from .features import screening_matrix, training_data
from .jsonutil import canonical_json
from .models.configs import config_for_family, config_to_json
from .reporting import build_screening_report, make_verdict
from .screens import ScreenPolicy, screens_csv_rows
from .simulate import SimConfig, generate
from .store import RunStore


def _emit(args, payload: dict, human: str | None = None) -> None:
    if getattr(args, "json", False):
        print(canonical_json(payload))
    elif human is not None:
        print(human)


def _load_config_overrides(path: str | None) -> dict:
    if not path:
        return {}
    return json.loads(Path(path).read_text("utf-8"))


def _family_config(args):
    overrides = _load_config_overrides(args.config)
    family = args.family or overrides.pop("family", None)
    if args.model:
        model = M.ModelArtifact.from_json(json.loads(Path(args.model).read_text("utf-8")))
        return model.training_config if family is None else config_for_family(family, **overrides)
    if family is None:
        raise ScreeningError("--family (or a config file with 'family') is required")
    if args.seed is not None:
        overrides.setdefault("seed", args.seed)
    return config_for_family(family, **overrides)


def _read_training(args, feature_mode: str):
    ds = wrangle(ingest_csv(args.input))
    return training_data(ds, feature_mode)


def cmd_simulate(args) -> int:
    overrides = _load_config_overrides(args.config)
    if args.seed is not None:
        overrides.setdefault("seed", args.seed)
    if args.n is not None:
        overrides.setdefault("n_tenders", args.n)
    if args.cartel_share is not None:
        overrides.setdefault("cartel_share", args.cartel_share)
    cfg = SimConfig(**overrides)
    ds = generate(cfg)
    write_csv(ds, args.output)
    _emit(args, {"tenders": len(ds), "output": args.output},
          f"wrote {len(ds)} tenders to {args.output}")
    return 0


def cmd_ingest(args) -> int:
    ds = ingest_csv(args.input)
    wrangled = wrangle(ds)
    if args.output:
        write_csv(wrangled, args.output)
    payload = {
        "ingested_tenders": len(ds),
        "surviving_tenders": len(wrangled),
        "wrangling_log": wrangled.wrangling_log.to_json(),
    }
    _emit(args, payload,
          f"{len(ds)} tenders in, {len(wrangled)} kept "
          f"(dropped {wrangled.wrangling_log.dropped_tenders}, "
          f"collapsed {wrangled.wrangling_log.collapsed_variants} variants)")
    return 0


def cmd_screens(args) -> int:
    ds = wrangle(ingest_csv(args.input))
    rows = screens_csv_rows(ds, ScreenPolicy())
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(rows)
    _emit(args, {"tenders": len(ds), "output": args.output},
          f"wrote screens for {len(ds)} tenders to {args.output}")
    return 0


def cmd_train(args) -> int:
    config = _family_config(args)
    mode = "raw_screens" if config.family == "cart" else "expanded"
    data = _read_training(args, mode)
    model = M.train(data, config)
    text = model.serialize()
    Path(args.output).write_text(text, "utf-8")
    model_id = model.model_id
    if args.store:
        RunStore(args.store).put_model(model)
    human = f"trained {config.family} on {len(data)} tenders -> {args.output} (id {model_id})"
    if config.family == "cart":
        human += "\n" + M.render_cart(model)
    _emit(args, {"family": config.family, "model_id": model_id, "output": args.output}, human)
    return 0


def cmd_evaluate(args) -> int:
    config = _family_config(args)
    mode = "raw_screens" if config.family == "cart" else "expanded"
    data = _read_training(args, mode)
    seed = args.seed if args.seed is not None else getattr(config, "seed", 0)
    tr, te = split(data, args.ratio, seed)
    model = M.train(tr, config)
    point = model_metrics(model, te, args.threshold)
    intervals = None
    if args.replicates:
        intervals = resample_intervals(
            data, config, B=args.replicates, ratio=args.ratio,
            seed=seed, threshold=args.threshold,
        )
    report = EvaluationReport(
        family=config.family,
        config=config_to_json(config),
        split_seed=seed,
        split_ratio=args.ratio,
        threshold=args.threshold,
        point_metrics=point,
        intervals=intervals,
    )
    if args.output:
        Path(args.output).write_text(canonical_json(report.to_json()), "utf-8")
    lines = [f"{config.family}: CCR {point.ccr:.3f}"
             + (f", F1 {point.f1:.3f}" if point.f1 is not None else ", F1 undefined")]
    if intervals:
        for name in ("ccr", "f1"):
            iv = intervals.get(name)
            if iv:
                lines.append(f"  95% PI {name.upper()}: [{iv.lower:.3f}; {iv.upper:.3f}]")
    _emit(args, report.to_json(), "\n".join(lines))
    return 0


def cmd_sweep(args) -> int:
    config = _family_config(args)
    mode = "raw_screens" if config.family == "cart" else "expanded"
    data = _read_training(args, mode)
    seed = args.seed if args.seed is not None else getattr(config, "seed", 0)
    tr, te = split(data, args.ratio, seed)
    model = M.train(tr, config)
    probs = model.predict_proba(te.X)
    rows = threshold_sweep(list(zip(probs, te.y)))
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["threshold", "ccr", "fpr"])
            for r in rows:
                w.writerow([r["threshold"], repr(r["ccr"]),
                            "" if r["fpr"] is None else repr(r["fpr"])])
    lines = []
    for r in rows[::5]:
        fpr = "NA" if r["fpr"] is None else f"{r['fpr']:.3f}"
        lines.append(f"t={r['threshold']:.2f} ccr={r['ccr']:.3f} fpr={fpr}")
    _emit(args, {"sweep": rows}, "\n".join(lines))
    return 0


def cmd_importance(args) -> int:
    config = _family_config(args)
    mode = "raw_screens" if config.family == "cart" else "expanded"
    data = _read_training(args, mode)
    seed = args.seed if args.seed is not None else getattr(config, "seed", 0)
    tr, te = split(data, args.ratio, seed)
    model = M.train(tr, config)
    rep = permutation_importance(model, te, repeats=args.repeats,
                                 threshold=args.threshold, seed=seed)
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["feature", "importance", "raw_drop"])
            for name in sorted(rep.importances, key=rep.importances.get, reverse=True):
                w.writerow([name, repr(rep.importances[name]), repr(rep.raw_drops[name])])
    top = sorted(rep.importances.items(), key=lambda kv: -kv[1])[:10]
    _emit(args, rep.to_json(),
          "\n".join(f"{name:12s} {v:.3f}" for name, v in top)
          + ("\n(degenerate: no feature mattered)" if rep.degenerate else ""))
    return 0


def _screen_dataset(args):
    model = M.ModelArtifact.from_json(json.loads(Path(args.model).read_text("utf-8")))
    ds = wrangle(ingest_csv(args.input))
    X, ids = screening_matrix(ds, model.feature_mode)
    probs = model.predict_proba(X)
    verdicts = [
        make_verdict(tid, float(p), model.model_id, args.threshold, args.threshold_high)
        for tid, p in zip(ids, probs)
    ]
    return model, ds, verdicts


def cmd_screen(args) -> int:
    model, ds, verdicts = _screen_dataset(args)
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["tender_id", "probability", "light", "model_id"])
            for v in verdicts:
                w.writerow([v.tender_id, repr(v.probability), v.light.label, v.model_id])
    flagged = sum(1 for v in verdicts if v.probability >= args.threshold)
    _emit(args, {"verdicts": [v.to_json() for v in verdicts]},
          f"screened {len(verdicts)} tenders, {flagged} at or above {args.threshold}")
    return 0


def cmd_report(args) -> int:
    model, ds, verdicts = _screen_dataset(args)
    report = build_screening_report(
        ds, verdicts, model.model_id, args.threshold, args.threshold_high
    )
    doc = report.to_json()
    if args.output:
        Path(args.output).write_text(canonical_json(doc), "utf-8")
    if args.store:
        RunStore(args.store).put_report(doc)
    lines = [
        f"model {model.model_id} ({model.family}), thresholds "
        f"{args.threshold}/{args.threshold_high}",
        f"suspicious:      {report.summary['suspicious']['display']}",
        f"non-suspicious:  {report.summary['non_suspicious']['display']}",
        f"very suspicious: {report.summary_very['suspicious']['display']}",
        "",
        "by procedure:",
    ]
    for row in report.clusters["procedure"]:
        lines.append(f"  {row['group']:12s} {row['suspicious_display']} / {row['non_suspicious_display']}")
    lines.append("")
    lines.append("firm interactions (suspicious/total co-bids):")
    lines.append(report.interactions.render())
    top = report.suspicioucy["with_diagonal"][:5]
    if top:
        lines.append("")
        lines.append("top clusters by suspicioucy rate (with diagonal):")
        for c in top:
            rate = "NA" if c["rate"] is None else f"{100 * c['rate']:.0f}%"
            lines.append(f"  {{{', '.join(c['cluster'])}}}: {rate} ({c['suspicious']}/{c['total']})")
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(
        port=args.port,
        store_path=args.store,
        default_model_id=args.model_id,
        token=args.token,
        t1=args.threshold,
        t2=args.threshold_high,
        ui_dir=args.ui,
        host=args.host,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tenderscreen",
                                     description="bid-rigging screens and classifiers")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=False, thresholds=False, ratio=False):
        p.add_argument("--json", action="store_true", help="machine-readable stdout")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", default=None, help="JSON file with config overrides")
        if model:
            p.add_argument("--model", default=None, help="model JSON file")
            p.add_argument("--family", default=None, choices=list(M.FAMILIES))
        if thresholds:
            p.add_argument("--threshold", type=float, default=0.5)
            p.add_argument("--threshold-high", dest="threshold_high", type=float, default=0.7)
        if ratio:
            p.add_argument("--ratio", type=float, default=0.75)

    p = sub.add_parser("simulate", help="generate labeled synthetic tenders")
    common(p)
    p.add_argument("--output", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--cartel-share", dest="cartel_share", type=float, default=None)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("ingest", help="parse and wrangle a tender CSV")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("screens", help="per-tender screen values to CSV")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(fn=cmd_screens)

    p = sub.add_parser("train", help="train a classifier on labeled tenders")
    common(p, model=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--store", default=None, help="also register in this run store")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("evaluate", help="split, train, report test metrics")
    common(p, model=True, thresholds=True, ratio=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--replicates", type=int, default=0,
                   help="resampled prediction-interval replicates")
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("sweep", help="threshold sweep on a held-out split")
    common(p, model=True, thresholds=True, ratio=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("importance", help="permutation importances on a held-out split")
    common(p, model=True, thresholds=True, ratio=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--repeats", type=int, default=5)
    p.set_defaults(fn=cmd_importance)

    p = sub.add_parser("screen", help="apply a trained model to tenders")
    common(p, thresholds=True)
    p.add_argument("--input", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_screen)

    p = sub.add_parser("report", help="traffic-light report with cluster analytics")
    common(p, thresholds=True)
    p.add_argument("--input", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--store", default=None)
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("serve", help="run the screening HTTP service")
    common(p, thresholds=True)
    p.add_argument("--store", required=True)
    p.add_argument("--port", type=int, default=8565)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--model-id", dest="model_id", default=None)
    p.add_argument("--token", default=None)
    p.add_argument("--ui", default=None, help="directory of built UI assets")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScreeningError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
