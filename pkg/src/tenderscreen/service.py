"""JSON-over-HTTP screening service and backend for the manager console.

Error mapping: malformed bodies 400, missing auth 401, unknown ids 404,
flag conflicts 409, domain errors 422 with the domain error name echoed in
"error". Every screening response carries the model_id and thresholds used.
When a bearer token is configured, all endpoints except /health and the
static /ui assets require it.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .data import Bid, Dataset, Label, Procedure, Tender
from .errors import ScreeningError, TooFewBids, UnknownId
from .features import tender_features
from .models import ModelArtifact, cart_decision_path
from .reporting import (
    Verdict,
    build_screening_report,
    cluster_breakdown,
    interaction_matrix,
    make_verdict,
    summarize,
    suspicioucy_rates,
    traffic_light,
)
from .screens import ScreenPolicy, compute_screens
from .store import FlagConflict, RunStore


class BidIn(BaseModel):
    firm_id: str = ""
    amount: float
    variant_id: str | None = None


class ThresholdsIn(BaseModel):
    suspicious: float = 0.5
    very_suspicious: float = 0.7


class ScreenRequest(BaseModel):
    bids: list[BidIn | float] = Field(min_length=1)
    tender_id: str | None = None
    date: str | None = None
    region: str | None = None
    procedure: str | None = None
    model_id: str | None = None
    thresholds: ThresholdsIn | None = None


class TenderRequest(ScreenRequest):
    tender_id: str


class FlagRequest(BaseModel):
    tender_id: str
    manager_id: str
    note: str = ""


class FlagPatch(BaseModel):
    status: str


def _normalize_bids(raw: list) -> list[Bid]:
    bids = []
    for i, b in enumerate(raw):
        if isinstance(b, float | int):
            firm, amount, variant = f"anon{i + 1}", float(b), None
        else:
            firm = b.firm_id or f"anon{i + 1}"
            amount, variant = float(b.amount), b.variant_id
        if amount <= 0:
            raise ScreeningError(f"bid {i + 1}: amount must be > 0")
        bids.append(Bid(tender_id="", firm_id=firm, amount=amount, variant_id=variant))
    # one bid per firm: keep each firm's lowest
    lowest: dict[str, Bid] = {}
    for b in sorted(bids, key=lambda b: b.amount):
        lowest.setdefault(b.firm_id, b)
    if len(lowest) < 3:
        raise TooFewBids(f"need >= 3 bids from distinct firms, got {len(lowest)}")
    return sorted(lowest.values(), key=lambda b: b.amount)


def create_app(
    store_path,
    default_model_id: str | None = None,
    token: str | None = None,
    t1: float = 0.5,
    t2: float = 0.7,
    ui_dir: str | None = None,
) -> FastAPI:
    store = RunStore(store_path)
    app = FastAPI(title="tenderscreen", docs_url=None, redoc_url=None)
    policy = ScreenPolicy()

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "MalformedBody", "detail": exc.errors()})

    @app.exception_handler(ScreeningError)
    async def _on_domain(request: Request, exc: ScreeningError):
        status = 404 if isinstance(exc, UnknownId) else 409 if isinstance(exc, FlagConflict) else 422
        return JSONResponse(status_code=status, content={"error": exc.code, "detail": str(exc)})

    @app.middleware("http")
    async def _auth(request: Request, call_next):
        path = request.url.path
        if token and not (path == "/health" or path.startswith("/ui")):
            header = request.headers.get("authorization", "")
            if header != f"Bearer {token}":
                return JSONResponse(status_code=401, content={"error": "Unauthorized"})
        return await call_next(request)

    def resolve_model(model_id: str | None) -> tuple[str, ModelArtifact]:
        mid = model_id or default_model_id or store.latest_model_id()
        if mid is None:
            raise UnknownId("no model available; train and store one first")
        return mid, store.get_model(mid)

    def screen_payload(req: ScreenRequest, persist: bool) -> dict:
        bids = _normalize_bids(req.bids)
        mid, model = resolve_model(req.model_id)
        th = req.thresholds or ThresholdsIn(suspicious=t1, very_suspicious=t2)
        amounts = [b.amount for b in bids]
        sv = compute_screens(amounts, policy)
        features = tender_features(amounts, model.feature_mode, policy)
        probability = float(model.predict_proba(features))
        light = traffic_light(probability, th.suspicious, th.very_suspicious)
        tree_path = None
        if model.family == "cart":
            path = cart_decision_path(model, features)
            tree_path = [s["test"] + " " + s["taken"] for s in path[:-1]]
            tree_path.append(f"-> {path[-1]['leaf_class']}")
            tree_path = {"steps": path, "display": tree_path}
        body = {
            "tender_id": req.tender_id,
            "screens": sv.to_json(),
            "features": dict(zip(model.feature_names, [float(v) for v in features])),
            "probability": probability,
            "light": light.label,
            "model_id": mid,
            "thresholds": {"suspicious": th.suspicious, "very_suspicious": th.very_suspicious},
            "tree_path": tree_path,
        }
        if persist and req.tender_id:
            record = {
                "tender_id": req.tender_id,
                "date": req.date,
                "region": req.region,
                "procedure": req.procedure,
                "bids": [{"firm_id": b.firm_id, "amount": b.amount} for b in bids],
                "screens": sv.to_json(),
                "probability": probability,
                "light": light.label,
                "model_id": mid,
                "thresholds": body["thresholds"],
            }
            store.record_screening(record)
        return body

    def stored_dataset_and_verdicts() -> tuple[Dataset, list[Verdict]]:
        records = store.screened_tenders()
        tenders, verdicts = [], []
        for rec in records.values():
            tid = rec["tender_id"]
            bids = tuple(
                Bid(tender_id=tid, firm_id=b["firm_id"], amount=b["amount"])
                for b in rec["bids"]
            )
            proc = rec.get("procedure")
            tenders.append(
                Tender(
                    tender_id=tid,
                    bids=bids,
                    date=rec.get("date"),
                    region=rec.get("region"),
                    procedure=Procedure(proc) if proc in ("open", "invitation") else Procedure.unknown,
                    label=Label.unknown,
                )
            )
            verdicts.append(
                make_verdict(tid, rec["probability"], rec["model_id"], t1, t2)
            )
        return Dataset(tenders=tuple(tenders), provenance="service"), verdicts

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/screen")
    def screen(req: ScreenRequest):
        return screen_payload(req, persist=True)

    @app.post("/tenders", status_code=201)
    def post_tender(req: TenderRequest):
        return screen_payload(req, persist=True)

    @app.get("/tenders")
    def list_tenders(light: str | None = None, region: str | None = None,
                     limit: int = 100, offset: int = 0):
        records = list(store.screened_tenders().values())
        if light:
            records = [r for r in records if r["light"] == light]
        if region:
            records = [r for r in records if r.get("region") == region]
        records.sort(key=lambda r: r["tender_id"])
        page = records[offset : offset + limit]
        return {"total": len(records), "offset": offset, "tenders": page}

    @app.get("/tenders/{tender_id}")
    def get_tender(tender_id: str):
        rec = store.screened_tenders().get(tender_id)
        if rec is None:
            raise UnknownId(f"no screened tender {tender_id!r}")
        return rec

    @app.post("/flags", status_code=201)
    def post_flag(req: FlagRequest):
        return store.create_flag(req.tender_id, req.manager_id, req.note)

    @app.patch("/flags/{flag_id}")
    def patch_flag(flag_id: str, req: FlagPatch):
        if req.status not in ("open", "reviewed"):
            raise ScreeningError("status must be open or reviewed")
        return store.update_flag(flag_id, req.status)

    @app.get("/flags")
    def get_flags():
        return {"flags": store.list_flags()}

    @app.get("/models")
    def get_models():
        return {"models": store.list_models(), "default_model_id": default_model_id or store.latest_model_id()}

    @app.get("/models/{model_id}")
    def get_model(model_id: str):
        model = store.get_model(model_id)
        doc = model.to_json()
        doc["model_id"] = model_id
        if model.family == "cart":
            from .models import render_cart

            doc["tree_diagram"] = render_cart(model)
        return doc

    def _report_meta(threshold: float) -> dict:
        return {
            "threshold": threshold,
            "model_id": default_model_id or store.latest_model_id(),
        }

    @app.get("/reports/summary")
    def report_summary(threshold: float | None = None):
        _, verdicts = stored_dataset_and_verdicts()
        if not verdicts:
            return {**_report_meta(threshold or t1), "total": 0, "suspicious": None, "non_suspicious": None}
        th = threshold if threshold is not None else t1
        return {**_report_meta(th), **summarize(verdicts, th)}

    @app.get("/reports/clusters")
    def report_clusters(group_by: str = "region", threshold: float | None = None,
                        min_group_size: int = 0):
        if group_by not in ("region", "procedure", "year"):
            raise ScreeningError("group_by must be region, procedure or year")
        ds, verdicts = stored_dataset_and_verdicts()
        th = threshold if threshold is not None else t1
        rows = cluster_breakdown(verdicts, ds, group_by, th, min_group_size) if verdicts else []
        return {**_report_meta(th), "group_by": group_by, "groups": rows}

    @app.get("/reports/interactions")
    def report_interactions(threshold: float | None = None, min_suspicious: int = 3):
        ds, verdicts = stored_dataset_and_verdicts()
        th = threshold if threshold is not None else t1
        matrix = interaction_matrix(ds, verdicts, th, min_suspicious)
        return {**_report_meta(th), **matrix.to_json(), "rendered": matrix.render()}

    @app.get("/reports/suspicioucy")
    def report_suspicioucy(mode: str = "with_diagonal", threshold: float | None = None,
                           max_firms: int = 12, top: int = 20):
        if mode not in ("with_diagonal", "without_diagonal"):
            raise ScreeningError("mode must be with_diagonal or without_diagonal")
        ds, verdicts = stored_dataset_and_verdicts()
        th = threshold if threshold is not None else t1
        matrix = interaction_matrix(ds, verdicts, th)
        firms = list(matrix.firms[:max_firms])
        rates = suspicioucy_rates(firms, ds, verdicts, mode, th)
        return {
            **_report_meta(th),
            "mode": mode,
            "firms": firms,
            "clusters": [c.to_json() for c in rates[:top]],
            "n_clusters": len(rates),
        }

    @app.get("/reports/full")
    def report_full(threshold: float | None = None):
        ds, verdicts = stored_dataset_and_verdicts()
        if not verdicts:
            raise ScreeningError("no screened tenders yet")
        th = threshold if threshold is not None else t1
        report = build_screening_report(ds, verdicts, _report_meta(th)["model_id"] or "", th, t2)
        rid = store.put_report(report.to_json())
        return {"report_id": rid, **report.to_json()}

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(port: int, store_path, default_model_id=None, token=None,
          t1: float = 0.5, t2: float = 0.7, ui_dir=None, host: str = "127.0.0.1"):
    import uvicorn

    app = create_app(store_path, default_model_id, token, t1, t2, ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
