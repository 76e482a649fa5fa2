"""File-backed run store: models, reports, datasets, screenings, flags.

Flat JSON files under one directory, content-addressed ids, a single index.
Append-only JSONL logs hold screened tenders and escalation flags so state
survives restarts and stays auditable. Writes are serialized by one lock;
concurrent reads need none.
"""

from __future__ import annotations

import datetime as _dt
import json
import threading
import uuid
from pathlib import Path

from .errors import ScreeningError, UnknownId
from .jsonutil import canonical_json, content_id
from .models import ModelArtifact


class FlagConflict(ScreeningError):
    pass


class RunStore:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "models").mkdir(exist_ok=True)
        (self.root / "reports").mkdir(exist_ok=True)
        (self.root / "datasets").mkdir(exist_ok=True)
        self._lock = threading.Lock()
        self._model_cache: dict[str, ModelArtifact] = {}
        self._index_path = self.root / "index.json"
        if self._index_path.exists():
            self._index = json.loads(self._index_path.read_text("utf-8"))
        else:
            self._index = {"models": {}, "reports": {}, "datasets": {}}

    def _write_index(self) -> None:
        self._index_path.write_text(canonical_json(self._index), "utf-8")

    # -- models ---------------------------------------------------------

    def put_model(self, artifact: ModelArtifact) -> str:
        doc = artifact.to_json()
        model_id = content_id(doc)
        with self._lock:
            path = self.root / "models" / f"{model_id}.json"
            path.write_text(canonical_json(doc), "utf-8")
            self._index["models"][model_id] = {
                "family": artifact.family,
                "feature_mode": artifact.feature_mode,
                "path": f"models/{model_id}.json",
            }
            self._write_index()
        return model_id

    def get_model(self, model_id: str) -> ModelArtifact:
        if model_id in self._model_cache:
            return self._model_cache[model_id]
        path = self.root / "models" / f"{model_id}.json"
        if model_id not in self._index["models"] or not path.exists():
            raise UnknownId(f"no model {model_id!r}")
        artifact = ModelArtifact.from_json(json.loads(path.read_text("utf-8")))
        self._model_cache[model_id] = artifact
        return artifact

    def list_models(self) -> list[dict]:
        return [
            {"model_id": mid, **meta} for mid, meta in sorted(self._index["models"].items())
        ]

    def latest_model_id(self) -> str | None:
        models = self.list_models()
        return models[-1]["model_id"] if models else None

    # -- reports / datasets ----------------------------------------------

    def put_report(self, doc: dict, kind: str = "screening") -> str:
        rid = content_id(doc)
        with self._lock:
            (self.root / "reports" / f"{rid}.json").write_text(canonical_json(doc), "utf-8")
            self._index["reports"][rid] = {"kind": kind, "path": f"reports/{rid}.json"}
            self._write_index()
        return rid

    def get_report(self, rid: str) -> dict:
        path = self.root / "reports" / f"{rid}.json"
        if rid not in self._index["reports"] or not path.exists():
            raise UnknownId(f"no report {rid!r}")
        return json.loads(path.read_text("utf-8"))

    def put_dataset(self, csv_text: str, provenance: str = "") -> str:
        did = content_id({"csv": csv_text})
        with self._lock:
            (self.root / "datasets" / f"{did}.csv").write_text(csv_text, "utf-8")
            self._index["datasets"][did] = {
                "provenance": provenance,
                "path": f"datasets/{did}.csv",
            }
            self._write_index()
        return did

    # -- screened tenders -------------------------------------------------

    def record_screening(self, record: dict) -> None:
        """Append one screened-tender record; the latest per tender_id wins."""
        with self._lock:
            with open(self.root / "tenders.jsonl", "a", encoding="utf-8") as fh:
                fh.write(canonical_json(record) + "\n")

    def screened_tenders(self) -> dict[str, dict]:
        path = self.root / "tenders.jsonl"
        out: dict[str, dict] = {}
        if path.exists():
            for line in path.read_text("utf-8").splitlines():
                if line.strip():
                    rec = json.loads(line)
                    out[rec["tender_id"]] = rec
        return out

    # -- escalation flags --------------------------------------------------

    def _load_flags(self) -> dict[str, dict]:
        path = self.root / "flags.jsonl"
        flags: dict[str, dict] = {}
        if path.exists():
            for line in path.read_text("utf-8").splitlines():
                if not line.strip():
                    continue
                event = json.loads(line)
                fid = event["flag_id"]
                if event["event"] == "created":
                    flags[fid] = {k: v for k, v in event.items() if k != "event"}
                elif fid in flags:
                    flags[fid]["status"] = event["status"]
        return flags

    def list_flags(self) -> list[dict]:
        return sorted(self._load_flags().values(), key=lambda f: f["created_at"])

    def create_flag(self, tender_id: str, manager_id: str, note: str = "") -> dict:
        with self._lock:
            flags = self._load_flags()
            for f in flags.values():
                if (
                    f["tender_id"] == tender_id
                    and f["manager_id"] == manager_id
                    and f["status"] == "open"
                ):
                    raise FlagConflict(
                        f"open flag already exists for tender {tender_id!r} "
                        f"by manager {manager_id!r}"
                    )
            flag = {
                "flag_id": uuid.uuid4().hex[:12],
                "tender_id": tender_id,
                "manager_id": manager_id,
                "note": note,
                "status": "open",
                "created_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            }
            with open(self.root / "flags.jsonl", "a", encoding="utf-8") as fh:
                fh.write(canonical_json({"event": "created", **flag}) + "\n")
        return flag

    def update_flag(self, flag_id: str, status: str) -> dict:
        if status not in ("open", "reviewed"):
            raise ValueError("status must be open or reviewed")
        with self._lock:
            flags = self._load_flags()
            if flag_id not in flags:
                raise UnknownId(f"no flag {flag_id!r}")
            event = {"event": "status", "flag_id": flag_id, "status": status}
            with open(self.root / "flags.jsonl", "a", encoding="utf-8") as fh:
                fh.write(canonical_json(event) + "\n")
            flags[flag_id]["status"] = status
            return flags[flag_id]
