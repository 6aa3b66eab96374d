"""HTTP service for the manual annotation campaign.

Tasks are served in a seeded per-annotator order fixed at campaign creation.
Round-2 serving is blind: payloads and ordering are computable without
reading any round-1 label. Storage is an append-only journal with
last-write-wins materialization, so resubmissions keep a full audit trail.
"""

from __future__ import annotations

import datetime
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corpus import Document
from .sampler import _subrng
from .schema import LabelSchema, UnknownLabelError, canonicalize_label, render_guidelines


@dataclass(frozen=True)
class AnnotationRecord:
    doc_id: str
    annotator_id: str
    round: int
    label: str
    timestamp: str

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "annotator_id": self.annotator_id,
            "round": self.round,
            "label": self.label,
            "timestamp": self.timestamp,
        }


@dataclass
class CampaignConfig:
    documents: list[Document]
    annotators: list[str]
    rounds: int = 1
    round2_doc_ids: list[str] | None = None  # defaults to the full task set
    seed: int = 0
    blind: bool = True

    def __post_init__(self) -> None:
        doc_ids = {d.id for d in self.documents}
        if self.round2_doc_ids is not None:
            extra = set(self.round2_doc_ids) - doc_ids
            if extra:
                raise ValueError(f"round-2 tasks not in round-1 task set: {sorted(extra)}")


class Campaign:
    def __init__(self, config: CampaignConfig, schema: LabelSchema,
                 journal_path: str | Path | None = None):
        self.config = config
        self.schema = schema
        self.journal_path = Path(journal_path) if journal_path else None
        self._lock = threading.Lock()
        self._docs = {d.id: d for d in config.documents}
        # per-annotator serving order, fixed at creation; round-independent
        self._order: dict[str, list[str]] = {}
        for annotator in config.annotators:
            ids = [d.id for d in config.documents]
            _subrng(config.seed, "campaign", annotator).shuffle(ids)
            self._order[annotator] = ids
        self._records: dict[tuple[str, str, int], AnnotationRecord] = {}
        self._journal: list[AnnotationRecord] = []
        if self.journal_path and self.journal_path.exists():
            with open(self.journal_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        self._apply(AnnotationRecord(**rec), persist=False)

    def _round_task_ids(self, round_no: int) -> list[str]:
        if round_no == 1 or self.config.round2_doc_ids is None:
            return list(self._docs)
        return list(self.config.round2_doc_ids)

    def _check_annotator(self, annotator_id: str) -> None:
        if annotator_id not in self.config.annotators:
            raise KeyError(annotator_id)

    def next_task(self, annotator_id: str, round_no: int = 1) -> dict | None:
        self._check_annotator(annotator_id)
        allowed = set(self._round_task_ids(round_no))
        for doc_id in self._order[annotator_id]:
            if doc_id not in allowed:
                continue
            if (doc_id, annotator_id, round_no) in self._records:
                continue
            doc = self._docs[doc_id]
            # task payload never carries any label field
            return {"doc_id": doc.id, "body": doc.body, "lang": doc.lang}
        return None

    def _apply(self, record: AnnotationRecord, persist: bool = True) -> None:
        self._journal.append(record)
        self._records[(record.doc_id, record.annotator_id, record.round)] = record
        if persist and self.journal_path:
            with open(self.journal_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record.to_record(), ensure_ascii=False) + "\n")

    def submit_label(self, doc_id: str, annotator_id: str, round_no: int,
                     raw_label: str) -> AnnotationRecord:
        self._check_annotator(annotator_id)
        if doc_id not in self._docs:
            raise LookupError(doc_id)
        label = canonicalize_label(raw_label, self.schema)  # topic or auxiliary
        record = AnnotationRecord(
            doc_id=doc_id,
            annotator_id=annotator_id,
            round=round_no,
            label=label.id,
            timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        )
        with self._lock:
            self._apply(record)
        return record

    def progress(self, annotator_id: str, round_no: int = 1) -> dict:
        self._check_annotator(annotator_id)
        task_ids = self._round_task_ids(round_no)
        per_label: dict[str, int] = {}
        done = 0
        for doc_id in task_ids:
            rec = self._records.get((doc_id, annotator_id, round_no))
            if rec:
                done += 1
                per_label[rec.label] = per_label.get(rec.label, 0) + 1
        return {"done": done, "total": len(task_ids), "per_label": per_label}

    def export_records(self) -> list[AnnotationRecord]:
        records = sorted(
            self._records.values(), key=lambda r: (r.doc_id, r.annotator_id, r.round)
        )
        return records

    def export_jsonl(self) -> str:
        return "".join(
            json.dumps(r.to_record(), ensure_ascii=False) + "\n" for r in self.export_records()
        )

    def labels_of(self, annotator_id: str, round_no: int = 1) -> dict[str, str]:
        """doc_id -> label map for one annotator and round (feeds agreement)."""
        return {
            doc_id: rec.label
            for (doc_id, ann, rnd), rec in self._records.items()
            if ann == annotator_id and rnd == round_no
        }


class LabelSubmission(BaseModel):
    doc_id: str
    annotator: str
    round: int = 1
    label: str


def create_app(campaign: Campaign, shared_secret: str | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="annotation service")

    def check_auth(request: Request) -> None:
        if shared_secret is None:
            return
        token = request.headers.get("X-Annotation-Token", "")
        if token != shared_secret:
            raise HTTPException(status_code=401, detail="bad or missing token")

    @app.get("/api/task")
    def get_task(annotator: str, round: int = 1, _: None = Depends(check_auth)):
        try:
            task = campaign.next_task(annotator, round)
        except KeyError:
            raise HTTPException(status_code=403, detail=f"unknown annotator: {annotator}")
        return {"task": task}

    @app.post("/api/label")
    def post_label(submission: LabelSubmission, _: None = Depends(check_auth)):
        try:
            record = campaign.submit_label(
                submission.doc_id, submission.annotator, submission.round, submission.label
            )
        except UnknownLabelError:
            raise HTTPException(
                status_code=422,
                detail={
                    "error": f"unknown label: {submission.label!r}",
                    "valid_labels": list(campaign.schema.label_ids),
                },
            )
        except KeyError:
            raise HTTPException(status_code=403, detail=f"unknown annotator: {submission.annotator}")
        except LookupError:
            raise HTTPException(status_code=404, detail=f"unknown document: {submission.doc_id}")
        return record.to_record()

    @app.get("/api/progress")
    def get_progress(annotator: str, round: int = 1, _: None = Depends(check_auth)):
        try:
            return campaign.progress(annotator, round)
        except KeyError:
            raise HTTPException(status_code=403, detail=f"unknown annotator: {annotator}")

    @app.get("/api/guidelines", response_class=PlainTextResponse)
    def get_guidelines():
        return render_guidelines(campaign.schema)

    @app.get("/api/labels")
    def get_labels():
        return {
            "labels": [
                {"id": l.id, "display_name": l.display_name,
                 "description": l.description, "kind": l.kind}
                for l in campaign.schema.labels
            ]
        }

    @app.get("/api/export", response_class=PlainTextResponse)
    def get_export(_: None = Depends(check_auth)):
        return campaign.export_jsonl()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
