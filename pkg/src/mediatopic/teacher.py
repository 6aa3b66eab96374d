"""Zero-shot teacher annotation over a chat-completion-style HTTP endpoint.

Prompts are built from a versioned template asset so every run pins a prompt
hash. Successful results are cached in an append-only JSONL keyed by
(doc_id, iteration, prompt_hash, model_name); reruns over a warm cache issue
no network requests. Failures are recorded per document, never fatal to the
batch.
"""

from __future__ import annotations

import hashlib
import importlib.resources
import json
import logging
import os
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import requests

from .corpus import Document
from .schema import LabelSchema, TopicLabel, UnknownLabelError, canonicalize_label

log = logging.getLogger(__name__)

_PROMPT_ASSET = "prompt_v1.txt"


class ResponseParseError(ValueError):
    """The teacher's reply contained no usable label."""


class AmbiguousResponseError(ResponseParseError):
    """The teacher's reply named more than one label with no structured field."""


class MissingApiKeyError(RuntimeError):
    pass


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    backoff_seconds: tuple[float, ...] = (0.5, 1.0, 2.0)

    def backoff(self, attempt: int) -> float:
        if not self.backoff_seconds:
            return 0.0
        return self.backoff_seconds[min(attempt, len(self.backoff_seconds) - 1)]


@dataclass(frozen=True)
class TeacherConfig:
    base_url: str
    model_name: str = "gpt-4o-2024-05-13"
    api_key_env: str = "TEACHER_API_KEY"
    max_concurrency: int = 4
    retry: RetryPolicy = RetryPolicy()
    iterations: int = 3
    temperature: float = 0.0
    max_output_tokens: int = 32
    timeout_seconds: float = 60.0
    # per-1k-token prices; cost stays 0 unless configured
    price_per_1k_input: float = 0.0
    price_per_1k_output: float = 0.0

    def __post_init__(self) -> None:
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


@dataclass(frozen=True)
class TeacherAnnotation:
    doc_id: str
    iteration: int
    label: str
    raw_response: str
    request_cost: float
    latency_seconds: float


@dataclass
class AnnotationFailure:
    doc_id: str
    iteration: int
    error: str


@dataclass
class CostLedger:
    total_requests: int = 0
    total_input_tokens: int = 0
    total_output_tokens: int = 0
    total_cost: float = 0.0
    wall_time_seconds: float = 0.0

    def record(self, input_tokens: int, output_tokens: int, cost: float) -> None:
        self.total_requests += 1
        self.total_input_tokens += input_tokens
        self.total_output_tokens += output_tokens
        self.total_cost += cost


@dataclass
class BatchResult:
    annotations: list[TeacherAnnotation]
    failures: list[AnnotationFailure]
    ledger: CostLedger
    prompt_hash: str


def prompt_template() -> str:
    return (
        importlib.resources.files("mediatopic")
        .joinpath("assets", _PROMPT_ASSET)
        .read_text(encoding="utf-8")
    )


def build_prompt(doc: Document, schema: LabelSchema) -> str:
    """Deterministic annotation prompt: task, labels with descriptions, article body."""
    label_block = "\n".join(
        f"- {label.display_name}: {label.description}" for label in schema.topic_labels
    )
    return prompt_template().format(label_block=label_block, text=doc.body)


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def _extract_json_object(raw: str) -> dict | None:
    try:
        obj = json.loads(raw)
        return obj if isinstance(obj, dict) else None
    except json.JSONDecodeError:
        pass
    match = re.search(r"\{[^{}]*\}", raw)
    if match:
        try:
            obj = json.loads(match.group(0))
            return obj if isinstance(obj, dict) else None
        except json.JSONDecodeError:
            return None
    return None


def parse_label_response(raw: str, schema: LabelSchema) -> TopicLabel:
    """Pull the label out of a teacher reply.

    Prefers a structured {"label": ...} field; otherwise scans the text for a
    unique label-name match.
    """
    obj = _extract_json_object(raw)
    if obj is not None and "label" in obj:
        try:
            return canonicalize_label(str(obj["label"]), schema)
        except UnknownLabelError:
            pass  # fall back to scanning
    folded = raw.casefold()
    hits = [
        label
        for label in schema.topic_labels
        if re.search(rf"(?<!\w){re.escape(label.display_name.casefold())}(?!\w)", folded)
    ]
    if len(hits) == 1:
        return hits[0]
    if len(hits) > 1:
        raise AmbiguousResponseError(
            f"response names {len(hits)} labels ({', '.join(l.id for l in hits)}): {raw!r}"
        )
    raise ResponseParseError(f"no label found in response: {raw!r}")


class AnnotationCache:
    """Append-only JSONL cache of successful teacher annotations."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, int, str, str], TeacherAnnotation] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    rec = json.loads(line)
                    ann = TeacherAnnotation(
                        doc_id=rec["doc_id"],
                        iteration=rec["iteration"],
                        label=rec["label"],
                        raw_response=rec["raw_response"],
                        request_cost=rec["request_cost"],
                        latency_seconds=rec["latency_seconds"],
                    )
                    self._entries[(rec["doc_id"], rec["iteration"], rec["prompt_hash"], rec["model_name"])] = ann

    def get(self, doc_id: str, iteration: int, phash: str, model: str) -> TeacherAnnotation | None:
        return self._entries.get((doc_id, iteration, phash, model))

    def put(self, ann: TeacherAnnotation, phash: str, model: str) -> None:
        rec = {
            "doc_id": ann.doc_id,
            "iteration": ann.iteration,
            "prompt_hash": phash,
            "model_name": model,
            "label": ann.label,
            "raw_response": ann.raw_response,
            "request_cost": ann.request_cost,
            "latency_seconds": ann.latency_seconds,
        }
        with self._lock:
            self._entries[(ann.doc_id, ann.iteration, phash, model)] = ann
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


class TeacherClient:
    def __init__(self, config: TeacherConfig, cache: AnnotationCache | None = None,
                 session: requests.Session | None = None):
        self.config = config
        self.cache = cache
        self.session = session or requests.Session()

    def _api_key(self) -> str:
        key = os.environ.get(self.config.api_key_env, "")
        if not key:
            raise MissingApiKeyError(
                f"environment variable {self.config.api_key_env} is not set"
            )
        return key

    def _request(self, prompt: str, api_key: str) -> tuple[str, int, int]:
        """One chat-completion call with retries; returns (content, in_tokens, out_tokens)."""
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": self.config.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_output_tokens,
        }
        headers = {"Authorization": f"Bearer {api_key}"}
        last_error: Exception | None = None
        for attempt in range(self.config.retry.max_attempts):
            if attempt:
                time.sleep(self.config.retry.backoff(attempt - 1))
            try:
                resp = self.session.post(
                    url, json=payload, headers=headers, timeout=self.config.timeout_seconds
                )
                if resp.status_code >= 500 or resp.status_code == 429:
                    last_error = RuntimeError(f"HTTP {resp.status_code}: {resp.text[:200]}")
                    continue
                resp.raise_for_status()
                body = resp.json()
                content = body["choices"][0]["message"]["content"]
                usage = body.get("usage", {})
                return content, usage.get("prompt_tokens", 0), usage.get("completion_tokens", 0)
            except (requests.RequestException, KeyError, ValueError) as exc:
                last_error = exc
        raise RuntimeError(f"retries exhausted: {last_error}")

    def _annotate_one(
        self, doc: Document, iteration: int, prompt: str, phash: str,
        api_key: str, schema: LabelSchema, ledger: CostLedger, ledger_lock: threading.Lock,
    ) -> TeacherAnnotation:
        if self.cache is not None:
            hit = self.cache.get(doc.id, iteration, phash, self.config.model_name)
            if hit is not None:
                return hit
        start = time.monotonic()
        content, tokens_in, tokens_out = self._request(prompt, api_key)
        latency = time.monotonic() - start
        cost = (
            tokens_in / 1000.0 * self.config.price_per_1k_input
            + tokens_out / 1000.0 * self.config.price_per_1k_output
        )
        label = parse_label_response(content, schema)
        ann = TeacherAnnotation(
            doc_id=doc.id,
            iteration=iteration,
            label=label.id,
            raw_response=content,
            request_cost=cost,
            latency_seconds=latency,
        )
        with ledger_lock:
            ledger.record(tokens_in, tokens_out, cost)
        if self.cache is not None:
            self.cache.put(ann, phash, self.config.model_name)
        return ann

    def annotate_batch(self, docs: Sequence[Document], schema: LabelSchema) -> BatchResult:
        """Annotate every document config.iterations times, bounded-concurrently."""
        api_key = self._api_key()
        ledger = CostLedger()
        ledger_lock = threading.Lock()
        annotations: list[TeacherAnnotation] = []
        failures: list[AnnotationFailure] = []
        start = time.monotonic()
        prompts = {doc.id: build_prompt(doc, schema) for doc in docs}
        hashes = {doc_id: prompt_hash(p) for doc_id, p in prompts.items()}
        batch_hash = hashes[docs[0].id] if docs else prompt_hash(prompt_template())
        tasks = [(doc, it) for doc in docs for it in range(1, self.config.iterations + 1)]
        with ThreadPoolExecutor(max_workers=self.config.max_concurrency) as pool:
            futures = {
                pool.submit(
                    self._annotate_one, doc, it, prompts[doc.id], hashes[doc.id],
                    api_key, schema, ledger, ledger_lock,
                ): (doc, it)
                for doc, it in tasks
            }
            for future, (doc, it) in futures.items():
                try:
                    annotations.append(future.result())
                except Exception as exc:
                    log.warning("annotation failed for %s iteration %d: %s", doc.id, it, exc)
                    failures.append(AnnotationFailure(doc.id, it, str(exc)))
        ledger.wall_time_seconds = time.monotonic() - start
        annotations.sort(key=lambda a: (a.doc_id, a.iteration))
        return BatchResult(annotations, failures, ledger, batch_hash)
