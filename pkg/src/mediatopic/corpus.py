"""Document ingestion, news filtering, and word-level truncation.

Web-corpus inputs are dirty: bad records are rejected and counted, never
fatal. A "word" is a maximal run of non-whitespace characters, which keeps
the truncation rule language-agnostic across Latin and Greek scripts.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

log = logging.getLogger(__name__)

DEFAULT_WORD_LIMIT = 512
DEFAULT_NEWS_TAG = "News"

REQUIRED_FIELDS = ("id", "lang", "genre", "body")


@dataclass(frozen=True)
class Document:
    id: str
    lang: str
    genre: str
    body: str

    @property
    def word_count(self) -> int:
        return len(self.body.split())

    def to_record(self) -> dict:
        return {"id": self.id, "lang": self.lang, "genre": self.genre, "body": self.body}


@dataclass
class CorpusStats:
    accepted: int = 0
    rejected: int = 0
    truncated: int = 0
    by_language: dict[str, int] = field(default_factory=dict)
    by_genre: dict[str, int] = field(default_factory=dict)
    rejection_reasons: dict[str, int] = field(default_factory=dict)

    def _bump(self, table: dict[str, int], key: str) -> None:
        table[key] = table.get(key, 0) + 1

    def accept(self, doc: Document) -> None:
        self.accepted += 1
        self._bump(self.by_language, doc.lang)
        self._bump(self.by_genre, doc.genre)

    def reject(self, reason: str) -> None:
        self.rejected += 1
        self._bump(self.rejection_reasons, reason)


class DocumentStore:
    """Append-only document collection preserving ingest order."""

    def __init__(self) -> None:
        self._docs: list[Document] = []
        self._ids: set[str] = set()

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._ids

    def add(self, doc: Document) -> None:
        if doc.id in self._ids:
            raise ValueError(f"duplicate document id: {doc.id!r}")
        self._ids.add(doc.id)
        self._docs.append(doc)

    def documents(self) -> list[Document]:
        return list(self._docs)

    def write_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for doc in self._docs:
                fh.write(json.dumps(doc.to_record(), ensure_ascii=False) + "\n")

    @classmethod
    def read_jsonl(cls, path: str | Path) -> "DocumentStore":
        store = cls()
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                store.add(Document(id=rec["id"], lang=rec["lang"], genre=rec["genre"], body=rec["body"]))
        return store


def ingest(source: Iterable[dict], langs: set[str]) -> tuple[DocumentStore, CorpusStats]:
    """Ingest raw records, keeping only well-formed documents in known languages."""
    store = DocumentStore()
    stats = CorpusStats()
    for rec in source:
        missing = [f for f in REQUIRED_FIELDS if f not in rec or rec[f] is None]
        if missing:
            log.warning("rejecting record missing fields %s: %r", missing, rec.get("id"))
            stats.reject("missing-field")
            continue
        if rec["lang"] not in langs:
            log.warning("rejecting record %r: language %r not configured", rec["id"], rec["lang"])
            stats.reject("language")
            continue
        if rec["id"] in store:
            log.warning("rejecting duplicate id %r", rec["id"])
            stats.reject("duplicate-id")
            continue
        doc = Document(id=str(rec["id"]), lang=rec["lang"], genre=rec["genre"], body=rec["body"])
        store.add(doc)
        stats.accept(doc)
    return store, stats


def filter_news(store: Iterable[Document], news_tag: str = DEFAULT_NEWS_TAG) -> list[Document]:
    """Keep only documents whose upstream genre tag marks them as news."""
    return [doc for doc in store if doc.genre == news_tag]


def truncate_words(doc: Document, limit: int = DEFAULT_WORD_LIMIT) -> Document:
    """Truncate the body to its initial `limit` whitespace-delimited words.

    Bodies at or under the limit pass through byte-identical; truncated
    bodies are rejoined with single spaces, so the prefix invariant holds at
    the word level.
    """
    if limit < 1:
        raise ValueError(f"word limit must be >= 1, got {limit}")
    words = doc.body.split()
    if len(words) <= limit:
        return doc
    return replace(doc, body=" ".join(words[:limit]))


def preprocess(docs: Iterable[Document], limit: int = DEFAULT_WORD_LIMIT,
               stats: CorpusStats | None = None) -> list[Document]:
    """Apply truncation to every document, counting how many were shortened."""
    out = []
    for doc in docs:
        truncated = truncate_words(doc, limit)
        if stats is not None and truncated is not doc:
            stats.truncated += 1
        out.append(truncated)
    return out
