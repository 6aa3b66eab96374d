"""Label taxonomy: the 17 top-level news topic labels plus 3 discard labels.

The schema is data, not code: it ships as a versioned JSONL asset so taxonomy
revisions swap in without code changes. Labels are immutable after load and
safe to share across threads.
"""

from __future__ import annotations

import datetime
import importlib.resources
import json
import re
from dataclasses import dataclass
from pathlib import Path

DEFAULT_VERSION_DATE = datetime.date(2023, 10, 24)

AUXILIARY_IDS = ("do not know", "not news", "multiple")

_BUILTIN_ASSET = "iptc_labels_2023-10-24.jsonl"

_WS = re.compile(r"\s+")


class SchemaError(ValueError):
    """Malformed or inconsistent label file."""


class DuplicateLabelError(SchemaError):
    """Two labels share an id."""


class UnknownLabelError(KeyError):
    """A raw label string matched nothing in the schema."""

    def __init__(self, raw: str):
        super().__init__(raw)
        self.raw = raw

    def __str__(self) -> str:
        return f"unknown label: {self.raw!r}"


@dataclass(frozen=True)
class TopicLabel:
    id: str
    display_name: str
    description: str
    kind: str  # "topic" | "auxiliary"


@dataclass(frozen=True)
class LabelSchema:
    version_date: datetime.date
    labels: tuple[TopicLabel, ...]

    @property
    def topic_labels(self) -> tuple[TopicLabel, ...]:
        return tuple(l for l in self.labels if l.kind == "topic")

    @property
    def auxiliary_labels(self) -> tuple[TopicLabel, ...]:
        return tuple(l for l in self.labels if l.kind == "auxiliary")

    @property
    def topic_ids(self) -> tuple[str, ...]:
        return tuple(l.id for l in self.topic_labels)

    @property
    def label_ids(self) -> tuple[str, ...]:
        return tuple(l.id for l in self.labels)

    def get(self, label_id: str) -> TopicLabel:
        for label in self.labels:
            if label.id == label_id:
                return label
        raise UnknownLabelError(label_id)


def _normalize(text: str) -> str:
    return _WS.sub(" ", text.strip()).casefold()


def _parse_label_line(line: str, lineno: int) -> TopicLabel:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {lineno}: not valid JSON: {exc}") from exc
    missing = {"id", "display_name", "description", "kind"} - rec.keys()
    if missing:
        raise SchemaError(f"line {lineno}: missing fields {sorted(missing)} in {rec!r}")
    if rec["kind"] not in ("topic", "auxiliary"):
        raise SchemaError(f"line {lineno}: bad kind {rec['kind']!r} for label {rec['id']!r}")
    return TopicLabel(
        id=rec["id"],
        display_name=rec["display_name"],
        description=rec["description"],
        kind=rec["kind"],
    )


def _validate(labels: list[TopicLabel], version_date: datetime.date) -> LabelSchema:
    seen: set[str] = set()
    for label in labels:
        if label.id in seen:
            raise DuplicateLabelError(f"duplicate label id: {label.id!r}")
        seen.add(label.id)
    topics = [l for l in labels if l.kind == "topic"]
    aux = [l for l in labels if l.kind == "auxiliary"]
    if len(topics) != 17:
        raise SchemaError(f"expected 17 topic labels, got {len(topics)}")
    if len(aux) != 3:
        raise SchemaError(f"auxiliary labels missing or wrong: expected 3, got {len(aux)}")
    for label in topics:
        if not label.description.strip():
            raise SchemaError(f"empty description for topic label {label.id!r}")
    return LabelSchema(version_date=version_date, labels=tuple(labels))


def load_schema(path: str | Path | None = None) -> LabelSchema:
    """Load a label schema from a JSONL file, or the built-in taxonomy."""
    if path is None:
        text = (
            importlib.resources.files("mediatopic")
            .joinpath("assets", _BUILTIN_ASSET)
            .read_text(encoding="utf-8")
        )
        version = DEFAULT_VERSION_DATE
    else:
        text = Path(path).read_text(encoding="utf-8")
        version = DEFAULT_VERSION_DATE
    labels = [
        _parse_label_line(line, i)
        for i, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    return _validate(labels, version)


def canonicalize_label(raw: str, schema: LabelSchema) -> TopicLabel:
    """Map free text to a schema label, case-insensitively and whitespace-normalized."""
    key = _normalize(raw)
    for label in schema.labels:
        if key == _normalize(label.id) or key == _normalize(label.display_name):
            return label
    raise UnknownLabelError(raw)


def render_guidelines(schema: LabelSchema) -> str:
    """Render the annotation guidelines as a deterministic text block."""
    lines = [
        "ANNOTATION GUIDELINES",
        "=====================",
        "",
        "Assign exactly one topic label to each text. If no topic label fits,",
        "use one of the discard labels listed at the end.",
        "",
        "Topic labels",
        "------------",
        "",
    ]
    for label in schema.topic_labels:
        lines.append(f"* {label.display_name}: {label.description}")
    lines += [
        "",
        "Discard labels",
        "--------------",
        "",
    ]
    for label in schema.auxiliary_labels:
        lines.append(f"* {label.display_name}: {label.description}")
    lines.append("")
    return "\n".join(lines)
