"""Seeded, deterministic dataset construction: stratified train/dev splits,
label-by-language balanced test selection, size subsets, monolingual subsets,
and discard-label exclusions.

All operations are pure functions over immutable snapshots; given the same
pool ordering and seed they reproduce membership exactly. Proportions are
rounded by largest remainder, which keeps every per-group deviation from the
exact allocation under one instance.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .schema import AUXILIARY_IDS, LabelSchema


@dataclass(frozen=True)
class LabeledDoc:
    """A document carrying an assigned label, the unit of all sampling ops."""

    id: str
    lang: str
    text: str
    label: str

    def to_record(self) -> dict:
        return {"id": self.id, "lang": self.lang, "text": self.text, "label": self.label}

    @classmethod
    def from_record(cls, rec: dict) -> "LabeledDoc":
        return cls(id=rec["id"], lang=rec["lang"], text=rec["text"], label=rec["label"])


@dataclass(frozen=True)
class SplitSpec:
    train_size: int
    dev_size: int
    seed: int
    stratify_key: str = "label"


@dataclass(frozen=True)
class BalanceSpec:
    per_cell: int = 18
    seed: int = 0

    def __post_init__(self) -> None:
        if self.per_cell < 1:
            raise ValueError(f"per_cell must be >= 1, got {self.per_cell}")


@dataclass
class ExclusionReport:
    total_before: int
    excluded_by_label: dict[str, int]
    total_after: int

    @property
    def total_excluded(self) -> int:
        return sum(self.excluded_by_label.values())

    @property
    def percentages(self) -> dict[str, float]:
        if self.total_before == 0:
            return {k: 0.0 for k in self.excluded_by_label}
        return {k: 100.0 * v / self.total_before for k, v in self.excluded_by_label.items()}

    @property
    def excluded_percent(self) -> float:
        return 100.0 * self.total_excluded / self.total_before if self.total_before else 0.0


class SamplingError(ValueError):
    pass


def _subrng(seed: int, *parts: object) -> random.Random:
    """Stable per-stratum RNG: the stream depends only on seed and the key parts."""
    key = f"{seed}|" + "|".join(str(p) for p in parts)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def largest_remainder(
    weights: dict[str, int], total: int, caps: dict[str, int] | None = None
) -> dict[str, int]:
    """Allocate `total` slots proportionally to `weights` with largest-remainder rounding.

    `caps` bounds each group's allocation (defaults to the weights themselves,
    i.e. allocating from counted pools). Ties in fractional part break by key
    order, so the result is deterministic.
    """
    if caps is None:
        caps = weights
    if total > sum(caps.values()):
        raise SamplingError(f"cannot allocate {total} from pool of {sum(caps.values())}")
    if total == 0:
        return {k: 0 for k in weights}
    w = sum(weights.values())
    keys = list(weights)
    exact = {k: total * weights[k] / w for k in keys}
    alloc = {k: min(int(exact[k]), caps[k]) for k in keys}
    remainder = total - sum(alloc.values())
    order = sorted(keys, key=lambda k: (-(exact[k] - alloc[k]), keys.index(k)))
    while remainder > 0:
        progressed = False
        for k in order:
            if remainder == 0:
                break
            if alloc[k] < caps[k]:
                alloc[k] += 1
                remainder -= 1
                progressed = True
        if not progressed:
            raise SamplingError("allocation caps exhausted")  # guarded by the total check
    return alloc


def _group_by(docs: Iterable[LabeledDoc], key) -> dict:
    groups: dict = {}
    for doc in docs:
        groups.setdefault(key(doc), []).append(doc)
    return groups


def stratified_split(pool: Sequence[LabeledDoc], spec: SplitSpec) -> tuple[list[LabeledDoc], list[LabeledDoc]]:
    """Split a labeled pool into disjoint train/dev sets, stratified by label."""
    for doc in pool:
        if not doc.label:
            raise SamplingError(f"unlabeled document: {doc.id}")
    if spec.train_size + spec.dev_size > len(pool):
        raise SamplingError(
            f"train+dev = {spec.train_size + spec.dev_size} exceeds pool of {len(pool)}"
        )
    by_label = _group_by(pool, lambda d: d.label)
    counts = {label: len(docs) for label, docs in by_label.items()}
    train_alloc = largest_remainder(counts, spec.train_size)
    remaining = {label: counts[label] - train_alloc[label] for label in counts}
    dev_alloc = largest_remainder(counts, spec.dev_size, caps=remaining)
    train: list[LabeledDoc] = []
    dev: list[LabeledDoc] = []
    for label, docs in by_label.items():
        shuffled = list(docs)
        _subrng(spec.seed, "split", label).shuffle(shuffled)
        k = train_alloc[label]
        m = dev_alloc[label]
        train.extend(shuffled[:k])
        dev.extend(shuffled[k : k + m])
    return train, dev


def balanced_test_selection(pool: Sequence[LabeledDoc], spec: BalanceSpec) -> list[LabeledDoc]:
    """Pick min(per_cell, available) documents per (label, language) cell."""
    cells = _group_by(pool, lambda d: (d.label, d.lang))
    selected: list[LabeledDoc] = []
    for cell in sorted(cells):
        docs = cells[cell]
        take = min(spec.per_cell, len(docs))
        rng = _subrng(spec.seed, "balance", *cell)
        selected.extend(rng.sample(docs, take))
    return selected


def apply_exclusions(
    gold_docs: Sequence[LabeledDoc], schema: LabelSchema
) -> tuple[list[LabeledDoc], ExclusionReport]:
    """Drop documents whose gold label is one of the discard labels."""
    valid = set(schema.label_ids)
    excluded = {aux: 0 for aux in AUXILIARY_IDS}
    kept: list[LabeledDoc] = []
    for doc in gold_docs:
        if doc.label not in valid:
            raise SamplingError(f"gold label {doc.label!r} on {doc.id} is outside the schema")
        if doc.label in excluded:
            excluded[doc.label] += 1
        else:
            kept.append(doc)
    report = ExclusionReport(
        total_before=len(gold_docs), excluded_by_label=excluded, total_after=len(kept)
    )
    return kept, report


def _stratified_draw(
    docs: Sequence[LabeledDoc], n: int, target_counts: dict[str, int], seed: int, tag: str
) -> list[LabeledDoc]:
    """Draw n docs whose label mix follows target_counts, seeded per label."""
    by_label = _group_by(docs, lambda d: d.label)
    weights = {label: c for label, c in target_counts.items() if c and label in by_label}
    caps = {label: len(by_label[label]) for label in weights}
    alloc = largest_remainder(weights, n, caps=caps)
    out: list[LabeledDoc] = []
    for label, k in alloc.items():
        rng = _subrng(seed, tag, label)
        out.extend(rng.sample(by_label[label], k))
    return out


def size_subset(train: Sequence[LabeledDoc], size: int, seed: int) -> list[LabeledDoc]:
    """One label-stratified, language-balanced subset of the given size."""
    if size > len(train):
        raise SamplingError(f"subset size {size} exceeds train pool of {len(train)}")
    by_lang = _group_by(train, lambda d: d.lang)
    lang_counts = {lang: len(docs) for lang, docs in sorted(by_lang.items())}
    # languages get equal shares (+-1), then each language slice is label-stratified
    per_lang = largest_remainder(
        {lang: 1 for lang in lang_counts}, size, caps=lang_counts
    )
    label_counts: dict[str, int] = {}
    for doc in train:
        label_counts[doc.label] = label_counts.get(doc.label, 0) + 1
    out: list[LabeledDoc] = []
    for lang, k in per_lang.items():
        if k > len(by_lang[lang]):
            raise SamplingError(
                f"language {lang} has {len(by_lang[lang])} docs, need {k} for size {size}"
            )
        out.extend(_stratified_draw(by_lang[lang], k, label_counts, seed, f"size:{size}:{lang}"))
    return out


def size_subsets(train: Sequence[LabeledDoc], sizes: Sequence[int], seed: int) -> list[list[LabeledDoc]]:
    """Independent seeded subsets, one per requested size."""
    return [size_subset(train, size, seed) for size in sizes]


def monolingual_subset(train: Sequence[LabeledDoc], lang: str, n: int = 5000, seed: int = 0) -> list[LabeledDoc]:
    """n documents in one language, label-stratified against the full train mix."""
    in_lang = [d for d in train if d.lang == lang]
    if n > len(in_lang):
        raise SamplingError(f"language {lang} has only {len(in_lang)} documents, need {n}")
    if n == 0:
        return []
    label_counts: dict[str, int] = {}
    for doc in train:
        label_counts[doc.label] = label_counts.get(doc.label, 0) + 1
    return _stratified_draw(in_lang, n, label_counts, seed, f"mono:{lang}")


def write_jsonl(docs: Iterable[LabeledDoc], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc.to_record(), ensure_ascii=False) + "\n")


def read_jsonl(path: str | Path) -> list[LabeledDoc]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                docs.append(LabeledDoc.from_record(json.loads(line)))
    return docs
