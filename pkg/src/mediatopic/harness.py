"""Experiment orchestration: the data-size sweep and the mono/multi/cross-lingual
grid, run over any trainer honoring the file contract, with a full manifest
per run so every reported number is replayable.

Ships a deterministic mock teacher (keyword tables + seeded-hash fallback)
and a mock trainer (token-overlap nearest centroid) so the whole pipeline
runs offline at desk scale.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import subprocess
import tempfile
import time
import uuid
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol, Sequence

from . import evaluation
from .evaluation import AggregateScore, EvalScores
from .sampler import LabeledDoc, monolingual_subset, size_subset
from .schema import LabelSchema


class ConfigurationError(ValueError):
    pass


DEFAULT_EPOCH_SCHEDULE = {20000: 3, 15000: 5, 10000: 9, 5000: 10, 2500: 22, 1000: 24}


@dataclass(frozen=True)
class TrainerConfig:
    learning_rate: float = 8e-6
    batch_size: int = 32
    max_seq_len: int = 512
    epochs: int | None = None
    model_id: str = "FacebookAI/xlm-roberta-large"

    def to_record(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class EpochSchedule:
    by_size: dict[int, int] = field(default_factory=lambda: dict(DEFAULT_EPOCH_SCHEDULE))

    def epochs_for(self, train_size: int, override: int | None = None) -> int:
        """Exact-match lookup; unknown sizes need an explicit override."""
        if override is not None:
            return override
        if train_size not in self.by_size:
            raise ConfigurationError(
                f"no epoch schedule entry for train size {train_size}; "
                f"known sizes: {sorted(self.by_size)}; pass an explicit override"
            )
        return self.by_size[train_size]


@dataclass
class RunManifest:
    run_id: str
    experiment: str  # sweep | mono | multi | cross
    subset_spec: dict
    seed: int
    trainer_config: dict
    trainer_id: str
    iteration: int
    scores: dict
    started_at: float
    finished_at: float
    prompt_hash: str | None = None

    def to_record(self) -> dict:
        return dataclasses.asdict(self)


class ManifestStore:
    """Append-only JSONL store of run manifests."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self.manifests: list[RunManifest] = []

    def add(self, manifest: RunManifest) -> None:
        self.manifests.append(manifest)
        if self.path:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(manifest.to_record(), ensure_ascii=False) + "\n")


# --- offline stand-ins -----------------------------------------------------


def keyword_for_label(label_id: str) -> str:
    """Marker token a synthetic corpus embeds to force the mock teacher's hand."""
    return "kw_" + label_id.replace(",", "").replace(" ", "_")


def mock_teacher(doc, schema: LabelSchema, seed: int = 0) -> str:
    """Deterministic stand-in for the annotating model.

    Documents embedding a label's marker keyword get that label; everything
    else falls back to a seeded-hash label so histograms are reproducible.
    """
    body = doc.body if hasattr(doc, "body") else doc.text
    tokens = set(body.split())
    for label in schema.topic_labels:
        if keyword_for_label(label.id) in tokens:
            return label.id
    digest = hashlib.sha256(f"{seed}:{doc.id}".encode("utf-8")).digest()
    idx = int.from_bytes(digest[:4], "big") % len(schema.topic_labels)
    return schema.topic_labels[idx].id


class Trainer(Protocol):
    trainer_id: str

    def run(self, train: Sequence[LabeledDoc], dev: Sequence[LabeledDoc],
            test: Sequence[LabeledDoc], config: TrainerConfig) -> list[tuple[str, str]]:
        """Train and predict; returns (doc_id, label) per test doc."""


class MockTrainer:
    """Token-overlap nearest-centroid classifier used as the offline student.

    Centroids are per-label token frequency vectors from the train set;
    prediction picks the label with the highest cosine similarity, tie-broken
    by schema/centroid insertion order. Deterministic by construction.
    """

    trainer_id = "mock"

    def run(self, train, dev, test, config: TrainerConfig) -> list[tuple[str, str]]:
        if not train:
            raise ValueError("mock trainer needs a non-empty train set")
        centroids: dict[str, Counter] = {}
        for doc in train:
            centroids.setdefault(doc.label, Counter()).update(doc.text.split())
        norms = {label: math.sqrt(sum(v * v for v in c.values())) for label, c in centroids.items()}
        out = []
        for doc in test:
            tokens = Counter(doc.text.split())
            doc_norm = math.sqrt(sum(v * v for v in tokens.values())) or 1.0
            best_label, best_score = None, -1.0
            for label, centroid in centroids.items():
                dot = sum(count * centroid.get(tok, 0) for tok, count in tokens.items())
                score = dot / (doc_norm * (norms[label] or 1.0))
                if score > best_score:
                    best_label, best_score = label, score
            out.append((doc.id, best_label))
        return out


class SubprocessTrainer:
    """Adapter for external trainers honoring the file contract.

    Writes train/dev/test JSONL and a config file, invokes the command with
    the five paths as arguments, and reads predictions.jsonl back. Exit code
    0 means success.
    """

    def __init__(self, command: Sequence[str], trainer_id: str = "external",
                 labels: Sequence[str] | None = None):
        self.command = list(command)
        self.trainer_id = trainer_id
        self.labels = list(labels) if labels else None

    def run(self, train, dev, test, config: TrainerConfig) -> list[tuple[str, str]]:
        with tempfile.TemporaryDirectory(prefix="trainer-") as tmp:
            tmpdir = Path(tmp)
            paths = {}
            for name, docs in (("train", train), ("dev", dev), ("test", test)):
                path = tmpdir / f"{name}.jsonl"
                with open(path, "w", encoding="utf-8") as fh:
                    for doc in docs:
                        rec = doc.to_record()
                        if name == "test":
                            rec.pop("label", None)
                        fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
                paths[name] = path
            config_path = tmpdir / "config.json"
            config_rec = config.to_record()
            if self.labels:
                config_rec["labels"] = self.labels
            config_path.write_text(json.dumps(config_rec), encoding="utf-8")
            outdir = tmpdir / "out"
            outdir.mkdir()
            argv = self.command + [
                str(paths["train"]), str(paths["dev"]), str(paths["test"]),
                str(config_path), str(outdir),
            ]
            proc = subprocess.run(argv, capture_output=True, text=True)
            if proc.returncode != 0:
                raise RuntimeError(
                    f"trainer exited {proc.returncode}: {proc.stderr[-500:]}"
                )
            predictions = []
            with open(outdir / "predictions.jsonl", encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        predictions.append((rec["id"], rec["label"]))
            return predictions


# --- experiment matrix -----------------------------------------------------


@dataclass
class SweepCell:
    size: int
    micro: AggregateScore | None
    macro: AggregateScore | None
    iterations_completed: int
    incomplete: bool


@dataclass
class SweepReport:
    cells: list[SweepCell]
    teacher_reference: dict | None
    manifests: list[RunManifest]


def _derive_seed(base: int, *parts: object) -> int:
    key = f"{base}|" + "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


def _evaluate_predictions(
    predictions: list[tuple[str, str]], test: Sequence[LabeledDoc], schema: LabelSchema
) -> EvalScores:
    gold_by_id = {d.id: d.label for d in test}
    gold = [gold_by_id[doc_id] for doc_id, _ in predictions]
    pred = [label for _, label in predictions]
    return evaluation.evaluate(gold, pred, schema)


def run_sweep(
    train: Sequence[LabeledDoc],
    dev: Sequence[LabeledDoc],
    test: Sequence[LabeledDoc],
    sizes: Sequence[int],
    trainer: Trainer,
    schema: LabelSchema,
    iterations: int = 5,
    seed: int = 0,
    epoch_schedule: EpochSchedule | None = None,
    epochs_override: int | None = None,
    trainer_config: TrainerConfig = TrainerConfig(),
    manifest_store: ManifestStore | None = None,
    teacher_reference: dict | None = None,
) -> SweepReport:
    """Data-size sweep: fresh seeded subsets per (size, iteration)."""
    schedule = epoch_schedule or EpochSchedule()
    store = manifest_store or ManifestStore()
    cells = []
    for size in sizes:
        epochs = schedule.epochs_for(size, override=epochs_override)
        config = dataclasses.replace(trainer_config, epochs=epochs)
        runs: list[EvalScores] = []
        for it in range(1, iterations + 1):
            run_seed = _derive_seed(seed, "sweep", size, it)
            started = time.time()
            try:
                subset = size_subset(train, size, run_seed)
                predictions = trainer.run(subset, dev, test, config)
                result = _evaluate_predictions(predictions, test, schema)
            except Exception:
                continue
            runs.append(result)
            store.add(RunManifest(
                run_id=uuid.uuid4().hex,
                experiment="sweep",
                subset_spec={"size": size, "source": "train"},
                seed=run_seed,
                trainer_config=config.to_record(),
                trainer_id=trainer.trainer_id,
                iteration=it,
                scores={"micro_f1": result.micro_f1, "macro_f1": result.macro_f1},
                started_at=started,
                finished_at=time.time(),
            ))
        cells.append(SweepCell(
            size=size,
            micro=evaluation.aggregate([r.micro_f1 for r in runs]) if runs else None,
            macro=evaluation.aggregate([r.macro_f1 for r in runs]) if runs else None,
            iterations_completed=len(runs),
            incomplete=len(runs) < iterations,
        ))
    return SweepReport(cells=cells, teacher_reference=teacher_reference, manifests=store.manifests)


@dataclass
class MatrixCell:
    model: str  # language id or "multilingual"
    eval_on: str  # language id or "all"
    macro: AggregateScore
    micro: AggregateScore
    monolingual_diagonal: bool


@dataclass
class MatrixReport:
    cells: list[MatrixCell]
    manifests: list[RunManifest]

    def cell(self, model: str, eval_on: str) -> MatrixCell:
        for c in self.cells:
            if c.model == model and c.eval_on == eval_on:
                return c
        raise KeyError((model, eval_on))


def run_crosslingual_matrix(
    train: Sequence[LabeledDoc],
    test: Sequence[LabeledDoc],
    langs: Sequence[str],
    trainer: Trainer,
    schema: LabelSchema,
    n: int = 5000,
    iterations: int = 3,
    seed: int = 0,
    trainer_config: TrainerConfig = TrainerConfig(),
    epochs_override: int | None = None,
    epoch_schedule: EpochSchedule | None = None,
    manifest_store: ManifestStore | None = None,
) -> MatrixReport:
    """Monolingual models per language plus one multilingual model, each
    evaluated on every per-language test subset and the full test set."""
    schedule = epoch_schedule or EpochSchedule()
    store = manifest_store or ManifestStore()
    epochs = schedule.epochs_for(n, override=epochs_override)
    config = dataclasses.replace(trainer_config, epochs=epochs)
    test_subsets: dict[str, list[LabeledDoc]] = {
        lang: [d for d in test if d.lang == lang] for lang in langs
    }
    test_subsets["all"] = list(test)
    model_specs: list[tuple[str, Callable[[int], list[LabeledDoc]]]] = [
        (lang, (lambda l: lambda s: monolingual_subset(train, l, n=n, seed=s))(lang))
        for lang in langs
    ]
    model_specs.append(("multilingual", lambda s: size_subset(train, n, s)))
    collected: dict[tuple[str, str], list[EvalScores]] = {}
    for model_name, make_subset in model_specs:
        for it in range(1, iterations + 1):
            run_seed = _derive_seed(seed, "matrix", model_name, it)
            subset = make_subset(run_seed)
            started = time.time()
            scores_row = {}
            for eval_name, subset_test in test_subsets.items():
                predictions = trainer.run(subset, [], subset_test, config)
                result = _evaluate_predictions(predictions, subset_test, schema)
                collected.setdefault((model_name, eval_name), []).append(result)
                scores_row[eval_name] = {
                    "micro_f1": result.micro_f1, "macro_f1": result.macro_f1
                }
            store.add(RunManifest(
                run_id=uuid.uuid4().hex,
                experiment="mono" if model_name != "multilingual" else "multi",
                subset_spec={"model": model_name, "n": n},
                seed=run_seed,
                trainer_config=config.to_record(),
                trainer_id=trainer.trainer_id,
                iteration=it,
                scores=scores_row,
                started_at=started,
                finished_at=time.time(),
            ))
    cells = []
    for (model_name, eval_name), runs in collected.items():
        cells.append(MatrixCell(
            model=model_name,
            eval_on=eval_name,
            macro=evaluation.aggregate([r.macro_f1 for r in runs]),
            micro=evaluation.aggregate([r.micro_f1 for r in runs]),
            monolingual_diagonal=(model_name == eval_name),
        ))
    return MatrixReport(cells=cells, manifests=store.manifests)
