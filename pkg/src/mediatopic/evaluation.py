"""Confusion matrices, micro/macro/per-label F1, and multi-run aggregation."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .schema import LabelSchema


class EvaluationError(ValueError):
    pass


@dataclass
class ConfusionMatrix:
    axis: list[str]  # schema-ordered labels; rows = gold, columns = predicted
    counts: np.ndarray
    n: int

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["gold\\pred"] + self.axis)
            for label, row in zip(self.axis, self.counts):
                writer.writerow([label] + [int(c) for c in row])


@dataclass
class EvalScores:
    micro_f1: float
    macro_f1: float
    per_label_f1: dict[str, float]
    support: dict[str, int]

    def to_record(self) -> dict:
        return {
            "micro_f1": self.micro_f1,
            "macro_f1": self.macro_f1,
            "per_label_f1": self.per_label_f1,
            "support": self.support,
        }


@dataclass
class AggregateScore:
    mean: float
    std: float  # population
    k: int

    def __str__(self) -> str:
        return f"{self.mean:.3f} ± {self.std:.3f}"


def confusion(gold: Sequence[str], pred: Sequence[str], schema: LabelSchema) -> ConfusionMatrix:
    if len(gold) != len(pred):
        raise EvaluationError(f"gold has {len(gold)} labels, pred has {len(pred)}")
    if not gold:
        raise EvaluationError("empty inputs")
    axis = list(schema.topic_ids)
    index = {label: i for i, label in enumerate(axis)}
    counts = np.zeros((len(axis), len(axis)), dtype=np.int64)
    for g, p in zip(gold, pred):
        if g not in index:
            raise EvaluationError(f"gold label outside schema: {g!r}")
        if p not in index:
            raise EvaluationError(f"predicted label outside schema: {p!r}")
        counts[index[g], index[p]] += 1
    return ConfusionMatrix(axis=axis, counts=counts, n=len(gold))


def scores(cm: ConfusionMatrix, macro_over_all_labels: bool = False) -> EvalScores:
    """Micro/macro/per-label F1 from a confusion matrix.

    Per-label F1 uses the zero convention (F1 = 0 when precision + recall = 0).
    Macro averages over labels with gold support by default; set
    macro_over_all_labels to average over the whole schema axis instead.
    """
    if cm.n == 0:
        raise EvaluationError("empty confusion matrix")
    tp = np.diag(cm.counts).astype(float)
    gold_totals = cm.counts.sum(axis=1).astype(float)
    pred_totals = cm.counts.sum(axis=0).astype(float)
    denom = gold_totals + pred_totals
    with np.errstate(invalid="ignore", divide="ignore"):
        f1 = np.where(denom > 0, 2.0 * tp / denom, 0.0)
    per_label = {label: float(f1[i]) for i, label in enumerate(cm.axis)}
    support = {label: int(gold_totals[i]) for i, label in enumerate(cm.axis)}
    if macro_over_all_labels:
        macro = float(f1.mean())
    else:
        supported = gold_totals > 0
        macro = float(f1[supported].mean()) if supported.any() else 0.0
    micro = float(tp.sum() / cm.n)
    return EvalScores(micro_f1=micro, macro_f1=macro, per_label_f1=per_label, support=support)


def evaluate(gold: Sequence[str], pred: Sequence[str], schema: LabelSchema) -> EvalScores:
    return scores(confusion(gold, pred, schema))


def aggregate(values: Sequence[float]) -> AggregateScore:
    """Mean and population standard deviation across runs."""
    if not values:
        raise EvaluationError("no runs to aggregate")
    arr = np.asarray(values, dtype=float)
    return AggregateScore(mean=float(arr.mean()), std=float(arr.std()), k=len(values))


def aggregate_runs(runs: Sequence[EvalScores]) -> dict[str, AggregateScore]:
    """Aggregate micro and macro F1 across runs of the same experiment."""
    if not runs:
        raise EvaluationError("no runs to aggregate")
    return {
        "micro_f1": aggregate([r.micro_f1 for r in runs]),
        "macro_f1": aggregate([r.macro_f1 for r in runs]),
    }


def per_language_report(
    gold: Sequence[str],
    pred: Sequence[str],
    langs: Sequence[str],
    schema: LabelSchema,
) -> dict[str, EvalScores]:
    """Scores per language subset plus an 'overall' entry for the union."""
    if not (len(gold) == len(pred) == len(langs)):
        raise EvaluationError("gold, pred, and langs must align")
    report: dict[str, EvalScores] = {}
    for lang in sorted(set(langs)):
        idx = [i for i, l in enumerate(langs) if l == lang]
        report[lang] = evaluate([gold[i] for i in idx], [pred[i] for i in idx], schema)
    report["overall"] = evaluate(list(gold), list(pred), schema)
    return report


def render_table(rows: Mapping[str, Mapping[str, AggregateScore]]) -> str:
    """Plain-text table of aggregated scores, one row per experiment."""
    metrics: list[str] = []
    for cells in rows.values():
        for m in cells:
            if m not in metrics:
                metrics.append(m)
    width = max((len(name) for name in rows), default=4) + 2
    lines = ["".ljust(width) + "".join(m.ljust(18) for m in metrics)]
    for name, cells in rows.items():
        line = name.ljust(width)
        for m in metrics:
            line += (str(cells[m]) if m in cells else "-").ljust(18)
        lines.append(line.rstrip())
    return "\n".join(lines)
