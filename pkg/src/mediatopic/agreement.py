"""Nominal Krippendorff's alpha over a coincidence matrix.

Each unit with m >= 2 judgments contributes every ordered pair of its
judgments with weight 1/(m-1); alpha = 1 - D_o/D_e where D_o is the observed
off-diagonal mass and D_e the chance-expected one. Units with a single
judgment carry no pairing information and are skipped, which handles
annotators who missed a document without dropping anything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .schema import AUXILIARY_IDS

ACCEPTABLE_THRESHOLD = 0.667


class InsufficientDataError(ValueError):
    """No unit carries two or more judgments."""


@dataclass(frozen=True)
class AgreementUnit:
    unit_id: str
    values: tuple[str, ...]


@dataclass
class CoincidenceMatrix:
    labels: list[str]
    o: np.ndarray  # symmetric label x label coincidence weights
    n_c: np.ndarray  # per-label marginals
    n: float  # grand total

    def weight(self, a: str, b: str) -> float:
        return float(self.o[self.labels.index(a), self.labels.index(b)])


@dataclass
class AgreementScore:
    alpha: float
    d_observed: float
    d_expected: float
    n_units: int
    n_values: int
    degenerate: bool = False

    @property
    def acceptable(self) -> bool:
        return self.alpha >= ACCEPTABLE_THRESHOLD

    def to_record(self) -> dict:
        return {
            "alpha": self.alpha,
            "d_observed": self.d_observed,
            "d_expected": self.d_expected,
            "n_units": self.n_units,
            "n_values": self.n_values,
            "degenerate": self.degenerate,
            "acceptable": self.acceptable,
        }


def make_units(values_by_unit: Mapping[str, Sequence[str]]) -> list[AgreementUnit]:
    return [AgreementUnit(uid, tuple(vals)) for uid, vals in values_by_unit.items()]


def coincidence_matrix(units: Iterable[AgreementUnit]) -> CoincidenceMatrix:
    pairable = [u for u in units if len(u.values) >= 2]
    if not pairable:
        raise InsufficientDataError("no unit has two or more judgments")
    labels = sorted({v for u in pairable for v in u.values})
    index = {label: i for i, label in enumerate(labels)}
    o = np.zeros((len(labels), len(labels)))
    for unit in pairable:
        m = len(unit.values)
        w = 1.0 / (m - 1)
        for i, a in enumerate(unit.values):
            for j, b in enumerate(unit.values):
                if i != j:
                    o[index[a], index[b]] += w
    n_c = o.sum(axis=1)
    return CoincidenceMatrix(labels=labels, o=o, n_c=n_c, n=float(n_c.sum()))


def alpha_nominal(units: Sequence[AgreementUnit]) -> AgreementScore:
    """Compute nominal alpha from pairable units."""
    cm = coincidence_matrix(units)
    pairable = [u for u in units if len(u.values) >= 2]
    n_values = sum(len(u.values) for u in pairable)
    off_diagonal = cm.o.sum() - np.trace(cm.o)
    d_o = off_diagonal / cm.n
    d_e = (cm.n_c.sum() ** 2 - (cm.n_c**2).sum()) / (cm.n * (cm.n - 1.0))
    if d_e == 0.0:
        # every judgment identical: agreement is trivially perfect
        return AgreementScore(1.0, float(d_o), 0.0, len(pairable), n_values, degenerate=True)
    alpha = 1.0 - d_o / d_e
    return AgreementScore(float(alpha), float(d_o), float(d_e), len(pairable), n_values)


def _records_to_units(
    records_by_annotator: Mapping[str, Mapping[str, str]],
    exclude_auxiliary: bool = True,
) -> list[AgreementUnit]:
    excluded = set(AUXILIARY_IDS) if exclude_auxiliary else set()
    doc_ids = sorted({d for labels in records_by_annotator.values() for d in labels})
    units = []
    for doc_id in doc_ids:
        values = tuple(
            labels[doc_id]
            for labels in records_by_annotator.values()
            if doc_id in labels and labels[doc_id] not in excluded
        )
        if values:
            units.append(AgreementUnit(doc_id, values))
    return units


def pairwise_alpha(
    labels_a: Mapping[str, str],
    labels_b: Mapping[str, str],
    exclude_auxiliary: bool = True,
) -> AgreementScore:
    """Alpha between two annotators over the documents both labeled."""
    overlap = set(labels_a) & set(labels_b)
    if not overlap:
        raise InsufficientDataError("annotators share no documents")
    units = _records_to_units(
        {"a": {d: labels_a[d] for d in overlap}, "b": {d: labels_b[d] for d in overlap}},
        exclude_auxiliary=exclude_auxiliary,
    )
    return alpha_nominal(units)


def intra_annotator_alpha(
    round1: Mapping[str, str],
    round2: Mapping[str, str],
    exclude_auxiliary: bool = True,
) -> AgreementScore:
    """Self-consistency of one annotator: the two rounds act as two raters."""
    return pairwise_alpha(round1, round2, exclude_auxiliary=exclude_auxiliary)


def label_level_alpha(units: Sequence[AgreementUnit], label: str) -> AgreementScore:
    """One-vs-rest alpha for a single label."""
    binarized = [
        AgreementUnit(u.unit_id, tuple(v if v == label else "__other__" for v in u.values))
        for u in units
    ]
    score = alpha_nominal(binarized)
    if all(label not in u.values for u in units):
        score.degenerate = True
    return score
