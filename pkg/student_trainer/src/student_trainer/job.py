"""Job validation for the trainer file contract.

Inputs are three JSONL files (train/dev/test with {id, lang, text, label};
the label is optional on test) plus a JSON config carrying the hyperparameters
and the label list. Everything is checked up front so a bad job fails before
any training starts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

# epochs per train-set size bucket; exact-match lookup, no interpolation
EPOCH_SCHEDULE = {20000: 3, 15000: 5, 10000: 9, 5000: 10, 2500: 22, 1000: 24}


class ContractError(Exception):
    """The job violates the trainer file contract."""


@dataclass
class TrainerJob:
    train_path: Path
    dev_path: Path
    test_path: Path
    config: dict
    output_dir: Path
    labels: list[str] = field(default_factory=list)
    train: list[dict] = field(default_factory=list)
    dev: list[dict] = field(default_factory=list)
    test: list[dict] = field(default_factory=list)
    epochs_run: int = 0


def _read_jsonl(path: Path, labels: set[str], require_label: bool) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            for key in ("id", "lang", "text"):
                if key not in rec:
                    raise ContractError(f"{path}:{lineno}: missing field {key!r}")
            if require_label and "label" not in rec:
                raise ContractError(f"{path}:{lineno}: missing field 'label'")
            if "label" in rec and rec["label"] not in labels:
                raise ContractError(
                    f"{path}:{lineno}: label {rec['label']!r} not in the configured label set"
                )
            records.append(rec)
    return records


def resolve_epochs(train_size: int, config: dict, allow_override: bool) -> int:
    configured = config.get("epochs")
    scheduled = EPOCH_SCHEDULE.get(train_size)
    if scheduled is not None:
        if configured is not None and configured != scheduled and not allow_override:
            raise ContractError(
                f"config requests {configured} epochs but the schedule fixes "
                f"{scheduled} for train size {train_size}; pass --allow-epoch-override"
            )
        return configured if (configured is not None and allow_override) else scheduled
    if configured is None:
        raise ContractError(
            f"train size {train_size} has no schedule bucket and the config sets no epochs"
        )
    return configured


def load_job(train: str, dev: str, test: str, config_path: str, output_dir: str,
             allow_override: bool = False) -> TrainerJob:
    with open(config_path, encoding="utf-8") as fh:
        config = json.load(fh)
    labels = config.get("labels")
    if not labels:
        raise ContractError("config must carry a non-empty 'labels' list")
    if len(set(labels)) != len(labels):
        raise ContractError("duplicate entries in 'labels'")
    label_set = set(labels)
    job = TrainerJob(
        train_path=Path(train), dev_path=Path(dev), test_path=Path(test),
        config=config, output_dir=Path(output_dir), labels=list(labels),
    )
    job.train = _read_jsonl(job.train_path, label_set, require_label=True)
    job.dev = _read_jsonl(job.dev_path, label_set, require_label=True)
    job.test = _read_jsonl(job.test_path, label_set, require_label=False)
    if not job.train:
        raise ContractError("empty train file")
    job.epochs_run = resolve_epochs(len(job.train), config, allow_override)
    return job
