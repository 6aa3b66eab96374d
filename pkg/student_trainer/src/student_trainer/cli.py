"""Command-line trainer honoring the file contract.

Invocation: student-trainer TRAIN DEV TEST CONFIG OUTPUT_DIR. Writes
predictions.jsonl ({id, label} per test line) and metadata.json, exits 0 on
success and 1 on any contract or training error. --dry-run validates the job
and prints the resolved configuration without training.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from .job import ContractError, load_job
from .model import build_classifier

TRAINER_ID = "student"


@click.command()
@click.argument("train", type=click.Path(exists=True))
@click.argument("dev", type=click.Path(exists=True))
@click.argument("test", type=click.Path(exists=True))
@click.argument("config", type=click.Path(exists=True))
@click.argument("output_dir", type=click.Path())
@click.option("--dry-run", is_flag=True, help="Validate and print the plan only.")
@click.option("--allow-epoch-override", is_flag=True,
              help="Let config epochs override the size-bucket schedule.")
@click.option("--seed", type=int, default=0)
def main(train, dev, test, config, output_dir, dry_run, allow_epoch_override, seed):
    try:
        job = load_job(train, dev, test, config, output_dir,
                       allow_override=allow_epoch_override)
    except (ContractError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    model_id = job.config.get("model_id", "FacebookAI/xlm-roberta-large")
    lr = job.config.get("learning_rate", 8e-6)
    batch_size = job.config.get("batch_size", 32)
    max_len = job.config.get("max_seq_len", 512)
    plan = {
        "trainer_id": TRAINER_ID,
        "model_id": model_id,
        "train_size": len(job.train),
        "dev_size": len(job.dev),
        "test_size": len(job.test),
        "labels": len(job.labels),
        "epochs_run": job.epochs_run,
        "learning_rate": lr,
        "batch_size": batch_size,
        "max_seq_len": max_len,
        "seed": seed,
    }
    if dry_run:
        click.echo(json.dumps(plan, indent=2))
        return

    start = time.perf_counter()
    try:
        classifier = build_classifier(model_id, job.labels, job.train, max_len)
        classifier.fit(job.train, job.epochs_run, lr, batch_size, seed)
        predicted = classifier.predict(job.test)
    except Exception as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)

    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "predictions.jsonl", "w", encoding="utf-8") as fh:
        for rec, label in zip(job.test, predicted):
            fh.write(json.dumps({"id": rec["id"], "label": label},
                                ensure_ascii=False) + "\n")
    plan["wall_time"] = round(time.perf_counter() - start, 3)
    (outdir / "metadata.json").write_text(json.dumps(plan, indent=2),
                                          encoding="utf-8")
    click.echo(f"wrote {len(predicted)} predictions to {outdir}", err=True)


if __name__ == "__main__":
    main()
