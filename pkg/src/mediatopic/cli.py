"""Command-line entry point exposing the pipeline as composable commands.

Commands mirror the pipeline stages: ingest/filter/preprocess the corpus,
teacher-annotate, split and balance, serve the annotation campaign, compute
agreement, evaluate, and run the experiment matrix. Every command accepts a
config file with flag overrides (flags win) and supports --dry-run.

Exit codes: 0 ok, 1 pipeline error, 2 usage error. Logs go to stderr; data
goes to files only.
"""

from __future__ import annotations

import dataclasses
import functools
import importlib.resources
import json
import logging
import sys
from pathlib import Path

import click
import yaml

from . import agreement as agreement_mod
from . import corpus as corpus_mod
from . import evaluation as evaluation_mod
from . import harness as harness_mod
from . import sampler as sampler_mod
from . import schema as schema_mod
from . import teacher as teacher_mod

log = logging.getLogger("mediatopic")


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def pipeline_command(fn):
    """Turn any exception into exit code 1 with a structured message."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except Exception as exc:
            _fail(f"{type(exc).__name__}: {exc}")

    return wrapper


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        return yaml.safe_load(fh) or {}


def _cfg(config: dict, key: str, flag_value, default=None):
    """Flags win over config file values, which win over defaults."""
    if flag_value is not None:
        return flag_value
    return config.get(key, default)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="YAML config file; flags override its values.")
@click.option("--verbose", is_flag=True, help="Debug logging to stderr.")
@click.pass_context
def main(ctx, config_path, verbose):
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = _load_config(config_path)


def _read_labeled(path: str) -> list[sampler_mod.LabeledDoc]:
    return sampler_mod.read_jsonl(path)


def _schema(config: dict):
    return schema_mod.load_schema(config.get("label_file"))


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="JSONL of raw records {id, lang, genre, body}.")
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--langs", default=None, help="Comma-separated language codes.")
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def ingest(config, input_path, output_path, langs, dry_run):
    """Ingest raw documents, rejecting bad records and unknown languages."""
    langs_set = set((_cfg(config, "langs", langs, "sl,hr,el,ca")).split(","))
    if dry_run:
        click.echo(f"would ingest {input_path} -> {output_path} (langs={sorted(langs_set)})")
        return
    with open(input_path, encoding="utf-8") as fh:
        records = (json.loads(line) for line in fh if line.strip())
        store, stats = corpus_mod.ingest(records, langs_set)
    store.write_jsonl(output_path)
    click.echo(json.dumps({
        "accepted": stats.accepted, "rejected": stats.rejected,
        "by_language": stats.by_language, "rejection_reasons": stats.rejection_reasons,
    }), err=True)


@main.command("filter-news")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--news-tag", default=None)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def filter_news(config, input_path, output_path, news_tag, dry_run):
    """Keep only documents whose genre tag marks them as news."""
    tag = _cfg(config, "news_tag", news_tag, corpus_mod.DEFAULT_NEWS_TAG)
    if dry_run:
        click.echo(f"would filter {input_path} to genre={tag!r} -> {output_path}")
        return
    store = corpus_mod.DocumentStore.read_jsonl(input_path)
    kept = corpus_mod.filter_news(store, tag)
    out = corpus_mod.DocumentStore()
    for doc in kept:
        out.add(doc)
    out.write_jsonl(output_path)
    click.echo(f"kept {len(kept)} of {len(store)} documents", err=True)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--word-limit", type=int, default=None)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def preprocess(config, input_path, output_path, word_limit, dry_run):
    """Truncate document bodies to their initial words."""
    limit = _cfg(config, "word_limit", word_limit, corpus_mod.DEFAULT_WORD_LIMIT)
    if dry_run:
        click.echo(f"would truncate {input_path} to {limit} words -> {output_path}")
        return
    store = corpus_mod.DocumentStore.read_jsonl(input_path)
    stats = corpus_mod.CorpusStats()
    out = corpus_mod.DocumentStore()
    for doc in corpus_mod.preprocess(store, limit, stats):
        out.add(doc)
    out.write_jsonl(output_path)
    click.echo(f"truncated {stats.truncated} of {len(store)} documents", err=True)


@main.command("teacher-annotate")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--mock", is_flag=True, help="Use the offline mock teacher.")
@click.option("--base-url", default=None)
@click.option("--model-name", default=None)
@click.option("--api-key-env", default=None)
@click.option("--max-concurrency", type=int, default=None)
@click.option("--iterations", type=int, default=None)
@click.option("--temperature", type=float, default=None)
@click.option("--max-output-tokens", type=int, default=None)
@click.option("--cache", "cache_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def teacher_annotate(config, input_path, output_path, mock, base_url, model_name,
                     api_key_env, max_concurrency, iterations, temperature,
                     max_output_tokens, cache_path, seed, dry_run):
    """Annotate documents with topic labels via the teacher model (or --mock)."""
    schema = _schema(config)
    store = corpus_mod.DocumentStore.read_jsonl(input_path)
    if mock:
        if dry_run:
            click.echo(f"would mock-annotate {len(store)} documents -> {output_path}")
            return
        seed_val = _cfg(config, "seed", seed, 0)
        labeled = [
            sampler_mod.LabeledDoc(
                id=doc.id, lang=doc.lang, text=doc.body,
                label=harness_mod.mock_teacher(doc, schema, seed_val),
            )
            for doc in store
        ]
        sampler_mod.write_jsonl(labeled, output_path)
        click.echo(f"annotated {len(labeled)} documents (mock)", err=True)
        return
    teacher_cfg = teacher_mod.TeacherConfig(
        base_url=_cfg(config, "base_url", base_url) or _fail("base_url required"),
        model_name=_cfg(config, "model_name", model_name, "gpt-4o-2024-05-13"),
        api_key_env=_cfg(config, "api_key_env", api_key_env, "TEACHER_API_KEY"),
        max_concurrency=_cfg(config, "max_concurrency", max_concurrency, 4),
        iterations=_cfg(config, "iterations", iterations, 3),
        temperature=_cfg(config, "temperature", temperature, 0.0),
        max_output_tokens=_cfg(config, "max_output_tokens", max_output_tokens, 32),
    )
    if dry_run:
        click.echo(
            f"would annotate {len(store)} documents x {teacher_cfg.iterations} iterations "
            f"against {teacher_cfg.base_url} -> {output_path}"
        )
        return
    cache = teacher_mod.AnnotationCache(
        _cfg(config, "cache", cache_path, str(Path(output_path).with_suffix(".cache.jsonl")))
    )
    client = teacher_mod.TeacherClient(teacher_cfg, cache=cache)
    result = client.annotate_batch(store.documents(), schema)
    docs_by_id = {doc.id: doc for doc in store}
    with open(output_path, "w", encoding="utf-8") as fh:
        for ann in result.annotations:
            doc = docs_by_id[ann.doc_id]
            fh.write(json.dumps({
                "id": ann.doc_id, "lang": doc.lang, "text": doc.body,
                "label": ann.label, "iteration": ann.iteration,
            }, ensure_ascii=False) + "\n")
    click.echo(json.dumps({
        "annotations": len(result.annotations),
        "failures": [dataclasses.asdict(f) for f in result.failures],
        "ledger": dataclasses.asdict(result.ledger),
        "prompt_hash": result.prompt_hash,
    }), err=True)


def _write_manifest(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False), encoding="utf-8")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--train", "train_size", type=int, default=None)
@click.option("--dev", "dev_size", type=int, default=None)
@click.option("--stratify", default="label")
@click.option("--seed", type=int, default=None)
@click.option("--output-dir", type=click.Path(), default=".")
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def split(config, input_path, train_size, dev_size, stratify, seed, output_dir, dry_run):
    """Stratified train/dev split of a labeled pool."""
    spec = sampler_mod.SplitSpec(
        train_size=_cfg(config, "train_size", train_size, 20000),
        dev_size=_cfg(config, "dev_size", dev_size, 1000),
        seed=_cfg(config, "seed", seed, 0),
        stratify_key=stratify,
    )
    if dry_run:
        click.echo(f"would split {input_path} into {spec.train_size}/{spec.dev_size} (seed {spec.seed})")
        return
    pool = _read_labeled(input_path)
    train, dev = sampler_mod.stratified_split(pool, spec)
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    sampler_mod.write_jsonl(train, outdir / "train.jsonl")
    sampler_mod.write_jsonl(dev, outdir / "dev.jsonl")
    per_label = {}
    for doc in train:
        per_label[doc.label] = per_label.get(doc.label, 0) + 1
    _write_manifest(outdir / "split_manifest.json", {
        "seed": spec.seed, "train_size": spec.train_size, "dev_size": spec.dev_size,
        "train_per_label": per_label,
    })
    click.echo(f"wrote {len(train)} train / {len(dev)} dev", err=True)


@main.command("balance-test")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--per-cell", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def balance_test(config, input_path, output_path, per_cell, seed, dry_run):
    """Select a label-by-language balanced test sample."""
    spec = sampler_mod.BalanceSpec(
        per_cell=_cfg(config, "per_cell", per_cell, 18),
        seed=_cfg(config, "seed", seed, 0),
    )
    if dry_run:
        click.echo(f"would balance {input_path} at {spec.per_cell} per cell -> {output_path}")
        return
    pool = _read_labeled(input_path)
    selected = sampler_mod.balanced_test_selection(pool, spec)
    sampler_mod.write_jsonl(selected, output_path)
    cells: dict[str, int] = {}
    for doc in selected:
        key = f"{doc.label}|{doc.lang}"
        cells[key] = cells.get(key, 0) + 1
    _write_manifest(Path(output_path).with_suffix(".manifest.json"), {
        "seed": spec.seed, "per_cell": spec.per_cell, "selected": len(selected),
        "per_cell_counts": cells,
    })
    click.echo(f"selected {len(selected)} of {len(pool)}", err=True)


@main.command("size-subsets")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--sizes", required=True, help="Comma-separated subset sizes.")
@click.option("--seed", type=int, default=None)
@click.option("--output-dir", type=click.Path(), default=".")
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def size_subsets_cmd(config, input_path, sizes, seed, output_dir, dry_run):
    """Label-stratified, language-balanced subsets of the given sizes."""
    size_list = [int(s) for s in sizes.split(",")]
    seed_val = _cfg(config, "seed", seed, 0)
    if dry_run:
        click.echo(f"would draw subsets {size_list} from {input_path} (seed {seed_val})")
        return
    train = _read_labeled(input_path)
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for size, subset in zip(size_list, sampler_mod.size_subsets(train, size_list, seed_val)):
        sampler_mod.write_jsonl(subset, outdir / f"subset_{size}.jsonl")
    click.echo(f"wrote {len(size_list)} subsets to {outdir}", err=True)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="Gold-labeled JSONL (topic or discard labels).")
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def exclusions(config, input_path, output_path, dry_run):
    """Drop discard-labeled documents and report exclusion counts."""
    if dry_run:
        click.echo(f"would apply exclusions to {input_path} -> {output_path}")
        return
    schema = _schema(config)
    docs = _read_labeled(input_path)
    kept, report = sampler_mod.apply_exclusions(docs, schema)
    sampler_mod.write_jsonl(kept, output_path)
    click.echo(json.dumps({
        "total_before": report.total_before,
        "excluded_by_label": report.excluded_by_label,
        "total_after": report.total_after,
        "excluded_percent": round(report.excluded_percent, 2),
    }), err=True)


@main.command()
@click.option("--documents", "docs_path", required=True, type=click.Path(exists=True))
@click.option("--annotators", required=True, help="Comma-separated annotator ids.")
@click.option("--journal", type=click.Path(), default=None)
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8400)
@click.option("--secret", default=None, help="Shared annotation token; omit to disable auth.")
@click.option("--static-dir", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def serve(config, docs_path, annotators, journal, host, port, secret, static_dir, seed, dry_run):
    """Run the annotation campaign HTTP service."""
    from . import service as service_mod

    store = corpus_mod.DocumentStore.read_jsonl(docs_path)
    campaign_cfg = service_mod.CampaignConfig(
        documents=store.documents(),
        annotators=annotators.split(","),
        seed=_cfg(config, "seed", seed, 0),
    )
    if dry_run:
        click.echo(
            f"would serve {len(store)} documents to {annotators} on {host}:{port}"
        )
        return
    schema = _schema(config)
    campaign = service_mod.Campaign(campaign_cfg, schema, journal_path=journal)
    app = service_mod.create_app(campaign, shared_secret=secret, static_dir=static_dir)
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("agreement")
@click.option("--records", "records_path", required=True, type=click.Path(exists=True),
              help="Exported annotation records JSONL.")
@click.option("--output", "output_path", type=click.Path(), default=None)
@click.option("--include-auxiliary", is_flag=True)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def agreement_cmd(config, records_path, output_path, include_auxiliary, dry_run):
    """Pairwise and intra-annotator agreement from exported records."""
    if dry_run:
        click.echo(f"would compute agreement over {records_path}")
        return
    by_annotator_round: dict[tuple[str, int], dict[str, str]] = {}
    with open(records_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                key = (rec["annotator_id"], rec.get("round", 1))
                by_annotator_round.setdefault(key, {})[rec["doc_id"]] = rec["label"]
    exclude = not include_auxiliary
    results = []
    keys = sorted(by_annotator_round)
    round1 = [k for k in keys if k[1] == 1]
    for i, a in enumerate(round1):
        for b in round1[i + 1:]:
            try:
                score = agreement_mod.pairwise_alpha(
                    by_annotator_round[a], by_annotator_round[b], exclude_auxiliary=exclude
                )
            except agreement_mod.InsufficientDataError:
                continue
            results.append({"pair": [a[0], b[0]], **score.to_record()})
    for annotator, rnd in keys:
        if rnd == 2 and (annotator, 1) in by_annotator_round:
            try:
                score = agreement_mod.intra_annotator_alpha(
                    by_annotator_round[(annotator, 1)],
                    by_annotator_round[(annotator, 2)],
                    exclude_auxiliary=exclude,
                )
            except agreement_mod.InsufficientDataError:
                continue
            results.append({"intra": annotator, **score.to_record()})
    payload = json.dumps(results, indent=2)
    if output_path:
        Path(output_path).write_text(payload, encoding="utf-8")
    click.echo(payload)


@main.command()
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True))
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True),
              help="Predictions JSONL {id, label}.")
@click.option("--output", "output_path", type=click.Path(), default=None)
@click.option("--confusion-csv", type=click.Path(), default=None)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def evaluate(config, gold_path, pred_path, output_path, confusion_csv, dry_run):
    """Score predictions against gold labels, per language and overall."""
    if dry_run:
        click.echo(f"would evaluate {pred_path} against {gold_path}")
        return
    schema = _schema(config)
    gold_docs = _read_labeled(gold_path)
    pred_by_id = {}
    with open(pred_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                pred_by_id[rec["id"]] = rec["label"]
    missing = [d.id for d in gold_docs if d.id not in pred_by_id]
    if missing:
        _fail(f"{len(missing)} gold documents lack predictions, e.g. {missing[:5]}")
    gold = [d.label for d in gold_docs]
    pred = [pred_by_id[d.id] for d in gold_docs]
    langs = [d.lang for d in gold_docs]
    report = evaluation_mod.per_language_report(gold, pred, langs, schema)
    payload = json.dumps({k: v.to_record() for k, v in report.items()}, indent=2)
    if confusion_csv:
        evaluation_mod.confusion(gold, pred, schema).write_csv(confusion_csv)
    if output_path:
        Path(output_path).write_text(payload, encoding="utf-8")
    click.echo(payload)


@main.command()
@click.option("--train", "train_path", required=True, type=click.Path(exists=True))
@click.option("--dev", "dev_path", type=click.Path(exists=True), default=None)
@click.option("--test", "test_path", required=True, type=click.Path(exists=True))
@click.option("--sizes", required=True)
@click.option("--iterations", type=int, default=None)
@click.option("--trainer", "trainer_kind", default="mock",
              help="'mock' or a shell command implementing the trainer contract.")
@click.option("--seed", type=int, default=None)
@click.option("--epochs-override", type=int, default=None)
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
@click.option("--output", "output_path", type=click.Path(), default=None)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def sweep(config, train_path, dev_path, test_path, sizes, iterations, trainer_kind,
          seed, epochs_override, manifest_path, output_path, dry_run):
    """Data-size sweep over the trainer, reporting mean ± std per size."""
    size_list = [int(s) for s in sizes.split(",")]
    iters = _cfg(config, "iterations", iterations, 5)
    seed_val = _cfg(config, "seed", seed, 0)
    if dry_run:
        click.echo(
            f"would sweep sizes {size_list} x {iters} iterations with trainer "
            f"{trainer_kind!r} (seed {seed_val})"
        )
        return
    schema = _schema(config)
    train = _read_labeled(train_path)
    dev = _read_labeled(dev_path) if dev_path else []
    test = _read_labeled(test_path)
    trainer = _make_trainer(trainer_kind, schema)
    store = harness_mod.ManifestStore(manifest_path)
    report = harness_mod.run_sweep(
        train, dev, test, size_list, trainer, schema,
        iterations=iters, seed=seed_val,
        epochs_override=epochs_override if epochs_override is not None
        else (None if set(size_list) <= set(harness_mod.DEFAULT_EPOCH_SCHEDULE) else 1),
        manifest_store=store,
        teacher_reference=load_teacher_reference(),
    )
    rows = {
        str(cell.size): {"micro_f1": cell.micro, "macro_f1": cell.macro}
        for cell in report.cells if cell.micro is not None
    }
    table = evaluation_mod.render_table(rows)
    if output_path:
        Path(output_path).write_text(table + "\n", encoding="utf-8")
    click.echo(table)


def _make_trainer(kind: str, schema):
    if kind == "mock":
        return harness_mod.MockTrainer()
    return harness_mod.SubprocessTrainer(kind.split(), trainer_id=kind,
                                         labels=list(schema.topic_ids))


def load_teacher_reference() -> dict:
    return json.loads(
        importlib.resources.files("mediatopic")
        .joinpath("assets", "teacher_reference.json")
        .read_text(encoding="utf-8")
    )


@main.command()
@click.option("--train", "train_path", required=True, type=click.Path(exists=True))
@click.option("--test", "test_path", required=True, type=click.Path(exists=True))
@click.option("--langs", required=True, help="Comma-separated language codes.")
@click.option("--n", type=int, default=None)
@click.option("--iterations", type=int, default=None)
@click.option("--trainer", "trainer_kind", default="mock")
@click.option("--seed", type=int, default=None)
@click.option("--epochs-override", type=int, default=None)
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def crossling(config, train_path, test_path, langs, n, iterations, trainer_kind,
              seed, epochs_override, manifest_path, dry_run):
    """Mono/multi/cross-lingual grid: one model per language plus multilingual."""
    lang_list = langs.split(",")
    n_val = _cfg(config, "n", n, 5000)
    iters = _cfg(config, "iterations", iterations, 3)
    seed_val = _cfg(config, "seed", seed, 0)
    if dry_run:
        click.echo(
            f"would run the cross-lingual grid over {lang_list} with n={n_val}, "
            f"{iters} iterations, trainer {trainer_kind!r}"
        )
        return
    schema = _schema(config)
    train = _read_labeled(train_path)
    test = _read_labeled(test_path)
    trainer = _make_trainer(trainer_kind, schema)
    store = harness_mod.ManifestStore(manifest_path)
    report = harness_mod.run_crosslingual_matrix(
        train, test, lang_list, trainer, schema, n=n_val, iterations=iters,
        seed=seed_val,
        epochs_override=epochs_override if epochs_override is not None
        else (None if n_val in harness_mod.DEFAULT_EPOCH_SCHEDULE else 1),
        manifest_store=store,
    )
    rows: dict[str, dict] = {}
    for cell in report.cells:
        name = cell.model + (" *" if cell.monolingual_diagonal else "")
        rows.setdefault(name, {})[cell.eval_on] = cell.macro
    click.echo(evaluation_mod.render_table(rows))
    click.echo("* monolingual diagonal (trained and evaluated on the same language)", err=True)


@main.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--dry-run", is_flag=True)
@click.pass_obj
@pipeline_command
def report(config, manifest_path, dry_run):
    """Render aggregated score tables from a manifest store."""
    if dry_run:
        click.echo(f"would render a report from {manifest_path}")
        return
    groups: dict[str, list[dict]] = {}
    with open(manifest_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                key = f"{rec['experiment']}:{json.dumps(rec['subset_spec'], sort_keys=True)}"
                groups.setdefault(key, []).append(rec)
    rows = {}
    for key, manifests in sorted(groups.items()):
        metrics: dict[str, list[float]] = {}
        for rec in manifests:
            flat = rec["scores"]
            if flat and isinstance(next(iter(flat.values())), dict):
                flat = {f"{k}.{m}": v for k, inner in flat.items() for m, v in inner.items()}
            for metric, value in flat.items():
                metrics.setdefault(metric, []).append(value)
        rows[key] = {m: evaluation_mod.aggregate(vals) for m, vals in metrics.items()}
    click.echo(evaluation_mod.render_table(rows))


if __name__ == "__main__":
    main()
