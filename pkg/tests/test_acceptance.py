"""Acceptance suite: one test per headline requirement, strict tolerances.

Run with -v for one pass/fail line per criterion.
"""

import json
import random
import time
from pathlib import Path

import pytest

from conftest import make_synthetic_docs
from test_agreement import brute_force_alpha
from test_teacher import MockTeacherServer

from mediatopic import evaluation, sampler
from mediatopic.agreement import (
    AgreementScore,
    AgreementUnit,
    InsufficientDataError,
    alpha_nominal,
    coincidence_matrix,
)
from mediatopic.corpus import Document
from mediatopic.harness import (
    ConfigurationError,
    EpochSchedule,
    MockTrainer,
    mock_teacher,
    run_crosslingual_matrix,
    run_sweep,
)
from mediatopic.sampler import (
    BalanceSpec,
    LabeledDoc,
    SplitSpec,
    apply_exclusions,
    balanced_test_selection,
    stratified_split,
)
from mediatopic.schema import load_schema
from mediatopic.teacher import (
    AmbiguousResponseError,
    AnnotationCache,
    RetryPolicy,
    TeacherClient,
    TeacherConfig,
    build_prompt,
    parse_label_response,
)

DATA = Path(__file__).parent / "data"
LANGS = ["sl", "hr", "el", "ca"]


def test_alpha_oracle_equivalence_500_random_instances(builtin_schema):
    rng = random.Random(2024)
    start = time.perf_counter()
    checked = 0
    for _ in range(500):
        labels = [f"l{i}" for i in range(rng.randint(2, 5))]
        tuples = [
            tuple(rng.choice(labels) for _ in range(rng.randint(1, 4)))
            for _ in range(rng.randint(1, 12))
        ]
        units = [AgreementUnit(f"u{i}", t) for i, t in enumerate(tuples)]
        try:
            mine = alpha_nominal(units).alpha
        except InsufficientDataError:
            continue
        assert mine == pytest.approx(brute_force_alpha(tuples), abs=1e-9)
        checked += 1
    elapsed = time.perf_counter() - start
    assert checked > 400
    assert elapsed < 5.0


def test_alpha_worked_example():
    tuples = [("a", "a"), ("a", "b"), ("b", "b"), ("b", "b")]
    units = [AgreementUnit(f"u{i}", t) for i, t in enumerate(tuples)]
    cm = coincidence_matrix(units)
    assert cm.weight("a", "a") == 2
    assert cm.weight("a", "b") == 1
    assert cm.weight("b", "a") == 1
    assert cm.weight("b", "b") == 4
    assert alpha_nominal(units).alpha == pytest.approx(8 / 15, abs=1e-9)


def test_alpha_threshold_flagging():
    assert AgreementScore(0.7, 0, 0, 1, 2).acceptable
    assert AgreementScore(0.667, 0, 0, 1, 2).acceptable  # boundary inclusive
    assert not AgreementScore(0.6669999, 0, 0, 1, 2).acceptable
    assert not AgreementScore(0.5, 0, 0, 1, 2).acceptable


def test_micro_f1_equals_accuracy_and_macro_example(builtin_schema):
    rng = random.Random(99)
    labels = list(builtin_schema.topic_ids)
    for _ in range(500):
        n = rng.randint(1, 80)
        gold = [rng.choice(labels) for _ in range(n)]
        pred = [rng.choice(labels) for _ in range(n)]
        result = evaluation.evaluate(gold, pred, builtin_schema)
        accuracy = sum(g == p for g, p in zip(gold, pred)) / n
        assert abs(result.micro_f1 - accuracy) <= 1e-12

    a, b, c = labels[0], labels[1], labels[2]
    result = evaluation.evaluate([a, a, b, c], [a, b, b, b], builtin_schema)
    assert result.micro_f1 == pytest.approx(0.5, abs=1e-12)
    assert result.macro_f1 == pytest.approx(0.3889, abs=5e-5)


def _balanced_pool(schema, cell_sizes):
    docs = []
    for label in schema.topic_ids:
        for lang in LANGS:
            for i in range(cell_sizes.get((label, lang), 18)):
                docs.append(LabeledDoc(f"{label}|{lang}|{i}", lang, "text", label))
    return docs


def test_balancing_arithmetic(builtin_schema):
    full = _balanced_pool(builtin_schema, {})
    selected = balanced_test_selection(full, BalanceSpec(per_cell=18))
    assert len(selected) == 1224

    short_cell = (builtin_schema.topic_ids[0], LANGS[0])
    shorted = _balanced_pool(builtin_schema, {short_cell: 5})
    assert len(balanced_test_selection(shorted, BalanceSpec(per_cell=18))) == 1211

    # 1,199 annotated docs of which 49 + 19 + 2 carry discard labels
    fixture = [LabeledDoc(f"k{i}", "sl", "t", builtin_schema.topic_ids[i % 17])
               for i in range(1129)]
    fixture += [LabeledDoc(f"dk{i}", "sl", "t", "do not know") for i in range(49)]
    fixture += [LabeledDoc(f"nn{i}", "sl", "t", "not news") for i in range(19)]
    fixture += [LabeledDoc(f"mu{i}", "sl", "t", "multiple") for i in range(2)]
    kept, report = apply_exclusions(fixture, builtin_schema)
    assert report.total_before == 1199
    assert len(kept) == report.total_after == 1129
    assert round(report.excluded_percent, 2) == 5.84


def test_stratification_bound_200_random_pools(builtin_schema):
    rng = random.Random(7)
    labels = list(builtin_schema.topic_ids)
    for trial in range(200):
        n_labels = rng.randint(2, 8)
        pool = []
        for i in range(rng.randint(40, 300)):
            pool.append(LabeledDoc(f"d{i}", rng.choice(LANGS), "t",
                                   labels[rng.randrange(n_labels)]))
        train_size = rng.randint(10, len(pool) - 5)
        spec = SplitSpec(train_size=train_size, dev_size=rng.randint(1, 5), seed=trial)
        train, dev = stratified_split(pool, spec)
        assert len(train) == train_size
        assert not {d.id for d in train} & {d.id for d in dev}
        counts = {}
        for doc in pool:
            counts[doc.label] = counts.get(doc.label, 0) + 1
        got = {}
        for doc in train:
            got[doc.label] = got.get(doc.label, 0) + 1
        for label, total in counts.items():
            exact = train_size * total / len(pool)
            assert abs(got.get(label, 0) - exact) <= 1.0 + 1e-9
        train2, dev2 = stratified_split(pool, spec)
        assert [d.id for d in train2] == [d.id for d in train]
        assert [d.id for d in dev2] == [d.id for d in dev]


def _offline_pipeline(schema, seed=0):
    docs = make_synthetic_docs(2000, schema, seed=seed)
    labeled = [LabeledDoc(d.id, d.lang, d.body, mock_teacher(d, schema, seed))
               for d in docs]
    train, dev = stratified_split(labeled, SplitSpec(1600, 100, seed=seed))
    held_out_ids = {d.id for d in train} | {d.id for d in dev}
    remainder = [d for d in labeled if d.id not in held_out_ids]
    test = balanced_test_selection(remainder, BalanceSpec(per_cell=4, seed=seed))
    report = run_sweep(train, dev, test, sizes=[200, 400, 800], trainer=MockTrainer(),
                       schema=schema, iterations=3, seed=seed, epochs_override=1)
    return test, report


def test_end_to_end_offline_pipeline(builtin_schema):
    start = time.perf_counter()
    test, report = _offline_pipeline(builtin_schema)
    assert len(report.cells) == 3
    for cell in report.cells:
        assert cell.iterations_completed == 3
        assert cell.micro.k == 3 and cell.macro.k == 3
        assert "±" in str(cell.micro)
    assert len(report.manifests) == 9
    for manifest in report.manifests:
        assert manifest.subset_spec["size"] in {200, 400, 800}
        assert manifest.seed is not None
        assert set(manifest.scores) == {"micro_f1", "macro_f1"}

    test2, report2 = _offline_pipeline(builtin_schema)
    assert [d.id for d in test2] == [d.id for d in test]
    assert [m.scores for m in report2.manifests] == [m.scores for m in report.manifests]
    for c1, c2 in zip(report.cells, report2.cells):
        assert (c1.micro.mean, c1.micro.std) == (c2.micro.mean, c2.micro.std)
        assert (c1.macro.mean, c1.macro.std) == (c2.macro.mean, c2.macro.std)
    assert time.perf_counter() - start < 60.0


def test_crosslingual_grid(builtin_schema):
    pool = [LabeledDoc(d.id, d.lang, d.body, mock_teacher(d, builtin_schema))
            for d in make_synthetic_docs(800, builtin_schema, seed=4)]
    train, test = pool[:640], pool[640:]
    report = run_crosslingual_matrix(train, test, LANGS, MockTrainer(), builtin_schema,
                                     n=40, iterations=1, epochs_override=1)
    assert len(report.cells) == 25
    assert {c.model for c in report.cells} == set(LANGS) | {"multilingual"}
    assert {c.eval_on for c in report.cells} == set(LANGS) | {"all"}
    for cell in report.cells:
        assert cell.monolingual_diagonal == (cell.model == cell.eval_on)
    assert sum(c.monolingual_diagonal for c in report.cells) == 4


def test_epoch_schedule():
    schedule = EpochSchedule()
    expected = {20000: 3, 15000: 5, 10000: 9, 5000: 10, 2500: 22, 1000: 24}
    for size, epochs in expected.items():
        assert schedule.epochs_for(size) == epochs
    with pytest.raises(ConfigurationError):
        schedule.epochs_for(3000)
    assert schedule.epochs_for(3000, override=4) == 4


def test_prompt_golden_file_and_response_parsing(builtin_schema):
    doc = Document("golden-doc", "sl", "News", "A short fixed body for the golden prompt.")
    prompt = build_prompt(doc, builtin_schema)
    golden = (DATA / "prompt_golden.txt").read_text(encoding="utf-8")
    assert prompt == golden
    for label in builtin_schema.topic_labels:
        assert label.display_name in prompt
        assert label.description in prompt

    assert parse_label_response('{"label": "sport"}', builtin_schema).id == "sport"
    assert parse_label_response("The topic here is Sport.", builtin_schema).id == "sport"
    with pytest.raises(AmbiguousResponseError):
        parse_label_response("could be politics or society", builtin_schema)


def test_teacher_client_idempotence_and_concurrency(builtin_schema, tmp_path,
                                                    monkeypatch):
    monkeypatch.setenv("TEACHER_API_KEY", "test-key")
    server = MockTeacherServer(delay=0.02)
    try:
        config = TeacherConfig(
            base_url=server.base_url, model_name="mock-model",
            max_concurrency=3, iterations=2,
            retry=RetryPolicy(max_attempts=2, backoff_seconds=(0.01,)),
        )
        cache = AnnotationCache(tmp_path / "cache.jsonl")
        client = TeacherClient(config, cache=cache)
        docs = [Document(f"d{i}", "sl", "News", f"body {i}") for i in range(4)]
        first = client.annotate_batch(docs, builtin_schema)
        assert server.requests == 8
        assert server.max_in_flight <= 3
        second = client.annotate_batch(docs, builtin_schema)
        assert server.requests == 8  # warm cache: zero new requests
        assert len(second.annotations) == len(first.annotations) == 8
    finally:
        server.stop()
