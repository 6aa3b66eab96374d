import datetime
import json

import pytest

from mediatopic.schema import (
    AUXILIARY_IDS,
    DuplicateLabelError,
    LabelSchema,
    SchemaError,
    TopicLabel,
    UnknownLabelError,
    canonicalize_label,
    load_schema,
    render_guidelines,
)


def test_builtin_schema_shape(builtin_schema):
    assert len(builtin_schema.topic_labels) == 17
    assert len(builtin_schema.auxiliary_labels) == 3
    assert {l.id for l in builtin_schema.auxiliary_labels} == set(AUXILIARY_IDS)
    assert builtin_schema.version_date == datetime.date(2023, 10, 24)
    for label in builtin_schema.topic_labels:
        assert label.description.strip()


def test_builtin_schema_contains_known_labels(builtin_schema):
    ids = builtin_schema.topic_ids
    assert "sport" in ids
    assert "economy, business and finance" in ids
    assert "arts, culture, entertainment and media" in ids


def test_ids_unique(builtin_schema):
    ids = builtin_schema.label_ids
    assert len(ids) == len(set(ids))


def test_load_schema_idempotent(tmp_path, builtin_schema):
    path = tmp_path / "labels.jsonl"
    path.write_text("\n".join(
        json.dumps({"id": l.id, "display_name": l.display_name,
                    "description": l.description, "kind": l.kind})
        for l in builtin_schema.labels
    ), encoding="utf-8")
    assert load_schema(path) == load_schema(path)
    assert load_schema(path).label_ids == builtin_schema.label_ids


def test_missing_auxiliary_rejected(tmp_path, builtin_schema):
    path = tmp_path / "labels.jsonl"
    path.write_text("\n".join(
        json.dumps({"id": l.id, "display_name": l.display_name,
                    "description": l.description, "kind": l.kind})
        for l in builtin_schema.topic_labels
    ), encoding="utf-8")
    with pytest.raises(SchemaError, match="auxiliary"):
        load_schema(path)


def test_duplicate_label_rejected(tmp_path, builtin_schema):
    lines = [
        json.dumps({"id": l.id, "display_name": l.display_name,
                    "description": l.description, "kind": l.kind})
        for l in builtin_schema.labels
    ]
    lines[1] = lines[list(builtin_schema.topic_ids).index("sport")]
    path = tmp_path / "labels.jsonl"
    path.write_text("\n".join(lines), encoding="utf-8")
    with pytest.raises(DuplicateLabelError):
        load_schema(path)


def test_malformed_line_names_entry(tmp_path):
    path = tmp_path / "labels.jsonl"
    path.write_text('{"id": "x"}\n', encoding="utf-8")
    with pytest.raises(SchemaError, match="line 1"):
        load_schema(path)


def test_canonicalize_case_fold(builtin_schema):
    assert canonicalize_label("Sport", builtin_schema).id == "sport"
    assert canonicalize_label("  SPORT \n", builtin_schema).id == "sport"


def test_canonicalize_full_name(builtin_schema):
    label = canonicalize_label("economy, business and finance", builtin_schema)
    assert label.id == "economy, business and finance"


def test_canonicalize_unknown(builtin_schema):
    with pytest.raises(UnknownLabelError):
        canonicalize_label("finance news", builtin_schema)


def test_canonicalize_round_trips_all_labels(builtin_schema):
    for label in builtin_schema.labels:
        assert canonicalize_label(label.display_name, builtin_schema) == label
        assert canonicalize_label(label.display_name.upper(), builtin_schema) == label


def test_guidelines_contain_all_labels(builtin_schema):
    text = render_guidelines(builtin_schema)
    for label in builtin_schema.labels:
        assert label.display_name in text


def test_guidelines_deterministic(builtin_schema):
    assert render_guidelines(builtin_schema) == render_guidelines(builtin_schema)


def test_guidelines_small_fixture_schema():
    labels = [TopicLabel("sport", "sport", "desc", "topic")] + [
        TopicLabel(aux, aux, "aux desc", "auxiliary") for aux in AUXILIARY_IDS
    ]
    small = LabelSchema(version_date=datetime.date(2023, 10, 24), labels=tuple(labels))
    text = render_guidelines(small)
    assert text.count("* ") == 4
