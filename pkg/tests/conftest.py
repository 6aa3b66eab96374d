import random

import pytest

from mediatopic import schema as schema_mod
from mediatopic.corpus import Document
from mediatopic.harness import keyword_for_label
from mediatopic.sampler import LabeledDoc

LANGS = ["sl", "hr", "el", "ca"]


@pytest.fixture(scope="session")
def builtin_schema():
    return schema_mod.load_schema()


def make_synthetic_docs(n, schema, seed=0, langs=LANGS):
    """Synthetic news docs embedding each label's marker keyword plus noise.

    Deterministic for a given seed; languages cycle so every language gets
    an equal share.
    """
    rng = random.Random(seed)
    topic_ids = list(schema.topic_ids)
    docs = []
    for i in range(n):
        label = topic_ids[i % len(topic_ids)] if i < len(topic_ids) else rng.choice(topic_ids)
        lang = langs[i % len(langs)]
        keyword = keyword_for_label(label)
        noise = " ".join(f"w{rng.randrange(200)}" for _ in range(rng.randrange(5, 25)))
        body = f"{keyword} {lang}_text {noise} {keyword}"
        docs.append(Document(id=f"doc{i:05d}", lang=lang, genre="News", body=body))
    return docs


def make_labeled_pool(n, schema, seed=0, langs=LANGS):
    """Synthetic labeled docs (as if teacher-annotated)."""
    rng = random.Random(seed)
    topic_ids = list(schema.topic_ids)
    docs = []
    for i in range(n):
        label = topic_ids[i % len(topic_ids)] if i < len(topic_ids) else rng.choice(topic_ids)
        lang = langs[i % len(langs)]
        keyword = keyword_for_label(label)
        noise = " ".join(f"w{rng.randrange(200)}" for _ in range(rng.randrange(5, 25)))
        docs.append(LabeledDoc(
            id=f"doc{i:05d}", lang=lang, text=f"{keyword} {noise} {keyword}", label=label
        ))
    return docs
