"""Encoder classifier over the configured label set.

Two regimes share one code path: the paper-scale default loads a pretrained
multilingual encoder by model id, while model_id "tiny" builds a small
randomly initialized BERT with a vocabulary derived from the train split, so
smoke tests run offline in seconds. The label-to-index mapping follows the
config's label order in both cases.
"""

from __future__ import annotations

import random

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer
from transformers import BertConfig, BertForSequenceClassification

TINY_MODEL_ID = "tiny"

PAD, UNK = 0, 1


def build_vocab(texts: list[str]) -> dict[str, int]:
    tokens = sorted({tok for text in texts for tok in text.lower().split()})
    return {tok: i + 2 for i, tok in enumerate(tokens)}


def encode(text: str, vocab: dict[str, int], max_len: int) -> list[int]:
    ids = [vocab.get(tok, UNK) for tok in text.lower().split()][:max_len]
    return ids + [PAD] * (max_len - len(ids))


class TinyClassifier:
    """From-scratch small BERT with a train-derived whitespace vocabulary."""

    def __init__(self, labels: list[str], vocab: dict[str, int], max_len: int = 64):
        self.labels = labels
        self.vocab = vocab
        self.max_len = max_len
        config = BertConfig(
            vocab_size=len(vocab) + 2,
            hidden_size=32,
            num_hidden_layers=2,
            num_attention_heads=2,
            intermediate_size=64,
            max_position_embeddings=max_len,
            num_labels=len(labels),
            pad_token_id=PAD,
        )
        self.model = BertForSequenceClassification(config)

    def _batch(self, records: list[dict]) -> torch.Tensor:
        return torch.tensor(
            [encode(rec["text"], self.vocab, self.max_len) for rec in records],
            dtype=torch.long,
        )

    def fit(self, train: list[dict], epochs: int, lr: float, batch_size: int,
            seed: int) -> None:
        torch.manual_seed(seed)
        rng = random.Random(seed)
        label_idx = {label: i for i, label in enumerate(self.labels)}
        optimizer = torch.optim.AdamW(self.model.parameters(), lr=lr)
        self.model.train()
        order = list(range(len(train)))
        for _ in range(epochs):
            rng.shuffle(order)
            for start in range(0, len(order), batch_size):
                batch = [train[i] for i in order[start:start + batch_size]]
                inputs = self._batch(batch)
                targets = torch.tensor([label_idx[rec["label"]] for rec in batch])
                loss = self.model(input_ids=inputs, labels=targets).loss
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()

    @torch.no_grad()
    def predict(self, records: list[dict]) -> list[str]:
        if not records:
            return []
        self.model.eval()
        logits = self.model(input_ids=self._batch(records)).logits
        return [self.labels[i] for i in logits.argmax(dim=-1).tolist()]


class PretrainedClassifier:
    """Fine-tunes a pretrained encoder (the paper-scale path; needs the weights)."""

    def __init__(self, model_id: str, labels: list[str], max_len: int):
        self.labels = labels
        self.max_len = max_len
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForSequenceClassification.from_pretrained(
            model_id, num_labels=len(labels)
        )

    def _batch(self, records: list[dict]) -> dict:
        return self.tokenizer(
            [rec["text"] for rec in records], truncation=True,
            max_length=self.max_len, padding=True, return_tensors="pt",
        )

    def fit(self, train: list[dict], epochs: int, lr: float, batch_size: int,
            seed: int) -> None:
        torch.manual_seed(seed)
        rng = random.Random(seed)
        label_idx = {label: i for i, label in enumerate(self.labels)}
        optimizer = torch.optim.AdamW(self.model.parameters(), lr=lr)
        self.model.train()
        order = list(range(len(train)))
        for _ in range(epochs):
            rng.shuffle(order)
            for start in range(0, len(order), batch_size):
                batch = [train[i] for i in order[start:start + batch_size]]
                inputs = self._batch(batch)
                targets = torch.tensor([label_idx[rec["label"]] for rec in batch])
                loss = self.model(**inputs, labels=targets).loss
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()

    @torch.no_grad()
    def predict(self, records: list[dict]) -> list[str]:
        if not records:
            return []
        self.model.eval()
        logits = self.model(**self._batch(records)).logits
        return [self.labels[i] for i in logits.argmax(dim=-1).tolist()]


def build_classifier(model_id: str, labels: list[str], train: list[dict],
                     max_len: int):
    if model_id == TINY_MODEL_ID:
        return TinyClassifier(labels, build_vocab([rec["text"] for rec in train]),
                              max_len=min(max_len, 64))
    return PretrainedClassifier(model_id, labels, max_len)
