"""Learned reference-based rating via a sequence-regression checkpoint.

The model reads a (reference, candidate) pair and emits a single
regression logit, the rating. Checkpoints fine-tuned on human ratings
typically score in [-1, 1]; values outside are reported as-is (the
service logs a warning, it never clamps).
"""
from __future__ import annotations

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer


class PairRegressionScorer:
    def __init__(self, model_name_or_path: str, device: str = "cpu", max_length: int = 512):
        self.tokenizer = AutoTokenizer.from_pretrained(model_name_or_path)
        self.model = AutoModelForSequenceClassification.from_pretrained(model_name_or_path)
        self.model.eval()
        self.device = torch.device(device)
        self.model.to(self.device)
        self.max_length = max_length

    @torch.no_grad()
    def pair_score(self, candidate: str, reference: str) -> float:
        encoded = self.tokenizer(
            reference,
            candidate,
            truncation=True,
            max_length=self.max_length,
            return_tensors="pt",
        ).to(self.device)
        logits = self.model(**encoded).logits
        return float(logits.reshape(-1)[0])

    def score(self, candidates, references):
        return [self.pair_score(c, r) for c, r in zip(candidates, references)]
