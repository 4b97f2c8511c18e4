"""Sequence-to-sequence likelihood scoring.

The score of a (source, target) pair is the mean per-token log-likelihood
of the target under a seq2seq model conditioned on the source. Direction
variants: the default scores candidate -> reference, the precision
variant reference -> candidate, and the bidirectional variant averages
both.
"""
from __future__ import annotations

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer


class SeqLikelihoodScorer:
    def __init__(self, model_name_or_path: str, device: str = "cpu", max_length: int = 512):
        self.tokenizer = AutoTokenizer.from_pretrained(model_name_or_path)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(model_name_or_path)
        self.model.eval()
        self.device = torch.device(device)
        self.model.to(self.device)
        self.max_length = max_length

    @torch.no_grad()
    def pair_score(self, source: str, target: str) -> float:
        encoded = self.tokenizer(
            source, truncation=True, max_length=self.max_length, return_tensors="pt"
        ).to(self.device)
        labels = self.tokenizer(
            target, truncation=True, max_length=self.max_length, return_tensors="pt"
        ).input_ids.to(self.device)
        output = self.model(**encoded, labels=labels)
        log_probs = torch.log_softmax(output.logits, dim=-1)
        token_log_probs = log_probs.gather(-1, labels.unsqueeze(-1)).squeeze(-1)
        mask = labels != self.tokenizer.pad_token_id
        return float(token_log_probs[mask].mean())

    def score(self, candidates, references, direction: str = "recall"):
        """Order-aligned scores; ``direction`` is recall (candidate ->
        reference), precision (reference -> candidate), or f (average)."""
        scores = []
        for candidate, reference in zip(candidates, references):
            if direction == "recall":
                scores.append(self.pair_score(candidate, reference))
            elif direction == "precision":
                scores.append(self.pair_score(reference, candidate))
            elif direction == "f":
                forward = self.pair_score(candidate, reference)
                backward = self.pair_score(reference, candidate)
                scores.append((forward + backward) / 2.0)
            else:
                raise ValueError(f"unknown direction {direction!r}")
        return scores
