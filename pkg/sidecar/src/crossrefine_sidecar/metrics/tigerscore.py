"""Instruction-driven error analysis with per-error penalties.

A causal LM is prompted to list the errors of a generated output given
its source instruction; every reported "Score reduction" becomes a
negative penalty, clamped per error to [-5, -0.5], and the text's score
is the sum (0.0 when no errors are reported). Decoding is greedy, so
identical requests produce identical analyses.
"""
from __future__ import annotations

import re

import torch
from transformers import AutoModelForCausalLM, AutoTokenizer

PER_ERROR_BOUNDS = (-5.0, -0.5)

_PROMPT = (
    "You are grading a model-generated output against its task.\n"
    "Task input: {source}\n"
    "Reference output: {reference}\n"
    "Model output: {candidate}\n"
    "List each error in the model output on its own line in the form\n"
    "'Error: <description>. Score reduction: <number between 0.5 and 5>'.\n"
    "If there are no errors, write 'No errors found.'\n"
    "Analysis:\n"
)

_REDUCTION_PATTERN = re.compile(r"score reduction:\s*(-?\d+(?:\.\d+)?)", re.IGNORECASE)


class ErrorAnalysisScorer:
    def __init__(
        self,
        model_name_or_path: str,
        device: str = "cpu",
        max_length: int = 1024,
        max_new_tokens: int = 128,
    ):
        self.tokenizer = AutoTokenizer.from_pretrained(model_name_or_path)
        if self.tokenizer.pad_token_id is None:
            self.tokenizer.pad_token = self.tokenizer.eos_token
        self.model = AutoModelForCausalLM.from_pretrained(model_name_or_path)
        self.model.eval()
        self.device = torch.device(device)
        self.model.to(self.device)
        self.max_length = max_length
        self.max_new_tokens = max_new_tokens

    @torch.no_grad()
    def analyze(self, candidate: str, reference: str, source: str) -> str:
        prompt = _PROMPT.format(source=source, reference=reference, candidate=candidate)
        encoded = self.tokenizer(
            prompt, truncation=True, max_length=self.max_length, return_tensors="pt"
        ).to(self.device)
        generated = self.model.generate(
            **encoded,
            max_new_tokens=self.max_new_tokens,
            do_sample=False,
            num_beams=1,
            pad_token_id=self.tokenizer.pad_token_id,
        )
        new_tokens = generated[0][encoded["input_ids"].shape[1]:]
        return self.tokenizer.decode(new_tokens, skip_special_tokens=True)

    @staticmethod
    def parse_penalties(analysis: str) -> list[float]:
        lo, hi = PER_ERROR_BOUNDS
        penalties = []
        for raw in _REDUCTION_PATTERN.findall(analysis):
            magnitude = abs(float(raw))
            penalties.append(max(lo, min(hi, -magnitude)))
        return penalties

    def score(self, candidates, references, sources):
        scores = []
        for candidate, reference, source in zip(candidates, references, sources):
            analysis = self.analyze(candidate, reference, source)
            scores.append(sum(self.parse_penalties(analysis)))
        return scores
