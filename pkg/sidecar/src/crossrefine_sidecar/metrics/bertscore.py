"""Token-level contextual similarity with greedy matching.

Candidate and reference tokens are embedded with a masked-LM encoder,
each token greedily matches its most similar counterpart by cosine, and
the score is the F1 of matched precision and recall. Special tokens are
excluded from matching.
"""
from __future__ import annotations

import torch
from transformers import AutoModel, AutoTokenizer


class GreedyMatchScorer:
    def __init__(self, model_name_or_path: str, device: str = "cpu", max_length: int = 512):
        self.tokenizer = AutoTokenizer.from_pretrained(model_name_or_path)
        self.model = AutoModel.from_pretrained(model_name_or_path)
        self.model.eval()
        self.device = torch.device(device)
        self.model.to(self.device)
        self.max_length = max_length

    @torch.no_grad()
    def _token_embeddings(self, text: str) -> torch.Tensor:
        encoded = self.tokenizer(
            text,
            truncation=True,
            max_length=self.max_length,
            return_tensors="pt",
            return_special_tokens_mask=True,
        )
        special = encoded.pop("special_tokens_mask")[0].bool()
        encoded = {k: v.to(self.device) for k, v in encoded.items()}
        hidden = self.model(**encoded).last_hidden_state[0]
        content = hidden[~special]
        if content.shape[0] == 0:  # nothing but special tokens
            content = hidden
        return torch.nn.functional.normalize(content, dim=-1)

    def pair_score(self, candidate: str, reference: str) -> float:
        candidate_emb = self._token_embeddings(candidate)
        reference_emb = self._token_embeddings(reference)
        similarity = candidate_emb @ reference_emb.T
        precision = float(similarity.max(dim=1).values.mean())
        recall = float(similarity.max(dim=0).values.mean())
        if precision + recall == 0.0:
            return 0.0
        return 2.0 * precision * recall / (precision + recall)

    def score(self, candidates, references):
        return [self.pair_score(c, r) for c, r in zip(candidates, references)]
