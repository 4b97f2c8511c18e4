"""Earth-mover similarity between contextual token embeddings.

Tokens of both texts are embedded with a masked-LM encoder and weighted
by inverse document frequency computed over the reference side of the
batch. The word-mover distance is the optimal transport cost between the
two weighted token clouds under euclidean ground distance (solved
exactly as a small linear program), and the reported score is
1 / (1 + distance), so higher is better.
"""
from __future__ import annotations

import math
from collections import Counter

import numpy as np
import torch
from scipy.optimize import linprog
from transformers import AutoModel, AutoTokenizer


def earth_mover_distance(weights_a, weights_b, cost: np.ndarray) -> float:
    """Exact optimal transport cost between two histograms."""
    n, m = cost.shape
    c = cost.reshape(-1)
    # row sums = weights_a, column sums = weights_b
    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m : (i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    b_eq = np.concatenate([weights_a, weights_b])
    result = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not result.success:
        raise RuntimeError(f"transport LP failed: {result.message}")
    return float(result.fun)


class WordMoverScorer:
    def __init__(self, model_name_or_path: str, device: str = "cpu", max_length: int = 512):
        self.tokenizer = AutoTokenizer.from_pretrained(model_name_or_path)
        self.model = AutoModel.from_pretrained(model_name_or_path)
        self.model.eval()
        self.device = torch.device(device)
        self.model.to(self.device)
        self.max_length = max_length

    @torch.no_grad()
    def _tokens_and_embeddings(self, text: str):
        encoded = self.tokenizer(
            text,
            truncation=True,
            max_length=self.max_length,
            return_tensors="pt",
            return_special_tokens_mask=True,
        )
        special = encoded.pop("special_tokens_mask")[0].bool()
        ids = encoded["input_ids"][0]
        moved = {k: v.to(self.device) for k, v in encoded.items()}
        hidden = self.model(**moved).last_hidden_state[0]
        keep = ~special
        if not bool(keep.any()):
            keep = torch.ones_like(special)
        return ids[keep].tolist(), hidden[keep].cpu().numpy()

    @staticmethod
    def _idf_table(token_id_lists) -> dict:
        document_count = len(token_id_lists)
        occurrences = Counter()
        for ids in token_id_lists:
            occurrences.update(set(ids))
        return {
            token: math.log((document_count + 1.0) / (count + 1.0)) + 1.0
            for token, count in occurrences.items()
        }

    def score(self, candidates, references):
        reference_ids = [self._tokens_and_embeddings(r)[0] for r in references]
        idf = self._idf_table(reference_ids)
        scores = []
        for candidate, reference in zip(candidates, references):
            cand_ids, cand_emb = self._tokens_and_embeddings(candidate)
            ref_ids, ref_emb = self._tokens_and_embeddings(reference)
            cand_weights = np.array([idf.get(t, 1.0) for t in cand_ids], dtype=float)
            ref_weights = np.array([idf.get(t, 1.0) for t in ref_ids], dtype=float)
            cand_weights /= cand_weights.sum()
            ref_weights /= ref_weights.sum()
            cost = np.linalg.norm(cand_emb[:, None, :] - ref_emb[None, :, :], axis=-1)
            distance = earth_mover_distance(cand_weights, ref_weights, cost)
            scores.append(1.0 / (1.0 + distance))
        return scores
