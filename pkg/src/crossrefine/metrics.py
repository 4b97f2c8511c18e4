"""Scoring support: embeddings, cosine similarity, and the scorer wire client.

Lightweight similarity runs in-process; reference metrics (BLEURT, BARTScore,
TIGERScore, BERTScore, MoverScore) are reached over the HTTP scorer protocol
so this package never loads a neural model itself.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import requests

from .analysis.text import tokenize
from .errors import CrossRefineError


class ZeroVector(CrossRefineError):
    """Cosine similarity is undefined for an all-zero vector."""


class DimMismatch(CrossRefineError):
    """Vectors come from embedders with different dimensions."""


class EmptyText(CrossRefineError):
    """Cannot embed a text with no tokens."""


class LengthMismatch(CrossRefineError):
    """references/sources do not align one-to-one with candidates."""


class ScorerUnavailable(CrossRefineError):
    """The scorer endpoint cannot be reached or keeps failing."""


class ProtocolError(CrossRefineError):
    """The scorer endpoint violated the wire protocol."""


class EmptyList(CrossRefineError):
    """Cannot aggregate an empty score list."""


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    dim: int

    def __post_init__(self) -> None:
        if len(self.values) != self.dim:
            raise DimMismatch(f"vector has {len(self.values)} values, declared dim {self.dim}")


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine of the angle between two embedding vectors, in [-1, 1]."""
    if a.dim != b.dim:
        raise DimMismatch(f"dims differ: {a.dim} vs {b.dim}")
    dot = sum(x * y for x, y in zip(a.values, b.values))
    norm_a = math.sqrt(sum(x * x for x in a.values))
    norm_b = math.sqrt(sum(y * y for y in b.values))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector("cosine similarity undefined for all-zero vector")
    return dot / (norm_a * norm_b)


class HashedTokenEmbedder:
    """Deterministic test embedder: token multiset -> hashed count vector.

    Tokens are lowercased, hashed into a fixed number of buckets, and
    counted. Equal texts always embed identically, and the embedding is
    stable across processes (no randomized hashing).
    """

    def __init__(self, dim: int = 256):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim

    def bucket(self, token: str) -> int:
        digest = hashlib.blake2b(token.lower().encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % self.dim

    def embed(self, text: str) -> EmbeddingVector:
        tokens = tokenize(text)
        if not tokens:
            raise EmptyText("cannot embed text with no tokens")
        counts = [0.0] * self.dim
        for token in tokens:
            counts[self.bucket(token)] += 1.0
        return EmbeddingVector(values=tuple(counts), dim=self.dim)


class SentenceEncoderEmbedder:
    """Adapter for sentence-encoder objects exposing ``encode(text) -> sequence``.

    Useful for plugging a pretrained sentence-transformer in environments
    that have one; nothing in this package requires it.
    """

    def __init__(self, encoder):
        self._encoder = encoder
        self._dim: int | None = None

    def embed(self, text: str) -> EmbeddingVector:
        if not text.strip():
            raise EmptyText("cannot embed empty text")
        values = tuple(float(v) for v in self._encoder.encode(text))
        if self._dim is None:
            self._dim = len(values)
        return EmbeddingVector(values=values, dim=self._dim)


@dataclass(frozen=True)
class ScoreRequest:
    """One batch of texts to score with a named metric."""

    metric_id: str
    candidates: tuple[str, ...]
    references: tuple[str, ...] | None = None
    sources: tuple[str, ...] | None = None
    language: str = "en"

    def __post_init__(self) -> None:
        if not self.candidates:
            raise LengthMismatch("candidates must be non-empty")
        if self.references is not None and len(self.references) != len(self.candidates):
            raise LengthMismatch(
                f"{len(self.references)} references for {len(self.candidates)} candidates"
            )
        if self.sources is not None and len(self.sources) != len(self.candidates):
            raise LengthMismatch(
                f"{len(self.sources)} sources for {len(self.candidates)} candidates"
            )

    def to_wire(self) -> dict:
        return {
            "metric_id": self.metric_id,
            "candidates": list(self.candidates),
            "references": list(self.references) if self.references is not None else None,
            "sources": list(self.sources) if self.sources is not None else None,
            "language": self.language,
        }


@dataclass(frozen=True)
class ScoreReport:
    """Per-example scores plus their mean for one (metric, configuration) cell."""

    metric_id: str
    per_example: tuple[float, ...]
    aggregate: float
    group_key: tuple[str, str, str, str]  # (generator_id, critic_id, dataset_id, mode)


def aggregate_scores(per_example) -> float:
    """Arithmetic mean of the per-example scores."""
    scores = list(per_example)
    if not scores:
        raise EmptyList("cannot aggregate an empty score list")
    return sum(scores) / len(scores)


def score_batch(request: ScoreRequest, scorer_endpoint: str, timeout_s: float = 300.0) -> list[float]:
    """POST one batch to the scorer endpoint and return order-aligned scores.

    Raises ScorerUnavailable when the endpoint cannot be reached (or answers
    5xx) and ProtocolError when the response violates the wire contract,
    including a positive value from the penalty-only ``tigerscore`` metric.
    """
    url = scorer_endpoint.rstrip("/") + "/score"
    try:
        response = requests.post(url, json=request.to_wire(), timeout=timeout_s)
    except requests.RequestException as exc:
        raise ScorerUnavailable(f"scorer endpoint {url} unreachable: {exc}") from exc

    if response.status_code >= 500:
        raise ScorerUnavailable(f"scorer endpoint {url} answered {response.status_code}")
    if response.status_code != 200:
        raise ProtocolError(
            f"scorer rejected request with status {response.status_code}: {response.text[:200]}"
        )

    try:
        body = response.json()
    except ValueError as exc:
        raise ProtocolError(f"scorer response is not JSON: {exc}") from exc
    if not isinstance(body, dict) or "scores" not in body:
        raise ProtocolError("scorer response lacks a 'scores' field")
    scores = body["scores"]
    if not isinstance(scores, list) or not all(isinstance(s, (int, float)) for s in scores):
        raise ProtocolError("scorer 'scores' must be a list of numbers")
    if len(scores) != len(request.candidates):
        raise ProtocolError(
            f"scorer returned {len(scores)} scores for {len(request.candidates)} candidates"
        )
    if body.get("metric_id") not in (None, request.metric_id):
        raise ProtocolError(
            f"scorer answered for metric {body.get('metric_id')!r}, asked {request.metric_id!r}"
        )
    values = [float(s) for s in scores]
    if request.metric_id == "tigerscore" and any(v > 0.0 for v in values):
        raise ProtocolError("tigerscore is a penalty metric; got a positive score")
    return values


@dataclass
class ReportAccumulator:
    """Collects ScoreReports; assembly is single-threaded by construction."""

    reports: list[ScoreReport] = field(default_factory=list)

    def add(self, report: ScoreReport) -> None:
        self.reports.append(report)

    def by_group(self) -> dict[tuple[str, str, str, str], list[ScoreReport]]:
        grouped: dict[tuple[str, str, str, str], list[ScoreReport]] = {}
        for report in self.reports:
            grouped.setdefault(report.group_key, []).append(report)
        return grouped


def score_traces(
    traces,
    references_by_id: dict[str, str],
    metric_ids,
    scorer_endpoint: str,
    language: str = "en",
) -> list[ScoreReport]:
    """Score final explanations from traces, grouped by configuration.

    ``references_by_id`` maps instance ids to gold explanations; every trace
    must have one. Returns one ScoreReport per (group, metric) pair.
    """
    groups: dict[tuple[str, str, str, str], list] = {}
    for trace in traces:
        groups.setdefault(trace.group_key(), []).append(trace)

    reports = []
    for group_key, group_traces in sorted(groups.items()):
        candidates = tuple(t.final for t in group_traces)
        missing = [t.instance_id for t in group_traces if t.instance_id not in references_by_id]
        if missing:
            raise LengthMismatch(f"no gold explanation for instance ids: {missing}")
        references = tuple(references_by_id[t.instance_id] for t in group_traces)
        sources = tuple(t.input_text for t in group_traces)
        for metric_id in metric_ids:
            request = ScoreRequest(
                metric_id=metric_id,
                candidates=candidates,
                references=references,
                sources=sources,
                language=language,
            )
            per_example = score_batch(request, scorer_endpoint)
            reports.append(
                ScoreReport(
                    metric_id=metric_id,
                    per_example=tuple(per_example),
                    aggregate=aggregate_scores(per_example),
                    group_key=group_key,
                )
            )
    return reports
