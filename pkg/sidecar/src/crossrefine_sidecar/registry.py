"""Metric registry: lazy loading, per-metric locks, configurable checkpoints.

Checkpoint resolution order per metric: the ``CROSSREFINE_SCORER_MODEL_<ID>``
environment variable (uppercased metric id), then the built-in default.
Tests point the registry at tiny local checkpoints the same way.
"""
from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field

from .metrics import (
    ErrorAnalysisScorer,
    GreedyMatchScorer,
    PairRegressionScorer,
    SeqLikelihoodScorer,
    WordMoverScorer,
)

ENV_PREFIX = "CROSSREFINE_SCORER_MODEL_"

# Default checkpoints; any compatible checkpoint works (a sequence
# regressor for bleurt, a seq2seq LM for the likelihood metrics, a
# masked-LM encoder for the matching metrics, a causal LM for the error
# analyzer).
DEFAULT_CHECKPOINTS = {
    "bleurt": "Elron/bleurt-base-512",
    "bartscore": "facebook/bart-large-cnn",
    "bartscore_precision": "facebook/bart-large-cnn",
    "bartscore_f": "facebook/bart-large-cnn",
    "bartscore_de": "facebook/mbart-large-50",
    "tigerscore": "TIGER-Lab/TIGERScore-7B",
    "bertscore": "google-bert/bert-base-uncased",
    "bertscore_de": "google-bert/bert-base-german-cased",
    "moverscore": "google-bert/bert-base-uncased",
    "moverscore_de": "google-bert/bert-base-german-cased",
}


@dataclass(frozen=True)
class MetricRegistryEntry:
    metric_id: str
    loader: object  # callable(checkpoint) -> scorer
    supported_languages: frozenset[str]
    needs_references: bool = True
    needs_sources: bool = False
    score_bounds: tuple[float, float] | None = None
    direction: str | None = None  # likelihood metrics only


def _entries() -> list[MetricRegistryEntry]:
    english = frozenset({"en"})
    both = frozenset({"en", "de"})
    german = frozenset({"de"})
    return [
        MetricRegistryEntry(
            "bleurt", PairRegressionScorer, english, score_bounds=(-1.0, 1.0)
        ),
        MetricRegistryEntry("bartscore", SeqLikelihoodScorer, english, direction="recall"),
        MetricRegistryEntry(
            "bartscore_precision", SeqLikelihoodScorer, english, direction="precision"
        ),
        MetricRegistryEntry("bartscore_f", SeqLikelihoodScorer, english, direction="f"),
        MetricRegistryEntry("bartscore_de", SeqLikelihoodScorer, german, direction="recall"),
        MetricRegistryEntry(
            "tigerscore",
            ErrorAnalysisScorer,
            english,
            needs_sources=True,
            score_bounds=(-5.0, -0.5),  # per reported error
        ),
        MetricRegistryEntry("bertscore", GreedyMatchScorer, both),
        MetricRegistryEntry("bertscore_de", GreedyMatchScorer, german),
        MetricRegistryEntry("moverscore", WordMoverScorer, both),
        MetricRegistryEntry("moverscore_de", WordMoverScorer, german),
    ]


class UnknownMetric(KeyError):
    pass


class MetricRegistry:
    """Holds entries and the lazily loaded, lock-guarded scorer instances."""

    def __init__(self, checkpoints: dict[str, str] | None = None, device: str = "cpu"):
        self.entries: dict[str, MetricRegistryEntry] = {e.metric_id: e for e in _entries()}
        self._checkpoints = dict(DEFAULT_CHECKPOINTS)
        if checkpoints:
            self._checkpoints.update(checkpoints)
        self._device = device
        self._scorers: dict[str, object] = {}
        self._locks: dict[str, threading.Lock] = {
            metric_id: threading.Lock() for metric_id in self.entries
        }
        self._load_lock = threading.Lock()

    def entry(self, metric_id: str) -> MetricRegistryEntry:
        if metric_id not in self.entries:
            raise UnknownMetric(metric_id)
        return self.entries[metric_id]

    def checkpoint(self, metric_id: str) -> str:
        env_override = os.environ.get(ENV_PREFIX + metric_id.upper())
        return env_override or self._checkpoints[metric_id]

    def scorer(self, metric_id: str):
        """The loaded scorer for a metric, loading it on first use."""
        entry = self.entry(metric_id)
        with self._load_lock:
            if metric_id not in self._scorers:
                self._scorers[metric_id] = entry.loader(
                    self.checkpoint(metric_id), device=self._device
                )
        return self._scorers[metric_id]

    def loaded_metrics(self) -> list[str]:
        return sorted(self._scorers)

    def lock(self, metric_id: str) -> threading.Lock:
        return self._locks[metric_id]

    def run(self, metric_id: str, candidates, references, sources) -> list[float]:
        """Score one batch under the metric's lock."""
        entry = self.entry(metric_id)
        scorer = self.scorer(metric_id)
        with self.lock(metric_id):
            if entry.needs_sources:
                return scorer.score(candidates, references, sources)
            if entry.direction is not None:
                return scorer.score(candidates, references, direction=entry.direction)
            return scorer.score(candidates, references)
