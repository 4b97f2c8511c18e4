"""Suggestion-influence report: how close refined explanations stay to the
initial explanation versus the critic's suggestion, per configuration."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import CrossRefineError


class MissingStage(CrossRefineError):
    def __init__(self, instance_id: str, stage: str):
        super().__init__(f"trace {instance_id!r} lacks {stage} text")
        self.instance_id = instance_id
        self.stage = stage


@dataclass(frozen=True)
class SimilarityPair:
    """Mean cosine similarity of refined-vs-initial and refined-vs-suggestion."""

    init_sim: float
    sug_sim: float

    def __post_init__(self) -> None:
        for value in (self.init_sim, self.sug_sim):
            if not -1.0 - 1e-12 <= value <= 1.0 + 1e-12:
                raise ValueError(f"similarity {value} outside [-1, 1]")


def similarity_report(traces, embedder) -> dict[tuple[str, str, str, str], SimilarityPair]:
    """Per-configuration mean similarities over refined traces.

    Every trace must carry initial, suggestion, and refined text; traces
    that short-circuited are the caller's job to filter out.
    """
    from ..metrics import cosine_similarity

    sums: dict[tuple[str, str, str, str], list[float]] = {}
    for trace in traces:
        for stage, value in (("initial", trace.initial), ("suggestion", trace.suggestion), ("refined", trace.refined)):
            if not value:
                raise MissingStage(trace.instance_id, stage)
        refined_vec = embedder.embed(trace.refined)
        init_sim = cosine_similarity(refined_vec, embedder.embed(trace.initial))
        sug_sim = cosine_similarity(refined_vec, embedder.embed(trace.suggestion))
        bucket = sums.setdefault(trace.group_key(), [0.0, 0.0, 0])
        bucket[0] += init_sim
        bucket[1] += sug_sim
        bucket[2] += 1

    return {
        key: SimilarityPair(init_sim=init_total / count, sug_sim=sug_total / count)
        for key, (init_total, sug_total, count) in sums.items()
    }
