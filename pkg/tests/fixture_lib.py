"""Shared fixtures: tiny instances, demo stores, and scripted-run builders.

The scripted-backend tests work record-and-replay style: a QueueBackend
hands out predetermined stage outputs while recording the exact prompts
the engine rendered, and the resulting prompt->text map becomes the script
for a deterministic ScriptedBackend replay.
"""
from __future__ import annotations

from pathlib import Path

from crossrefine.backend import (
    BackendConfig,
    Completion,
    GenerationParams,
    ScriptedBackend,
    ScriptEntry,
)
from crossrefine.corpus import TaskInstance
from crossrefine.prompting import Demonstration, DemoStore, load_templates
from crossrefine.refinery import Engine, EngineOptions

GENERATOR_CONFIG = BackendConfig(
    model_id="gen-model", endpoint="scripted://unused", context_budget_tokens=4096
)
CRITIC_CONFIG = BackendConfig(
    model_id="critic-model", endpoint="scripted://unused", context_budget_tokens=4096
)
PARAMS = GenerationParams(max_new_tokens=64)


def qa_instance(suffix: str = "1") -> TaskInstance:
    return TaskInstance(
        id=f"qa-{suffix}",
        task_kind="commonsense_qa",
        question=f"Where would you dry wet laundry indoors (case {suffix})?",
        options=("balcony", "drying rack", "oven"),
        gold_label="drying rack",
        gold_explanation="A drying rack is made for hanging wet clothes indoors.",
    )


def nli_instance(suffix: str = "1") -> TaskInstance:
    return TaskInstance(
        id=f"nli-{suffix}",
        task_kind="nli",
        premise=f"A cyclist rides along the river path (case {suffix}).",
        hypothesis="Someone is outdoors.",
        gold_label="entailment",
        gold_explanation="Riding along a river path happens outdoors.",
    )


def fact_instance(suffix: str = "1") -> TaskInstance:
    return TaskInstance(
        id=f"fc-{suffix}",
        task_kind="fact_check",
        claim=f"Daily stretching prevents all sports injuries (case {suffix}).",
        document_sentences=(
            "Stretching improves flexibility.",
            "The weather was sunny during the study.",
            "No trial shows stretching prevents every injury.",
        ),
        relevance_mask=(True, False, True),
        gold_label="false",
        gold_explanation="The document says no trial shows stretching prevents every injury.",
        language="en",
    )


def all_instances() -> list[TaskInstance]:
    return [qa_instance(), nli_instance(), fact_instance()]


def demo_entries(prefix: str, count: int, tokens_each: int = 0) -> list[Demonstration]:
    """Distinct demonstrations; optionally padded to a target token count."""
    entries = []
    for i in range(1, count + 1):
        fields = {
            "input": f"{prefix} demo input number {i}",
            "initial_explanation": f"{prefix} first attempt {i} missed the key fact",
            "feedback": f"{prefix} feedback {i} names the missing fact",
            "suggestion": f"{prefix} suggestion {i} states the corrected reasoning",
            "refined_explanation": f"{prefix} refined explanation {i} cites the fact",
        }
        if tokens_each:
            padding = " ".join(f"pad{i}w{j}" for j in range(tokens_each))
            fields["input"] = f"{fields['input']} {padding}"
        entries.append(
            Demonstration(
                id=f"{prefix}-{i}",
                needs_further_refinement=(i % 2 == 1),
                token_count=Demonstration.count_tokens(fields),
                **fields,
            )
        )
    return entries


def demo_store(prefix: str = "d", count: int = 3, **kwargs) -> DemoStore:
    return DemoStore(entries=tuple(demo_entries(prefix, count, **kwargs)), task_kind=None)


class QueueBackend:
    """Hands out queued texts in call order while recording prompts."""

    def __init__(self, texts, config: BackendConfig):
        self.queue = list(texts)
        self.config = config
        self.calls: list[tuple[str, str]] = []

    def complete(self, prompt: str, params: GenerationParams) -> Completion:
        if not self.queue:
            raise AssertionError(f"QueueBackend exhausted; unexpected prompt: {prompt[:80]!r}")
        text = self.queue.pop(0)
        self.calls.append((prompt, text))
        return Completion(text=text, finish_reason="stop", latency_ms=0, attempt_count=1)


def make_engine(generator, critic, dataset_id: str = "fixture", **engine_kwargs) -> Engine:
    defaults = dict(
        templates=load_templates(),
        generate_store=demo_store("gen"),
        refine_store=demo_store("ref"),
        params=PARAMS,
        options=EngineOptions(),
        dataset_id=dataset_id,
    )
    defaults.update(engine_kwargs)
    return Engine(generator=generator, critic=critic, **defaults)


def record_script(instance, mode, generator_texts, critic_texts, self_refine=None, **engine_kwargs):
    """Run once with queue backends; return (trace, prompt->ScriptEntry map).

    The same model serves both roles in self_refine mode, so critic_texts
    are ignored there.
    """
    generator = QueueBackend(generator_texts, GENERATOR_CONFIG)
    critic = generator if mode == "self_refine" else QueueBackend(critic_texts, CRITIC_CONFIG)
    engine = make_engine(generator, critic, **engine_kwargs)
    trace = engine.run(instance, mode, self_refine)
    script: dict[str, ScriptEntry] = {}
    backends = [generator] if critic is generator else [generator, critic]
    for backend in backends:
        for prompt, text in backend.calls:
            script[prompt] = ScriptEntry(text=text)
    return trace, script


def scripted_engine(script: dict[str, ScriptEntry], mode: str = "cross_refine", **engine_kwargs):
    generator = ScriptedBackend.from_prompts(script, GENERATOR_CONFIG)
    critic = (
        generator if mode == "self_refine" else ScriptedBackend.from_prompts(script, CRITIC_CONFIG)
    )
    return make_engine(generator, critic, **engine_kwargs)


def run_scripted(instance, mode, generator_texts, critic_texts=(), self_refine=None, **kw):
    """Record a run, then replay it on a ScriptedBackend; returns both traces."""
    recorded, script = record_script(
        instance, mode, generator_texts, critic_texts, self_refine, **kw
    )
    engine = scripted_engine(script, mode, **kw)
    replayed = engine.run(instance, mode, self_refine)
    return recorded, replayed


# Golden-trace fixture set ---------------------------------------------------

GOLDEN_DIR = Path(__file__).resolve().parent / "goldens"
GOLDEN_FIXTURES = GOLDEN_DIR / "fixtures"
GOLDEN_KINDS = ("commonsense_qa", "nli", "fact_check")
GOLDEN_MODES = ("cross_refine", "self_refine", "ablate_feedback_only", "ablate_suggestion_only")


def golden_config(kind: str, mode: str, output_dir) -> dict:
    """Run config replaying one checked-in scripted fixture."""
    script = str(GOLDEN_FIXTURES / f"script_{kind}_{mode}.json")
    return {
        "dataset": {
            "path": str(GOLDEN_FIXTURES / f"{kind}.jsonl"),
            "schema_kind": kind,
            "language": "en",
            "id": f"{kind}-golden",
        },
        "mode": mode,
        "roles": {
            "generator": {
                "model_id": GENERATOR_CONFIG.model_id,
                "endpoint": f"scripted://{script}",
                "context_budget_tokens": GENERATOR_CONFIG.context_budget_tokens,
            },
            "critic": {
                "model_id": CRITIC_CONFIG.model_id,
                "endpoint": f"scripted://{script}",
                "context_budget_tokens": CRITIC_CONFIG.context_budget_tokens,
            },
        },
        "demos": {
            "generate_store": str(GOLDEN_FIXTURES / "generate_store.jsonl"),
            "refine_store": str(GOLDEN_FIXTURES / "refine_store.jsonl"),
        },
        "generation": {"temperature": 0.0, "max_new_tokens": PARAMS.max_new_tokens},
        "limits": {"worker_cap": 2},
        "self_refine": {"max_iterations": 3, "stop_on_no_change": True},
        "output_dir": str(output_dir),
    }


def golden_trace_path(kind: str, mode: str) -> Path:
    return GOLDEN_DIR / f"golden_{kind}_{mode}.jsonl"
