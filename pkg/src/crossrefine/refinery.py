"""The refinement pipeline engine.

Cross-refinement runs five stages in a fixed order: the generator writes an
initial explanation, the critic judges whether it needs improvement, and if
so produces feedback and a suggested explanation, which the generator
cross-references into a refined explanation. A negative judgment
short-circuits the run and the initial explanation becomes final.

The engine also runs the iterative self-refinement baseline (one model,
feedback/rewrite rounds) and the two single-component ablations, and it
serializes every run into a replayable trace record.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .analysis.text import tokenize
from .backend import BackendConfig, GenerationParams, check_context
from .corpus import TaskInstance, render_instance_input
from .errors import CrossRefineError
from .prompting import (
    DemoStore,
    PromptTemplate,
    render_prompt,
    select_demonstrations,
    shot_bounds,
)

MODES = ("cross_refine", "self_refine", "ablate_feedback_only", "ablate_suggestion_only")
CROSS_MODES = ("cross_refine", "ablate_feedback_only", "ablate_suggestion_only")

# Stages run by the generator model; all remaining stages belong to the critic.
GENERATOR_STAGES = frozenset({"generate", "refine", "self_refine_feedback", "self_refine_refine"})

_PREDICTION_MARKERS = ("answer:", "label:")


class UnparseableVerdict(CrossRefineError):
    """Critic text carries neither an affirmative nor a negative marker."""


class MissingComponent(CrossRefineError):
    def __init__(self, mode: str, component: str):
        super().__init__(f"mode {mode!r} requires component {component!r}")
        self.mode = mode
        self.component = component


class PipelineStageError(CrossRefineError):
    """Wraps a stage failure with the stage name for batch reporting."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class PipelineRoles:
    generator: BackendConfig
    critic: BackendConfig


@dataclass(frozen=True)
class QualityVerdict:
    needs_improvement: bool
    raw_text: str

    def __post_init__(self) -> None:
        if not self.raw_text:
            raise ValueError("verdict raw_text must be non-empty")


@dataclass(frozen=True)
class SelfRefineConfig:
    max_iterations: int = 3
    stop_on_no_change: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.max_iterations <= 10:
            raise ValueError("max_iterations must lie in [1, 10]")


@dataclass(frozen=True)
class EngineOptions:
    force_refine: bool = False
    strict_budget: bool = False


@dataclass(frozen=True)
class StageResult:
    stage: str
    text: str
    prompt: str
    latency_ms: int
    model_id: str


@dataclass(frozen=True)
class PipelineTrace:
    """Full record of one instance's run, serializable and replayable."""

    instance_id: str
    dataset_id: str
    mode: str
    input_text: str
    initial: str
    final: str
    verdict: QualityVerdict
    roles: PipelineRoles
    feedback: str | None = None
    suggestion: str | None = None
    refined: str | None = None
    prediction: str = ""
    iterations: tuple[dict, ...] | None = None
    prompts: dict[str, str] = field(default_factory=dict)
    stage_models: dict[str, str] = field(default_factory=dict)
    timings_ms: dict[str, int] = field(default_factory=dict)

    def group_key(self) -> tuple[str, str, str, str]:
        return (
            self.roles.generator.model_id,
            self.roles.critic.model_id,
            self.dataset_id,
            self.mode,
        )

    def to_record(self) -> dict:
        return {
            "failed": False,
            "instance_id": self.instance_id,
            "dataset_id": self.dataset_id,
            "mode": self.mode,
            "input_text": self.input_text,
            "initial": self.initial,
            "verdict": {
                "needs_improvement": self.verdict.needs_improvement,
                "raw_text": self.verdict.raw_text,
            },
            "feedback": self.feedback,
            "suggestion": self.suggestion,
            "refined": self.refined,
            "final": self.final,
            "prediction": self.prediction,
            "iterations": list(self.iterations) if self.iterations is not None else None,
            "prompts": dict(self.prompts),
            "stage_models": dict(self.stage_models),
            "timings_ms": dict(self.timings_ms),
            # endpoints stay out of trace records: they are machine-local
            # details and belong to the run manifest
            "roles": {
                "generator": {"model_id": self.roles.generator.model_id},
                "critic": {"model_id": self.roles.critic.model_id},
            },
        }


@dataclass(frozen=True)
class FailedTrace:
    """Stub written when a stage error aborts an instance."""

    instance_id: str
    dataset_id: str
    mode: str
    stage: str
    error_type: str
    message: str

    def to_record(self) -> dict:
        return {
            "failed": True,
            "instance_id": self.instance_id,
            "dataset_id": self.dataset_id,
            "mode": self.mode,
            "stage": self.stage,
            "error_type": self.error_type,
            "message": self.message,
        }


def parse_verdict(text: str) -> bool:
    """Read an improvement verdict from critic text.

    Scans the first ten tokens, case-insensitively, for the earliest marker:
    "yes"/"needs improvement" means improvement is needed, "no" (including
    "no improvement") means it is not.
    """
    if not text:
        raise UnparseableVerdict("empty verdict text")
    tokens = [t.lower() for t in tokenize(text)[:10]]
    for i, token in enumerate(tokens):
        if token == "yes":
            return True
        if token == "needs" and i + 1 < len(tokens) and tokens[i + 1] == "improvement":
            return True
        if token == "no":
            return False
    raise UnparseableVerdict(f"no verdict marker in first 10 tokens: {text[:80]!r}")


def extract_prediction(text: str) -> str:
    """Pull a predicted label out of an explanation, if one is marked.

    Fixed-marker scan for "Answer:"/"Label:" prefixes; the remainder of that
    line is the prediction. Without a marker the prediction stays empty.
    """
    lowered = text.lower()
    positions = [(lowered.find(m), m) for m in _PREDICTION_MARKERS]
    positions = [(i, m) for i, m in positions if i != -1]
    if not positions:
        return ""
    index, marker = min(positions)
    rest = text[index + len(marker):]
    return rest.splitlines()[0].strip() if rest else ""


class Engine:
    """Runs pipeline stages against a generator and a critic backend.

    The same model may serve both roles. Prompts are deterministic given
    templates, stores and instance, so scripted backends replay exactly.
    """

    def __init__(
        self,
        generator,
        critic,
        templates: dict[str, PromptTemplate],
        generate_store: DemoStore,
        refine_store: DemoStore,
        params: GenerationParams | None = None,
        options: EngineOptions | None = None,
        dataset_id: str = "",
    ):
        self.generator = generator
        self.critic = critic
        self.templates = templates
        self.generate_store = generate_store
        self.refine_store = refine_store
        self.params = params or GenerationParams()
        self.options = options or EngineOptions()
        self.dataset_id = dataset_id

    @property
    def roles(self) -> PipelineRoles:
        return PipelineRoles(generator=self.generator.config, critic=self.critic.config)

    def _backend_for(self, stage: str):
        return self.generator if stage in GENERATOR_STAGES else self.critic

    def _store_for(self, stage: str) -> DemoStore:
        return self.generate_store if stage == "generate" else self.refine_store

    def _build_prompt(self, stage: str, backend, slot_values: dict[str, str]) -> str:
        template = self.templates[stage]
        if "demonstrations" not in template.slots:
            prompt = render_prompt(template, slot_values)
            check_context(prompt, self.params, backend.config, self.options.strict_budget)
            return prompt

        store = self._store_for(stage)
        bare = render_prompt(template, slot_values, (), allow_empty_demonstrations=True)
        input_tokens = len(tokenize(bare))
        budget = backend.config.context_budget_tokens - self.params.max_new_tokens
        if budget > input_tokens:
            demos = select_demonstrations(
                store, stage, input_tokens, budget, strict=self.options.strict_budget
            )
        else:
            if self.options.strict_budget:
                check_context(bare, self.params, backend.config, strict=True)
            lo, _hi = shot_bounds(stage)
            demos = list(store.entries[: min(lo, len(store))])
        prompt = render_prompt(template, slot_values, demos, allow_empty_demonstrations=True)
        # Overlong prompts shed trailing demonstrations, never live content.
        while demos and not check_context(prompt, self.params, backend.config, strict=False):
            demos = demos[:-1]
            prompt = render_prompt(template, slot_values, demos, allow_empty_demonstrations=True)
        check_context(prompt, self.params, backend.config, self.options.strict_budget)
        return prompt

    def _run_stage(self, stage: str, slot_values: dict[str, str]) -> StageResult:
        backend = self._backend_for(stage)
        try:
            prompt = self._build_prompt(stage, backend, slot_values)
            completion = backend.complete(prompt, self.params)
        except CrossRefineError as exc:
            raise PipelineStageError(stage, exc) from exc
        return StageResult(
            stage=stage,
            text=completion.text,
            prompt=prompt,
            latency_ms=completion.latency_ms,
            model_id=backend.config.model_id,
        )

    # Individual stages -------------------------------------------------

    def generate_initial(self, instance: TaskInstance) -> StageResult:
        return self._run_stage("generate", {"input": render_instance_input(instance)})

    def assess_quality(self, instance: TaskInstance, initial: str) -> tuple[QualityVerdict, StageResult]:
        result = self._run_stage(
            "assess",
            {"input": render_instance_input(instance), "initial_explanation": initial},
        )
        try:
            needs_improvement = parse_verdict(result.text)
        except UnparseableVerdict as exc:
            raise PipelineStageError("assess", exc) from exc
        return QualityVerdict(needs_improvement, result.text), result

    def generate_feedback(self, instance: TaskInstance, initial: str) -> StageResult:
        return self._run_stage(
            "feedback",
            {"input": render_instance_input(instance), "initial_explanation": initial},
        )

    def generate_suggestion(self, instance: TaskInstance, initial: str, feedback: str) -> StageResult:
        return self._run_stage(
            "suggest",
            {
                "input": render_instance_input(instance),
                "initial_explanation": initial,
                "feedback": feedback,
            },
        )

    def refine(
        self,
        instance: TaskInstance,
        initial: str,
        feedback: str | None,
        suggestion: str | None,
        mode: str = "cross_refine",
    ) -> StageResult:
        """Produce the refined explanation for the given mode.

        cross_refine conditions on both critic outputs; each ablation keeps
        exactly one of them in the prompt and blanks the other.
        """
        if mode not in CROSS_MODES:
            raise ValueError(f"refine does not apply to mode {mode!r}")
        if mode in ("cross_refine", "ablate_feedback_only") and not feedback:
            raise MissingComponent(mode, "feedback")
        if mode in ("cross_refine", "ablate_suggestion_only") and not suggestion:
            raise MissingComponent(mode, "suggestion")
        slot_values = {
            "input": render_instance_input(instance),
            "initial_explanation": initial,
            "feedback": feedback or "",
            "suggestion": suggestion or "",
        }
        if mode == "ablate_feedback_only":
            slot_values["suggestion"] = ""
        elif mode == "ablate_suggestion_only":
            slot_values["feedback"] = ""
        return self._run_stage("refine", slot_values)

    # Full runs ----------------------------------------------------------

    def run_cross_refine(self, instance: TaskInstance, mode: str = "cross_refine") -> PipelineTrace:
        if mode not in CROSS_MODES:
            raise ValueError(f"unknown cross-refinement mode {mode!r}")
        prompts: dict[str, str] = {}
        timings: dict[str, int] = {}
        models: dict[str, str] = {}

        def record(result: StageResult) -> str:
            prompts[result.stage] = result.prompt
            timings[result.stage] = result.latency_ms
            models[result.stage] = result.model_id
            return result.text

        initial = record(self.generate_initial(instance))
        verdict, assess_result = self.assess_quality(instance, initial)
        record(assess_result)

        feedback = suggestion = refined = None
        if verdict.needs_improvement or self.options.force_refine:
            feedback = record(self.generate_feedback(instance, initial))
            if mode != "ablate_feedback_only":
                suggestion = record(self.generate_suggestion(instance, initial, feedback))
            refined = record(self.refine(instance, initial, feedback, suggestion, mode))

        final = refined if refined is not None else initial
        return PipelineTrace(
            instance_id=instance.id,
            dataset_id=self.dataset_id,
            mode=mode,
            input_text=render_instance_input(instance),
            initial=initial,
            final=final,
            verdict=verdict,
            roles=self.roles,
            feedback=feedback,
            suggestion=suggestion,
            refined=refined,
            prediction=extract_prediction(final),
            prompts=prompts,
            stage_models=models,
            timings_ms=timings,
        )

    def run_self_refine(
        self, instance: TaskInstance, config: SelfRefineConfig | None = None
    ) -> PipelineTrace:
        """Iterative single-model baseline: feedback and rewrite rounds.

        Stops early when the model's feedback reads as "no improvement" or,
        with stop_on_no_change, when a rewrite leaves the text unchanged.
        """
        config = config or SelfRefineConfig()
        prompts: dict[str, str] = {}
        timings: dict[str, int] = {}
        models: dict[str, str] = {}

        def record(result: StageResult, key: str) -> str:
            prompts[key] = result.prompt
            timings[key] = result.latency_ms
            models[key] = result.model_id
            return result.text

        initial = record(self.generate_initial(instance), "generate")
        current = initial
        iterations: list[dict] = []
        first_feedback: str | None = None

        for round_no in range(1, config.max_iterations + 1):
            feedback_result = self._run_stage(
                "self_refine_feedback",
                {"input": render_instance_input(instance), "initial_explanation": current},
            )
            feedback = record(feedback_result, f"self_refine_feedback_{round_no}")
            if first_feedback is None:
                first_feedback = feedback
            try:
                if not parse_verdict(feedback):
                    break
            except UnparseableVerdict:
                pass  # free-form feedback: keep refining
            refine_result = self._run_stage(
                "self_refine_refine",
                {
                    "input": render_instance_input(instance),
                    "initial_explanation": current,
                    "feedback": feedback,
                },
            )
            refined = record(refine_result, f"self_refine_refine_{round_no}")
            iterations.append({"round": round_no, "feedback": feedback, "refined": refined})
            if config.stop_on_no_change and refined == current:
                break
            current = refined

        refined_any = bool(iterations)
        verdict = QualityVerdict(needs_improvement=refined_any, raw_text=first_feedback or "")
        return PipelineTrace(
            instance_id=instance.id,
            dataset_id=self.dataset_id,
            mode="self_refine",
            input_text=render_instance_input(instance),
            initial=initial,
            final=current,
            verdict=verdict,
            roles=self.roles,
            feedback=iterations[-1]["feedback"] if refined_any else first_feedback,
            refined=iterations[-1]["refined"] if refined_any else None,
            prediction=extract_prediction(current),
            iterations=tuple(iterations),
            prompts=prompts,
            stage_models=models,
            timings_ms=timings,
        )

    def run(self, instance: TaskInstance, mode: str, self_refine: SelfRefineConfig | None = None):
        if mode == "self_refine":
            return self.run_self_refine(instance, self_refine)
        return self.run_cross_refine(instance, mode)


# Trace persistence --------------------------------------------------------


def serialize_trace(trace) -> str:
    """Canonical single-line JSON; identical traces serialize byte-identically."""
    return json.dumps(trace.to_record(), ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def write_traces(path, traces) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for trace in traces:
            handle.write(serialize_trace(trace) + "\n")


def trace_from_record(record: dict) -> PipelineTrace:
    roles = PipelineRoles(
        generator=BackendConfig(
            model_id=record["roles"]["generator"]["model_id"],
            endpoint=record["roles"]["generator"].get("endpoint", ""),
        ),
        critic=BackendConfig(
            model_id=record["roles"]["critic"]["model_id"],
            endpoint=record["roles"]["critic"].get("endpoint", ""),
        ),
    )
    return PipelineTrace(
        instance_id=record["instance_id"],
        dataset_id=record.get("dataset_id", ""),
        mode=record["mode"],
        input_text=record["input_text"],
        initial=record["initial"],
        final=record["final"],
        verdict=QualityVerdict(
            needs_improvement=record["verdict"]["needs_improvement"],
            raw_text=record["verdict"]["raw_text"],
        ),
        roles=roles,
        feedback=record.get("feedback"),
        suggestion=record.get("suggestion"),
        refined=record.get("refined"),
        prediction=record.get("prediction", ""),
        iterations=tuple(record["iterations"]) if record.get("iterations") is not None else None,
        prompts=record.get("prompts", {}),
        stage_models=record.get("stage_models", {}),
        timings_ms=record.get("timings_ms", {}),
    )


def read_traces(path) -> tuple[list[PipelineTrace], list[FailedTrace]]:
    """Read a trace JSONL file into successful traces and failure stubs."""
    traces: list[PipelineTrace] = []
    failures: list[FailedTrace] = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            if record.get("failed"):
                failures.append(
                    FailedTrace(
                        instance_id=record["instance_id"],
                        dataset_id=record.get("dataset_id", ""),
                        mode=record["mode"],
                        stage=record["stage"],
                        error_type=record["error_type"],
                        message=record["message"],
                    )
                )
            else:
                traces.append(trace_from_record(record))
    return traces, failures


def run_batch(
    engine: Engine,
    instances,
    mode: str,
    self_refine: SelfRefineConfig | None = None,
    worker_cap: int = 1,
    sink=None,
):
    """Run a batch with bounded parallelism, preserving instance order.

    Each instance runs all of its stages on one worker. A stage error
    records a failure stub and the batch continues. Results are handed to
    ``sink`` one at a time in instance order (the single appender), so an
    interrupted batch keeps its completed prefix.
    """
    if worker_cap < 1:
        raise ValueError("worker_cap must be >= 1")

    def run_one(instance: TaskInstance):
        try:
            return engine.run(instance, mode, self_refine)
        except PipelineStageError as exc:
            return FailedTrace(
                instance_id=instance.id,
                dataset_id=engine.dataset_id,
                mode=mode,
                stage=exc.stage,
                error_type=type(exc.cause).__name__,
                message=str(exc.cause),
            )

    results = []
    with ThreadPoolExecutor(max_workers=worker_cap) as pool:
        futures = [pool.submit(run_one, instance) for instance in instances]
        try:
            for future in futures:
                result = future.result()
                results.append(result)
                if sink is not None:
                    sink(result)
        except KeyboardInterrupt:
            for future in futures:
                future.cancel()
            raise
    return results
