"""Prompt templates and the demonstration store for in-context learning.

Templates are plain UTF-8 text with ``{slot}`` placeholders. Each pipeline
stage prescribes exactly which slots its template must carry; rendering
substitutes values verbatim in a single pass, so braces inside slot values
are never re-interpreted.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .analysis.text import tokenize
from .errors import CrossRefineError

STAGES = (
    "generate",
    "assess",
    "feedback",
    "suggest",
    "refine",
    "self_refine_feedback",
    "self_refine_refine",
)

# Slots each stage's template must contain (exactly these, no others).
STAGE_SLOTS: dict[str, frozenset[str]] = {
    "generate": frozenset({"input", "demonstrations"}),
    "assess": frozenset({"input", "initial_explanation"}),
    "feedback": frozenset({"input", "initial_explanation", "demonstrations"}),
    "suggest": frozenset({"input", "initial_explanation", "feedback", "demonstrations"}),
    "refine": frozenset(
        {"input", "initial_explanation", "feedback", "suggestion", "demonstrations"}
    ),
    "self_refine_feedback": frozenset({"input", "initial_explanation"}),
    "self_refine_refine": frozenset({"input", "initial_explanation", "feedback"}),
}

# Few-shot count bounds: wide for initial generation, narrow for the
# critic stages and refinement, where prompts already carry more context.
GENERATE_SHOT_BOUNDS = (3, 20)
REFINE_SHOT_BOUNDS = (3, 10)

_SLOT_PATTERN = re.compile(r"\{([a-z_]+)\}")


class MissingSlot(CrossRefineError):
    def __init__(self, name: str):
        super().__init__(f"missing slot {name!r}")
        self.name = name


class UnknownSlot(CrossRefineError):
    def __init__(self, name: str):
        super().__init__(f"unknown slot {name!r}")
        self.name = name


class DuplicateId(CrossRefineError):
    def __init__(self, demo_id: str):
        super().__init__(f"duplicate demonstration id {demo_id!r}")
        self.demo_id = demo_id


class EmptyStore(CrossRefineError):
    """A demonstration store must contain at least one entry."""


class MissingField(CrossRefineError):
    def __init__(self, field: str, line_no: int):
        super().__init__(f"line {line_no}: missing field {field!r}")
        self.field = field
        self.line_no = line_no


class BudgetTooSmall(CrossRefineError):
    """Even the minimum shot count does not fit the token budget."""


@dataclass(frozen=True)
class PromptTemplate:
    """Template text for one stage, pre-split into literal/slot segments."""

    stage: str
    body: str
    language: str = "en"

    def __post_init__(self) -> None:
        if self.stage not in STAGE_SLOTS:
            raise ValueError(f"unknown stage {self.stage!r}")
        found = set(_SLOT_PATTERN.findall(self.body))
        required = STAGE_SLOTS[self.stage]
        for name in sorted(found - required):
            raise UnknownSlot(name)
        for name in sorted(required - found):
            raise MissingSlot(name)

    @property
    def slots(self) -> frozenset[str]:
        return STAGE_SLOTS[self.stage]

    def segments(self) -> list[tuple[str, str | None]]:
        """Body split into (literal, slot-or-None) pieces, in order."""
        pieces: list[tuple[str, str | None]] = []
        pos = 0
        for match in _SLOT_PATTERN.finditer(self.body):
            pieces.append((self.body[pos : match.start()], match.group(1)))
            pos = match.end()
        pieces.append((self.body[pos:], None))
        return pieces


_DEMO_TEXT_FIELDS = (
    "input",
    "initial_explanation",
    "feedback",
    "suggestion",
    "refined_explanation",
)


@dataclass(frozen=True)
class Demonstration:
    """One worked example: input, first try, critique, suggestion, rewrite."""

    id: str
    input: str
    initial_explanation: str
    feedback: str
    suggestion: str
    refined_explanation: str
    needs_further_refinement: bool
    token_count: int

    def __post_init__(self) -> None:
        for name in _DEMO_TEXT_FIELDS:
            if not getattr(self, name):
                raise ValueError(f"demonstration field {name!r} must be non-empty")

    @staticmethod
    def count_tokens(fields: dict) -> int:
        return len(tokenize(" ".join(fields[name] for name in _DEMO_TEXT_FIELDS)))


@dataclass(frozen=True)
class DemoStore:
    entries: tuple[Demonstration, ...]
    task_kind: str | None = None

    def __post_init__(self) -> None:
        if not self.entries:
            raise EmptyStore("demonstration store is empty")
        seen: set[str] = set()
        for entry in self.entries:
            if entry.id in seen:
                raise DuplicateId(entry.id)
            seen.add(entry.id)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def mean_tokens(self) -> float:
        return sum(e.token_count for e in self.entries) / len(self.entries)


def load_demo_store(path, task_kind: str | None = None) -> DemoStore:
    """Load a JSONL demonstration store; token counts are recomputed, never
    trusted from disk."""
    entries: list[Demonstration] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            for name in ("id",) + _DEMO_TEXT_FIELDS:
                if name not in record or record[name] in (None, ""):
                    raise MissingField(name, line_no)
            entries.append(
                Demonstration(
                    id=str(record["id"]),
                    input=record["input"],
                    initial_explanation=record["initial_explanation"],
                    feedback=record["feedback"],
                    suggestion=record["suggestion"],
                    refined_explanation=record["refined_explanation"],
                    needs_further_refinement=bool(record.get("needs_further_refinement", True)),
                    token_count=Demonstration.count_tokens(record),
                )
            )
    return DemoStore(entries=tuple(entries), task_kind=task_kind)


def shot_bounds(stage: str) -> tuple[int, int]:
    if stage not in STAGE_SLOTS:
        raise ValueError(f"unknown stage {stage!r}")
    return GENERATE_SHOT_BOUNDS if stage == "generate" else REFINE_SHOT_BOUNDS


def select_demonstrations(
    store: DemoStore,
    stage: str,
    input_tokens: int,
    budget_tokens: int,
    strict: bool = False,
) -> list[Demonstration]:
    """Pick the first k store entries, with k shrinking as the input grows.

    k = clamp(floor((budget - input) / mean demo tokens), lo, hi), where
    (lo, hi) is (3, 20) for generation and (3, 10) everywhere else; k never
    exceeds the store size. In strict mode, raise BudgetTooSmall when even
    lo demonstrations would overflow the budget.
    """
    if budget_tokens <= input_tokens:
        raise ValueError("budget_tokens must exceed input_tokens")
    lo, hi = shot_bounds(stage)
    mean = store.mean_tokens
    if strict and input_tokens + lo * mean > budget_tokens:
        raise BudgetTooSmall(
            f"{lo} demonstrations (~{lo * mean:.0f} tokens) do not fit "
            f"budget {budget_tokens} with input {input_tokens}"
        )
    k = int((budget_tokens - input_tokens) // mean)
    k = max(lo, min(hi, k))
    k = min(k, len(store))
    return list(store.entries[:k])


# Field labels used when serializing demonstrations into a prompt. Each
# stage shows exactly the fields it conditions on plus its target field.
_DEMO_LINES_BY_STAGE: dict[str, tuple[tuple[str, str], ...]] = {
    "generate": (("Input", "input"), ("Explanation", "refined_explanation")),
    "assess": (
        ("Input", "input"),
        ("Initial explanation", "initial_explanation"),
        ("Needs improvement", "needs_further_refinement"),
    ),
    "feedback": (
        ("Input", "input"),
        ("Initial explanation", "initial_explanation"),
        ("Feedback", "feedback"),
    ),
    "suggest": (
        ("Input", "input"),
        ("Initial explanation", "initial_explanation"),
        ("Feedback", "feedback"),
        ("Suggested explanation", "suggestion"),
    ),
    "refine": (
        ("Input", "input"),
        ("Initial explanation", "initial_explanation"),
        ("Feedback", "feedback"),
        ("Suggested explanation", "suggestion"),
        ("Refined explanation", "refined_explanation"),
    ),
    "self_refine_feedback": (
        ("Input", "input"),
        ("Explanation", "initial_explanation"),
        ("Feedback", "feedback"),
    ),
    "self_refine_refine": (
        ("Input", "input"),
        ("Explanation", "initial_explanation"),
        ("Feedback", "feedback"),
        ("Improved explanation", "refined_explanation"),
    ),
}


def render_demonstrations(stage: str, demonstrations) -> str:
    """Serialize demonstrations for a stage, in the order given."""
    blocks = []
    for demo in demonstrations:
        lines = []
        for label, field_name in _DEMO_LINES_BY_STAGE[stage]:
            value = getattr(demo, field_name)
            if field_name == "needs_further_refinement":
                value = "Yes" if value else "No"
            lines.append(f"{label}: {value}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def render_prompt(
    template: PromptTemplate,
    slot_values: dict[str, str],
    demonstrations=(),
    allow_empty_demonstrations: bool = False,
) -> str:
    """Fill a template. Slot values are inserted verbatim; demonstrations are
    serialized in the order given into the ``{demonstrations}`` slot."""
    for name in slot_values:
        if name not in template.slots or name == "demonstrations":
            raise UnknownSlot(name)
    for name in sorted(template.slots - {"demonstrations"}):
        if name not in slot_values:
            raise MissingSlot(name)
    demos = list(demonstrations)
    if "demonstrations" in template.slots and not demos and not allow_empty_demonstrations:
        raise MissingSlot("demonstrations")

    demo_block = render_demonstrations(template.stage, demos)
    parts = []
    for literal, slot in template.segments():
        parts.append(literal)
        if slot is None:
            continue
        parts.append(demo_block if slot == "demonstrations" else slot_values[slot])
    return "".join(parts)


def load_template(path, stage: str, language: str = "en") -> PromptTemplate:
    body = Path(path).read_text(encoding="utf-8")
    return PromptTemplate(stage=stage, body=body, language=language)


def load_templates(directory=None, language: str = "en") -> dict[str, PromptTemplate]:
    """Load one template file per stage (``<stage>.txt``).

    Without a directory, the templates bundled with the package for the
    given language are used.
    """
    templates: dict[str, PromptTemplate] = {}
    if directory is None:
        root = resources.files("crossrefine").joinpath("data", "templates", language)
        for stage in STAGES:
            body = root.joinpath(f"{stage}.txt").read_text(encoding="utf-8")
            templates[stage] = PromptTemplate(stage=stage, body=body, language=language)
        return templates
    directory = Path(directory)
    for stage in STAGES:
        templates[stage] = load_template(directory / f"{stage}.txt", stage, language)
    return templates
