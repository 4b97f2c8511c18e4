"""Dataset loading and normalization for the three task kinds.

Instances arrive as JSON lines. Field sets differ per task:

* ``commonsense_qa`` — id, question, options[], gold_label, gold_explanation
* ``nli`` — id, premise, hypothesis, gold_label, gold_explanation
* ``fact_check`` — id, claim, document_sentences[], relevance_mask[],
  gold_label, gold_explanation, language

Bilingual fact-check records may instead carry language-suffixed fields
(``claim_en``/``claim_de`` and so on); the loader's ``language`` argument
selects which set populates the instance.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import CrossRefineError

TASK_KINDS = ("commonsense_qa", "nli", "fact_check")
LANGUAGES = ("en", "de")

_REQUIRED_COMMON = ("id", "gold_label", "gold_explanation")
_REQUIRED_BY_KIND = {
    "commonsense_qa": ("question", "options"),
    "nli": ("premise", "hypothesis"),
    "fact_check": ("claim", "document_sentences"),
}

# Fields a bilingual fact-check record may carry with _en/_de suffixes.
_BILINGUAL_FIELDS = ("claim", "document_sentences", "relevance_mask", "gold_label", "gold_explanation")


class MalformedLine(CrossRefineError):
    def __init__(self, line_no: int, detail: str):
        super().__init__(f"line {line_no}: {detail}")
        self.line_no = line_no


class MissingField(CrossRefineError):
    def __init__(self, field: str, line_no: int):
        super().__init__(f"line {line_no}: missing field {field!r}")
        self.field = field
        self.line_no = line_no


class DuplicateId(CrossRefineError):
    def __init__(self, instance_id: str):
        super().__init__(f"duplicate instance id {instance_id!r}")
        self.instance_id = instance_id


class EmptyEvidence(CrossRefineError):
    """Relevance mask selects no sentence at all."""


class LengthMismatch(CrossRefineError):
    """Mask and sentence list lengths differ."""


@dataclass(frozen=True)
class TaskInstance:
    """One dataset example, validated for its task kind."""

    id: str
    task_kind: str
    gold_label: str
    gold_explanation: str
    language: str = "en"
    question: str | None = None
    options: tuple[str, ...] | None = None
    premise: str | None = None
    hypothesis: str | None = None
    claim: str | None = None
    document_sentences: tuple[str, ...] | None = None
    relevance_mask: tuple[bool, ...] | None = None

    def __post_init__(self) -> None:
        if self.task_kind not in TASK_KINDS:
            raise ValueError(f"unknown task_kind {self.task_kind!r}")
        if self.language not in LANGUAGES:
            raise ValueError(f"unknown language {self.language!r}")
        for field_name in _REQUIRED_BY_KIND[self.task_kind]:
            if getattr(self, field_name) in (None, "", ()):
                raise ValueError(f"task_kind {self.task_kind} requires field {field_name!r}")
        if self.relevance_mask is not None:
            if self.document_sentences is None or len(self.relevance_mask) != len(self.document_sentences):
                raise ValueError("relevance_mask length must equal document_sentences length")

    def to_record(self) -> dict:
        """Serializable dict using the on-disk field names."""
        record: dict = {"id": self.id}
        if self.task_kind == "commonsense_qa":
            record["question"] = self.question
            record["options"] = list(self.options or ())
        elif self.task_kind == "nli":
            record["premise"] = self.premise
            record["hypothesis"] = self.hypothesis
        else:
            record["claim"] = self.claim
            record["document_sentences"] = list(self.document_sentences or ())
            if self.relevance_mask is not None:
                record["relevance_mask"] = list(self.relevance_mask)
            record["language"] = self.language
        record["gold_label"] = self.gold_label
        record["gold_explanation"] = self.gold_explanation
        return record


def _resolve_bilingual(record: dict, language: str) -> dict:
    """Collapse ``field_en``/``field_de`` pairs onto the plain field names."""
    suffix = f"_{language}"
    if not any(f"{name}{suffix}" in record for name in _BILINGUAL_FIELDS):
        return record
    resolved = dict(record)
    for name in _BILINGUAL_FIELDS:
        if f"{name}{suffix}" in resolved:
            resolved[name] = resolved[f"{name}{suffix}"]
        for lang in LANGUAGES:
            resolved.pop(f"{name}_{lang}", None)
    resolved["language"] = language
    return resolved


def _instance_from_record(record: dict, schema_kind: str, line_no: int, language: str | None) -> TaskInstance:
    if schema_kind == "fact_check" and language is not None:
        record = _resolve_bilingual(record, language)
    for field_name in _REQUIRED_COMMON + _REQUIRED_BY_KIND[schema_kind]:
        if field_name not in record or record[field_name] is None:
            raise MissingField(field_name, line_no)
    kwargs: dict = {
        "id": str(record["id"]),
        "task_kind": schema_kind,
        "gold_label": str(record["gold_label"]),
        "gold_explanation": str(record["gold_explanation"]),
    }
    if schema_kind == "commonsense_qa":
        kwargs["question"] = record["question"]
        kwargs["options"] = tuple(record["options"])
    elif schema_kind == "nli":
        kwargs["premise"] = record["premise"]
        kwargs["hypothesis"] = record["hypothesis"]
    else:
        kwargs["claim"] = record["claim"]
        kwargs["document_sentences"] = tuple(record["document_sentences"])
        if record.get("relevance_mask") is not None:
            kwargs["relevance_mask"] = tuple(bool(b) for b in record["relevance_mask"])
        kwargs["language"] = record.get("language", language or "en")
    if language is not None and schema_kind != "fact_check":
        kwargs["language"] = language
    try:
        return TaskInstance(**kwargs)
    except ValueError as exc:
        raise MalformedLine(line_no, str(exc)) from exc


def load_instances(path, schema_kind: str, language: str | None = None) -> list[TaskInstance]:
    """Load and validate one JSONL dataset file, preserving line order.

    ``language`` selects the field set for bilingual fact-check records and
    tags instances of the other task kinds.
    """
    if schema_kind not in TASK_KINDS:
        raise ValueError(f"unknown schema_kind {schema_kind!r}")
    instances: list[TaskInstance] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedLine(line_no, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise MalformedLine(line_no, "expected a JSON object")
            instance = _instance_from_record(record, schema_kind, line_no, language)
            if instance.id in seen_ids:
                raise DuplicateId(instance.id)
            seen_ids.add(instance.id)
            instances.append(instance)
    return instances


def dump_instances(instances, path) -> None:
    """Write instances back out as JSONL (inverse of load_instances)."""
    with open(path, "w", encoding="utf-8") as handle:
        for instance in instances:
            handle.write(json.dumps(instance.to_record(), ensure_ascii=False) + "\n")


def focus_document(sentences, mask) -> str:
    """Keep only the sentences whose mask entry is true, joined by one space."""
    sentences = list(sentences)
    mask = list(mask)
    if len(sentences) != len(mask):
        raise LengthMismatch(f"{len(sentences)} sentences vs {len(mask)} mask entries")
    kept = [s for s, keep in zip(sentences, mask) if keep]
    if not kept:
        raise EmptyEvidence("relevance mask selects no sentences")
    return " ".join(kept)


def render_instance_input(instance: TaskInstance) -> str:
    """Serialize an instance into the labeled text block prompts embed.

    Deterministic: equal instances produce byte-equal text. Fact-check
    instances use the relevance-focused document when a mask is present.
    """
    lines: list[str] = []
    if instance.task_kind == "commonsense_qa":
        lines.append(f"Question: {instance.question}")
        lines.append("Options:")
        for option in instance.options or ():
            lines.append(f"- {option}")
    elif instance.task_kind == "nli":
        lines.append(f"Premise: {instance.premise}")
        lines.append(f"Hypothesis: {instance.hypothesis}")
    else:
        lines.append(f"Claim: {instance.claim}")
        sentences = instance.document_sentences or ()
        if instance.relevance_mask is not None:
            document = focus_document(sentences, instance.relevance_mask)
        else:
            document = " ".join(sentences)
        lines.append(f"Document: {document}")
    return "\n".join(lines)


__all__ = [
    "TASK_KINDS",
    "LANGUAGES",
    "TaskInstance",
    "load_instances",
    "dump_instances",
    "focus_document",
    "render_instance_input",
    "MalformedLine",
    "MissingField",
    "DuplicateId",
    "EmptyEvidence",
    "LengthMismatch",
]
