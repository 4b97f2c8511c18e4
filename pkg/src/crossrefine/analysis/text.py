"""Token-level text statistics and the explanation quality filters.

The tokenizer used throughout the package lives here: whitespace split,
then leading/trailing punctuation stripped from each token, empty results
dropped. All filter thresholds are interpreted against this tokenizer.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field

from ..errors import CrossRefineError

# ASCII punctuation plus the quote/dash/ellipsis characters common in
# German and typographically normalized English text.
_PUNCTUATION = string.punctuation + "„“”‘’‚–—…«»"


class TooShort(CrossRefineError):
    """Text has too few tokens for the requested statistic."""


class EmptyText(CrossRefineError):
    """Text has no tokens at all."""


def tokenize(text: str) -> list[str]:
    """Split on whitespace and strip surrounding punctuation from each token.

    Tokens that consist only of punctuation are dropped.
    """
    tokens = []
    for raw in text.split():
        token = raw.strip(_PUNCTUATION)
        if token:
            tokens.append(token)
    return tokens


def bigram_ratio(text: str) -> float:
    """Distinct token bigrams divided by total token bigrams.

    1.0 means no bigram repeats; the value drops as adjacent token pairs
    recur. Raises TooShort for texts with fewer than two tokens.
    """
    tokens = tokenize(text)
    if len(tokens) < 2:
        raise TooShort(f"need at least 2 tokens for bigram ratio, got {len(tokens)}")
    bigrams = list(zip(tokens, tokens[1:]))
    return len(set(bigrams)) / len(bigrams)


def digit_ratio(text: str) -> float:
    """Fraction of tokens that consist only of digits."""
    tokens = tokenize(text)
    if not tokens:
        raise EmptyText("no tokens in text")
    digit_tokens = sum(1 for t in tokens if t.isdigit())
    return digit_tokens / len(tokens)


@dataclass(frozen=True)
class FilterCriteria:
    """Thresholds for keeping a generated explanation.

    Defaults: 20-50 tokens, bigram ratio >= 0.8, digit ratio <= 0.3,
    question/explanation embedding similarity >= 0.6.
    """

    min_tokens: int = 20
    max_tokens: int = 50
    min_bigram_ratio: float = 0.8
    max_digit_ratio: float = 0.3
    min_question_similarity: float = 0.6

    def __post_init__(self) -> None:
        if not 0 < self.min_tokens <= self.max_tokens:
            raise ValueError("need 0 < min_tokens <= max_tokens")
        for name in ("min_bigram_ratio", "max_digit_ratio"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class CriterionCheck:
    """Observed value and verdict for one filter criterion."""

    name: str
    value: float | None
    passed: bool


@dataclass(frozen=True)
class FilterVerdict:
    """Overall pass/fail plus the per-criterion detail."""

    passed: bool
    checks: dict[str, CriterionCheck] = field(default_factory=dict)

    def failed_criteria(self) -> list[str]:
        return [name for name, check in self.checks.items() if not check.passed]


def passes_filters(question: str, explanation: str, criteria: FilterCriteria, embedder) -> FilterVerdict:
    """Run all four quality criteria against an explanation.

    ``embedder`` is anything with an ``embed(text) -> EmbeddingVector``
    method; its vectors feed the question-similarity criterion.
    EmptyText/ZeroVector errors from the embedding step propagate.
    """
    from ..metrics import cosine_similarity

    tokens = tokenize(explanation)
    length_check = CriterionCheck(
        name="length",
        value=float(len(tokens)),
        passed=criteria.min_tokens <= len(tokens) <= criteria.max_tokens,
    )

    if len(tokens) >= 2:
        bigram_value = bigram_ratio(explanation)
        bigram_check = CriterionCheck("bigram", bigram_value, bigram_value >= criteria.min_bigram_ratio)
    else:
        # Too short to demonstrate diversity; the length criterion already fails.
        bigram_check = CriterionCheck("bigram", None, False)

    if tokens:
        digit_value = digit_ratio(explanation)
        digit_check = CriterionCheck("digit", digit_value, digit_value <= criteria.max_digit_ratio)
    else:
        digit_check = CriterionCheck("digit", None, False)

    similarity = cosine_similarity(embedder.embed(question), embedder.embed(explanation))
    similarity_check = CriterionCheck(
        "similarity", similarity, similarity >= criteria.min_question_similarity
    )

    checks = {
        "length": length_check,
        "bigram": bigram_check,
        "digit": digit_check,
        "similarity": similarity_check,
    }
    return FilterVerdict(passed=all(c.passed for c in checks.values()), checks=checks)
