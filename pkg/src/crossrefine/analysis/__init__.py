"""Analysis toolkit: text statistics and filters, language identification,
rating aggregation with Krippendorff's alpha, and similarity reports."""

from .text import (
    CriterionCheck,
    EmptyText,
    FilterCriteria,
    FilterVerdict,
    TooShort,
    bigram_ratio,
    digit_ratio,
    passes_filters,
    tokenize,
)
from .langid import (
    LanguageDistribution,
    LanguageProfile,
    bundled_profiles,
    char_trigrams,
    detect_language,
    language_distribution,
    load_labeled_corpus,
)
from .agreement import (
    DIMENSIONS,
    AllMissing,
    DegenerateData,
    RatingMatrix,
    aggregate_ratings,
    krippendorff_alpha,
    load_ratings_csv,
    pooled_alpha,
)
from .similarity import MissingStage, SimilarityPair, similarity_report

__all__ = [
    "CriterionCheck",
    "EmptyText",
    "FilterCriteria",
    "FilterVerdict",
    "TooShort",
    "bigram_ratio",
    "digit_ratio",
    "passes_filters",
    "tokenize",
    "LanguageDistribution",
    "LanguageProfile",
    "bundled_profiles",
    "char_trigrams",
    "detect_language",
    "language_distribution",
    "load_labeled_corpus",
    "DIMENSIONS",
    "AllMissing",
    "DegenerateData",
    "RatingMatrix",
    "aggregate_ratings",
    "krippendorff_alpha",
    "load_ratings_csv",
    "pooled_alpha",
    "MissingStage",
    "SimilarityPair",
    "similarity_report",
]
