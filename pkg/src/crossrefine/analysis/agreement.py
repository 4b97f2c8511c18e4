"""Human-rating aggregation and Krippendorff's alpha.

Ratings arrive as raters-by-items matrices, one per evaluation dimension.
Missing cells are allowed and excluded pairwise, the standard treatment.
Alpha is computed from the coincidence matrix with a nominal, ordinal, or
interval difference function.
"""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..errors import CrossRefineError

DIMENSIONS = ("faithfulness_binary", "coherence_likert5", "insightfulness_likert5")
LEVELS = ("nominal", "ordinal", "interval")

_VALUE_RANGE = {
    "faithfulness_binary": (0, 1),
    "coherence_likert5": (1, 5),
    "insightfulness_likert5": (1, 5),
}

# Conventional difference-function choice per dimension: nominal for the
# binary scale, ordinal for the Likert scales.
DEFAULT_LEVEL = {
    "faithfulness_binary": "nominal",
    "coherence_likert5": "ordinal",
    "insightfulness_likert5": "ordinal",
}


class AllMissing(CrossRefineError):
    def __init__(self, dimension: str):
        super().__init__(f"dimension {dimension!r} has no ratings at all")
        self.dimension = dimension


class DegenerateData(CrossRefineError):
    """Too little pairable data (or zero expected disagreement with
    imperfect agreement) to compute a defined alpha."""


@dataclass(frozen=True)
class RatingMatrix:
    """Ratings for one dimension: rows are raters, columns are items."""

    dimension: str
    values: tuple[tuple[int | None, ...], ...]

    def __post_init__(self) -> None:
        if self.dimension not in _VALUE_RANGE:
            raise ValueError(f"unknown dimension {self.dimension!r}")
        if len(self.values) < 2:
            raise ValueError("need at least 2 raters")
        widths = {len(row) for row in self.values}
        if len(widths) != 1:
            raise ValueError("all rater rows must cover the same items")
        lo, hi = _VALUE_RANGE[self.dimension]
        for row in self.values:
            for value in row:
                if value is not None and not (lo <= int(value) <= hi):
                    raise ValueError(
                        f"value {value} outside [{lo}, {hi}] for {self.dimension}"
                    )

    @property
    def n_raters(self) -> int:
        return len(self.values)

    @property
    def n_items(self) -> int:
        return len(self.values[0])


def aggregate_ratings(matrix: RatingMatrix) -> float:
    """Mean over all present cells of one dimension."""
    present = [v for row in matrix.values for v in row if v is not None]
    if not present:
        raise AllMissing(matrix.dimension)
    return sum(present) / len(present)


def _pairable_units(values) -> list[list]:
    """Item columns with at least two ratings, as value lists."""
    n_items = len(values[0])
    units = []
    for j in range(n_items):
        column = [row[j] for row in values if row[j] is not None]
        if len(column) >= 2:
            units.append(column)
    return units


def _difference_matrix(categories: list, marginals: np.ndarray, level: str) -> np.ndarray:
    size = len(categories)
    if level == "nominal":
        return 1.0 - np.eye(size)
    values = np.asarray([float(c) for c in categories])
    if level == "interval":
        return (values[:, None] - values[None, :]) ** 2
    if level == "ordinal":
        # Categories are sorted; the distance between rank c and rank k is
        # the total coincidence mass lying between them, counting the two
        # endpoints at half weight.
        cumulative = np.concatenate([[0.0], np.cumsum(marginals)])
        delta = np.zeros((size, size))
        for c in range(size):
            for k in range(size):
                lo, hi = min(c, k), max(c, k)
                between = cumulative[hi + 1] - cumulative[lo]
                delta[c, k] = (between - (marginals[c] + marginals[k]) / 2.0) ** 2
        return delta
    raise ValueError(f"unknown level {level!r}")


def krippendorff_alpha(matrix, level: str = "nominal") -> float:
    """Chance-corrected agreement over a raters-by-items matrix.

    Accepts a RatingMatrix or a raw sequence of rater rows (None marks a
    missing cell). Perfect agreement yields exactly 1.0. Raises
    DegenerateData when fewer than two items are pairable or the expected
    disagreement vanishes while observed disagreement does not.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    values = matrix.values if isinstance(matrix, RatingMatrix) else tuple(matrix)
    units = _pairable_units(values)
    if len(units) < 2:
        raise DegenerateData(f"need >= 2 items with >= 2 ratings, got {len(units)}")

    categories = sorted({value for unit in units for value in unit})
    index = {category: i for i, category in enumerate(categories)}
    size = len(categories)

    coincidence = np.zeros((size, size))
    for unit in units:
        m_u = len(unit)
        counts = Counter(unit)
        for c, n_c in counts.items():
            for k, n_k in counts.items():
                pairs = n_c * n_k - (n_c if c == k else 0)
                coincidence[index[c], index[k]] += pairs / (m_u - 1)

    marginals = coincidence.sum(axis=1)
    total = marginals.sum()
    delta = _difference_matrix(categories, marginals, level)

    observed = float((coincidence * delta).sum()) / total
    expected = float((np.outer(marginals, marginals) * delta).sum()) / (total * (total - 1.0))
    if expected == 0.0:
        if observed == 0.0:
            return 1.0
        raise DegenerateData("expected disagreement is zero with imperfect agreement")
    if observed == 0.0:
        return 1.0
    return 1.0 - observed / expected


def _normalize_unit_interval(matrix: RatingMatrix) -> list[list[float | None]]:
    lo, hi = _VALUE_RANGE[matrix.dimension]
    span = float(hi - lo)
    return [
        [None if v is None else (float(v) - lo) / span for v in row] for row in matrix.values
    ]


def pooled_alpha(matrices) -> float:
    """Alpha pooled across dimensions.

    Each dimension is normalized to [0, 1], the item columns are
    concatenated, and interval-level alpha is computed over the result.
    """
    matrices = list(matrices)
    if not matrices:
        raise ValueError("no matrices to pool")
    n_raters = {m.n_raters for m in matrices}
    if len(n_raters) != 1:
        raise ValueError("all matrices must share the same rater count")
    rows: list[list[float | None]] = [[] for _ in range(n_raters.pop())]
    for matrix in matrices:
        for i, row in enumerate(_normalize_unit_interval(matrix)):
            rows[i].extend(row)
    return krippendorff_alpha(tuple(tuple(row) for row in rows), level="interval")


def load_ratings_csv(path) -> dict[str, RatingMatrix]:
    """Read (rater_id, item_id, dimension, value) rows into per-dimension matrices."""
    cells: dict[str, dict[tuple[str, str], int]] = {}
    raters: list[str] = []
    items: list[str] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"rater_id", "item_id", "dimension", "value"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"ratings CSV needs columns {sorted(required)}")
        for row in reader:
            dimension = row["dimension"]
            if dimension not in _VALUE_RANGE:
                raise ValueError(f"unknown dimension {dimension!r}")
            if row["rater_id"] not in raters:
                raters.append(row["rater_id"])
            if row["item_id"] not in items:
                items.append(row["item_id"])
            cells.setdefault(dimension, {})[(row["rater_id"], row["item_id"])] = int(row["value"])
    matrices = {}
    for dimension, dim_cells in cells.items():
        values = tuple(
            tuple(dim_cells.get((rater, item)) for item in items) for rater in raters
        )
        matrices[dimension] = RatingMatrix(dimension=dimension, values=values)
    return matrices
