"""Independent brute-force oracles used to freeze expected test values.

Deliberately written with explicit loops and no shared code with the
package implementations they check.
"""
from __future__ import annotations

import math


def alpha_bruteforce(rows, level: str) -> float | None:
    """Krippendorff's alpha by direct pair enumeration.

    ``rows`` is a raters-by-items matrix with None for missing cells.
    Returns None for degenerate inputs (fewer than two pairable items, or
    zero expected disagreement).
    """
    n_items = len(rows[0])
    units = []
    for j in range(n_items):
        unit = [rows[i][j] for i in range(len(rows)) if rows[i][j] is not None]
        if len(unit) >= 2:
            units.append(unit)
    if len(units) < 2:
        return None

    pooled = [v for unit in units for v in unit]
    categories = sorted(set(pooled))

    # coincidence marginal of each category: pairable occurrences
    marginal = {}
    for category in categories:
        marginal[category] = 0.0
        for unit in units:
            marginal[category] += sum(1 for v in unit if v == category)

    def delta(a, b) -> float:
        if a == b:
            return 0.0
        if level == "nominal":
            return 1.0
        if level == "interval":
            return (float(a) - float(b)) ** 2
        if level == "ordinal":
            lo, hi = (a, b) if a <= b else (b, a)
            between = 0.0
            for category in categories:
                if lo <= category <= hi:
                    between += marginal[category]
            return (between - (marginal[a] + marginal[b]) / 2.0) ** 2
        raise ValueError(level)

    # observed disagreement: ordered pairs within each unit, weighted
    numerator = 0.0
    total = 0.0
    for unit in units:
        m_u = len(unit)
        total += m_u
        for i in range(m_u):
            for j in range(m_u):
                if i != j:
                    numerator += delta(unit[i], unit[j]) / (m_u - 1)
    observed = numerator / total

    # expected disagreement: all ordered pairs of pairable values
    expected_sum = 0.0
    for a in categories:
        for b in categories:
            if a == b:
                continue
            expected_sum += marginal[a] * marginal[b] * delta(a, b)
    expected = expected_sum / (total * (total - 1.0))

    if expected == 0.0:
        return 1.0 if observed == 0.0 else None
    if observed == 0.0:
        return 1.0
    return 1.0 - observed / expected


def cosine_bruteforce(a, b) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    return dot / (na * nb)
