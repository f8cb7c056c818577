"""Small statistics helpers for check-mode tests and verification."""

from __future__ import annotations

import math
from typing import Dict, Sequence, Tuple

# Chi-square critical values at significance 0.001, by degrees of freedom.
CHI2_CRIT_001: Dict[int, float] = {
    1: 10.828, 2: 13.816, 3: 16.266, 4: 18.467, 5: 20.515,
    6: 22.458, 7: 24.322, 8: 26.124, 9: 27.877, 10: 29.588,
}


def chi2_critical(dof: int, alpha: float = 0.001) -> float:
    if alpha != 0.001:
        raise ValueError("only the 0.001 significance level is tabulated")
    try:
        return CHI2_CRIT_001[dof]
    except KeyError:
        raise ValueError(f"no tabulated critical value for dof={dof}") from None


def chi_square_uniform(counts: Sequence[int]) -> Tuple[float, int]:
    """Goodness-of-fit statistic against the uniform distribution.

    Returns (statistic, degrees of freedom).
    """
    total = sum(counts)
    if total == 0 or len(counts) < 2:
        raise ValueError("need at least two categories with data")
    expected = total / len(counts)
    stat = sum((c - expected) ** 2 / expected for c in counts)
    return stat, len(counts) - 1


def chi_square_homogeneity(table: Sequence[Sequence[int]]) -> Tuple[float, int]:
    """Homogeneity statistic for an r x c contingency table.

    Returns (statistic, degrees of freedom).
    """
    rows = len(table)
    cols = len(table[0])
    row_tot = [sum(row) for row in table]
    col_tot = [sum(table[r][c] for r in range(rows)) for c in range(cols)]
    total = sum(row_tot)
    if total == 0:
        raise ValueError("empty table")
    stat = 0.0
    for r in range(rows):
        for c in range(cols):
            expected = row_tot[r] * col_tot[c] / total
            if expected > 0:
                diff = table[r][c] - expected
                stat += diff * diff / expected
    return stat, (rows - 1) * (cols - 1)


def binomial_stderr(p: float, n: int) -> float:
    """Standard error of a frequency estimate of probability ``p`` over ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.sqrt(max(0.0, p * (1.0 - p)) / n)


def within_sigma(observed_freq: float, p: float, n: int, sigmas: float = 3.0) -> bool:
    """Whether an observed frequency sits within ``sigmas`` of ``p``."""
    return abs(observed_freq - p) <= sigmas * binomial_stderr(p, n)
