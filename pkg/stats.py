# -*- coding: utf-8 -*-
"""
Wilcoxon signed-rank test for paired final values.
- Zero differences are dropped, ties get average ranks.
- n <= 25: exact null distribution of the positive-rank sum (rank sums doubled to integers).
- n > 25: normal approximation with tie and continuity correction.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.stats import norm, rankdata

from errors import InvalidInput

ALTERNATIVES = ("two-sided", "less", "greater")
EXACT_MAX_N = 25
MIN_PAIRS = 6


def wilcoxon_signed_rank(a, b, alternative: str = "two-sided") -> float:
    """
    p-value for the paired samples a, b. "less" tests whether a tends to be
    smaller than b, "greater" whether it tends to be larger.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if alternative not in ALTERNATIVES:
        raise InvalidInput(f"alternative must be one of {ALTERNATIVES}, got {alternative!r}")
    if a.size != b.size:
        raise InvalidInput(f"paired samples differ in length: {a.size} vs {b.size}")
    if a.size < MIN_PAIRS:
        raise InvalidInput(f"need at least {MIN_PAIRS} pairs, got {a.size}")
    d = a - b
    d = d[d != 0]
    if d.size == 0:
        return 1.0
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    if d.size <= EXACT_MAX_N:
        return _exact_p(ranks, w_plus, alternative)
    return _normal_p(np.abs(d), w_plus, alternative)


def _exact_p(ranks: np.ndarray, w_plus: float, alternative: str) -> float:
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:-r]
        counts = counts + shifted
    probs = counts / counts.sum()
    t = int(round(2.0 * w_plus))
    p_upper = float(probs[t:].sum())
    p_lower = float(probs[:t + 1].sum())
    if alternative == "greater":
        return min(1.0, p_upper)
    if alternative == "less":
        return min(1.0, p_lower)
    return min(1.0, 2.0 * min(p_upper, p_lower))


def _normal_p(abs_d: np.ndarray, w_plus: float, alternative: str) -> float:
    n = abs_d.size
    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(abs_d, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts ** 3 - tie_counts)) / 48.0
    if var <= 0:
        return 1.0
    sd = math.sqrt(var)
    if alternative == "greater":
        return float(norm.sf((w_plus - mean - 0.5) / sd))
    if alternative == "less":
        return float(norm.cdf((w_plus - mean + 0.5) / sd))
    z = (abs(w_plus - mean) - 0.5) / sd
    return float(min(1.0, 2.0 * norm.sf(z)))
