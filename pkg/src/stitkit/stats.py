"""Small statistical helpers for Monte Carlo verification."""

from __future__ import annotations

import numpy as np
from scipy import stats as _st


def binomial_se(p: float, n: int) -> float:
    """Standard error of an empirical proportion."""
    return float(np.sqrt(max(p * (1.0 - p), 0.0) / n))


def proportion_z(p1: float, n1: int, p2: float, n2: int) -> float:
    """Two-sample z statistic for equality of proportions (pooled)."""
    pool = (p1 * n1 + p2 * n2) / (n1 + n2)
    var = pool * (1.0 - pool) * (1.0 / n1 + 1.0 / n2)
    if var <= 0.0:
        return 0.0
    return float((p1 - p2) / np.sqrt(var))


def bonferroni_z_critical(family_level: float, tests: int) -> float:
    """Two-sided critical value at the Bonferroni-corrected level."""
    return float(_st.norm.ppf(1.0 - family_level / tests / 2.0))


def median_of_means(values: np.ndarray, blocks: int) -> tuple[float, float]:
    """Median of block means with an estimated standard error.

    The standard error scales the spread of the block means by
    sqrt(pi / 2), the asymptotic efficiency factor of the median under
    normal block means.
    """
    values = np.asarray(values, dtype=float)
    usable = (values.size // blocks) * blocks
    means = values[:usable].reshape(blocks, -1).mean(axis=1)
    est = float(np.median(means))
    se = float(np.sqrt(np.pi / 2.0) * means.std(ddof=1) / np.sqrt(blocks))
    return est, se


def ks_uniform_pvalue(samples, low: float, high: float) -> float:
    """Kolmogorov-Smirnov p-value against Uniform[low, high]."""
    return float(_st.kstest(np.asarray(samples), "uniform", args=(low, high - low)).pvalue)


def chi2_pvalue(observed, expected) -> float:
    """Goodness-of-fit p-value for observed vs expected category counts."""
    return float(_st.chisquare(np.asarray(observed), np.asarray(expected)).pvalue)
