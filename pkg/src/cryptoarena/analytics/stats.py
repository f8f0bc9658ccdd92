"""Paired sign-flip permutation test and percentile bootstrap."""

import logging

import numpy as np

log = logging.getLogger(__name__)

RESAMPLES = 2000
BOOTSTRAP_B = 10000
TIE_EPS = 1e-12


def pair_up(base: dict, tuned: dict) -> tuple[list, np.ndarray, np.ndarray]:
    """Align two ``{(challenge_id, rep): value}`` maps on their common keys."""
    keys = sorted(set(base) & set(tuned))
    dropped = len(base) + len(tuned) - 2 * len(keys)
    if dropped:
        log.warning("dropped %d unmatched match(es) while pairing", dropped)
    return keys, np.array([base[k] for k in keys], float), np.array([tuned[k] for k in keys], float)


def sign_flip_pvalue(diffs, resamples: int = RESAMPLES, seed=0) -> float:
    """Two-sided p = (1 + #{|T*| >= |T|}) / (1 + resamples), T = mean difference."""
    d = np.asarray(diffs, float)
    if d.size < 2:
        raise ValueError("need at least 2 pairs")
    if resamples < 1:
        raise ValueError("resamples must be positive")
    rng = np.random.default_rng(seed)
    t_obs = abs(d.mean())
    hits = 0
    chunk = max(1, 2_000_000 // d.size)
    for start in range(0, resamples, chunk):
        n = min(chunk, resamples - start)
        signs = rng.integers(0, 2, size=(n, d.size), dtype=np.int8) * 2 - 1
        t_star = np.abs((signs * d).mean(axis=1))
        hits += int(np.count_nonzero(t_star >= t_obs - TIE_EPS))
    return (1 + hits) / (1 + resamples)


def paired_permutation_test(base: dict, tuned: dict, resamples: int = RESAMPLES, seed=0) -> float:
    keys, b, t = pair_up(base, tuned)
    if len(keys) < 2:
        raise ValueError("need at least 2 paired matches")
    return sign_flip_pvalue(t - b, resamples, seed)


def bootstrap_ci_halfwidth(deltas, B: int = BOOTSTRAP_B, level: float = 0.95, seed=0) -> float:
    """Half the width of the percentile bootstrap interval for the mean delta."""
    d = np.asarray(deltas, float)
    if d.size < 2:
        raise ValueError("need at least 2 pairs")
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, d.size, size=(B, d.size))
    means = d[idx].mean(axis=1)
    alpha = (1 - level) / 2
    lo, hi = np.quantile(means, [alpha, 1 - alpha])
    return float(hi - lo) / 2
