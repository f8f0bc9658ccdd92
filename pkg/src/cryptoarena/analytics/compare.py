"""Tuned-vs-base comparison over a shared match grid."""

import logging
from dataclasses import dataclass, field

import numpy as np

from .scoring import DIMENSIONS, MatchScores, aggregate_run
from .stats import BOOTSTRAP_B, RESAMPLES, bootstrap_ci_halfwidth, pair_up, sign_flip_pvalue

log = logging.getLogger(__name__)

SERIES = ("overall",) + DIMENSIONS


@dataclass
class ComparisonRow:
    series: str
    base: float
    tuned: float
    delta: float
    p_value: float
    ci_halfwidth: float
    n_pairs: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ComparisonReport:
    base_label: str
    tuned_label: str
    rows: list[ComparisonRow]
    pairing: dict = field(default_factory=dict)

    def row(self, series: str) -> ComparisonRow:
        return next(r for r in self.rows if r.series == series)

    def to_dict(self) -> dict:
        return {"kind": "comparison", "base_label": self.base_label, "tuned_label": self.tuned_label,
                "rows": [r.to_dict() for r in self.rows], "pairing": self.pairing}

    @classmethod
    def from_dict(cls, d: dict) -> "ComparisonReport":
        return cls(d["base_label"], d["tuned_label"], [ComparisonRow(**r) for r in d["rows"]], d["pairing"])


def _series(matches: list[MatchScores], name: str) -> dict:
    out = {}
    for m in matches:
        v = m.series_value(name)
        if v is not None:
            out[m.key] = v
    return out


def compare_runs(base: list[MatchScores], tuned: list[MatchScores], resamples: int = RESAMPLES,
                 B: int = BOOTSTRAP_B, seed: int = 0, base_label: str = "base",
                 tuned_label: str = "tuned") -> ComparisonReport:
    """Means come from each full run; p and CI use the paired matches only.

    Every series gets its own child seed from ``SeedSequence(seed)`` so
    that adding or reordering series never shifts another's stream.
    """
    base_keys = {m.key for m in base}
    tuned_keys = {m.key for m in tuned}
    shared = base_keys & tuned_keys
    if not shared:
        raise ValueError("base and tuned runs share no (challenge_id, repetition_index) pairs")
    if base_keys != tuned_keys:
        log.warning("runs differ on %d match key(s); comparing the %d shared ones",
                    len(base_keys ^ tuned_keys), len(shared))
    sb, st = aggregate_run(base), aggregate_run(tuned)
    children = np.random.SeedSequence(seed).spawn(len(SERIES))
    rows = []
    for name, child in zip(SERIES, children):
        b_mean = sb.overall if name == "overall" else sb.dimension_means[name]
        t_mean = st.overall if name == "overall" else st.dimension_means[name]
        if b_mean is None or t_mean is None:
            continue
        keys, b, t = pair_up(_series(base, name), _series(tuned, name))
        if len(keys) < 2:
            raise ValueError(f"{name}: need at least 2 paired matches, got {len(keys)}")
        perm_seed, boot_seed = child.spawn(2)
        d = t - b
        rows.append(ComparisonRow(
            series=name, base=b_mean, tuned=t_mean, delta=t_mean - b_mean,
            p_value=sign_flip_pvalue(d, resamples, np.random.default_rng(perm_seed)),
            ci_halfwidth=bootstrap_ci_halfwidth(d, B, seed=np.random.default_rng(boot_seed)),
            n_pairs=len(keys),
        ))
    pairing = {"key": ["challenge_id", "repetition_index"], "shared": len(shared),
               "base_only": len(base_keys - tuned_keys), "tuned_only": len(tuned_keys - base_keys),
               "resamples": resamples, "bootstrap_B": B, "seed": seed}
    return ComparisonReport(base_label, tuned_label, rows, pairing)
