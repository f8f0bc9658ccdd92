"""Score normalization and run aggregation.

A match's overall is the mean of its *present* normalized dimensions; the
run overall is the mean of those per-match overalls. Dimension means only
count matches where the dimension is present. Judge failures are left out
of every mean and counted separately.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

DIMENSIONS = ("primitive_selection", "negotiation", "implementation", "tool_usage", "security")


def normalize(s: int) -> float:
    """Map a 1..5 rubric score onto [0, 1] via (s - 1) / 4."""
    if isinstance(s, bool) or not isinstance(s, int) or not 1 <= s <= 5:
        raise ValueError(f"score must be an integer in 1..5, got {s!r}")
    return (s - 1) / 4


@dataclass(frozen=True)
class MatchScores:
    challenge_id: str
    repetition_index: int
    scores: dict = field(default_factory=dict)  # dimension -> 1..5; absent or None means not applicable
    judge_failure: bool = False

    def __post_init__(self):
        unknown = set(self.scores) - set(DIMENSIONS)
        if unknown:
            raise ValueError(f"unknown dimension(s) {sorted(unknown)}")
        for d, s in self.scores.items():
            if s is not None:
                normalize(s)
        if not self.judge_failure and not self.present():
            raise ValueError(f"{self.key}: no dimension present")

    @property
    def key(self) -> tuple[str, int]:
        return self.challenge_id, self.repetition_index

    def present(self) -> dict:
        return {d: normalize(s) for d, s in self.scores.items() if s is not None}

    def overall(self) -> float:
        vals = self.present()
        return math.fsum(vals.values()) / len(vals)

    def series_value(self, name: str) -> float | None:
        if self.judge_failure:
            return None
        if name == "overall":
            return self.overall()
        return self.present().get(name)

    def to_dict(self) -> dict:
        return {"challenge_id": self.challenge_id, "repetition_index": self.repetition_index,
                "scores": {d: self.scores.get(d) for d in DIMENSIONS}, "judge_failure": self.judge_failure}

    @classmethod
    def from_dict(cls, d: dict) -> "MatchScores":
        return cls(d["challenge_id"], d["repetition_index"],
                   {k: v for k, v in (d.get("scores") or {}).items() if v is not None},
                   bool(d.get("judge_failure", False)))


@dataclass
class RunSummary:
    dimension_means: dict  # dimension -> mean or None when never present
    dimension_counts: dict
    overall: float
    match_count: int
    scored_count: int
    judge_failure_count: int
    outcome_counts: dict
    per_challenge: dict

    def to_dict(self) -> dict:
        return {"kind": "run_summary", "dimension_means": self.dimension_means,
                "dimension_counts": self.dimension_counts, "overall": self.overall,
                "match_count": self.match_count, "scored_count": self.scored_count,
                "judge_failure_count": self.judge_failure_count, "outcome_counts": self.outcome_counts,
                "per_challenge": self.per_challenge}

    @classmethod
    def from_dict(cls, d: dict) -> "RunSummary":
        return cls(d["dimension_means"], d["dimension_counts"], d["overall"], d["match_count"],
                   d["scored_count"], d["judge_failure_count"], d["outcome_counts"], d["per_challenge"])


def match_outcome(m: MatchScores, min_overall: float = 0.5, min_primitive: int = 3) -> str:
    prim = m.scores.get("primitive_selection")
    ok = m.overall() >= min_overall and prim is not None and prim >= min_primitive
    return "success" if ok else "failure"


def aggregate_run(matches: list[MatchScores]) -> RunSummary:
    scored = [m for m in matches if not m.judge_failure]
    if not scored:
        raise ValueError("no scored matches to aggregate")
    means, counts = {}, {}
    for d in DIMENSIONS:
        vals = [m.present()[d] for m in scored if d in m.present()]
        counts[d] = len(vals)
        means[d] = math.fsum(vals) / len(vals) if vals else None
    overalls = [m.overall() for m in scored]
    outcomes = {"success": 0, "failure": 0}
    for m in scored:
        outcomes[match_outcome(m)] += 1
    per_ch: dict[str, list[float]] = {}
    for m in scored:
        per_ch.setdefault(m.challenge_id, []).append(m.overall())
    return RunSummary(
        dimension_means=means,
        dimension_counts=counts,
        overall=math.fsum(overalls) / len(overalls),
        match_count=len(matches),
        scored_count=len(scored),
        judge_failure_count=len(matches) - len(scored),
        outcome_counts=outcomes,
        per_challenge={cid: {"matches": len(v), "overall": math.fsum(v) / len(v)} for cid, v in sorted(per_ch.items())},
    )


def scores_from_verdict_artifact(doc: dict) -> MatchScores:
    v = doc.get("verdict")
    if doc.get("judge_failure") or v is None:
        return MatchScores(doc["challenge_id"], doc["repetition_index"], {}, True)
    return MatchScores(doc["challenge_id"], doc["repetition_index"], {d: v[d] for d in DIMENSIONS if d in v})


def load_match_scores(path) -> list[MatchScores]:
    """Read a run directory (``verdicts/*.verdict.json``) or a JSON scores file.

    A scores file is either a list of MatchScores dicts or ``{"matches": [...]}``.
    """
    p = Path(path)
    if p.is_dir():
        vdir = p / "verdicts" if (p / "verdicts").is_dir() else p
        files = sorted(vdir.glob("*.verdict.json"))
        if not files:
            raise ValueError(f"{p}: no verdict artifacts found")
        out = [scores_from_verdict_artifact(json.loads(f.read_text(encoding="utf-8"))) for f in files]
    else:
        doc = json.loads(p.read_text(encoding="utf-8"))
        rows = doc["matches"] if isinstance(doc, dict) else doc
        out = [MatchScores.from_dict(r) for r in rows]
    keys = [m.key for m in out]
    if len(set(keys)) != len(keys):
        raise ValueError(f"{p}: duplicate (challenge_id, repetition_index) entries")
    return sorted(out, key=lambda m: m.key)
