from .compare import SERIES, ComparisonReport, ComparisonRow, compare_runs
from .report import FORMATS, Leaderboard, load_report, render_report
from .scoring import (
    DIMENSIONS, MatchScores, RunSummary, aggregate_run, load_match_scores, match_outcome, normalize,
    scores_from_verdict_artifact,
)
from .stats import bootstrap_ci_halfwidth, paired_permutation_test, sign_flip_pvalue

__all__ = [
    "DIMENSIONS", "FORMATS", "SERIES", "ComparisonReport", "ComparisonRow", "Leaderboard", "MatchScores",
    "RunSummary", "aggregate_run", "bootstrap_ci_halfwidth", "compare_runs", "load_match_scores",
    "load_report", "match_outcome", "normalize", "paired_permutation_test", "render_report",
    "scores_from_verdict_artifact", "sign_flip_pvalue",
]
