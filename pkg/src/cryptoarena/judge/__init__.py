"""Judging scaffold: validators, judge input, strict verdicts and the capped judge loop."""

from .scaffold import (
    JUDGE_RETRIES, JUDGE_TOOL_CAP, RUBRIC_VERSION, JudgeInput, JudgeResult, assemble_judge_input, judge_match,
    judge_seed, judge_transcript, outcome_label, verdict_artifact,
)
from .scripted import RuleBasedJudge
from .validators import ValidatorOutcome, run_validators
from .verdict import DIMENSIONS, Verdict, VerdictError, parse_verdict

__all__ = [
    "JUDGE_RETRIES", "JUDGE_TOOL_CAP", "RUBRIC_VERSION", "JudgeInput", "JudgeResult", "assemble_judge_input",
    "judge_match", "judge_seed", "judge_transcript", "outcome_label", "verdict_artifact", "RuleBasedJudge",
    "ValidatorOutcome", "run_validators", "DIMENSIONS", "Verdict", "VerdictError", "parse_verdict",
]
