"""Judge input rendering, the capped judging loop and verdict artifacts."""

import hashlib
import logging
from dataclasses import dataclass, field
from importlib import resources

from ..analytics.scoring import normalize
from ..arena.challenge import Challenge, JudgeOnly
from ..arena.toolcall import scan_tool_call
from ..arena.transcript import TOOL_RESULT_PREFIX, ToolExchange, Transcript, shared_history
from ..cryptomath.rng import SeededRng
from ..wire.service import CryptoMath, canonical_json
from .validators import ValidatorOutcome, run_validators
from .verdict import DIMENSIONS, Verdict, VerdictError, parse_verdict

log = logging.getLogger(__name__)

RUBRIC_VERSION = "1"
JUDGE_TOOL_CAP = 8
JUDGE_RETRIES = 2
SUCCESS_OVERALL = 0.5
SUCCESS_PRIMITIVE = 3

JUDGE_CAP_NOTICE = "JUDGE_NOTICE: the calculator cap of {cap} calls is used up; that call was not run. Reply with the verdict."
RETRY_NOTICE = "JUDGE_NOTICE: the verdict could not be parsed ({reason}). Reply with only the JSON object."


def _data(name: str) -> str:
    return resources.files("cryptoarena.data").joinpath(name).read_text(encoding="utf-8")


def default_rules() -> str:
    return _data("judge_rules.md")


def default_rubric() -> str:
    return _data("judge_rubric.md")


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def judge_seed(match_seed: int) -> int:
    """Seed for the judge's calculator, kept apart from the match's own stream."""
    return int.from_bytes(hashlib.sha256(b"cryptoarena/judge" + match_seed.to_bytes(8, "big")).digest()[:8], "big")


def render_transcript(transcript: Transcript) -> str:
    lines = []
    for t in transcript.turns:
        for e in shared_history([t]):
            if e["kind"] == "message":
                lines.append(f"[turn {t.turn_index}] {e['speaker']}: {e['text']}")
            elif e["kind"] == "tool_result":
                lines.append(f"[turn {t.turn_index}] (for {e['speaker']}) {e['text']}")
            else:
                lines.append(f"[turn {t.turn_index}] (notice) {e['text']}")
    return "\n".join(lines)


@dataclass(frozen=True)
class JudgeInput:
    rules: str
    rubric: str
    challenge_id: str
    title: str
    background: str
    judge_only: JudgeOnly
    tool_result_count: int
    validator_outcomes: list[ValidatorOutcome]
    transcript_text: str

    def system_prompt(self) -> str:
        return self.rules.rstrip() + "\n\n" + self.rubric.rstrip() + "\n"

    def case_text(self) -> str:
        jo = self.judge_only
        parts = [
            f"# Case: {self.challenge_id}\n\n{self.title}\n\n## Public background\n\n{self.background}",
            "## Notes for the judge only\n\nTarget primitive families:\n"
            + "\n".join(f"- {f}" for f in jo.target_primitive_families)
            + f"\n\nWhat good looks like:\n{jo.what_good_looks_like}\n\nCommon failures:\n"
            + ("\n".join(f"- {f}" for f in jo.common_failures) or "- (none listed)"),
            "## Automatic checks\n\n"
            + f"TOOL_RESULT count: {self.tool_result_count}\n"
            + "\n".join(f"- {o.kind}: {'PASS' if o.passed else 'FAIL'} ({o.detail})" for o in self.validator_outcomes),
            "## Transcript\n\n" + (self.transcript_text or "(empty)"),
        ]
        return "\n\n".join(parts) + "\n"

    def render(self) -> str:
        return self.system_prompt() + "\n" + self.case_text()

    def sha256(self) -> str:
        return sha256_hex(self.render())


def assemble_judge_input(challenge: Challenge, transcript: Transcript, rubric: str | None = None,
                         rules: str | None = None) -> JudgeInput:
    return JudgeInput(
        rules=default_rules() if rules is None else rules,
        rubric=default_rubric() if rubric is None else rubric,
        challenge_id=challenge.id,
        title=challenge.title,
        background=challenge.background,
        judge_only=challenge.judge_only,
        tool_result_count=transcript.tool_result_count,
        validator_outcomes=run_validators(challenge, transcript),
        transcript_text=render_transcript(transcript),
    )


@dataclass
class JudgeResult:
    verdict: Verdict | None
    exchanges: list[ToolExchange] = field(default_factory=list)
    refused_calls: int = 0
    attempts: int = 0
    failure_reason: str | None = None

    @property
    def judge_failure(self) -> bool:
        return self.verdict is None


def judge_match(endpoint, judge_input: JudgeInput, tool, judge_tool_cap: int = JUDGE_TOOL_CAP,
                retries: int = JUDGE_RETRIES) -> JudgeResult:
    """Query the judge until it returns a parsable verdict.

    Tool calls are served up to ``judge_tool_cap`` per session. A reply
    that is neither a served tool call nor a valid verdict (including an
    over-cap call) uses up one of the ``retries + 1`` attempts.
    """
    system = judge_input.system_prompt()
    msgs = [{"author": "other", "speaker": "arena", "content": judge_input.case_text()}]
    result = JudgeResult(None)
    attempts_left = retries + 1
    while True:
        try:
            text = endpoint.respond(system, list(msgs))
        except Exception as exc:
            result.failure_reason = f"judge endpoint error: {type(exc).__name__}: {exc}"
            return result
        msgs.append({"author": "self", "speaker": "judge", "content": text})
        scan = scan_tool_call(text)
        if scan.call is not None:
            if len(result.exchanges) < judge_tool_cap:
                response = tool(scan.call.request)
                result.exchanges.append(ToolExchange(text, scan.call.raw, response))
                msgs.append({"author": "tool", "speaker": "judge", "content": TOOL_RESULT_PREFIX + canonical_json(response)})
                continue
            result.refused_calls += 1
            reason = "tool cap reached"
            msgs.append({"author": "notice", "speaker": "judge", "content": JUDGE_CAP_NOTICE.format(cap=judge_tool_cap)})
        else:
            try:
                result.verdict = parse_verdict(text)
                result.attempts += 1
                return result
            except VerdictError as exc:
                reason = str(exc)
                msgs.append({"author": "notice", "speaker": "judge", "content": RETRY_NOTICE.format(reason=reason)})
        result.attempts += 1
        attempts_left -= 1
        if attempts_left == 0:
            result.failure_reason = f"no parsable verdict after {result.attempts} attempt(s): {reason}"
            return result


def outcome_label(verdict: Verdict | None, min_overall: float = SUCCESS_OVERALL,
                  min_primitive: int = SUCCESS_PRIMITIVE) -> str | None:
    """Repository convention: success iff normalized overall >= 0.5 and primitive_selection >= 3."""
    if verdict is None:
        return None
    overall = sum(normalize(verdict.scores[d]) for d in DIMENSIONS) / len(DIMENSIONS)
    ok = overall >= min_overall and verdict.scores["primitive_selection"] >= min_primitive
    return "success" if ok else "failure"


def verdict_artifact(transcript: Transcript, judge_input: JudgeInput, result: JudgeResult) -> dict:
    return {
        "challenge_id": transcript.challenge_id,
        "repetition_index": transcript.repetition_index,
        "match_seed": transcript.match_seed,
        "judge_seed": judge_seed(transcript.match_seed),
        "verdict": result.verdict.to_dict() if result.verdict else None,
        "judge_failure": result.judge_failure,
        "failure_reason": result.failure_reason,
        "attempts": result.attempts,
        "outcome": outcome_label(result.verdict),
        "tool_result_count": judge_input.tool_result_count,
        "validators": [o.to_dict() for o in judge_input.validator_outcomes],
        "judge_tool_exchanges": [x.to_dict() for x in result.exchanges],
        "judge_refused_calls": result.refused_calls,
        "judge_input_sha256": judge_input.sha256(),
        "rubric_version": RUBRIC_VERSION,
        "rubric_sha256": sha256_hex(judge_input.rubric),
        "rules_sha256": sha256_hex(judge_input.rules),
    }


def judge_transcript(endpoint, challenge: Challenge, transcript: Transcript, **kwargs) -> dict:
    """Validators, judge session and artifact for one match, with a seeded judge calculator."""
    ji = assemble_judge_input(challenge, transcript)
    tool = CryptoMath(rng=SeededRng(judge_seed(transcript.match_seed))).dispatch
    return verdict_artifact(transcript, ji, judge_match(endpoint, ji, tool, **kwargs))
