"""Deterministic transcript checks run before the judge sees a match."""

from dataclasses import asdict, dataclass

from ..arena.challenge import Challenge
from ..arena.transcript import Transcript


@dataclass(frozen=True)
class ValidatorOutcome:
    kind: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return asdict(self)


def participant_text(transcript: Transcript) -> list[str]:
    """Everything the parties wrote, including messages that carried tool calls."""
    out = []
    for t in transcript.turns:
        out.extend(x.message for x in t.tool_exchanges)
        if not t.incomplete:
            out.append(t.content)
    return out


def run_validators(challenge: Challenge, transcript: Transcript) -> list[ValidatorOutcome]:
    outcomes = []
    texts = [s.lower() for s in participant_text(transcript)]
    for v in challenge.validators:
        if v.kind == "min_tool_results":
            n = transcript.tool_result_count
            outcomes.append(ValidatorOutcome(v.kind, n >= v.threshold, f"{n} tool result(s), need {v.threshold}"))
        elif v.kind == "primitive_named":
            hits = sorted({a for a in v.aliases if any(a.lower() in s for s in texts)})
            detail = f"named: {', '.join(hits)}" if hits else "no alias found"
            outcomes.append(ValidatorOutcome(v.kind, bool(hits), detail))
        else:  # the loader rejects unknown kinds
            raise AssertionError(v.kind)
    return outcomes
