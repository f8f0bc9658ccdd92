"""Transcript records and the per-role views derived from them."""

from dataclasses import dataclass, field

from ..wire.service import canonical_json

TOOL_RESULT_PREFIX = "TOOL_RESULT: "


@dataclass
class ToolExchange:
    message: str  # the agent message that carried the call
    request: dict  # as received, including the "tool" discriminator
    response: dict  # envelope exactly as returned by the calculator

    def to_dict(self) -> dict:
        return {"message": self.message, "request": self.request, "response": self.response}

    @classmethod
    def from_dict(cls, d: dict) -> "ToolExchange":
        return cls(d["message"], d["request"], d["response"])


@dataclass
class TurnRecord:
    turn_index: int
    speaker: str
    content: str
    tool_exchanges: list[ToolExchange] = field(default_factory=list)
    cap_notice: str | None = None
    refused_request: dict | None = None
    warnings: list[str] = field(default_factory=list)
    incomplete: bool = False

    def to_dict(self) -> dict:
        return {
            "turn_index": self.turn_index,
            "speaker": self.speaker,
            "content": self.content,
            "tool_exchanges": [x.to_dict() for x in self.tool_exchanges],
            "cap_notice": self.cap_notice,
            "refused_request": self.refused_request,
            "warnings": list(self.warnings),
            "incomplete": self.incomplete,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TurnRecord":
        return cls(
            turn_index=d["turn_index"],
            speaker=d["speaker"],
            content=d["content"],
            tool_exchanges=[ToolExchange.from_dict(x) for x in d["tool_exchanges"]],
            cap_notice=d.get("cap_notice"),
            refused_request=d.get("refused_request"),
            warnings=list(d.get("warnings", [])),
            incomplete=d.get("incomplete", False),
        )


@dataclass
class Transcript:
    challenge_id: str
    repetition_index: int
    match_seed: int
    participants: list[str]
    config: dict
    tool_version: str
    turns: list[TurnRecord] = field(default_factory=list)
    ended_by_marker: bool = False
    abort_reason: str | None = None

    @property
    def tool_result_count(self) -> int:
        return sum(len(t.tool_exchanges) for t in self.turns)

    @property
    def exchanges(self) -> list[ToolExchange]:
        return [x for t in self.turns for x in t.tool_exchanges]

    def outcome(self) -> dict:
        return {
            "turn_count": len(self.turns),
            "tool_result_count": self.tool_result_count,
            "refused_tool_calls": sum(1 for t in self.turns if t.refused_request is not None),
            "parse_warnings": sum(len(t.warnings) for t in self.turns),
            "ended_by_marker": self.ended_by_marker,
            "hit_max_turns": len(self.turns) >= self.config["max_turns"] and not self.ended_by_marker,
            "aborted": self.abort_reason is not None,
            "abort_reason": self.abort_reason,
        }

    def to_dict(self) -> dict:
        return {
            "challenge_id": self.challenge_id,
            "repetition_index": self.repetition_index,
            "match_seed": self.match_seed,
            "participants": list(self.participants),
            "config": dict(self.config),
            "tool_version": self.tool_version,
            "turns": [t.to_dict() for t in self.turns],
            "outcome": self.outcome(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        out = d.get("outcome", {})
        return cls(
            challenge_id=d["challenge_id"],
            repetition_index=d["repetition_index"],
            match_seed=d["match_seed"],
            participants=list(d["participants"]),
            config=dict(d["config"]),
            tool_version=d["tool_version"],
            turns=[TurnRecord.from_dict(t) for t in d["turns"]],
            ended_by_marker=out.get("ended_by_marker", False),
            abort_reason=out.get("abort_reason"),
        )


def shared_history(turns: list[TurnRecord]) -> list[dict]:
    """Chronological entries ``{kind, speaker, text}`` exactly as they happened."""
    entries = []
    for t in turns:
        for x in t.tool_exchanges:
            entries.append({"kind": "message", "speaker": t.speaker, "text": x.message})
            entries.append({"kind": "tool_result", "speaker": t.speaker, "text": TOOL_RESULT_PREFIX + canonical_json(x.response)})
        if not t.incomplete:
            entries.append({"kind": "message", "speaker": t.speaker, "text": t.content})
        if t.cap_notice is not None:
            entries.append({"kind": "notice", "speaker": t.speaker, "text": t.cap_notice})
    return entries


def view_for(role_id: str, turns: list[TurnRecord]) -> list[dict]:
    """What ``role_id`` sees: its own messages as self, others prefixed by speaker id."""
    msgs = []
    for e in shared_history(turns):
        if e["kind"] == "message":
            if e["speaker"] == role_id:
                msgs.append({"author": "self", "speaker": role_id, "content": e["text"]})
            else:
                msgs.append({"author": "other", "speaker": e["speaker"], "content": f"{e['speaker']}: {e['text']}"})
        else:
            msgs.append({"author": "tool" if e["kind"] == "tool_result" else "notice",
                         "speaker": e["speaker"], "content": e["text"]})
    return msgs


def derive_role_views(transcript: Transcript) -> dict[str, dict]:
    return {
        role: {"role_id": role, "messages": view_for(role, transcript.turns)}
        for role in transcript.participants
    }
