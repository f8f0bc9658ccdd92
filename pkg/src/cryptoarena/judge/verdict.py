"""Strict verdict parsing.

Exactly one JSON object, optionally wrapped in a single ```/```json fence,
with the five rubric dimensions as integers 1..5 and a non-empty
``verdict`` string. Anything else is a ``VerdictError``; nothing is coerced.
"""

import json
import re
from dataclasses import dataclass

DIMENSIONS = ("primitive_selection", "negotiation", "implementation", "tool_usage", "security")
VERDICT_KEY = "verdict"
MAX_VERDICT_CHARS = 2000

_FENCE = re.compile(r"```(?:json)?[ \t]*\n(.*)\n[ \t]*```", re.DOTALL)


class VerdictError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    scores: dict
    verdict_text: str

    def to_dict(self) -> dict:
        return {**self.scores, VERDICT_KEY: self.verdict_text}


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise VerdictError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _unfence(text: str) -> str:
    if not text.startswith("```"):
        return text
    m = _FENCE.fullmatch(text)
    if not m:
        raise VerdictError("malformed code fence")
    return m.group(1).strip()


def parse_verdict(raw: str) -> Verdict:
    if not isinstance(raw, str):
        raise VerdictError("verdict must be text")
    text = _unfence(raw.strip())
    if not text.startswith("{"):
        raise VerdictError("expected a JSON object with no text before it")
    decoder = json.JSONDecoder(object_pairs_hook=_no_duplicates)
    try:
        obj, end = decoder.raw_decode(text)
    except json.JSONDecodeError as exc:
        raise VerdictError(f"invalid JSON: {exc.msg}") from None
    rest = text[end:].strip()
    if rest:
        if "{" in rest:
            raise VerdictError("multiple candidate objects")
        raise VerdictError("text after the JSON object")
    if not isinstance(obj, dict):
        raise VerdictError("expected a JSON object")

    missing = [k for k in (*DIMENSIONS, VERDICT_KEY) if k not in obj]
    if missing:
        raise VerdictError(f"missing {', '.join(missing)}")
    unknown = sorted(set(obj) - {*DIMENSIONS, VERDICT_KEY})
    if unknown:
        raise VerdictError(f"unknown key(s) {', '.join(unknown)}")
    scores = {}
    for dim in DIMENSIONS:
        v = obj[dim]
        if isinstance(v, bool) or not isinstance(v, int):
            raise VerdictError(f"{dim} must be an integer, got {json.dumps(v)}")
        if not 1 <= v <= 5:
            raise VerdictError(f"{dim}={v} is outside 1..5")
        scores[dim] = v
    text_v = obj[VERDICT_KEY]
    if not isinstance(text_v, str) or not text_v.strip():
        raise VerdictError("verdict must be a non-empty string")
    if len(text_v) > MAX_VERDICT_CHARS:
        raise VerdictError(f"verdict longer than {MAX_VERDICT_CHARS} characters")
    return Verdict(scores, text_v)
