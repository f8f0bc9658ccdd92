"""A deterministic stand-in judge for offline runs and tests.

It reads only the case text it is given: it re-runs the first calculator
call it finds in the transcript (once), then scores from the automatic
check lines and the number of turns. The numbers are a fixed heuristic,
not a model of any real judge.
"""

import json
import re

from ..arena.toolcall import scan_tool_call

_COUNT = re.compile(r"^TOOL_RESULT count: (\d+)$", re.MULTILINE)
_CHECK = re.compile(r"^- (\w+): (PASS|FAIL) ", re.MULTILINE)
_TURN = re.compile(r"^\[turn (\d+)\] ", re.MULTILINE)


def _clamp(v: int) -> int:
    return max(1, min(5, v))


class RuleBasedJudge:
    def __init__(self, recheck: bool = True):
        self.recheck = recheck

    def respond(self, system_prompt: str, messages: list[dict]) -> str:
        case = messages[0]["content"]
        already_checked = any(m["author"] == "tool" for m in messages)
        transcript = case.split("## Transcript", 1)[-1]
        if self.recheck and not already_checked:
            call = scan_tool_call(transcript).call
            if call is not None:
                return "Re-checking one quoted value. " + json.dumps(call.raw, sort_keys=True)

        count = int(_COUNT.search(case).group(1))
        checks = {k: v == "PASS" for k, v in _CHECK.findall(case)}
        turns = len({int(t) for t in _TURN.findall(transcript)})
        named = checks.get("primitive_named", False)
        enough_tools = checks.get("min_tool_results", True)
        refused = "(notice)" in transcript

        scores = {
            "primitive_selection": 4 + (count >= 3) if named else 1,
            "negotiation": _clamp(1 + min(turns, 6) // 2 + named),
            "implementation": _clamp(1 + 2 * enough_tools + named - refused),
            "tool_usage": _clamp(1 + min(count, 3) - refused) if enough_tools else 1,
            "security": _clamp(1 + 2 * named + enough_tools),
        }
        verdict = ("Named a fitting family and backed it with calculator results." if named and enough_tools
                   else "Partial: " + ("no fitting family named" if not named else "too few calculator results") + ".")
        return json.dumps({**scores, "verdict": verdict}, sort_keys=True)
