"""Minimal extraction of ``{"tool": "cryptomath", ...}`` calls from agent text.

The scan walks the message looking for balanced ``{...}`` spans, tracking
JSON string literals so braces inside strings do not count. The first span
that parses as a JSON object with a ``"tool"`` key decides the outcome;
prose, code fences and anything after it are ignored.
"""

import json
from dataclasses import dataclass, field

TOOL_NAME = "cryptomath"


@dataclass
class ToolCall:
    tool: str
    op: str
    args: dict
    raw: dict  # the object exactly as the agent wrote it, "tool" key included

    @property
    def request(self) -> dict:
        return {"op": self.op, "args": self.args}


@dataclass
class ScanResult:
    call: ToolCall | None = None
    warnings: list[str] = field(default_factory=list)


def _balanced_end(text: str, start: int) -> int | None:
    depth = 0
    in_str = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_str:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_str = False
        elif ch == '"':
            in_str = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i + 1
    return None


def scan_tool_call(message: str) -> ScanResult:
    result = ScanResult()
    pos = 0
    found = None
    while True:
        start = message.find("{", pos)
        if start < 0:
            break
        end = _balanced_end(message, start)
        if end is None:
            result.warnings.append(f"unbalanced '{{' at offset {start}")
            pos = start + 1
            continue
        try:
            obj = json.loads(message[start:end])
        except ValueError as exc:
            result.warnings.append(f"malformed JSON candidate at offset {start}: {exc.msg}")
            pos = start + 1
            continue
        if isinstance(obj, dict) and "tool" in obj:
            if found is None:
                found = obj
            else:
                result.warnings.append(f"ignored additional tool object at offset {start}")
        pos = end

    if found is None:
        return result
    if found.get("tool") != TOOL_NAME:
        result.warnings.append(f"tool {found.get('tool')!r} is not {TOOL_NAME!r}")
        return result
    if not isinstance(found.get("op"), str) or not isinstance(found.get("args"), dict):
        result.warnings.append("tool object needs a string op and an args object")
        return result
    result.call = ToolCall(TOOL_NAME, found["op"], found["args"], found)
    return result


def parse_tool_call(message: str) -> tuple[str, dict] | None:
    """Return ``(tool_name, {"op", "args"})`` for the first cryptomath call, else None."""
    call = scan_tool_call(message).call
    if call is None:
        return None
    return call.tool, call.request
