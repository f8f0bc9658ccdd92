"""Agent endpoints.

An endpoint is anything with ``respond(system_prompt, messages) -> str``.
``messages`` is the caller's view of the conversation: a list of
``{"author": "self"|"other"|"tool"|"notice", "speaker", "content"}``.
"""

import json
import os
import urllib.request
from pathlib import Path
from typing import Protocol

from .challenge import base_challenge_id

END_MARKER = "[END_OF_DIALOGUE]"


class AgentError(RuntimeError):
    """Transport-level failure; the arena aborts the match and records it."""


class AgentEndpoint(Protocol):
    def respond(self, system_prompt: str, messages: list[dict]) -> str: ...


class ScriptedAgent:
    """Replays a fixed list of replies, one per call, then ends the dialogue."""

    def __init__(self, replies: list[str], when_done: str = END_MARKER):
        self.replies = list(replies)
        self.when_done = when_done
        self.calls = 0

    def respond(self, system_prompt: str, messages: list[dict]) -> str:
        self.calls += 1
        if self.replies:
            return self.replies.pop(0)
        return self.when_done


class FailingAgent:
    def __init__(self, after: int = 0, reason: str = "connection refused"):
        self.after = after
        self.reason = reason
        self.calls = 0

    def respond(self, system_prompt, messages):
        self.calls += 1
        if self.calls > self.after:
            raise AgentError(self.reason)
        return "ok"


def load_scripts(path) -> dict:
    """Scripts file: ``{"scripts": {challenge_id: {role_id: [reply, ...]}}}``."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    scripts = doc.get("scripts") if isinstance(doc, dict) else None
    if not isinstance(scripts, dict):
        raise ValueError(f"{path}: expected an object with a scripts map")
    return scripts


def scripted_factory(scripts: dict):
    """Factory mapping (challenge, role_id) to a fresh ScriptedAgent.

    Synthetic copies made by ``expand_suite`` reuse their source challenge's script.
    """

    def make(challenge, role_id: str) -> ScriptedAgent:
        by_role = scripts.get(challenge.id) or scripts.get(base_challenge_id(challenge.id))
        if by_role is None or role_id not in by_role:
            raise KeyError(f"no script for {challenge.id}/{role_id}")
        return ScriptedAgent(by_role[role_id])

    return make


class HttpChatAgent:
    """Thin client for an OpenAI-style ``/chat/completions`` endpoint.

    Own messages map to ``assistant``; everything else (other parties, tool
    results, notices) maps to ``user``. The bearer token is read from the
    environment variable named by ``token_env``.
    """

    def __init__(self, url: str, model: str, token_env: str = "CRYPTOARENA_API_KEY",
                 timeout: float = 120.0, temperature: float = 0.0, max_tokens: int | None = None):
        self.url = url
        self.model = model
        self.token_env = token_env
        self.timeout = timeout
        self.temperature = temperature
        self.max_tokens = max_tokens

    def payload(self, system_prompt: str, messages: list[dict]) -> dict:
        chat = [{"role": "system", "content": system_prompt}]
        for m in messages:
            chat.append({"role": "assistant" if m["author"] == "self" else "user", "content": m["content"]})
        body = {"model": self.model, "messages": chat, "temperature": self.temperature}
        if self.max_tokens is not None:
            body["max_tokens"] = self.max_tokens
        return body

    def respond(self, system_prompt: str, messages: list[dict]) -> str:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        data = json.dumps(self.payload(system_prompt, messages)).encode()
        req = urllib.request.Request(self.url, data=data, headers=headers)
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                doc = json.loads(resp.read().decode("utf-8"))
            return doc["choices"][0]["message"]["content"] or ""
        except (OSError, ValueError, KeyError, IndexError, TypeError) as exc:
            raise AgentError(f"{self.url}: {exc}") from exc
