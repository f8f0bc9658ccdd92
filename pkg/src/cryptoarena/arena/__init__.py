"""Self-play arena: challenges, prompts, tool interception and transcripts."""

from .agents import END_MARKER, AgentEndpoint, AgentError, HttpChatAgent, ScriptedAgent, scripted_factory
from .challenge import Challenge, ChallengeError, RoleSpec, ValidatorSpec, expand_suite, load_suite
from .match import MatchConfig, derive_match_seed, run_match
from .prompts import assemble_role_prompt
from .suite import RunArtifacts, SuiteConfig, load_transcript, run_suite
from .toolcall import parse_tool_call, scan_tool_call
from .transcript import ToolExchange, Transcript, TurnRecord, derive_role_views

__all__ = [
    "END_MARKER", "AgentEndpoint", "AgentError", "HttpChatAgent", "ScriptedAgent", "scripted_factory",
    "Challenge", "ChallengeError", "RoleSpec", "ValidatorSpec", "expand_suite", "load_suite",
    "MatchConfig", "derive_match_seed", "run_match", "assemble_role_prompt",
    "RunArtifacts", "SuiteConfig", "load_transcript", "run_suite",
    "parse_tool_call", "scan_tool_call", "ToolExchange", "Transcript", "TurnRecord", "derive_role_views",
]
