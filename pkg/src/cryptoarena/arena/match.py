"""One self-play match: fixed rotation, tool interception, budgets."""

import hashlib
import logging
from dataclasses import asdict, dataclass

from ..cryptomath.rng import SeededRng
from ..wire.service import VERSION, CryptoMath
from .agents import END_MARKER
from .challenge import Challenge
from .prompts import assemble_role_prompt
from .toolcall import scan_tool_call
from .transcript import ToolExchange, Transcript, TurnRecord, view_for

log = logging.getLogger(__name__)

CAP_NOTICE = ("TOOL_NOTICE: per-turn calculator cap of {cap} reached; the call from {role} "
              "was not executed and the turn passes to the next party.")


@dataclass(frozen=True)
class MatchConfig:
    max_turns: int = 15
    per_turn_tool_cap: int = 3
    match_seed: int = 0
    repetition_index: int = 0

    def validate(self, n_participants: int):
        if self.max_turns < 1 or self.per_turn_tool_cap < 1:
            raise ValueError("max_turns and per_turn_tool_cap must be positive")
        if self.max_turns < n_participants:
            raise ValueError(f"max_turns {self.max_turns} is below the participant count {n_participants}")
        if not 0 <= self.match_seed < 2**64:
            raise ValueError("match_seed must fit in 64 unsigned bits")
        if self.repetition_index < 0:
            raise ValueError("repetition_index must be non-negative")


def derive_match_seed(base_seed: int, challenge_id: str, repetition_index: int) -> int:
    """First 8 bytes (big-endian) of sha256(base_seed_u64be || id || 0x00 || rep_u32be)."""
    h = hashlib.sha256()
    h.update(base_seed.to_bytes(8, "big"))
    h.update(challenge_id.encode("utf-8"))
    h.update(b"\x00")
    h.update(repetition_index.to_bytes(4, "big"))
    return int.from_bytes(h.digest()[:8], "big")


def tool_for_seed(match_seed: int, chain_cap: int | None = None) -> CryptoMath:
    """The calculator a match (or its replay) dispatches against."""
    return CryptoMath(rng=SeededRng(match_seed), chain_cap=chain_cap)


def run_match(challenge: Challenge, agents: dict, config: MatchConfig, tool=None,
              global_rules: str | None = None, chain_cap: int | None = None) -> Transcript:
    """Play one match.

    ``agents`` maps every role id to an endpoint. ``tool`` is a dispatch
    callable taking an OpRequest dict; by default a calculator seeded from
    ``config.match_seed`` with the given ``chain_cap``.
    """
    config.validate(len(challenge.participants))
    missing = [r for r in challenge.role_ids if r not in agents]
    if missing:
        raise ValueError(f"no agent for role(s) {', '.join(missing)}")
    calc = tool_for_seed(config.match_seed, chain_cap) if tool is None else None
    dispatch = calc.dispatch if calc is not None else tool
    prompts = {r: assemble_role_prompt(challenge, r, global_rules) for r in challenge.role_ids}

    tr = Transcript(
        challenge_id=challenge.id,
        repetition_index=config.repetition_index,
        match_seed=config.match_seed,
        participants=challenge.role_ids,
        config={**asdict(config), "chain_cap": calc.chain_cap if calc is not None else None},
        tool_version=VERSION,
    )

    # rotation starts at the initiator and then follows participant order
    order = challenge.role_ids
    start = order.index(challenge.symmetry_breaker.initiator_role)
    rotation = order[start:] + order[:start]

    for turn_index in range(config.max_turns):
        speaker = rotation[turn_index % len(rotation)]
        # incomplete until the closing message arrives, so live views skip it
        turn = TurnRecord(turn_index=turn_index, speaker=speaker, content="", incomplete=True)
        tr.turns.append(turn)
        while True:
            try:
                text = agents[speaker].respond(prompts[speaker], view_for(speaker, tr.turns))
            except Exception as exc:  # any endpoint failure aborts only this match
                tr.abort_reason = f"{speaker}: {type(exc).__name__}: {exc}"
                log.warning("match %s/%d aborted: %s", challenge.id, config.repetition_index, tr.abort_reason)
                return tr
            if not isinstance(text, str):
                tr.abort_reason = f"{speaker}: endpoint returned {type(text).__name__}, not text"
                return tr
            scan = scan_tool_call(text)
            turn.warnings.extend(scan.warnings)
            if scan.call is None:
                turn.content, turn.incomplete = text, False
                break
            if len(turn.tool_exchanges) >= config.per_turn_tool_cap:
                turn.content, turn.incomplete = text, False
                turn.refused_request = scan.call.raw
                turn.cap_notice = CAP_NOTICE.format(cap=config.per_turn_tool_cap, role=speaker)
                break
            response = dispatch(scan.call.request)
            turn.tool_exchanges.append(ToolExchange(text, scan.call.raw, response))
        if turn.content.strip() == END_MARKER:
            tr.ended_by_marker = True
            break
    return tr
