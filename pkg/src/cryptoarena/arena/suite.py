"""Running a suite: seeds, fan-out and artifact layout.

Layout under ``out_dir``::

    matches/<challenge_id>.<rep>.transcript.json
    matches/<challenge_id>.<rep>.views.json
    summary.json

Every file is canonical JSON with no timestamps, so identical inputs give a
byte-identical tree regardless of ``parallelism``.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from ..wire.service import VERSION, canonical_json
from .challenge import Challenge
from .match import MatchConfig, derive_match_seed, run_match
from .transcript import Transcript, derive_role_views

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteConfig:
    repetitions: int = 2
    base_seed: int = 0
    parallelism: int = 1
    max_turns: int = 15
    per_turn_tool_cap: int = 3
    chain_cap: int | None = None


@dataclass
class RunArtifacts:
    transcripts: list[Transcript]
    summary: dict
    out_dir: Path | None = None


def match_name(challenge_id: str, rep: int) -> str:
    return f"{challenge_id}.{rep}"


def write_json(path: Path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(obj) + "\n", encoding="utf-8")


def summarize(transcripts: list[Transcript], config: SuiteConfig) -> dict:
    matches = []
    for t in transcripts:
        o = t.outcome()
        matches.append({"challenge_id": t.challenge_id, "repetition_index": t.repetition_index,
                        "match_seed": t.match_seed, **o})
    return {
        "tool_version": VERSION,
        # parallelism is left out: it never changes an artifact byte
        "suite_config": {k: v for k, v in asdict(config).items() if k != "parallelism"},
        "match_count": len(transcripts),
        "abort_count": sum(1 for t in transcripts if t.abort_reason is not None),
        "turn_count": sum(len(t.turns) for t in transcripts),
        "tool_result_count": sum(t.tool_result_count for t in transcripts),
        "refused_tool_calls": sum(m["refused_tool_calls"] for m in matches),
        "matches": matches,
    }


def run_suite(suite: list[Challenge], agents_factory, config: SuiteConfig = SuiteConfig(),
              out_dir=None, global_rules: str | None = None) -> RunArtifacts:
    """Play ``len(suite) * repetitions`` matches.

    ``agents_factory(challenge, role_id)`` must return a fresh endpoint;
    it is called for every role before any match starts so a missing
    endpoint fails fast.
    """
    if not suite:
        raise ValueError("suite is empty")
    if config.parallelism < 1 or config.repetitions < 1:
        raise ValueError("parallelism and repetitions must be positive")
    jobs = []
    for ch in suite:
        for rep in range(config.repetitions):
            mc = MatchConfig(config.max_turns, config.per_turn_tool_cap,
                             derive_match_seed(config.base_seed, ch.id, rep), rep)
            mc.validate(len(ch.participants))
            agents = {r: agents_factory(ch, r) for r in ch.role_ids}
            jobs.append((ch, agents, mc))

    def play(job):
        ch, agents, mc = job
        return run_match(ch, agents, mc, global_rules=global_rules, chain_cap=config.chain_cap)

    if config.parallelism == 1:
        transcripts = [play(j) for j in jobs]
    else:
        with ThreadPoolExecutor(config.parallelism) as pool:
            transcripts = list(pool.map(play, jobs))

    summary = summarize(transcripts, config)
    out = None
    if out_dir is not None:
        out = Path(out_dir)
        for t in transcripts:
            name = match_name(t.challenge_id, t.repetition_index)
            write_json(out / "matches" / f"{name}.transcript.json", t.to_dict())
            write_json(out / "matches" / f"{name}.views.json", derive_role_views(t))
        write_json(out / "summary.json", summary)
    log.info("ran %d matches (%d aborted)", summary["match_count"], summary["abort_count"])
    return RunArtifacts(transcripts, summary, out)


def load_transcript(path) -> Transcript:
    return Transcript.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
