"""``cryptoarena`` command line.

Exit codes: 0 success, 1 domain failure, 2 usage or config error.
Machine-readable output goes to stdout, diagnostics to stderr.
"""

import argparse
import difflib
import hashlib
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .analytics import Leaderboard, aggregate_run, compare_runs, load_match_scores, render_report
from .analytics.scoring import scores_from_verdict_artifact
from .arena import HttpChatAgent, SuiteConfig, expand_suite, load_suite, run_suite, scripted_factory
from .arena.agents import load_scripts
from .arena.match import tool_for_seed
from .arena.suite import load_transcript, match_name, write_json
from .judge import RuleBasedJudge, judge_transcript
from .judge.scaffold import render_transcript
from .wire.cli_eval import cli_eval
from .wire.http import parse_bind, serve
from .wire.service import CryptoMath, canonical_json

log = logging.getLogger("cryptoarena")

OK, FAILURE, USAGE = 0, 1, 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


# --- run configuration -----------------------------------------------------


@dataclass
class RunConfig:
    suite: str = "package:fixture_suite.json"
    base_seed: int = 0
    repetitions: int = 2
    max_turns: int = 15
    per_turn_tool_cap: int = 3
    parallelism: int = 1
    chain_cap: int | None = None
    expand_to: int | None = None
    agents: dict = field(default_factory=dict)  # role id or "*" -> endpoint config
    judge: dict = field(default_factory=lambda: {"kind": "rule_based"})
    output_dir: str = "runs"
    run_id: str | None = None

    def provenance(self) -> dict:
        """Resolved config as embedded in summary.json. Where the run was written is not part of it."""
        d = asdict(self)
        d.pop("output_dir")
        d.pop("run_id")
        d.pop("parallelism")  # never changes an artifact byte
        return d

    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.provenance()).encode()).hexdigest()


INT_FIELDS = {"base_seed": 0, "repetitions": 1, "max_turns": 1, "per_turn_tool_cap": 0, "parallelism": 1}


def parse_run_config(doc) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    cfg = RunConfig(**doc)
    for name, lo in INT_FIELDS.items():
        v = getattr(cfg, name)
        if isinstance(v, bool) or not isinstance(v, int) or v < lo:
            raise ConfigError(f"{name} must be an integer >= {lo}")
    for name in ("chain_cap", "expand_to"):
        v = getattr(cfg, name)
        if v is not None and (isinstance(v, bool) or not isinstance(v, int) or v < 1):
            raise ConfigError(f"{name} must be a positive integer or null")
    if not isinstance(cfg.suite, str) or not cfg.suite:
        raise ConfigError("suite must be a path")
    if not isinstance(cfg.agents, dict) or not cfg.agents:
        raise ConfigError("agents must map role ids (or '*') to endpoint configs")
    for role, ep in cfg.agents.items():
        _check_endpoint(f"agents.{role}", ep, ("scripted", "http"))
    _check_endpoint("judge", cfg.judge, ("rule_based", "http"))
    return cfg


def _check_endpoint(where: str, ep, kinds):
    if not isinstance(ep, dict) or ep.get("kind") not in kinds:
        raise ConfigError(f"{where}: kind must be one of {', '.join(kinds)}")
    if ep["kind"] == "scripted" and not isinstance(ep.get("path"), str):
        raise ConfigError(f"{where}: scripted endpoint needs a path")
    if ep["kind"] == "http" and not (isinstance(ep.get("url"), str) and isinstance(ep.get("model"), str)):
        raise ConfigError(f"{where}: http endpoint needs url and model")


def resolve_path(p: str, base: Path):
    if p.startswith("package:"):
        return resources.files("cryptoarena.data").joinpath(p.split(":", 1)[1])
    path = Path(p)
    return path if path.is_absolute() else base / path


def http_agent(ep: dict) -> HttpChatAgent:
    extra = {k: ep[k] for k in ("token_env", "timeout", "temperature", "max_tokens") if k in ep}
    return HttpChatAgent(ep["url"], ep["model"], **extra)


def agents_factory(cfg: RunConfig, base: Path):
    scripted = {}

    def make(challenge, role_id):
        ep = cfg.agents.get(role_id) or cfg.agents.get("*")
        if ep is None:
            raise ConfigError(f"no agent endpoint configured for role {role_id!r} ({challenge.id})")
        if ep["kind"] == "http":
            return http_agent(ep)
        if ep["path"] not in scripted:
            scripted[ep["path"]] = scripted_factory(load_scripts(resolve_path(ep["path"], base)))
        try:
            return scripted[ep["path"]](challenge, role_id)
        except KeyError as exc:
            raise ConfigError(f"agents.{role_id}: {exc.args[0]}") from None

    return make


def judge_factory(cfg: RunConfig):
    if cfg.judge["kind"] == "http":
        return lambda: http_agent(cfg.judge)
    return lambda: RuleBasedJudge(recheck=cfg.judge.get("recheck", True))


def default_run_id(cfg: RunConfig) -> str:
    return datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ") + "-" + cfg.digest()[:8]


def execute_run(cfg: RunConfig, base: Path, out_root: Path) -> Path:
    """Play, judge and aggregate; returns the path of summary.json."""
    try:
        suite = load_suite(resolve_path(cfg.suite, base))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"suite: {exc}") from exc
    if cfg.expand_to:
        suite = expand_suite(suite, cfg.expand_to)
    by_id = {c.id: c for c in suite}
    run_dir = out_root / (cfg.run_id or default_run_id(cfg))
    sc = SuiteConfig(cfg.repetitions, cfg.base_seed, cfg.parallelism, cfg.max_turns,
                     cfg.per_turn_tool_cap, cfg.chain_cap)
    try:
        arts = run_suite(suite, agents_factory(cfg, base), sc, out_dir=run_dir)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    make_judge = judge_factory(cfg)

    def judge(t):
        return judge_transcript(make_judge(), by_id[t.challenge_id], t)

    if cfg.parallelism == 1:
        verdicts = [judge(t) for t in arts.transcripts]
    else:
        with ThreadPoolExecutor(cfg.parallelism) as pool:
            verdicts = list(pool.map(judge, arts.transcripts))
    for v in verdicts:
        write_json(run_dir / "verdicts" / f"{match_name(v['challenge_id'], v['repetition_index'])}.verdict.json", v)

    scores = [scores_from_verdict_artifact(v) for v in verdicts]
    failures = sum(m.judge_failure for m in scores)
    run_summary = None
    if failures < len(scores):
        rs = aggregate_run(scores)
        run_summary = rs.to_dict()
        for fmt, ext in (("text", "txt"), ("csv", "csv"), ("json", "json")):
            (run_dir / "reports").mkdir(parents=True, exist_ok=True)
            (run_dir / "reports" / f"run_summary.{ext}").write_text(render_report(rs, fmt), encoding="utf-8")
    summary = {
        **arts.summary,
        "config": cfg.provenance(),
        "config_sha256": cfg.digest(),
        "verdict_count": len(verdicts),
        "judge_failure_count": failures,
        "scores": run_summary,
    }
    write_json(run_dir / "summary.json", summary)
    return run_dir / "summary.json"


# --- subcommands -----------------------------------------------------------


def cmd_serve(args) -> int:
    try:
        parse_bind(args.bind)
    except ValueError as exc:
        print(f"serve: {exc}", file=sys.stderr)
        return USAGE
    try:
        serve(args.bind, CryptoMath(chain_cap=args.chain_cap),
              ready=lambda s: print(canonical_json({"listening": "%s:%d" % s.server_address[:2]}), flush=True))
    except OSError as exc:
        print(f"serve: cannot bind {args.bind}: {exc}", file=sys.stderr)
        return FAILURE
    return OK


def cmd_eval(args) -> int:
    text = args.request if args.request is not None else None
    return cli_eval(text, CryptoMath(chain_cap=args.chain_cap))


def cmd_run(args) -> int:
    path = Path(args.config)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        print(f"run: cannot read config {path}: {exc}", file=sys.stderr)
        return USAGE
    if isinstance(doc, dict):
        for key in ("base_seed", "repetitions", "parallelism", "max_turns", "per_turn_tool_cap",
                    "expand_to", "run_id", "output_dir"):
            v = getattr(args, key)
            if v is not None:
                doc[key] = v
    try:
        cfg = parse_run_config(doc)
        out_root = Path(os.environ.get("CRYPTOARENA_OUT") or resolve_path(cfg.output_dir, path.parent))
        summary = execute_run(cfg, path.parent, out_root)
    except ConfigError as exc:
        print(f"run: config error: {exc}", file=sys.stderr)
        return USAGE
    print(summary)
    return OK


def cmd_stats(args) -> int:
    try:
        base = load_match_scores(args.base)
        tuned = load_match_scores(args.tuned)
        rep = compare_runs(base, tuned, resamples=args.resamples, B=args.bootstrap, seed=args.seed,
                           base_label=args.base_label, tuned_label=args.tuned_label)
    except (OSError, ValueError, KeyError) as exc:
        print(f"stats: {exc}", file=sys.stderr)
        return FAILURE
    sys.stdout.write(render_report(rep, args.format))
    return OK


def cmd_leaderboard(args) -> int:
    entries = {}
    try:
        for item in args.runs:
            label, sep, p = item.partition("=")
            if not sep:
                print(f"leaderboard: expected LABEL=PATH, got {item!r}", file=sys.stderr)
                return USAGE
            entries[label] = aggregate_run(load_match_scores(p))
    except (OSError, ValueError, KeyError) as exc:
        print(f"leaderboard: {exc}", file=sys.stderr)
        return FAILURE
    sys.stdout.write(render_report(Leaderboard(entries), args.format))
    return OK


def verify_tools(transcript) -> list[dict]:
    """Re-dispatch every exchange, in order, against a calculator seeded like the original."""
    tool = tool_for_seed(transcript.match_seed, transcript.config.get("chain_cap"))
    mismatches = []
    for turn in transcript.turns:
        for i, x in enumerate(turn.tool_exchanges):
            replayed = tool.dispatch(x.request)
            if replayed != x.response:
                recorded, fresh = canonical_json(x.response), canonical_json(replayed)
                diff = "\n".join(difflib.unified_diff([recorded], [fresh], "recorded", "replayed", lineterm=""))
                mismatches.append({"turn_index": turn.turn_index, "exchange_index": i, "request": x.request,
                                   "recorded": x.response, "replayed": replayed, "diff": diff})
    return mismatches


def cmd_replay(args) -> int:
    try:
        t = load_transcript(args.transcript)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"replay: cannot load {args.transcript}: {exc}", file=sys.stderr)
        return FAILURE
    if not args.verify_tools:
        print(render_transcript(t))
        return OK
    mismatches = verify_tools(t)
    for m in mismatches:
        print(f"turn {m['turn_index']} exchange {m['exchange_index']}: response differs\n{m['diff']}", file=sys.stderr)
    report = {"transcript": str(args.transcript), "exchanges": t.tool_result_count,
              "verified": t.tool_result_count - len(mismatches), "mismatches": mismatches, "ok": not mismatches}
    print(canonical_json(report))
    return OK if not mismatches else FAILURE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cryptoarena", description="Crypto calculator, self-play arena, judge and statistics.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("serve", help="run the calculator over HTTP")
    s.add_argument("--bind", default="127.0.0.1:8080")
    s.add_argument("--chain-cap", type=int, default=None)
    s.set_defaults(func=cmd_serve)

    s = sub.add_parser("eval", help="answer one JSON request from stdin")
    s.add_argument("--request", help="request JSON instead of stdin")
    s.add_argument("--chain-cap", type=int, default=None)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("run", help="play, judge and aggregate a suite")
    s.add_argument("config")
    s.add_argument("--base-seed", type=int)
    s.add_argument("--repetitions", type=int)
    s.add_argument("--parallelism", type=int)
    s.add_argument("--max-turns", type=int)
    s.add_argument("--per-turn-tool-cap", type=int)
    s.add_argument("--expand-to", type=int)
    s.add_argument("--run-id")
    s.add_argument("--output-dir")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("stats", help="compare a tuned run against a base run")
    s.add_argument("--base", required=True, help="run directory or scores JSON")
    s.add_argument("--tuned", required=True, help="run directory or scores JSON")
    s.add_argument("--format", choices=("text", "csv", "json"), default="text")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--resamples", type=int, default=2000)
    s.add_argument("--bootstrap", type=int, default=10000)
    s.add_argument("--base-label", default="base")
    s.add_argument("--tuned-label", default="tuned")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("leaderboard", help="rank runs by overall score")
    s.add_argument("runs", nargs="+", metavar="LABEL=PATH")
    s.add_argument("--format", choices=("text", "csv", "json"), default="text")
    s.set_defaults(func=cmd_leaderboard)

    s = sub.add_parser("replay", help="re-render a transcript and optionally re-check its tool results")
    s.add_argument("transcript")
    s.add_argument("--verify-tools", action="store_true")
    s.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
