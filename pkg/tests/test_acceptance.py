"""Acceptance criteria, one test per criterion.

Each test prints ``ACCEPTANCE <n> PASS|FAIL <name> (<seconds>s)`` and the
lines are repeated in pytest's terminal summary. Criteria 1, 2, 3 and 6
run their focused suites in a fresh pytest process and check the reported
runtime; the rest are checked here directly.
"""

import copy
import hashlib
import itertools
import json
import re
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from cryptoarena.analytics import (
    aggregate_run, compare_runs, load_match_scores, normalize, paired_permutation_test, sign_flip_pvalue,
)
from cryptoarena.arena import (
    MatchConfig, ScriptedAgent, SuiteConfig, Transcript, assemble_role_prompt, derive_role_views, load_suite, run_match,
    run_suite, scripted_factory,
)
from cryptoarena.arena.agents import load_scripts
from cryptoarena.cli import main as cli_main
from cryptoarena.wire import canonical_json

ROOT = Path(__file__).resolve().parents[1]
TESTS = ROOT / "tests"
DATA = ROOT / "src" / "cryptoarena" / "data"
CALIBRATED = TESTS / "fixtures" / "calibrated"

RESULTS: list[str] = []


@contextmanager
def criterion(n: int, name: str):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        line = f"ACCEPTANCE {n} {status} {name} ({time.perf_counter() - t0:.2f}s)"
        RESULTS.append(line)
        print(line)


def run_pytest(*args) -> tuple[int, int, float, str]:
    """Run pytest in a subprocess; returns (exit code, passed count, reported seconds, output)."""
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *args],
                          cwd=ROOT, capture_output=True, text=True, timeout=600)
    out = proc.stdout + proc.stderr
    m = re.search(r"(\d+) passed.* in ([\d.]+)s", out)
    passed, secs = (int(m.group(1)), float(m.group(2))) if m else (0, float("inf"))
    return proc.returncode, passed, secs, out


def tree_digest(root: Path) -> str:
    h = hashlib.sha256()
    for p in sorted(root.rglob("*")):
        if p.is_file():
            h.update(str(p.relative_to(root)).encode() + b"\0" + p.read_bytes() + b"\0")
    return h.hexdigest()


# 1 -------------------------------------------------------------------------


def test_criterion_1_crypto_vectors():
    with criterion(1, "crypto vector suite"):
        code, passed, secs, out = run_pytest("tests/test_vectors.py", "-vv")
        assert code == 0, out[-2000:]
        for name in ("sha2_vectors", "hmac_rfc4231", "hkdf_rfc5869", "aes_gcm_nist", "x25519_rfc7748",
                     "ed25519_rfc8032", "bip340_vectors"):
            assert re.search(rf"test_{name}\S* PASSED", out), name
        assert secs < 5, f"vector suite took {secs}s"


# 2 -------------------------------------------------------------------------


def test_criterion_2_property_suites():
    with criterion(2, "property suites"):
        code, passed, secs, out = run_pytest("tests/test_cryptomath_properties.py")
        assert code == 0, out[-2000:]
        for name in ("x25519_commutativity", "group_laws", "pedersen_homomorphism", "round_trip_and_bit_flips",
                     "merkle", "crt_matches_exhaustive", "rsa_keygen_512"):
            assert name in (TESTS / "test_cryptomath_properties.py").read_text()
        assert "max_examples=100" in (TESTS / "test_cryptomath_properties.py").read_text()
        assert secs < 60, f"property suite took {secs}s"


# 3 -------------------------------------------------------------------------


def test_criterion_3_wire_conformance():
    with criterion(3, "wire conformance"):
        code, passed, secs, out = run_pytest("tests/test_wire.py")
        assert code == 0, out[-2000:]
        from cryptoarena.wire import CryptoMath
        svc = CryptoMath()
        for op in svc.ops:
            ex = svc.schema_of(op).get("example_args")
            assert ex is not None, op
            assert svc.dispatch({"op": op, "args": ex})["ok"], op
        golden = (TESTS / "fixtures" / "wire_golden_requests.jsonl").read_text().splitlines()
        assert len([g for g in golden if g.strip()]) == 20


# 4 -------------------------------------------------------------------------


def plant_sentinels(doc):
    doc = copy.deepcopy(doc)
    for c in doc["challenges"]:
        jo = c["judge_only"]
        jo["what_good_looks_like"] += f" SENTINEL-GOOD-{c['id']}"
        jo["common_failures"] = [f + f" SENTINEL-FAIL-{c['id']}-{i}" for i, f in enumerate(jo["common_failures"])]
        for p in c["participants"]:
            p["private_info"] += f" SENTINEL-PRIV-{c['id']}-{p['role_id']}"
    return doc


class Chatty:
    def __init__(self, name):
        self.name, self.n = name, 0

    def respond(self, system_prompt, messages):
        self.n += 1
        return f"{self.name} says {self.n}"


def test_criterion_4_arena_determinism(tmp_path):
    with criterion(4, "arena determinism and isolation"):
        suite = load_suite(DATA / "fixture_suite.json")
        scripts = load_scripts(DATA / "fixture_scripts.json")
        assert len(suite) >= 6
        digests = []
        for i, par in enumerate((1, 8, 1, 8)):
            arts = run_suite(suite, scripted_factory(scripts), SuiteConfig(parallelism=par), tmp_path / f"r{i}")
            digests.append(tree_digest(tmp_path / f"r{i}"))
        assert len(set(digests)) == 1

        # rotation: one turn per speaker in initiator-first order, tool calls or not
        for t in arts.transcripts:
            ch = next(c for c in suite if c.id == t.challenge_id)
            order = [ch.symmetry_breaker.initiator_role] + [r for r in ch.role_ids if r != ch.symmetry_breaker.initiator_role]
            assert [x.speaker for x in t.turns] == [order[i % len(order)] for i in range(len(t.turns))]
            for x in t.turns:
                assert len(x.tool_exchanges) <= 3
        assert sum(t.outcome()["refused_tool_calls"] for t in arts.transcripts) > 0

        # cap exactness and max_turns default
        ch = suite[0]
        spam = json.dumps({"tool": "cryptomath", "op": "ping", "args": {}})
        agents = {r: ScriptedAgent([spam] * 4 + ["done"]) for r in ch.role_ids}
        first = run_match(ch, agents, MatchConfig(max_turns=2)).turns[0]
        assert len(first.tool_exchanges) == 3 and first.refused_request is not None
        assert MatchConfig().max_turns == 15
        long = run_match(ch, {r: Chatty(r) for r in ch.role_ids}, MatchConfig())
        assert len(long.turns) == 15

        # sentinel isolation
        planted = load_suite(plant_sentinels(json.loads((DATA / "fixture_suite.json").read_text())))
        judge_marks = [s.split()[-1] for c in planted for s in [c.judge_only.what_good_looks_like, *c.judge_only.common_failures]]
        for c in planted:
            for r in c.role_ids:
                prompt = assemble_role_prompt(c, r)
                assert not [m for m in judge_marks if m in prompt]
                assert not [o for o in c.role_ids if o != r and f"SENTINEL-PRIV-{c.id}-{o}" in prompt]
        run_suite(planted, scripted_factory(scripts), SuiteConfig(), tmp_path / "planted")
        for p in (tmp_path / "planted").rglob("*.json"):
            assert "SENTINEL-" not in p.read_text(), p


# 5 -------------------------------------------------------------------------


def tampered_copies(doc):
    """Yield one copy per exchange with a single byte of its serialized response changed."""
    for ti, turn in enumerate(doc["turns"]):
        for xi, x in enumerate(turn["tool_exchanges"]):
            text = canonical_json(x["response"])
            for i, c in enumerate(text):
                if not c.isalnum():
                    continue
                try:
                    new = json.loads(text[:i] + ("1" if c != "1" else "2") + text[i + 1:])
                except ValueError:
                    continue
                bad = copy.deepcopy(doc)
                bad["turns"][ti]["tool_exchanges"][xi]["response"] = new
                yield bad
                break


def test_criterion_5_replay(tmp_path, capsys):
    with criterion(5, "replay verification"):
        scripts = load_scripts(DATA / "fixture_scripts.json")
        run_suite(load_suite(DATA / "fixture_suite.json"), scripted_factory(scripts), SuiteConfig(), tmp_path / "run")
        paths = sorted((tmp_path / "run" / "matches").glob("*.transcript.json"))
        tampered = 0
        for p in paths:
            assert cli_main(["replay", "--verify-tools", str(p)]) == 0, p.name
            for bad in tampered_copies(json.loads(p.read_text())):
                q = tmp_path / "bad.json"
                q.write_text(canonical_json(bad))
                assert cli_main(["replay", "--verify-tools", str(q)]) == 1
                assert "+++ replayed" in capsys.readouterr().err
                tampered += 1
        assert tampered >= 20


# 6 -------------------------------------------------------------------------


def test_criterion_6_judge_scaffold():
    with criterion(6, "judge scaffold"):
        cases = json.loads((TESTS / "fixtures" / "verdict_golden.json").read_text())
        assert len(cases) == 12
        code, passed, secs, out = run_pytest(
            "tests/test_judge.py", "-k", "golden or reproducible or hand_counts or zero_tool_results")
        assert code == 0 and passed >= 15, out[-2000:]


# 7 -------------------------------------------------------------------------

TABLE1 = [((.961, .845, .688, .322, .755), .693), ((.917, .785, .629, .444, .639), .676),
          ((.892, .767, .605, .398, .650), .662), ((.855, .778, .495, .452, .495), .603),
          ((.818, .728, .435, .502, .425), .582), ((.740, .583, .347, .680, .307), .531),
          ((.712, .505, .384, .432, .354), .472), ((.755, .375, .378, .439, .385), .457),
          ((.621, .492, .263, .359, .237), .390), ((.659, .311, .280, .503, .205), .388),
          ((.615, .420, .200, .412, .195), .368)]


def exhaustive_p(d):
    d = np.asarray(d, float)
    signs = np.array(list(itertools.product((1, -1), repeat=len(d))))
    return float(np.mean(np.abs((signs * d).mean(axis=1)) >= abs(d.mean()) - 1e-12))


def test_criterion_7_statistics():
    with criterion(7, "statistics reproduction"):
        t0 = time.perf_counter()
        assert [normalize(s) for s in (1, 3, 5)] == [0.0, 0.5, 1.0]
        for dims, printed in TABLE1:
            assert abs(sum(dims) / 5 - printed) <= 0.022

        rep = compare_runs(load_match_scores(CALIBRATED / "base.json"), load_match_scores(CALIBRATED / "tuned.json"))
        assert f"{rep.row('overall').delta:+.3f}" == "+0.220"
        assert f"{rep.row('tool_usage').delta:+.3f}" == "-0.110"

        floor = paired_permutation_test({("c", i): 0.0 for i in range(50)}, {("c", i): 1.0 for i in range(50)})
        assert floor == 1 / 2001

        rng = np.random.default_rng(2024)
        for n in range(2, 13):
            for k in range(6):
                d = rng.integers(-4, 5, n) / 4 + rng.normal(0, 0.3 * (k % 3), n)
                assert abs(sign_flip_pvalue(d, resamples=20000, seed=k) - exhaustive_p(d)) <= 0.02, (n, k)
        assert time.perf_counter() - t0 < 30


# 8 -------------------------------------------------------------------------


def test_criterion_8_end_to_end(tmp_path):
    with criterion(8, "end-to-end smoke"):
        t0 = time.perf_counter()
        assert cli_main(["run", str(ROOT / "configs" / "smoke_100.json"), "--run-id", "smoke",
                         "--output-dir", str(tmp_path)]) == 0
        elapsed = time.perf_counter() - t0
        run = tmp_path / "smoke"
        summary = json.loads((run / "summary.json").read_text())
        transcripts = sorted((run / "matches").glob("*.transcript.json"))
        views = sorted((run / "matches").glob("*.views.json"))
        verdicts = [json.loads(p.read_text()) for p in sorted((run / "verdicts").glob("*.verdict.json"))]
        assert summary["match_count"] == len(transcripts) == len(views) == len(verdicts) == 100
        assert len({t["challenge_id"] for t in summary["matches"]}) == 50
        docs = [json.loads(p.read_text()) for p in transcripts]
        assert summary["turn_count"] == sum(len(d["turns"]) for d in docs)
        assert summary["tool_result_count"] == sum(len(t["tool_exchanges"]) for d in docs for t in d["turns"])
        assert summary["abort_count"] == sum(d["outcome"]["aborted"] for d in docs)
        assert summary["judge_failure_count"] == sum(v["judge_failure"] for v in verdicts)
        scores = summary["scores"]
        assert scores["scored_count"] + scores["judge_failure_count"] == 100
        assert scores["outcome_counts"]["success"] == sum(v["outcome"] == "success" for v in verdicts)
        assert scores == aggregate_run(load_match_scores(run)).to_dict()
        for d in docs[:5]:
            assert derive_role_views(Transcript.from_dict(d)) == json.loads(
                (run / "matches" / f"{d['challenge_id']}.{d['repetition_index']}.views.json").read_text())
        assert elapsed < 120, f"{elapsed:.1f}s"
