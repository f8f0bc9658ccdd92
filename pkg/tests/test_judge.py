import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cryptoarena.arena import MatchConfig, ScriptedAgent, load_suite, run_match, scripted_factory
from cryptoarena.arena.agents import AgentError, load_scripts
from cryptoarena.arena.transcript import Transcript
from cryptoarena.judge import (
    DIMENSIONS, RuleBasedJudge, Verdict, VerdictError, assemble_judge_input, judge_match, judge_transcript,
    outcome_label, parse_verdict, run_validators,
)
from cryptoarena.judge.scaffold import default_rubric
from cryptoarena.wire import CryptoMath, canonical_json

from conftest import FIXTURES

DATA = Path(__file__).resolve().parents[1] / "src" / "cryptoarena" / "data"

# tool calls counted by reading the scripted dialogues, one number per challenge
HAND_COUNTS = {
    "prove-age-without-showing-id": 3,
    "family-emergency-vault-threshold": 2,
    "sealed-bid-auction-commitment": 3,
    "personal-calendar-overlap-without-sharing": 0,
    "secondhand-sale-signed-receipt": 3,
    "guest-list-membership-proof": 1,
    "password-breach-check-private": 2,
    "device-pairing-avoid-mitm": 4,
}

GOOD = {"primitive_selection": 4, "negotiation": 3, "implementation": 3, "tool_usage": 2, "security": 4, "verdict": "ok"}


@pytest.fixture(scope="module")
def suite():
    return load_suite(DATA / "fixture_suite.json")


@pytest.fixture(scope="module")
def played(suite):
    make = scripted_factory(load_scripts(DATA / "fixture_scripts.json"))
    return {c.id: (c, run_match(c, {r: make(c, r) for r in c.role_ids}, MatchConfig(match_seed=11))) for c in suite}


def empty_transcript(ch):
    return Transcript(ch.id, 0, 0, ch.role_ids, {"max_turns": 15}, "0.1.0")


# --- verdict parsing -------------------------------------------------------


def golden():
    return json.loads((FIXTURES / "verdict_golden.json").read_text())


def test_golden_set_size():
    cases = golden()
    assert len(cases) == 12
    assert {c["accept"] for c in cases} == {True, False}


@pytest.mark.parametrize("case", golden(), ids=lambda c: c["name"])
def test_golden_verdicts(case):
    if case["accept"]:
        v = parse_verdict(case["raw"])
        assert set(v.scores) == set(DIMENSIONS)
    else:
        with pytest.raises(VerdictError, match=case["reason"]):
            parse_verdict(case["raw"])


@pytest.mark.parametrize("raw, reason", [
    (json.dumps({**GOOD, "overall": 3}), "unknown key"),
    ('{"primitive_selection":4,"primitive_selection":5,"negotiation":3,"implementation":3,"tool_usage":2,"security":4,"verdict":"x"}', "duplicate"),
    (json.dumps({**GOOD, "security": 6}), "outside"),
    (json.dumps(GOOD) + " thanks!", "after"),
    ("```json\n" + json.dumps(GOOD), "fence"),
    ("[1, 2]", "no text before"),
    ("", "no text before"),
    (json.dumps({**GOOD, "verdict": 5}), "non-empty string"),
])
def test_more_rejections(raw, reason):
    with pytest.raises(VerdictError, match=reason):
        parse_verdict(raw)


scores = st.integers(1, 5)


@settings(max_examples=150, deadline=None)
@given(st.fixed_dictionaries({d: scores for d in DIMENSIONS}), st.text(min_size=1, max_size=60).filter(str.strip))
def test_valid_verdicts_roundtrip(dims, text):
    v = parse_verdict(json.dumps({**dims, "verdict": text}))
    assert v.scores == dims and v.verdict_text == text
    assert parse_verdict(json.dumps(v.to_dict())) == v


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_parse_verdict_total(raw):
    try:
        v = parse_verdict(raw)
    except VerdictError:
        return
    assert set(v.scores) == set(DIMENSIONS)


# --- validators ------------------------------------------------------------


def test_min_tool_results_matches_hand_counts(played):
    assert set(HAND_COUNTS) == set(played)
    for cid, (ch, tr) in played.items():
        assert tr.tool_result_count == HAND_COUNTS[cid]
        (mtr,) = [o for o in run_validators(ch, tr) if o.kind == "min_tool_results"]
        threshold = next(v.threshold for v in ch.validators if v.kind == "min_tool_results")
        assert mtr.passed == (HAND_COUNTS[cid] >= threshold)


def test_zero_tool_results_fail(played):
    ch, tr = played["personal-calendar-overlap-without-sharing"]
    assert ch.requires_computation and tr.tool_result_count == 0
    assert not next(o for o in run_validators(ch, tr) if o.kind == "min_tool_results").passed


def test_primitive_named_alias(suite):
    ch = next(c for c in suite if c.id == "personal-calendar-overlap-without-sharing")
    tr = run_match(ch, {"friend_b": ScriptedAgent(["Let's run a Private Set Intersection on our dates."]),
                        "friend_a": ScriptedAgent(["ok"])}, MatchConfig(max_turns=2))
    outcome = next(o for o in run_validators(ch, tr) if o.kind == "primitive_named")
    assert outcome.passed and "private set intersection" in outcome.detail


def test_empty_transcript_fails_everything(suite):
    for ch in suite:
        outcomes = run_validators(ch, empty_transcript(ch))
        assert outcomes and not any(o.passed for o in outcomes)


def test_validators_deterministic(played):
    for ch, tr in played.values():
        assert run_validators(ch, tr) == run_validators(ch, Transcript.from_dict(tr.to_dict()))


# --- judge input -----------------------------------------------------------


def test_judge_input_contents(played):
    for ch, tr in played.values():
        ji = assemble_judge_input(ch, tr)
        text = ji.render()
        for failure in ch.judge_only.common_failures:
            assert failure in text
        for fam in ch.judge_only.target_primitive_families:
            assert fam in text
        assert ch.judge_only.what_good_looks_like in text
        assert f"TOOL_RESULT count: {tr.tool_result_count}\n" in text
        for o in ji.validator_outcomes:
            assert f"- {o.kind}: {'PASS' if o.passed else 'FAIL'}" in text
        assert assemble_judge_input(ch, tr).render() == text


def test_rubric_primitive_absence_rule():
    rubric = default_rubric().lower()
    assert "if no family is named" in rubric and "the score is 1" in rubric
    assert "primitive_named" in rubric


# --- judge loop ------------------------------------------------------------


def tool_call(data="0x61"):
    return json.dumps({"tool": "cryptomath", "op": "sha256", "args": {"data": data}})


@pytest.fixture()
def ji(played):
    ch, tr = played["sealed-bid-auction-commitment"]
    return assemble_judge_input(ch, tr)


def test_two_calls_then_verdict(ji):
    judge = ScriptedAgent([tool_call("0x01"), tool_call("0x02"), json.dumps(GOOD)])
    res = judge_match(judge, ji, CryptoMath().dispatch)
    assert res.verdict == Verdict({k: GOOD[k] for k in DIMENSIONS}, "ok")
    assert len(res.exchanges) == 2 and res.refused_calls == 0


def test_cap_plus_one(ji):
    cap = 2
    judge = ScriptedAgent([tool_call(), tool_call(), tool_call(), json.dumps(GOOD)])
    res = judge_match(judge, ji, CryptoMath().dispatch, judge_tool_cap=cap)
    assert len(res.exchanges) == cap and res.refused_calls == 1
    assert res.verdict is not None


def test_prose_only_is_failure(ji):
    judge = ScriptedAgent([], when_done="I think they did fine overall.")
    res = judge_match(judge, ji, CryptoMath().dispatch, retries=2)
    assert res.judge_failure and res.attempts == 3 and judge.calls == 3
    assert "no parsable verdict" in res.failure_reason


def test_retry_recovers(ji):
    judge = ScriptedAgent(["Score: good", json.dumps(GOOD)])
    res = judge_match(judge, ji, CryptoMath().dispatch)
    assert res.verdict is not None and res.attempts == 2


def test_endpoint_error_is_failure(ji):
    class Broken:
        def respond(self, system, msgs):
            raise AgentError("down")

    res = judge_match(Broken(), ji, CryptoMath().dispatch)
    assert res.judge_failure and "down" in res.failure_reason


def test_scripted_judging_reproducible(played):
    for ch, tr in played.values():
        a = canonical_json(judge_transcript(RuleBasedJudge(), ch, tr))
        b = canonical_json(judge_transcript(RuleBasedJudge(), ch, Transcript.from_dict(json.loads(canonical_json(tr.to_dict())))))
        assert a == b


def test_rule_judge_follows_absence_rule(played):
    ch, tr = played["personal-calendar-overlap-without-sharing"]
    art = judge_transcript(RuleBasedJudge(), ch, tr)
    assert art["verdict"]["primitive_selection"] == 1
    assert art["outcome"] == "failure"


def test_outcome_label():
    assert outcome_label(None) is None
    assert outcome_label(Verdict(dict.fromkeys(DIMENSIONS, 3), "x")) == "success"
    assert outcome_label(Verdict({**dict.fromkeys(DIMENSIONS, 5), "primitive_selection": 2}, "x")) == "failure"
    assert outcome_label(Verdict(dict.fromkeys(DIMENSIONS, 2), "x")) == "failure"
