"""Challenge records and suite loading.

A suite file is one JSON document ``{"version": 1, "challenges": [...]}``.
The field layout is described by ``data/challenge_suite.schema.json``;
validation here is hand-written so errors can name the offending
challenge id and field path.
"""

import copy
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

SUITE_VERSION = 1
VALIDATOR_KINDS = ("min_tool_results", "primitive_named")


class ChallengeError(ValueError):
    def __init__(self, challenge_id: str, path: str, problem: str):
        self.challenge_id = challenge_id
        self.path = path
        super().__init__(f"challenge {challenge_id!r}: {path}: {problem}")


@dataclass(frozen=True)
class RoleSpec:
    role_id: str
    goals: str
    constraints: str
    private_info: str


@dataclass(frozen=True)
class SymmetryBreaker:
    initiator_role: str
    required_first_move: str


@dataclass(frozen=True)
class JudgeOnly:
    target_primitive_families: list[str]
    what_good_looks_like: str
    common_failures: list[str]


@dataclass(frozen=True)
class ValidatorSpec:
    kind: str
    threshold: int | None = None
    aliases: list[str] | None = None

    def to_dict(self) -> dict:
        if self.kind == "min_tool_results":
            return {"kind": self.kind, "threshold": self.threshold}
        return {"kind": self.kind, "aliases": list(self.aliases)}


@dataclass(frozen=True)
class Challenge:
    id: str
    title: str
    background: str
    participants: list[RoleSpec]
    symmetry_breaker: SymmetryBreaker
    judge_only: JudgeOnly
    validators: list[ValidatorSpec]
    requires_computation: bool
    difficulty: str | None = None
    threat_metadata: dict | None = field(default=None)

    @property
    def role_ids(self) -> list[str]:
        return [p.role_id for p in self.participants]

    def role(self, role_id: str) -> RoleSpec:
        for p in self.participants:
            if p.role_id == role_id:
                return p
        raise KeyError(f"challenge {self.id!r} has no role {role_id!r}")

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "title": self.title,
            "background": self.background,
            "participants": [asdict(p) for p in self.participants],
            "symmetry_breaker": asdict(self.symmetry_breaker),
            "judge_only": asdict(self.judge_only),
            "validators": [v.to_dict() for v in self.validators],
            "requires_computation": self.requires_computation,
        }
        if self.difficulty is not None:
            out["difficulty"] = self.difficulty
        if self.threat_metadata is not None:
            out["threat_metadata"] = copy.deepcopy(self.threat_metadata)
        return out


_CHALLENGE_KEYS = {"id", "title", "background", "participants", "symmetry_breaker", "judge_only",
                   "validators", "requires_computation", "difficulty", "threat_metadata"}
_OPTIONAL_KEYS = {"difficulty", "threat_metadata"}


class _Checker:
    def __init__(self, cid: str):
        self.cid = cid

    def fail(self, path, problem):
        raise ChallengeError(self.cid, path, problem)

    def obj(self, value, path, keys, optional=()):
        if not isinstance(value, dict):
            self.fail(path, "expected an object")
        missing = [k for k in keys if k not in value and k not in optional]
        if missing:
            self.fail(f"{path}.{missing[0]}" if path else missing[0], "missing field")
        extra = sorted(set(value) - set(keys))
        if extra:
            self.fail(f"{path}.{extra[0]}" if path else extra[0], "unknown field")
        return value

    def text(self, value, path, allow_empty=False):
        if not isinstance(value, str):
            self.fail(path, "expected a string")
        if not allow_empty and not value.strip():
            self.fail(path, "must be non-empty")
        return value

    def text_list(self, value, path, allow_empty_list=False):
        if not isinstance(value, list):
            self.fail(path, "expected an array of strings")
        if not value and not allow_empty_list:
            self.fail(path, "must be non-empty")
        return [self.text(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _parse_validator(ck: _Checker, raw, path) -> ValidatorSpec:
    if not isinstance(raw, dict) or "kind" not in raw:
        ck.fail(path, "expected an object with a kind")
    kind = raw["kind"]
    if kind == "min_tool_results":
        ck.obj(raw, path, ("kind", "threshold"))
        t = raw["threshold"]
        if isinstance(t, bool) or not isinstance(t, int) or t < 1:
            ck.fail(f"{path}.threshold", "must be an integer >= 1")
        return ValidatorSpec(kind, threshold=t)
    if kind == "primitive_named":
        ck.obj(raw, path, ("kind", "aliases"))
        return ValidatorSpec(kind, aliases=ck.text_list(raw["aliases"], f"{path}.aliases"))
    ck.fail(f"{path}.kind", f"unknown validator kind {kind!r}; expected one of {', '.join(VALIDATOR_KINDS)}")


def parse_challenge(raw, index: int = 0) -> Challenge:
    cid = raw.get("id") if isinstance(raw, dict) and isinstance(raw.get("id"), str) else f"#{index}"
    ck = _Checker(cid)
    ck.obj(raw, "", _CHALLENGE_KEYS, _OPTIONAL_KEYS)
    ck.text(raw["id"], "id")

    if not isinstance(raw["participants"], list):
        ck.fail("participants", "expected an array")
    roles = []
    for i, p in enumerate(raw["participants"]):
        path = f"participants[{i}]"
        ck.obj(p, path, ("role_id", "goals", "constraints", "private_info"))
        roles.append(RoleSpec(
            role_id=ck.text(p["role_id"], f"{path}.role_id"),
            goals=ck.text(p["goals"], f"{path}.goals"),
            constraints=ck.text(p["constraints"], f"{path}.constraints", allow_empty=True),
            private_info=ck.text(p["private_info"], f"{path}.private_info", allow_empty=True),
        ))
    if len(roles) < 2:
        ck.fail("participants", "at least two participants are required")
    ids = [r.role_id for r in roles]
    dupes = sorted({r for r in ids if ids.count(r) > 1})
    if dupes:
        ck.fail("participants", f"duplicate role_id {dupes[0]!r}")

    sb = ck.obj(raw["symmetry_breaker"], "symmetry_breaker", ("initiator_role", "required_first_move"))
    breaker = SymmetryBreaker(
        ck.text(sb["initiator_role"], "symmetry_breaker.initiator_role"),
        ck.text(sb["required_first_move"], "symmetry_breaker.required_first_move"),
    )
    if breaker.initiator_role not in ids:
        ck.fail("symmetry_breaker.initiator_role", f"{breaker.initiator_role!r} is not a participant")

    jo = ck.obj(raw["judge_only"], "judge_only", ("target_primitive_families", "what_good_looks_like", "common_failures"))
    judge_only = JudgeOnly(
        ck.text_list(jo["target_primitive_families"], "judge_only.target_primitive_families"),
        ck.text(jo["what_good_looks_like"], "judge_only.what_good_looks_like"),
        ck.text_list(jo["common_failures"], "judge_only.common_failures", allow_empty_list=True),
    )

    if not isinstance(raw["validators"], list):
        ck.fail("validators", "expected an array")
    validators = [_parse_validator(ck, v, f"validators[{i}]") for i, v in enumerate(raw["validators"])]

    if not isinstance(raw["requires_computation"], bool):
        ck.fail("requires_computation", "expected a boolean")
    difficulty = raw.get("difficulty")
    if difficulty is not None:
        ck.text(difficulty, "difficulty")
    threat = raw.get("threat_metadata")
    if threat is not None and not isinstance(threat, dict):
        ck.fail("threat_metadata", "expected an object")

    return Challenge(
        id=raw["id"],
        title=ck.text(raw["title"], "title"),
        background=ck.text(raw["background"], "background"),
        participants=roles,
        symmetry_breaker=breaker,
        judge_only=judge_only,
        validators=validators,
        requires_computation=raw["requires_computation"],
        difficulty=difficulty,
        threat_metadata=copy.deepcopy(threat),
    )


def parse_suite(doc) -> list[Challenge]:
    if not isinstance(doc, dict) or set(doc) != {"version", "challenges"}:
        raise ChallengeError("<suite>", "", "expected an object with exactly version and challenges")
    if doc["version"] != SUITE_VERSION:
        raise ChallengeError("<suite>", "version", f"unsupported suite version {doc['version']!r}")
    if not isinstance(doc["challenges"], list):
        raise ChallengeError("<suite>", "challenges", "expected an array")
    out, seen = [], set()
    for i, raw in enumerate(doc["challenges"]):
        ch = parse_challenge(raw, i)
        if ch.id in seen:
            raise ChallengeError(ch.id, "id", "duplicate challenge id")
        seen.add(ch.id)
        out.append(ch)
    return out


def load_suite(source) -> list[Challenge]:
    """Load a suite from a path, an open text stream or an already-parsed dict."""
    if isinstance(source, dict):
        return parse_suite(source)
    if hasattr(source, "read"):
        return parse_suite(json.load(source))
    return parse_suite(json.loads(Path(source).read_text(encoding="utf-8")))


def suite_to_dict(challenges: list[Challenge]) -> dict:
    return {"version": SUITE_VERSION, "challenges": [c.to_dict() for c in challenges]}


def expand_suite(challenges: list[Challenge], size: int) -> list[Challenge]:
    """Cycle ``challenges`` into a synthetic suite of exactly ``size`` entries.

    The first pass keeps the original ids; later copies get a ``--xNN`` suffix.
    """
    if not challenges:
        raise ValueError("cannot expand an empty suite")
    if size < 1:
        raise ValueError("size must be positive")
    out = []
    for i in range(size):
        base = challenges[i % len(challenges)]
        copy_no = i // len(challenges)
        if copy_no == 0:
            out.append(base)
        else:
            out.append(parse_challenge({**base.to_dict(), "id": f"{base.id}--x{copy_no:02d}"}))
    return out


def base_challenge_id(challenge_id: str) -> str:
    stem, sep, tail = challenge_id.rpartition("--x")
    return stem if sep and tail.isdigit() else challenge_id
