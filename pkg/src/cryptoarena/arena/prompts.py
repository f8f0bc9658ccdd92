"""Participant system prompts.

Section order is fixed: global rules, public background, the role's own
goals, constraints and private information, then the opening move for the
initiator only. Nothing from ``judge_only`` or other roles is read here.
"""

from importlib import resources

from .challenge import Challenge


def default_rules() -> str:
    return resources.files("cryptoarena.data").joinpath("participant_rules.md").read_text(encoding="utf-8")


def assemble_role_prompt(challenge: Challenge, role_id: str, global_rules: str | None = None) -> str:
    role = challenge.role(role_id)  # KeyError for unknown roles
    rules = default_rules() if global_rules is None else global_rules
    others = ", ".join(r for r in challenge.role_ids if r != role_id)
    parts = [
        rules.rstrip(),
        f"## Scenario: {challenge.title}\n\n{challenge.background}",
        f"## Your role: {role_id}\n\nOther parties: {others}",
        f"### Goals\n\n{role.goals}",
        f"### Constraints\n\n{role.constraints or '(none)'}",
        f"### Private information\n\n{role.private_info or '(none)'}",
    ]
    if challenge.symmetry_breaker.initiator_role == role_id:
        parts.append(f"## Opening move\n\nYou speak first. {challenge.symmetry_breaker.required_first_move}")
    return "\n\n".join(parts) + "\n"
