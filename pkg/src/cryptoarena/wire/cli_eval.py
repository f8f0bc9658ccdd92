"""CLI transport: one JSON request in, one canonical JSON line out."""

import sys

from ..cryptomath import errors
from .service import CryptoMath, canonical_json, error_envelope


def cli_eval(text: str | None, service: CryptoMath | None = None, stdout=None, stderr=None) -> int:
    """Exit 0 whenever an envelope was produced, even for ``ok: false``."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    service = service or CryptoMath()
    if text is None:
        try:
            text = sys.stdin.read()
        except (OSError, UnicodeDecodeError) as exc:
            stderr.write(canonical_json(error_envelope(errors.BAD_ARGS, f"cannot read stdin: {exc}")) + "\n")
            return 1
    try:
        out = service.handle_text(text)
    except ValueError as exc:
        stderr.write(canonical_json(error_envelope(errors.BAD_ARGS, f"input is not JSON: {exc}")) + "\n")
        return 1
    stdout.write(out + "\n")
    return 0
