"""Request/response envelope and op dispatch.

A request is ``{"op": str, "args": {...}}``. A response is always an
envelope ``{"ok", "op", "result" | "error", "meta"}`` with exactly one of
``result``/``error``. Envelopes are serialized canonically (sorted keys,
no whitespace, ASCII-only) so transcripts are byte-stable.
"""

import json
import logging
import os
import re

from .. import __version__
from ..cryptomath import errors
from ..cryptomath.errors import CryptoMathError
from ..cryptomath.numtheory import RSA_SECURE_BITS
from ..cryptomath.rng import SystemRng
from ..cryptomath.symmetric import DEFAULT_CHAIN_CAP
from .ops import BYTES, BYTES_ARRAY, INT, INT_ARRAY, STRING, TERMS, build_table

log = logging.getLogger(__name__)

VERSION = __version__
CHAIN_CAP_ENV = "CRYPTOMATH_MAX_CHAIN_ITERS"

_HEX_RE = re.compile(r"[0-9a-fA-F]*")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True, allow_nan=False)


def default_chain_cap() -> int:
    raw = os.environ.get(CHAIN_CAP_ENV)
    if not raw:
        return DEFAULT_CHAIN_CAP
    return int(raw)


def decode_hex(value, name: str) -> bytes:
    if not isinstance(value, str):
        raise CryptoMathError(errors.BAD_ARGS, f"{name}: expected a 0x-hex string")
    if not value.startswith("0x"):
        raise CryptoMathError(errors.BAD_HEX, f"{name}: missing 0x prefix")
    digits = value[2:]
    if not _HEX_RE.fullmatch(digits) or len(digits) % 2:
        raise CryptoMathError(errors.BAD_HEX, f"{name}: malformed hex")
    return bytes.fromhex(digits)


def decode_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise CryptoMathError(errors.BAD_ARGS, f"{name}: expected an integer")
    if isinstance(value, int):
        if value < 0:
            raise CryptoMathError(errors.BAD_ARGS, f"{name}: must be non-negative")
        return value
    if isinstance(value, str):
        if not value.startswith("0x"):
            raise CryptoMathError(errors.BAD_HEX, f"{name}: missing 0x prefix")
        digits = value[2:]
        if not digits or not _HEX_RE.fullmatch(digits):
            raise CryptoMathError(errors.BAD_HEX, f"{name}: malformed hex")
        return int(digits, 16)
    raise CryptoMathError(errors.BAD_ARGS, f"{name}: expected an integer or 0x-hex string")


def _decode_list(value, name: str):
    if not isinstance(value, list):
        raise CryptoMathError(errors.BAD_ARGS, f"{name}: expected an array")
    return value


def _decode_term(value, name: str):
    if not isinstance(value, dict) or set(value) != {"g1", "g2", "sign"}:
        raise CryptoMathError(errors.BAD_ARGS, f"{name}: expected an object with keys g1, g2, sign")
    sign = value["sign"]
    if isinstance(sign, bool) or sign not in (1, -1):
        raise CryptoMathError(errors.BAD_ARGS, f"{name}.sign: must be 1 or -1")
    g1 = decode_hex(value["g1"], f"{name}.g1")
    g2 = decode_hex(value["g2"], f"{name}.g2")
    if len(g1) != 48:
        raise errors.length_error(f"{name}.g1", 48, len(g1))
    if len(g2) != 96:
        raise errors.length_error(f"{name}.g2", 96, len(g2))
    return g1, g2, sign


def decode_arg(arg, value):
    if arg.type == BYTES:
        data = decode_hex(value, arg.name)
        if arg.length is not None and len(data) != arg.length:
            raise errors.length_error(arg.name, arg.length, len(data))
        return data
    if arg.type == INT:
        return decode_int(value, arg.name)
    if arg.type == INT_ARRAY:
        return [decode_int(v, f"{arg.name}[{i}]") for i, v in enumerate(_decode_list(value, arg.name))]
    if arg.type == BYTES_ARRAY:
        return [decode_hex(v, f"{arg.name}[{i}]") for i, v in enumerate(_decode_list(value, arg.name))]
    if arg.type == TERMS:
        return [_decode_term(v, f"{arg.name}[{i}]") for i, v in enumerate(_decode_list(value, arg.name))]
    if arg.type == STRING:
        if not isinstance(value, str):
            raise CryptoMathError(errors.BAD_ARGS, f"{arg.name}: expected a string")
        return value
    raise AssertionError(arg.type)


class CryptoMath:
    """Dispatches envelopes to calculator operations.

    ``rng`` feeds the keygen ops; pass a ``SeededRng`` for reproducible
    results. ``chain_cap`` bounds ``sha256_chain`` iterations.
    """

    version = VERSION

    def __init__(self, rng=None, chain_cap: int | None = None):
        self.rng = rng if rng is not None else SystemRng()
        self.chain_cap = chain_cap if chain_cap is not None else default_chain_cap()
        self.table = build_table(self)

    @property
    def ops(self) -> list[str]:
        return list(self.table)

    def _spec(self, op: str):
        try:
            return self.table[op]
        except KeyError:
            raise CryptoMathError(errors.UNKNOWN_OP, f"unknown op {op!r}") from None

    def schema_of(self, op: str) -> dict:
        return self._spec(op).schema()

    def help_of(self, op: str) -> dict:
        spec = self._spec(op)
        return {"usage": spec.usage, **spec.schema()}

    def _meta(self, op: str, result: dict | None) -> dict:
        meta = {"version": self.version}
        if op == "rsa_keygen" and result is not None and int(result["n_hex"], 16).bit_length() < RSA_SECURE_BITS:
            meta["insecure"] = True
        return meta

    def dispatch(self, request) -> dict:
        op = request.get("op") if isinstance(request, dict) else None
        echo = op if isinstance(op, str) else ""
        try:
            if not isinstance(request, dict):
                raise CryptoMathError(errors.BAD_ARGS, "request must be a JSON object")
            if not isinstance(op, str) or not op:
                raise CryptoMathError(errors.BAD_ARGS, "op must be a non-empty string")
            spec = self._spec(op)
            args = request.get("args")
            if not isinstance(args, dict):
                raise CryptoMathError(errors.BAD_ARGS, "args must be a JSON object")
            expected = [a.name for a in spec.args]
            missing = [n for n in expected if n not in args]
            extra = sorted(set(args) - set(expected))
            if missing or extra:
                parts = []
                if missing:
                    parts.append("missing " + ", ".join(missing))
                if extra:
                    parts.append("unexpected " + ", ".join(extra))
                raise CryptoMathError(errors.BAD_ARGS, "; ".join(parts))
            decoded = {a.name: decode_arg(a, args[a.name]) for a in spec.args}
            result = spec.handler(**decoded)
        except CryptoMathError as exc:
            return {"ok": False, "op": echo, "error": {"code": exc.code, "message": exc.message},
                    "meta": {"version": self.version}}
        except Exception as exc:  # envelope totality: never leak a traceback to the caller
            log.exception("internal error in op %s", echo)
            return {"ok": False, "op": echo, "error": {"code": errors.INTERNAL, "message": str(exc) or type(exc).__name__},
                    "meta": {"version": self.version}}
        return {"ok": True, "op": echo, "result": result, "meta": self._meta(echo, result)}

    def handle_text(self, text: str) -> str:
        """Parse one JSON document and return the canonical response.

        Raises ``ValueError`` if ``text`` is not JSON at all; everything
        after parsing is reported inside the envelope.
        """
        request = json.loads(text)
        return canonical_json(self.dispatch(request))


def error_envelope(code: str, message: str, op: str = "") -> dict:
    return {"ok": False, "op": op, "error": {"code": code, "message": message}, "meta": {"version": VERSION}}
