"""Calculator transport: envelope, dispatch, HTTP and CLI."""

from .cli_eval import cli_eval
from .service import VERSION, CryptoMath, canonical_json

__all__ = ["VERSION", "CryptoMath", "canonical_json", "cli_eval"]
