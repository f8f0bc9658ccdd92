"""Error vocabulary shared by the calculator core and the wire layer."""

UNKNOWN_OP = "unknown_op"
BAD_ARGS = "bad_args"
BAD_HEX = "bad_hex"
BAD_LENGTH = "bad_length"
NOT_INVERTIBLE = "not_invertible"
POINT_AT_INFINITY = "point_at_infinity"
MODULI_NOT_COPRIME = "moduli_not_coprime"
LOW_ORDER_POINT = "low_order_point"
INTERNAL = "internal"

ERROR_CODES = (
    UNKNOWN_OP,
    BAD_ARGS,
    BAD_HEX,
    BAD_LENGTH,
    NOT_INVERTIBLE,
    POINT_AT_INFINITY,
    MODULI_NOT_COPRIME,
    LOW_ORDER_POINT,
    INTERNAL,
)


class CryptoMathError(Exception):
    """An operation failed with one of the documented error codes."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def __repr__(self):
        return f"CryptoMathError({self.code!r}, {self.message!r})"


def input_error(message: str) -> CryptoMathError:
    return CryptoMathError(BAD_ARGS, message)


def length_error(name: str, expected: int, got: int) -> CryptoMathError:
    return CryptoMathError(BAD_LENGTH, f"{name}: expected {expected} bytes, got {got}")


def require_len(name: str, value: bytes, expected: int) -> bytes:
    if len(value) != expected:
        raise length_error(name, expected, len(value))
    return value
