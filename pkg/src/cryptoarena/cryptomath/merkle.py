"""SHA-256 Merkle parents and inclusion-path verification.

Index convention: bit ``i`` of ``index`` (least significant first) gives the
position of the running node at level ``i``. A 0 bit means the running node
is the left child and ``siblings[i]`` is hashed on the right.
"""

import hashlib

from .errors import input_error


def parent_sha256(left: bytes, right: bytes) -> bytes:
    return hashlib.sha256(left + right).digest()


def verify_path_sha256(leaf: bytes, siblings: list[bytes], index: int, root: bytes) -> tuple[bytes, bool]:
    if index < 0 or index >= 1 << len(siblings):
        raise input_error(f"index must be in [0, 2^{len(siblings)})")
    node = leaf
    for level, sibling in enumerate(siblings):
        if (index >> level) & 1:
            node = parent_sha256(sibling, node)
        else:
            node = parent_sha256(node, sibling)
    return node, node == root
