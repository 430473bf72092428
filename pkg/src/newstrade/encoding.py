"""Canonical byte encoding and content digests.

Every digest in the system (pseudonyms, transaction ids, block hashes,
contract digests) is computed over the same tagged, length-prefixed field
encoding, so hashes reproduce exactly across processes and dump/load cycles.
"""

from __future__ import annotations

import hashlib
import json

ZERO_DIGEST = "00" * 32

_TAG_NONE = b"\x00"
_TAG_INT = b"\x01"
_TAG_STR = b"\x02"
_TAG_BYTES = b"\x03"


def canon(*fields) -> bytes:
    """Encode each field as tag + 4-byte length + payload, concatenated in order.

    Accepts None, int, str and bytes. The tag and length prefix make the
    encoding injective: no two distinct field tuples share an encoding.
    """
    out = bytearray()
    for value in fields:
        if value is None:
            tag, data = _TAG_NONE, b""
        elif isinstance(value, bool):
            raise TypeError("booleans have no canonical encoding")
        elif isinstance(value, int):
            tag, data = _TAG_INT, str(value).encode("ascii")
        elif isinstance(value, str):
            tag, data = _TAG_STR, value.encode("utf-8")
        elif isinstance(value, (bytes, bytearray)):
            tag, data = _TAG_BYTES, bytes(value)
        else:
            raise TypeError(f"cannot canonically encode {type(value).__name__}")
        out += tag
        out += len(data).to_bytes(4, "big")
        out += data
    return bytes(out)


def digest_bytes(data: bytes) -> str:
    """SHA-256 of raw bytes, as lowercase hex."""
    return hashlib.sha256(data).hexdigest()


def digest_fields(*fields) -> str:
    """SHA-256 over the canonical encoding of the given fields."""
    return digest_bytes(canon(*fields))


def canon_json(obj) -> str:
    """Deterministic JSON: sorted keys, no whitespace, ASCII only."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
