"""Deterministic JSON canonicalization for content hashing.

Canonical form (JCS-like, see RFC 8785 for the general idea):
- UTF-8 encoding, no insignificant whitespace
- object keys sorted lexicographically by Unicode code point, which for
  UTF-8 output is identical to byte order
- integer-valued numbers serialized without a fraction part ("3", not "3.0")
- non-integer numbers in Python's shortest round-trip decimal form
- NaN/Infinity rejected

Every implementation that mints or verifies receipts must produce identical
canonical bytes for identical logical values; input hashes depend on it.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

__all__ = [
    "canonical_json",
    "canonical_dumps",
    "canonical_scalar",
    "sha256_hex",
    "canonical_hash_hex",
]


def _normalize(value: Any) -> Any:
    """Validate a JSON value and fold integral floats into ints."""
    if value is None or isinstance(value, (bool, str, int)):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number not allowed in canonical JSON: {value!r}")
        # float equality to an int is exact here: binary floats are exact values
        if value.is_integer():
            return int(value)
        return value
    if isinstance(value, list):
        return [_normalize(item) for item in value]
    if isinstance(value, tuple):
        return [_normalize(item) for item in value]
    if isinstance(value, dict):
        out = {}
        for key, item in value.items():
            if not isinstance(key, str):
                raise TypeError(f"object keys must be strings, got {type(key).__name__}")
            out[key] = _normalize(item)
        return out
    raise TypeError(f"not a JSON value: {type(value).__name__}")


def canonical_dumps(value: Any) -> str:
    """Return the canonical JSON text for a JSON value."""
    return json.dumps(
        _normalize(value),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )


def canonical_json(value: Any) -> bytes:
    """Return canonical JSON as UTF-8 bytes (the hashing input form)."""
    return canonical_dumps(value).encode("utf-8")


def canonical_scalar(value: Any) -> str:
    """Render one scalar the way it appears inside canonical JSON, unquoted.

    Used to stringify extracted fact values: "Alice" stays "Alice",
    148.5 becomes "148.5", 3.0 becomes "3", True becomes "true".
    """
    if isinstance(value, str):
        return value
    if value is None or isinstance(value, (bool, int, float)):
        return canonical_dumps(value)
    raise TypeError(f"not a scalar: {type(value).__name__}")


def sha256_hex(data: bytes) -> str:
    """Lowercase hex SHA-256 digest of raw bytes."""
    return hashlib.sha256(data).hexdigest()


def canonical_hash_hex(value: Any) -> str:
    """SHA-256 hex digest of the canonical JSON bytes of a value."""
    return sha256_hex(canonical_json(value))
