"""HMAC-signed tool execution receipts and the append-only session ledger.

A receipt is minted by the runtime for every tool call and records what the
tool was asked, what it returned (as hashes), how many result items it
produced, and a deterministic set of extracted facts. The HMAC-SHA256 tag
covers all of those fields, so a response generator that never sees the
session key cannot forge a receipt or usefully edit one after the fact.

Signing payload: the fields
    id | tool_name | input_hash | output_hash | result_count | facts_hash
       | timestamp_ms | duration_ms
joined by a 0x1F unit-separator byte. Hex digests and decimal integers can
never contain 0x1F, and tool names are validated against control characters,
so the encoding is unambiguous. facts_hash is the SHA-256 of the canonical
JSON of the facts map, which makes the facts tamper-evident as well.
"""

from __future__ import annotations

import hmac
import json
import logging
import os
import re
import threading
import time
import uuid
from dataclasses import dataclass, field, asdict
from typing import Any, Callable, Iterable, Iterator

from .canonical import canonical_json, canonical_scalar, sha256_hex

__all__ = [
    "ConfigError",
    "DuplicateReceiptError",
    "MalformedReceiptIdError",
    "LedgerFormatError",
    "ToolReceipt",
    "Ledger",
    "FactExtractorConfig",
    "extract_facts",
    "generate_receipt",
    "signing_payload",
    "verify_receipt_signature",
    "load_key_from_env",
    "DEFAULT_KEY_ENV",
    "MIN_KEY_LEN",
]

logger = logging.getLogger(__name__)

DEFAULT_KEY_ENV = "PRAMANA_KEY"
MIN_KEY_LEN = 32

_SEP = b"\x1f"
_UUID_RE = re.compile(
    r"^[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}$"
)
_HEX64_RE = re.compile(r"^[0-9a-f]{64}$")


class ConfigError(ValueError):
    """Bad signing configuration: short key, missing env var, bad tool name."""


class DuplicateReceiptError(ValueError):
    """A receipt with this id is already in the ledger."""


class MalformedReceiptIdError(ValueError):
    """Receipt id text does not parse as a UUID; distinct from a miss."""


class LedgerFormatError(ValueError):
    """Ledger file line is not a valid receipt record."""


def parse_receipt_id(text: str) -> str:
    """Validate UUID text (8-4-4-4-12 hex) and return its lowercase form."""
    if not isinstance(text, str) or not _UUID_RE.match(text):
        raise MalformedReceiptIdError(f"not a receipt id: {text!r}")
    return text.lower()


@dataclass(frozen=True)
class ToolReceipt:
    """Signed record of one tool execution.

    Digests and the signature are lowercase hex strings; `facts` is an
    ordered mapping of extracted fact name to stringified value.
    """

    id: str
    tool_name: str
    input_hash: str
    output_hash: str
    result_count: int
    facts: dict[str, str]
    timestamp_ms: int
    duration_ms: int
    signature: str

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ToolReceipt":
        try:
            return cls(
                id=str(data["id"]),
                tool_name=str(data["tool_name"]),
                input_hash=str(data["input_hash"]),
                output_hash=str(data["output_hash"]),
                result_count=int(data["result_count"]),
                facts={str(k): str(v) for k, v in dict(data["facts"]).items()},
                timestamp_ms=int(data["timestamp_ms"]),
                duration_ms=int(data["duration_ms"]),
                signature=str(data["signature"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise LedgerFormatError(f"bad receipt record: {exc}") from exc


def signing_payload(
    id: str,
    tool_name: str,
    input_hash: str,
    output_hash: str,
    result_count: int,
    facts: dict[str, str],
    timestamp_ms: int,
    duration_ms: int,
) -> bytes:
    """Byte string the HMAC tag is computed over."""
    facts_hash = sha256_hex(canonical_json(facts))
    parts = [
        id,
        tool_name,
        input_hash,
        output_hash,
        str(result_count),
        facts_hash,
        str(timestamp_ms),
        str(duration_ms),
    ]
    return _SEP.join(p.encode("utf-8") for p in parts)


def _sign(payload: bytes, key: bytes) -> str:
    return hmac.new(key, payload, "sha256").hexdigest()


def _check_key(key: bytes) -> None:
    if not isinstance(key, (bytes, bytearray)) or len(key) < MIN_KEY_LEN:
        raise ConfigError(f"signing key must be at least {MIN_KEY_LEN} bytes")


def _check_tool_name(tool_name: str) -> None:
    if not tool_name or any(ord(c) < 0x20 for c in tool_name):
        raise ConfigError(f"invalid tool name: {tool_name!r}")


class FactExtractorConfig:
    """Per-tool fact selectors: tool name -> list of (fact_key, path).

    Path expressions are dotted field names with optional list indices,
    e.g. "results[0].sender" or "close". Selectors are deterministic:
    the same structured output always yields the same facts map.
    """

    def __init__(self, selectors: dict[str, list[tuple[str, str]]] | None = None):
        self.selectors: dict[str, list[tuple[str, str]]] = {
            tool: list(pairs) for tool, pairs in (selectors or {}).items()
        }

    def for_tool(self, tool_name: str) -> list[tuple[str, str]] | None:
        return self.selectors.get(tool_name)

    def merged_with(self, other: "FactExtractorConfig") -> "FactExtractorConfig":
        combined = dict(self.selectors)
        combined.update(other.selectors)
        return FactExtractorConfig(combined)


_PATH_SEGMENT_RE = re.compile(r"^(?P<name>[^\[\]]*)(?P<indices>(?:\[\d+\])*)$")


def _resolve_path(value: Any, path: str) -> Any:
    """Walk a dotted/indexed path; raises KeyError/IndexError/TypeError on miss."""
    current = value
    for segment in path.split("."):
        m = _PATH_SEGMENT_RE.match(segment)
        if not m:
            raise KeyError(segment)
        name = m.group("name")
        if name:
            if not isinstance(current, dict):
                raise TypeError(f"cannot index {type(current).__name__} with {name!r}")
            current = current[name]
        for idx_text in re.findall(r"\[(\d+)\]", m.group("indices")):
            if not isinstance(current, list):
                raise TypeError(f"cannot index {type(current).__name__} with [{idx_text}]")
            current = current[int(idx_text)]
    return current


def extract_facts(
    tool_name: str, output: Any, cfg: FactExtractorConfig
) -> dict[str, str]:
    """Extract the configured key-value facts from a structured tool output.

    Paths that do not resolve, or that resolve to a non-scalar, contribute
    no fact; a warning is logged so extraction stays total and deterministic.
    Tools without an adapter yield an empty map.
    """
    selectors = cfg.for_tool(tool_name)
    if selectors is None:
        logger.warning("no fact extractor configured for tool %r", tool_name)
        return {}
    facts: dict[str, str] = {}
    for fact_key, path in selectors:
        try:
            raw = _resolve_path(output, path)
        except (KeyError, IndexError, TypeError):
            logger.debug("fact %r: path %r not present in %r output", fact_key, path, tool_name)
            continue
        if isinstance(raw, (dict, list)):
            logger.warning(
                "fact %r: path %r resolved to a non-scalar; omitted", fact_key, path
            )
            continue
        facts[fact_key] = canonical_scalar(raw)
    return facts


def _count_results(structured_output: Any) -> int:
    """Result-item count: len of a top-level `results` array when present,
    len of an array-shaped output, 1 for any other scalar/object, 0 for None."""
    if structured_output is None:
        return 0
    if isinstance(structured_output, dict):
        results = structured_output.get("results")
        if isinstance(results, list):
            return len(results)
        return 1
    if isinstance(structured_output, list):
        return len(structured_output)
    return 1


def generate_receipt(
    tool_name: str,
    input: Any,
    raw_output: bytes,
    structured_output: Any,
    key: bytes,
    cfg: FactExtractorConfig,
    clock: int | Callable[[], int] | None = None,
    duration_ms: int = 0,
    receipt_id: str | None = None,
) -> ToolReceipt:
    """Mint a signed receipt for one tool execution.

    `clock` may be a fixed millisecond timestamp or a callable returning one;
    `receipt_id` may be injected for reproducible fixtures, otherwise a fresh
    UUID4 is drawn. With both pinned, minting is fully deterministic.
    """
    _check_key(key)
    _check_tool_name(tool_name)
    if duration_ms < 0:
        raise ConfigError("duration_ms must be non-negative")
    if clock is None:
        timestamp_ms = time.time_ns() // 1_000_000
    elif callable(clock):
        timestamp_ms = int(clock())
    else:
        timestamp_ms = int(clock)
    rid = parse_receipt_id(receipt_id) if receipt_id is not None else str(uuid.uuid4())
    input_hash = sha256_hex(canonical_json(input))
    output_hash = sha256_hex(raw_output)
    result_count = _count_results(structured_output)
    facts = extract_facts(tool_name, structured_output, cfg)
    payload = signing_payload(
        rid, tool_name, input_hash, output_hash, result_count, facts,
        timestamp_ms, duration_ms,
    )
    return ToolReceipt(
        id=rid,
        tool_name=tool_name,
        input_hash=input_hash,
        output_hash=output_hash,
        result_count=result_count,
        facts=facts,
        timestamp_ms=timestamp_ms,
        duration_ms=duration_ms,
        signature=_sign(payload, key),
    )


def verify_receipt_signature(receipt: ToolReceipt, key: bytes) -> bool:
    """True iff the recomputed HMAC tag matches, compared in constant time.

    A forged or edited receipt is a False return, never an exception.
    """
    try:
        payload = signing_payload(
            receipt.id,
            receipt.tool_name,
            receipt.input_hash,
            receipt.output_hash,
            receipt.result_count,
            receipt.facts,
            receipt.timestamp_ms,
            receipt.duration_ms,
        )
    except Exception:
        return False
    return hmac.compare_digest(_sign(payload, key), receipt.signature.lower())


class Ledger:
    """Append-only store of the session's receipts.

    Entries are immutable and never removed; appends are serialized behind a
    lock while lookups are lock-free reads of an insertion-ordered index.
    """

    def __init__(self, key_id: str = "session"):
        self.key_id = key_id
        self._by_id: dict[str, ToolReceipt] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[ToolReceipt]:
        return iter(list(self._by_id.values()))

    @property
    def entries(self) -> list[ToolReceipt]:
        return list(self._by_id.values())

    def append(self, receipt: ToolReceipt) -> "Ledger":
        rid = parse_receipt_id(receipt.id)
        with self._lock:
            if rid in self._by_id:
                raise DuplicateReceiptError(f"receipt id already present: {rid}")
            self._by_id[rid] = receipt
        return self

    def lookup(self, receipt_id: str) -> ToolReceipt | None:
        """The receipt for this id, or None when it was never issued.

        Raises MalformedReceiptIdError for text that is not a UUID at all,
        so a garbled citation is distinguishable from a fabricated one.
        """
        return self._by_id.get(parse_receipt_id(receipt_id))

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for receipt in self._by_id.values():
                fh.write(receipt.to_json_line() + "\n")

    @classmethod
    def load(cls, path: str | os.PathLike, key_id: str = "session") -> "Ledger":
        ledger = cls(key_id=key_id)
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise LedgerFormatError(f"line {lineno}: not JSON: {exc}") from exc
                ledger.append(ToolReceipt.from_dict(record))
        return ledger

    @classmethod
    def from_receipts(cls, receipts: Iterable[ToolReceipt], key_id: str = "session") -> "Ledger":
        ledger = cls(key_id=key_id)
        for receipt in receipts:
            ledger.append(receipt)
        return ledger


def load_key_from_env(env_var: str = DEFAULT_KEY_ENV) -> bytes:
    """Read the hex-encoded 32-byte signing key from the environment.

    The key never appears in the ledger file; missing or malformed values
    are a startup error when signing is requested.
    """
    value = os.environ.get(env_var)
    if value is None:
        raise ConfigError(f"signing key env var {env_var} is not set")
    value = value.strip().lower()
    if not _HEX64_RE.match(value):
        raise ConfigError(f"{env_var} must be 64 hex chars (32 bytes)")
    return bytes.fromhex(value)
