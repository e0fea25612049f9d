"""Parsing the self-tagging verification block out of agent responses.

Responses are expected to end with a block of per-claim metadata:

    ---VERIFICATION---
    - claim: "Alice sent you 3 emails"
      source_type: tool_output
      evidence: 4c45...-uuid
      checkable: true
    ---END VERIFICATION---

A JSON array of objects with the same keys is accepted between the markers
as well. Parsing never raises: a missing or malformed block degrades to a
single ungrounded claim covering the whole response, which downstream caps
trust at the Ungrounded level. When several blocks appear (models sometimes
echo their instructions) the last well-formed one wins.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

__all__ = [
    "Pramana",
    "Claim",
    "ParsedResponse",
    "parse_verification_block",
    "extract_urls",
    "BLOCK_START",
    "BLOCK_END",
    "SOURCE_TYPE_TOKENS",
]

BLOCK_START = "---VERIFICATION---"
BLOCK_END = "---END VERIFICATION---"


class Pramana(Enum):
    """Epistemic source category of a claim."""

    PRATYAKSHA = "pratyaksha"   # direct tool output
    ANUMANA = "anumana"         # inference from tool data
    UPAMANA = "upamana"         # comparison between evidenced facts
    SABDA = "sabda"             # external source / testimony
    ABHAVA = "abhava"           # claim of absence (empty result)
    UNGROUNDED = "ungrounded"   # no evidentiary basis

    @property
    def default_confidence(self) -> int:
        """Default confidence rank; higher is stronger. Testimony has no
        fixed rank (it depends on the source) and sits between comparison
        and absence by default."""
        return _CONFIDENCE_RANK[self]


_CONFIDENCE_RANK = {
    Pramana.PRATYAKSHA: 5,
    Pramana.ANUMANA: 4,
    Pramana.ABHAVA: 4,
    Pramana.SABDA: 2,
    Pramana.UPAMANA: 1,
    Pramana.UNGROUNDED: 0,
}


# wire tokens accepted in the block's source_type field
SOURCE_TYPE_TOKENS: dict[str, Pramana] = {
    "tool_output": Pramana.PRATYAKSHA,
    "inference": Pramana.ANUMANA,
    "comparison": Pramana.UPAMANA,
    "external_source": Pramana.SABDA,
    "absence": Pramana.ABHAVA,
    "opinion": Pramana.UNGROUNDED,
}

_URL_RE = re.compile(r"https?://[^\s)\]>\"'（）《》「」『』،，。、；：！？]+")


def extract_urls(text: str) -> list[str]:
    return [m.group(0).rstrip(".,;:!?।") for m in _URL_RE.finditer(text)]


@dataclass
class Claim:
    """One tagged factual claim from an agent response."""

    text: str
    source_type: Pramana
    evidence: str | None = None
    checkable: bool = True
    asserts: dict[str, str] | None = None
    premises: list[str] | None = None
    cited_urls: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.source_type is Pramana.UNGROUNDED:
            self.checkable = False
        if not self.cited_urls:
            self.cited_urls = extract_urls(self.text)


@dataclass
class ParsedResponse:
    prose: str
    claims: list[Claim]
    compliant: bool


def _ungrounded_fallback(prose: str) -> ParsedResponse:
    claim = Claim(text=prose.strip(), source_type=Pramana.UNGROUNDED, checkable=False)
    return ParsedResponse(prose=prose.strip(), claims=[claim], compliant=False)


def _find_blocks(response: str) -> tuple[list[str], str]:
    """All marker-delimited block bodies, plus the response with every
    delimited region removed."""
    lines = response.splitlines()
    blocks: list[str] = []
    prose_lines: list[str] = []
    body: list[str] | None = None
    for line in lines:
        stripped = line.strip()
        if body is None:
            if stripped == BLOCK_START:
                body = []
            else:
                prose_lines.append(line)
        else:
            if stripped == BLOCK_END:
                blocks.append("\n".join(body))
                body = None
            else:
                body.append(line)
    if body is not None:
        # unterminated block: not a block at all, keep the text as prose
        prose_lines.append(BLOCK_START)
        prose_lines.extend(body)
    return blocks, "\n".join(prose_lines).strip()


def _strip_quotes(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def _coerce_str_map(value) -> dict[str, str] | None:
    if not isinstance(value, dict) or not value:
        return None
    return {str(k): str(v) for k, v in value.items()}


def _coerce_str_list(value) -> list[str] | None:
    if not isinstance(value, list) or not value:
        return None
    return [str(v) for v in value]


def _claim_from_fields(fields: dict) -> Claim | None:
    text = fields.get("claim")
    if text is None or not str(text).strip():
        return None
    token = str(fields.get("source_type", "")).strip().lower()
    source_type = SOURCE_TYPE_TOKENS.get(token, Pramana.UNGROUNDED)
    evidence = fields.get("evidence")
    evidence = str(evidence).strip() or None if evidence is not None else None
    if evidence and evidence.lower() in {"none", "null", "n/a"}:
        evidence = None
    checkable_raw = fields.get("checkable", True)
    if isinstance(checkable_raw, str):
        checkable = checkable_raw.strip().lower() == "true"
    else:
        checkable = bool(checkable_raw)
    # a checkable direct-output or absence claim must cite a receipt; one
    # that does not has no evidentiary basis and degrades to ungrounded
    if (
        checkable
        and evidence is None
        and source_type in (Pramana.PRATYAKSHA, Pramana.ABHAVA)
    ):
        source_type = Pramana.UNGROUNDED
    return Claim(
        text=str(text).strip(),
        source_type=source_type,
        evidence=evidence,
        checkable=checkable,
        asserts=_coerce_str_map(fields.get("asserts")),
        premises=_coerce_str_list(fields.get("premises")),
    )


_ENTRY_START_RE = re.compile(r"^-\s*claim\s*:\s*(?P<value>.*)$")
_FIELD_RE = re.compile(r"^(?P<key>\w+)\s*:\s*(?P<value>.*)$")
_KNOWN_FIELDS = {"claim", "source_type", "evidence", "checkable", "asserts", "premises"}


def _parse_dash_list(body: str) -> list[Claim] | None:
    entries: list[dict] = []
    current: dict | None = None
    for raw_line in body.splitlines():
        line = raw_line.strip()
        if not line:
            continue
        start = _ENTRY_START_RE.match(line)
        if start:
            current = {"claim": _strip_quotes(start.group("value"))}
            entries.append(current)
            continue
        if current is None:
            return None
        field_match = _FIELD_RE.match(line.lstrip("- "))
        if not field_match:
            return None
        key = field_match.group("key")
        if key not in _KNOWN_FIELDS:
            continue
        value = field_match.group("value").strip()
        if key in ("asserts", "premises"):
            try:
                current[key] = json.loads(value)
            except json.JSONDecodeError:
                return None
        else:
            current[key] = _strip_quotes(value)
    claims = [_claim_from_fields(e) for e in entries]
    if not claims or any(c is None for c in claims):
        return None
    return [c for c in claims if c is not None]


def _parse_json_array(body: str) -> list[Claim] | None:
    try:
        data = json.loads(body)
    except json.JSONDecodeError:
        return None
    if not isinstance(data, list) or not data:
        return None
    claims = []
    for item in data:
        if not isinstance(item, dict):
            return None
        claim = _claim_from_fields(item)
        if claim is None:
            return None
        claims.append(claim)
    return claims


def _parse_block_body(body: str) -> list[Claim] | None:
    stripped = body.strip()
    if not stripped:
        return None
    if stripped.startswith("["):
        return _parse_json_array(stripped)
    return _parse_dash_list(stripped)


def parse_verification_block(response: str) -> ParsedResponse:
    """Split a response into prose and tagged claims; never raises.

    The last well-formed block wins; all delimited regions are removed from
    the prose either way. No block, or nothing parseable, means the whole
    response becomes one ungrounded claim and compliant=False.
    """
    blocks, prose = _find_blocks(response)
    for body in reversed(blocks):
        claims = _parse_block_body(body)
        if claims:
            return ParsedResponse(prose=prose, claims=claims, compliant=True)
    return _ungrounded_fallback(prose if blocks else response)
