"""Per-claim verification against the receipt ledger and trust aggregation.

Each claim is dispatched to the check matching its epistemic category:

- direct tool output: receipt lookup, signature check, then count and fact
  comparison against the receipt's result_count and facts
- absence: the cited receipt must record an empty result set
- inference: the stated premises must exist in the cited receipt's facts
- comparison: both comparands must be evidenced somewhere in the ledger
- external source: some valid fetch-tool receipt must record the cited URL
- ungrounded: unverifiable by definition, flagged as such

A claim always gets exactly one verdict, the worst applicable by the
precedence order below. Verdicts provable from receipts alone (fabricated
call, count/fact mismatch, false absence, invalid signature) are the
deterministic failures; any one of them makes the whole response Unreliable.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable
from urllib.parse import urlsplit, urlunsplit

from .canonical import sha256_hex
from .claims import Claim, ParsedResponse, Pramana, parse_verification_block
from .numerals import (
    count_references,
    detect_absence_phrase,
    normalize_numeral,
    normalize_text,
)
from .receipts import (
    Ledger,
    MalformedReceiptIdError,
    ToolReceipt,
    verify_receipt_signature,
)

__all__ = [
    "VerdictType",
    "Verdict",
    "DETERMINISTIC_FAILURES",
    "VERDICT_PRECEDENCE",
    "TrustLevel",
    "TrustPolicy",
    "TrustReport",
    "DEFAULT_FETCH_TOOLS",
    "verify_claim",
    "verify_pratyaksha",
    "verify_abhava",
    "verify_anumana",
    "verify_upamana",
    "verify_sabda",
    "untagged_screen",
    "aggregate_trust",
    "verified_fraction",
    "verify_response",
    "normalize_url",
    "values_equal",
]


class VerdictType(Enum):
    VERIFIED = "verified"
    PREMISES_VERIFIED = "premises_verified"
    FABRICATED_TOOL_CALL = "fabricated_tool_call"
    COUNT_MISMATCH = "count_mismatch"
    FACT_MISMATCH = "fact_mismatch"
    FALSE_ABSENCE = "false_absence"
    SOURCE_UNVERIFIED = "source_unverified"
    SIGNATURE_INVALID = "signature_invalid"
    UNVERIFIABLE = "unverifiable"


# worst first; a claim reports its single worst applicable verdict
VERDICT_PRECEDENCE: tuple[VerdictType, ...] = (
    VerdictType.SIGNATURE_INVALID,
    VerdictType.FABRICATED_TOOL_CALL,
    VerdictType.FALSE_ABSENCE,
    VerdictType.COUNT_MISMATCH,
    VerdictType.FACT_MISMATCH,
    VerdictType.SOURCE_UNVERIFIED,
    VerdictType.UNVERIFIABLE,
    VerdictType.PREMISES_VERIFIED,
    VerdictType.VERIFIED,
)

DETERMINISTIC_FAILURES = frozenset(
    {
        VerdictType.FABRICATED_TOOL_CALL,
        VerdictType.COUNT_MISMATCH,
        VerdictType.FACT_MISMATCH,
        VerdictType.FALSE_ABSENCE,
        VerdictType.SIGNATURE_INVALID,
    }
)

DEFAULT_FETCH_TOOLS = frozenset({"web_fetch", "http_get"})


@dataclass(frozen=True)
class Verdict:
    type: VerdictType
    detail: str = ""
    cited_receipt: str | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.type.value,
            "detail": self.detail,
            "cited_receipt": self.cited_receipt,
        }


def _worst(candidates: list[Verdict]) -> Verdict:
    return min(candidates, key=lambda v: VERDICT_PRECEDENCE.index(v.type))


class TrustLevel(Enum):
    FULLY_VERIFIED = "fully_verified"
    MOSTLY_VERIFIED = "mostly_verified"
    PARTIAL = "partial"
    UNRELIABLE = "unreliable"
    UNGROUNDED = "ungrounded"


@dataclass(frozen=True)
class TrustPolicy:
    """Thresholds mapping the verified fraction to a trust level.

    Thresholds are held as exact fractions; configured decimal values like
    0.8 are interpreted as the decimal 4/5, not the nearest binary float,
    so that 4 verified claims out of 5 sit exactly on the boundary.
    """

    mostly_min: Fraction = Fraction(4, 5)
    partial_min: Fraction = Fraction(1, 2)

    def __post_init__(self) -> None:
        if not (Fraction(1, 2) <= self.partial_min <= self.mostly_min <= 1):
            raise ValueError(
                "thresholds must satisfy 0.5 <= partial_min <= mostly_min <= 1.0"
            )

    @classmethod
    def from_values(cls, mostly_min=0.8, partial_min=0.5) -> "TrustPolicy":
        return cls(
            mostly_min=Fraction(str(mostly_min)),
            partial_min=Fraction(str(partial_min)),
        )


# --- value comparison ---------------------------------------------------------

_EDGE_PUNCT = ".,;:!?\"'“”‘’«»。，！？"
_DECIMAL_RE = re.compile(r"^-?\d+(?:\.\d+)?$")
_NUMERIC_REL_TOL = Fraction(1, 10**9)


def _strip_edges(value: str) -> str:
    return value.strip().strip(_EDGE_PUNCT).strip()


def _as_number(value: str, lang: str) -> Fraction | None:
    value = _strip_edges(value)
    as_int = normalize_numeral(value, lang)
    if as_int is not None:
        return Fraction(as_int)
    if _DECIMAL_RE.match(value):
        return Fraction(value)
    return None


def values_equal(claimed: str, recorded: str, lang: str = "EN") -> bool:
    """Normalized comparison for fact values.

    Strings are compared casefolded with collapsed whitespace and edge
    punctuation stripped; strings that both parse as numbers are compared
    numerically (exact for integers, relative tolerance 1e-9 otherwise).
    """
    a_num = _as_number(claimed, lang)
    b_num = _as_number(recorded, lang)
    if a_num is not None and b_num is not None:
        if a_num.denominator == 1 and b_num.denominator == 1:
            return a_num == b_num
        bound = _NUMERIC_REL_TOL * max(Fraction(1), abs(a_num), abs(b_num))
        return abs(a_num - b_num) <= bound
    return normalize_text(_strip_edges(claimed)) == normalize_text(_strip_edges(recorded))


def normalize_url(url: str) -> str:
    """Lowercase scheme and host, drop default ports, strip trailing slash."""
    parts = urlsplit(url.strip())
    scheme = parts.scheme.lower()
    host = parts.hostname.lower() if parts.hostname else ""
    port = parts.port
    if port is not None and not (
        (scheme == "http" and port == 80) or (scheme == "https" and port == 443)
    ):
        host = f"{host}:{port}"
    path = parts.path.rstrip("/")
    return urlunsplit((scheme, host, path, parts.query, parts.fragment))


def _fact_contains(receipt: ToolReceipt, needle: str) -> bool:
    target = normalize_text(needle)
    if not target:
        return False
    for key, value in receipt.facts.items():
        if target in normalize_text(value) or target in normalize_text(key):
            return True
    return False


_CAPITALIZED_RE = re.compile(r"\b[A-Z][\w-]+\b")
_QUOTED_RE = re.compile(r"[\"'“«]([^\"'”»]{2,60})[\"'”»]")


def _entity_tokens(text: str) -> list[str]:
    tokens = [m.group(1) for m in _QUOTED_RE.finditer(text)]
    tokens.extend(m.group(0) for m in _CAPITALIZED_RE.finditer(text))
    return tokens


# --- per-category checks ------------------------------------------------------


def verify_pratyaksha(claim: Claim, receipt: ToolReceipt, lang: str = "EN") -> Verdict:
    """Check a direct-tool-output claim against its (already validated) receipt."""
    failures: list[Verdict] = []
    asserts = claim.asserts or {}

    count_refs: list[int] = []
    if "count" in asserts:
        value = normalize_numeral(asserts["count"], lang)
        if value is None:
            failures.append(
                Verdict(
                    VerdictType.COUNT_MISMATCH,
                    f"count assertion {asserts['count']!r} is not a numeral",
                    receipt.id,
                )
            )
        else:
            count_refs.append(value)
    else:
        count_refs.extend(count_references(claim.text, lang))
    for ref in count_refs:
        if ref != receipt.result_count:
            failures.append(
                Verdict(
                    VerdictType.COUNT_MISMATCH,
                    f"claimed count {ref} but receipt records {receipt.result_count}",
                    receipt.id,
                )
            )
            break

    for key, value in asserts.items():
        if key == "count":
            continue
        if key not in receipt.facts:
            failures.append(
                Verdict(
                    VerdictType.FACT_MISMATCH,
                    f"asserted fact {key!r} is not recorded in the receipt",
                    receipt.id,
                )
            )
            break
        if not values_equal(value, receipt.facts[key], lang):
            failures.append(
                Verdict(
                    VerdictType.FACT_MISMATCH,
                    f"fact {key!r}: claimed {value!r} but receipt records "
                    f"{receipt.facts[key]!r}",
                    receipt.id,
                )
            )
            break

    if failures:
        return _worst(failures)
    return Verdict(VerdictType.VERIFIED, "claim matches receipt", receipt.id)


def verify_abhava(claim: Claim, receipt: ToolReceipt) -> Verdict:
    """An absence claim is verified exactly when the receipt records zero results."""
    if receipt.result_count == 0:
        return Verdict(VerdictType.VERIFIED, "tool returned an empty result set", receipt.id)
    return Verdict(
        VerdictType.FALSE_ABSENCE,
        f"claimed no results but receipt records {receipt.result_count}",
        receipt.id,
    )


def verify_anumana(claim: Claim, receipt: ToolReceipt | None) -> Verdict:
    """An inference is premises-verified when its premises exist in the
    cited receipt's facts; without explicit premises, any named entity of
    the claim text appearing in the facts is accepted."""
    if receipt is None:
        return Verdict(VerdictType.UNVERIFIABLE, "inference cites no receipt")
    if claim.premises:
        for premise in claim.premises:
            if not _fact_contains(receipt, premise):
                return Verdict(
                    VerdictType.UNVERIFIABLE,
                    f"premise {premise!r} not found in receipt facts",
                    receipt.id,
                )
        return Verdict(VerdictType.PREMISES_VERIFIED, "premises exist in receipt facts", receipt.id)
    for token in _entity_tokens(claim.text):
        if _fact_contains(receipt, token):
            return Verdict(
                VerdictType.PREMISES_VERIFIED,
                f"entity {token!r} exists in receipt facts",
                receipt.id,
            )
    return Verdict(
        VerdictType.UNVERIFIABLE, "no claimed entity found in receipt facts", receipt.id
    )


class _SigCache:
    """Memoized signature validity per receipt id for one verification pass."""

    def __init__(self, key: bytes):
        self.key = key
        self._valid: dict[str, bool] = {}

    def valid(self, receipt: ToolReceipt) -> bool:
        cached = self._valid.get(receipt.id)
        if cached is None:
            cached = verify_receipt_signature(receipt, self.key)
            self._valid[receipt.id] = cached
        return cached


def verify_upamana(
    claim: Claim, ledger: Ledger, key: bytes, _sigs: _SigCache | None = None
) -> Verdict:
    """A comparison needs both comparands evidenced in valid receipts."""
    sigs = _sigs or _SigCache(key)
    premises = claim.premises or []
    if len(premises) < 2:
        return Verdict(VerdictType.UNVERIFIABLE, "comparison lacks comparands")
    for premise in premises[:2]:
        if not any(
            _fact_contains(receipt, premise)
            for receipt in ledger
            if sigs.valid(receipt)
        ):
            return Verdict(
                VerdictType.UNVERIFIABLE, f"comparand {premise!r} not evidenced"
            )
    return Verdict(VerdictType.PREMISES_VERIFIED, "both comparands evidenced in receipts")


def verify_sabda(
    claim: Claim,
    ledger: Ledger,
    key: bytes,
    fetch_tools: Iterable[str] = DEFAULT_FETCH_TOOLS,
    _sigs: _SigCache | None = None,
) -> Verdict:
    """An external-source claim is verified when some valid fetch-tool
    receipt records the cited URL."""
    sigs = _sigs or _SigCache(key)
    fetch_tools = set(fetch_tools)
    candidates = list(claim.cited_urls)
    for k, value in (claim.asserts or {}).items():
        if k in ("source", "url") or value.startswith(("http://", "https://")):
            candidates.append(value)
    candidates = [normalize_url(u) for u in candidates if u.startswith(("http://", "https://"))]
    if not candidates:
        return Verdict(VerdictType.UNVERIFIABLE, "no source URL cited")
    for receipt in ledger:
        if receipt.tool_name not in fetch_tools or not sigs.valid(receipt):
            continue
        fact_url = receipt.facts.get("url")
        if fact_url and normalize_url(fact_url) in candidates:
            return Verdict(
                VerdictType.VERIFIED, f"source fetched: {fact_url}", receipt.id
            )
    return Verdict(
        VerdictType.SOURCE_UNVERIFIED,
        f"no fetch receipt for cited source {candidates[0]}",
    )


def verify_claim(
    claim: Claim,
    ledger: Ledger,
    key: bytes,
    lang: str = "EN",
    fetch_tools: Iterable[str] = DEFAULT_FETCH_TOOLS,
    _sigs: _SigCache | None = None,
) -> Verdict:
    """Dispatch one claim to its per-category check.

    Lookup misses dominate: a cited receipt id that was never issued is a
    fabricated tool call whatever the claim's category, and no positive
    verdict is ever issued against a receipt whose signature fails.
    """
    sigs = _sigs or _SigCache(key)
    receipt: ToolReceipt | None = None
    if claim.evidence is not None:
        try:
            receipt = ledger.lookup(claim.evidence)
        except MalformedReceiptIdError:
            return Verdict(
                VerdictType.FABRICATED_TOOL_CALL,
                f"cited receipt id is malformed: {claim.evidence!r}",
                claim.evidence,
            )
        if receipt is None:
            return Verdict(
                VerdictType.FABRICATED_TOOL_CALL,
                f"cited receipt {claim.evidence} was never issued",
                claim.evidence,
            )
        if not sigs.valid(receipt):
            return Verdict(
                VerdictType.SIGNATURE_INVALID,
                f"receipt {receipt.id} fails signature verification",
                receipt.id,
            )

    if claim.source_type is Pramana.UNGROUNDED:
        return Verdict(VerdictType.UNVERIFIABLE, "ungrounded claim cannot be verified")
    if claim.source_type is Pramana.PRATYAKSHA:
        if receipt is None:
            return Verdict(VerdictType.UNVERIFIABLE, "tool-output claim cites no receipt")
        return verify_pratyaksha(claim, receipt, lang)
    if claim.source_type is Pramana.ABHAVA:
        if receipt is None:
            return Verdict(VerdictType.UNVERIFIABLE, "absence claim cites no receipt")
        return verify_abhava(claim, receipt)
    if claim.source_type is Pramana.ANUMANA:
        return verify_anumana(claim, receipt)
    if claim.source_type is Pramana.UPAMANA:
        return verify_upamana(claim, ledger, key, _sigs=sigs)
    if claim.source_type is Pramana.SABDA:
        return verify_sabda(claim, ledger, key, fetch_tools, _sigs=sigs)
    return Verdict(VerdictType.UNVERIFIABLE, f"unknown category {claim.source_type}")


_RECEIPT_ID_TOKEN_RE = re.compile(
    r"\b[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}\b", re.IGNORECASE
)


def untagged_screen(prose: str, ledger: Ledger, key: bytes, lang: str = "EN") -> list[Verdict]:
    """Deterministic checks that need no self-tags.

    Catches receipt-id-shaped tokens that were never issued, absence phrasing
    that contradicts a non-empty receipt, and result-noun-adjacent numerals
    matching no receipt's count. The count rule stays quiet when the ledger
    is empty: with no tool calls there is nothing to contradict.
    """
    verdicts: list[Verdict] = []
    seen_tokens = set()
    for m in _RECEIPT_ID_TOKEN_RE.finditer(prose):
        token = m.group(0).lower()
        if token in seen_tokens:
            continue
        seen_tokens.add(token)
        if ledger.lookup(token) is None:
            verdicts.append(
                Verdict(
                    VerdictType.FABRICATED_TOOL_CALL,
                    f"prose references receipt {token} which was never issued",
                    token,
                )
            )

    counts = [receipt.result_count for receipt in ledger]
    if counts and detect_absence_phrase(prose, lang) and any(c > 0 for c in counts):
        verdicts.append(
            Verdict(
                VerdictType.FALSE_ABSENCE,
                "prose claims no results but the ledger records non-empty output",
            )
        )

    if counts:
        for value in count_references(prose, lang):
            if value not in counts:
                verdicts.append(
                    Verdict(
                        VerdictType.COUNT_MISMATCH,
                        f"prose states a count of {value} matching no receipt",
                    )
                )
    return verdicts


# --- aggregation --------------------------------------------------------------


def verified_fraction(pairs: list[tuple[Claim, Verdict]]) -> Fraction | None:
    """Verified share of checkable claims; None when nothing is checkable."""
    checkable = [v for c, v in pairs if c.checkable]
    if not checkable:
        return None
    good = sum(
        1
        for v in checkable
        if v.type in (VerdictType.VERIFIED, VerdictType.PREMISES_VERIFIED)
    )
    return Fraction(good, len(checkable))


def aggregate_trust(
    pairs: list[tuple[Claim, Verdict]], policy: TrustPolicy | None = None
) -> TrustLevel:
    """Fold per-claim verdicts into the response trust level.

    Any deterministic failure makes the response Unreliable outright. With
    no checkable claims there is no evidence either way: Ungrounded. Else
    the verified fraction p maps to Fully (p=1) / Mostly (p>=mostly_min) /
    Partial (p>=partial_min) / Unreliable.
    """
    policy = policy or TrustPolicy()
    if any(v.type in DETERMINISTIC_FAILURES for _, v in pairs):
        return TrustLevel.UNRELIABLE
    fraction = verified_fraction(pairs)
    if fraction is None:
        return TrustLevel.UNGROUNDED
    if fraction == 1:
        return TrustLevel.FULLY_VERIFIED
    if fraction >= policy.mostly_min:
        return TrustLevel.MOSTLY_VERIFIED
    if fraction >= policy.partial_min:
        return TrustLevel.PARTIAL
    return TrustLevel.UNRELIABLE


@dataclass
class TrustReport:
    response_id: str
    lang: str
    results: list[tuple[Claim, Verdict]]
    trust: TrustLevel
    verified_fraction: Fraction | None
    deterministic_failures: int
    compliant: bool
    elapsed_ms: float

    def to_dict(self) -> dict:
        return {
            "response_id": self.response_id,
            "lang": self.lang,
            "trust": self.trust.value,
            "verified_fraction": (
                float(self.verified_fraction)
                if self.verified_fraction is not None
                else None
            ),
            "deterministic_failures": self.deterministic_failures,
            "compliant": self.compliant,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "claims": [
                {
                    "text": claim.text,
                    "source_type": claim.source_type.value,
                    "evidence": claim.evidence,
                    "checkable": claim.checkable,
                    **verdict.to_dict(),
                }
                for claim, verdict in self.results
            ],
        }


def verify_response(
    response: str,
    ledger: Ledger,
    key: bytes,
    lang: str = "EN",
    policy: TrustPolicy | None = None,
    fetch_tools: Iterable[str] = DEFAULT_FETCH_TOOLS,
    response_id: str | None = None,
    untagged: str = "fallback",
) -> TrustReport:
    """Parse, verify, and aggregate one agent response.

    `untagged` controls the tag-free screen: "fallback" (default) runs it
    only for non-compliant responses, "always" adds it as a supplementary
    pass, "never" disables it.
    """
    started = time.perf_counter()
    parsed: ParsedResponse = parse_verification_block(response)
    sigs = _SigCache(key)
    pairs: list[tuple[Claim, Verdict]] = [
        (claim, verify_claim(claim, ledger, key, lang, fetch_tools, _sigs=sigs))
        for claim in parsed.claims
    ]
    if untagged == "always" or (untagged == "fallback" and not parsed.compliant):
        anchor = (
            parsed.claims[0]
            if not parsed.compliant
            else Claim(text="(untagged screen)", source_type=Pramana.UNGROUNDED, checkable=False)
        )
        pairs.extend((anchor, verdict) for verdict in untagged_screen(parsed.prose, ledger, key, lang))
    trust = aggregate_trust(pairs, policy)
    failures = sum(1 for _, v in pairs if v.type in DETERMINISTIC_FAILURES)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return TrustReport(
        response_id=response_id or sha256_hex(response.encode("utf-8"))[:12],
        lang=lang.upper(),
        results=pairs,
        trust=trust,
        verified_fraction=verified_fraction(pairs),
        deterministic_failures=failures,
        compliant=parsed.compliant,
        elapsed_ms=elapsed_ms,
    )
