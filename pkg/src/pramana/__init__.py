"""pramana: receipt-backed verification of AI-agent claims.

The runtime mints an HMAC-signed receipt for every tool call; the engine
classifies each claim in an agent response by its epistemic source, checks
it against the receipt ledger, and rolls the per-claim verdicts up into one
of five trust levels that a configurable policy turns into block/warn/pass.
"""

from .canonical import canonical_dumps, canonical_json, canonical_scalar, sha256_hex
from .claims import Claim, ParsedResponse, Pramana, parse_verification_block
from .crosscheck import (
    CrossCheckReport,
    DeepAgentOutput,
    Finding,
    FixtureFetcher,
    LiveFetcher,
    check_temporal,
    cross_source_check,
    crosscheck,
    refetch_urls,
    replay_computation,
    validate_schema,
)
from .engine import (
    TrustLevel,
    TrustPolicy,
    TrustReport,
    Verdict,
    VerdictType,
    aggregate_trust,
    untagged_screen,
    verify_claim,
    verify_response,
)
from .numerals import detect_absence_phrase, normalize_numeral, render_numeral
from .policy import Constitution, PolicyDecision, apply_policy, load_constitution
from .receipts import (
    FactExtractorConfig,
    Ledger,
    ToolReceipt,
    extract_facts,
    generate_receipt,
    load_key_from_env,
    verify_receipt_signature,
)

__version__ = "0.1.0"

__all__ = [
    "canonical_dumps",
    "canonical_json",
    "canonical_scalar",
    "sha256_hex",
    "Claim",
    "ParsedResponse",
    "Pramana",
    "parse_verification_block",
    "CrossCheckReport",
    "DeepAgentOutput",
    "Finding",
    "FixtureFetcher",
    "LiveFetcher",
    "check_temporal",
    "cross_source_check",
    "crosscheck",
    "refetch_urls",
    "replay_computation",
    "validate_schema",
    "TrustLevel",
    "TrustPolicy",
    "TrustReport",
    "Verdict",
    "VerdictType",
    "aggregate_trust",
    "untagged_screen",
    "verify_claim",
    "verify_response",
    "detect_absence_phrase",
    "normalize_numeral",
    "render_numeral",
    "Constitution",
    "PolicyDecision",
    "apply_policy",
    "load_constitution",
    "FactExtractorConfig",
    "Ledger",
    "ToolReceipt",
    "extract_facts",
    "generate_receipt",
    "load_key_from_env",
    "verify_receipt_signature",
]
