"""Walkthrough: mint signed receipts for tool calls, then verify a response.

Runs entirely in memory. The honest response fully verifies; the tampered
variants show the three deterministic failure modes.
"""

import json

from pramana import (
    Constitution,
    FactExtractorConfig,
    Ledger,
    apply_policy,
    generate_receipt,
    verify_response,
)
from pramana.canonical import canonical_json
from pramana.engine import VERDICT_PRECEDENCE

KEY = bytes.fromhex("6b" * 32)

cfg = FactExtractorConfig(
    {"email_search": [("sender", "results[0].sender"), ("subject", "results[0].subject")]}
)

# 1. the runtime executes a tool call and mints a receipt
output = {"results": [{"sender": "Alice", "subject": "Deadline update"}] * 3}
receipt = generate_receipt(
    tool_name="email_search",
    input={"query": "from:Alice"},
    raw_output=canonical_json(output),
    structured_output=output,
    key=KEY,
    cfg=cfg,
    duration_ms=150,
)
ledger = Ledger()
ledger.append(receipt)
print(f"minted receipt {receipt.id}")
print(f"  result_count={receipt.result_count} facts={receipt.facts}")

# 2. the model answers and tags its claims
honest = f"""Alice sent you 3 emails about Deadline update. She seems worried. (ref: {receipt.id})

---VERIFICATION---
- claim: "Alice sent you 3 emails about Deadline update"
  source_type: tool_output
  evidence: {receipt.id}
  checkable: true
  asserts: {{"count": "3", "sender": "Alice"}}
- claim: "Alice seems worried about the deadline"
  source_type: inference
  evidence: {receipt.id}
  checkable: true
  premises: ["Alice"]
---END VERIFICATION---
"""

report = verify_response(honest, ledger, KEY)
decision = apply_policy(report, Constitution())
print(f"\nhonest response -> trust={report.trust.value} action={decision.action}")

# 3. three kinds of lies, all caught deterministically
for label, lie in [
    ("count 3 -> 5", honest.replace("3 emails", "5 emails").replace('"count": "3"', '"count": "5"')),
    ("fabricated receipt", honest.replace(receipt.id, "99999999-9999-4999-8999-999999999999")),
    ("no tags, wrong count", "Alice sent you 7 emails today."),
]:
    report = verify_response(lie, ledger, KEY)
    worst = min(
        (v for _, v in report.results), key=lambda v: VERDICT_PRECEDENCE.index(v.type)
    )
    print(f"{label:24s} -> trust={report.trust.value:12s} ({worst.type.value}: {worst.detail})")

print("\nfull report for the honest response:")
print(json.dumps(verify_response(honest, ledger, KEY).to_dict(), indent=2)[:600], "...")
