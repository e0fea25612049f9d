"""Walkthrough: cross-check an autonomous agent's output with no receipts,
using the offline fixture fetcher."""

from pramana import DeepAgentOutput, FixtureFetcher, crosscheck

fixtures = FixtureFetcher({
    "urls": {
        "https://finance.example/acme": {
            "status": 200,
            "body": "ACME closed at 148.50 after a volatile session.",
        },
        # the second citation does not exist anywhere
    },
    "sources": {"acme-close": 148.50},
})

output = DeepAgentOutput(
    result={"symbol": "ACME", "close": 150},
    schema={"symbol": "string", "close": "number"},
    cited_urls=[
        ("https://finance.example/acme", "closed at 148.50"),
        ("https://made-up-news.example/acme-rally", None),
    ],
    computations=[("148.50*2", 297.0), ("100/3", 33.3)],
    dated_items=[
        ("published", "2024-02-18T09:00:00Z"),
        ("retrieved", "2024-02-19T10:00:00Z"),
    ],
    temporal_order=[("published", "retrieved")],
    key_facts=[("acme close", 150, "acme-close")],  # claims 150, source says 148.50
)

report = crosscheck(output, fixtures, rel_tol=0.01, now="2024-02-19T12:00:00Z")
for finding in report.findings:
    print(f"[{finding.status:>13}] {finding.strategy:<12} {finding.target}")
    print(f"{'':16}{finding.detail}")
print(f"\nflagged: {report.flagged} of {len(report.findings)} findings")
