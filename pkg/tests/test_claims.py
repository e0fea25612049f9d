from pramana.claims import (
    BLOCK_END,
    BLOCK_START,
    Claim,
    Pramana,
    extract_urls,
    parse_verification_block,
)

RID = "12345678-1234-4234-8234-123456789abc"

DASH_RESPONSE = f"""Alice sent you 3 emails about the deadline.

{BLOCK_START}
- claim: "Alice sent you 3 emails"
  source_type: tool_output
  evidence: {RID}
  checkable: true
{BLOCK_END}
"""


def test_dash_block_single_claim():
    parsed = parse_verification_block(DASH_RESPONSE)
    assert parsed.compliant
    assert len(parsed.claims) == 1
    claim = parsed.claims[0]
    assert claim.text == "Alice sent you 3 emails"
    assert claim.source_type is Pramana.PRATYAKSHA
    assert claim.evidence == RID
    assert claim.checkable


def test_block_removed_from_prose():
    parsed = parse_verification_block(DASH_RESPONSE)
    assert BLOCK_START not in parsed.prose
    assert parsed.prose == "Alice sent you 3 emails about the deadline."


def test_no_block_is_ungrounded_fallback():
    parsed = parse_verification_block("Just some prose with no metadata.")
    assert not parsed.compliant
    assert len(parsed.claims) == 1
    claim = parsed.claims[0]
    assert claim.source_type is Pramana.UNGROUNDED
    assert not claim.checkable
    assert claim.text == "Just some prose with no metadata."


def test_opinion_maps_to_ungrounded():
    response = f"""Thoughts.

{BLOCK_START}
- claim: "You should reply soon"
  source_type: opinion
  checkable: true
{BLOCK_END}
"""
    parsed = parse_verification_block(response)
    assert parsed.compliant
    claim = parsed.claims[0]
    assert claim.source_type is Pramana.UNGROUNDED
    # ungrounded implies not checkable, whatever the tag said
    assert not claim.checkable


def test_unknown_source_type_maps_to_ungrounded():
    response = f"{BLOCK_START}\n- claim: \"x\"\n  source_type: telepathy\n{BLOCK_END}"
    parsed = parse_verification_block(response)
    assert parsed.compliant
    assert parsed.claims[0].source_type is Pramana.UNGROUNDED


def test_all_wire_tokens():
    tokens = {
        "tool_output": Pramana.PRATYAKSHA,
        "inference": Pramana.ANUMANA,
        "comparison": Pramana.UPAMANA,
        "external_source": Pramana.SABDA,
        "absence": Pramana.ABHAVA,
        "opinion": Pramana.UNGROUNDED,
    }
    entries = "\n".join(
        f'- claim: "c{i}"\n  source_type: {tok}\n  evidence: {RID}'
        for i, tok in enumerate(tokens)
    )
    parsed = parse_verification_block(f"{BLOCK_START}\n{entries}\n{BLOCK_END}")
    assert [c.source_type for c in parsed.claims] == list(tokens.values())


def test_json_array_block():
    body = (
        '[{"claim": "ACME closed at 148.5", "source_type": "tool_output", '
        f'"evidence": "{RID}", "checkable": true, '
        '"asserts": {"close": "148.5"}}]'
    )
    parsed = parse_verification_block(f"prose\n{BLOCK_START}\n{body}\n{BLOCK_END}")
    assert parsed.compliant
    claim = parsed.claims[0]
    assert claim.asserts == {"close": "148.5"}
    assert claim.source_type is Pramana.PRATYAKSHA


def test_dash_asserts_and_premises():
    response = (
        f"{BLOCK_START}\n"
        '- claim: "Alice seems worried"\n'
        "  source_type: inference\n"
        f"  evidence: {RID}\n"
        '  premises: ["Alice"]\n'
        '- claim: "Alice sent 3 emails"\n'
        "  source_type: tool_output\n"
        f"  evidence: {RID}\n"
        '  asserts: {"count": "3"}\n'
        f"{BLOCK_END}"
    )
    parsed = parse_verification_block(response)
    assert parsed.claims[0].premises == ["Alice"]
    assert parsed.claims[1].asserts == {"count": "3"}


def test_last_well_formed_block_wins():
    response = (
        f"{BLOCK_START}\n- claim: \"first\"\n  source_type: inference\n{BLOCK_END}\n"
        f"middle prose\n"
        f"{BLOCK_START}\n- claim: \"second\"\n  source_type: inference\n{BLOCK_END}\n"
    )
    parsed = parse_verification_block(response)
    assert len(parsed.claims) == 1
    assert parsed.claims[0].text == "second"


def test_malformed_last_block_falls_back_to_earlier():
    response = (
        f"{BLOCK_START}\n- claim: \"good\"\n  source_type: inference\n{BLOCK_END}\n"
        f"{BLOCK_START}\nthis is not an entry\n{BLOCK_END}\n"
    )
    parsed = parse_verification_block(response)
    assert parsed.compliant
    assert parsed.claims[0].text == "good"


def test_all_blocks_malformed_is_noncompliant():
    response = f"prose\n{BLOCK_START}\ngarbage\n{BLOCK_END}\nmore"
    parsed = parse_verification_block(response)
    assert not parsed.compliant
    assert parsed.claims[0].source_type is Pramana.UNGROUNDED


def test_unterminated_block_treated_as_prose():
    response = f"prose\n{BLOCK_START}\n- claim: \"x\"\n  source_type: inference"
    parsed = parse_verification_block(response)
    assert not parsed.compliant


def test_empty_block_is_noncompliant():
    parsed = parse_verification_block(f"{BLOCK_START}\n{BLOCK_END}")
    assert not parsed.compliant


def test_checkable_false_parsed():
    response = f"{BLOCK_START}\n- claim: \"x\"\n  source_type: inference\n  checkable: false\n{BLOCK_END}"
    assert parse_verification_block(response).claims[0].checkable is False


def test_unknown_entry_fields_ignored():
    response = (
        f"{BLOCK_START}\n- claim: \"x\"\n  source_type: inference\n"
        f"  confidence: 0.9\n{BLOCK_END}"
    )
    parsed = parse_verification_block(response)
    assert parsed.compliant
    assert parsed.claims[0].source_type is Pramana.ANUMANA


def test_evidence_none_token():
    response = f"{BLOCK_START}\n- claim: \"x\"\n  source_type: inference\n  evidence: none\n{BLOCK_END}"
    assert parse_verification_block(response).claims[0].evidence is None


def test_parse_totality_on_garbage():
    for junk in ["", "\n\n", BLOCK_START, BLOCK_END, "-claim", "\x00\x01"]:
        parsed = parse_verification_block(junk)
        assert parsed.claims


def test_cited_urls_extracted_from_text():
    claim = Claim(
        text="According to Reuters (https://reuters.com/markets/rates).",
        source_type=Pramana.SABDA,
    )
    assert claim.cited_urls == ["https://reuters.com/markets/rates"]


def test_extract_urls_cjk_and_punctuation():
    assert extract_urls("据报道（https://example.com/a）。") == ["https://example.com/a"]
    assert extract_urls("See https://example.com/b, then rest.") == ["https://example.com/b"]
    assert extract_urls("खबर (https://example.com/c)।") == ["https://example.com/c"]
    assert extract_urls("no links here") == []


def test_ungrounded_claim_forced_noncheckable():
    claim = Claim(text="opinion", source_type=Pramana.UNGROUNDED, checkable=True)
    assert claim.checkable is False


def test_checkable_tool_output_without_evidence_degrades():
    # a checkable direct-output claim must cite a receipt
    response = f"{BLOCK_START}\n- claim: \"x\"\n  source_type: tool_output\n  checkable: true\n{BLOCK_END}"
    claim = parse_verification_block(response).claims[0]
    assert claim.source_type is Pramana.UNGROUNDED
    assert not claim.checkable


def test_absence_without_evidence_degrades():
    response = f"{BLOCK_START}\n- claim: \"nothing found\"\n  source_type: absence\n{BLOCK_END}"
    claim = parse_verification_block(response).claims[0]
    assert claim.source_type is Pramana.UNGROUNDED


def test_inference_without_evidence_kept():
    response = f"{BLOCK_START}\n- claim: \"x\"\n  source_type: inference\n{BLOCK_END}"
    claim = parse_verification_block(response).claims[0]
    assert claim.source_type is Pramana.ANUMANA


def test_default_confidence_order():
    assert (
        Pramana.PRATYAKSHA.default_confidence
        > Pramana.ANUMANA.default_confidence
        >= Pramana.ABHAVA.default_confidence
        > Pramana.UPAMANA.default_confidence
        > Pramana.UNGROUNDED.default_confidence
    )
    assert Pramana.UNGROUNDED.default_confidence == min(
        p.default_confidence for p in Pramana
    )
