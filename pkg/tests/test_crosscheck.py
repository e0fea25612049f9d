from datetime import datetime, timedelta, timezone
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pramana.crosscheck import (
    FLAGGED,
    INDETERMINATE,
    PASS,
    DeepAgentOutput,
    FetchUnavailable,
    FixtureFetcher,
    check_temporal,
    cross_source_check,
    crosscheck,
    evaluate_expression,
    refetch_urls,
    replay_computation,
    validate_schema,
)

NOW = datetime(2024, 2, 19, 12, 0, tzinfo=timezone.utc)

FIXTURES = {
    "urls": {
        "https://real.example/page": {
            "status": 200,
            "body": "The stock closed at 148.50 after a volatile session.",
            "latency_ms": 12,
        },
        "https://real.example/other": {"status": 200, "body": "all fine here"},
        "https://gone.example/page": {"status": 404, "body": ""},
        "https://slow.example/page": {"timeout": True},
    },
    "sources": {"acme-close": 148.50, "globex-close": 72.25},
}


@pytest.fixture
def fetcher():
    return FixtureFetcher(FIXTURES)


# --- schema ---------------------------------------------------------------------


def test_schema_pass():
    finding = validate_schema({"price": 148.5}, {"price": "number"})
    assert finding.status == PASS


def test_schema_mistyped_price():
    finding = validate_schema({"price": "one-fifty"}, {"price": "number"})
    assert finding.status == FLAGGED
    assert "price" in finding.detail


def test_schema_missing_field_names_path():
    finding = validate_schema({"a": 1}, {"a": "number", "b": "string"})
    assert finding.status == FLAGGED
    assert "b" in finding.detail


def test_schema_numeric_range():
    schema = {"price": {"type": "number", "min": 0, "max": 1000}}
    assert validate_schema({"price": -4}, schema).status == FLAGGED
    assert validate_schema({"price": 4}, schema).status == PASS


def test_schema_nested_object():
    schema = {"quote": {"type": "object", "fields": {"close": "number"}}}
    assert validate_schema({"quote": {"close": 1.0}}, schema).status == PASS
    flagged = validate_schema({"quote": {"close": "x"}}, schema)
    assert flagged.status == FLAGGED
    assert "quote.close" in flagged.detail


def test_schema_boolean_is_not_number():
    assert validate_schema({"n": True}, {"n": "number"}).status == FLAGGED


# --- URL re-fetch ----------------------------------------------------------------


def test_refetch_404_flagged(fetcher):
    findings = refetch_urls([("https://gone.example/page", None)], fetcher)
    assert [f.status for f in findings] == [FLAGGED]
    assert "404" in findings[0].detail


def test_refetch_unknown_url_flagged(fetcher):
    assert refetch_urls([("https://never.example/x", None)], fetcher)[0].status == FLAGGED


def test_refetch_excerpt_match_passes(fetcher):
    findings = refetch_urls(
        [("https://real.example/page", "closed at 148.50")], fetcher
    )
    assert findings[0].status == PASS


def test_refetch_excerpt_normalized(fetcher):
    findings = refetch_urls(
        [("https://real.example/page", "CLOSED   at 148.50")], fetcher
    )
    assert findings[0].status == PASS


def test_refetch_excerpt_mismatch_flagged(fetcher):
    findings = refetch_urls(
        [("https://real.example/page", "closed at 999")], fetcher
    )
    assert findings[0].status == FLAGGED


def test_refetch_timeout_indeterminate(fetcher):
    findings = refetch_urls([("https://slow.example/page", None)], fetcher)
    assert findings[0].status == INDETERMINATE


def test_finding_per_url(fetcher):
    cited = [
        ("https://real.example/page", None),
        ("https://gone.example/page", None),
        ("https://slow.example/page", None),
    ]
    findings = refetch_urls(cited, fetcher)
    assert [f.status for f in findings] == [PASS, FLAGGED, INDETERMINATE]


# --- computation replay -------------------------------------------------------------


def test_replay_exact():
    assert replay_computation("2*(3+4)", 14).status == PASS


def test_replay_100_over_3_flagged():
    # oracle: |100/3 - 333/10| = 1/30, far above 1e-9 * 100/3
    replayed = Fraction(100, 3)
    claimed = Fraction("33.3")
    assert abs(replayed - claimed) > Fraction(1, 10**9) * replayed
    finding = replay_computation("100/3", 33.3)
    assert finding.status == FLAGGED


def test_replay_division_by_zero_flagged():
    finding = replay_computation("1/0", 5)
    assert finding.status == FLAGGED
    assert "zero" in finding.detail


def test_replay_grammar_violation_indeterminate():
    assert replay_computation("2**3", 8).status == INDETERMINATE
    assert replay_computation("sqrt(2)", 1.41).status == INDETERMINATE
    assert replay_computation("", 0).status == INDETERMINATE


def test_replay_unary_minus_and_precedence():
    assert evaluate_expression("-3+5") == 2
    assert evaluate_expression("2+3*4") == 14
    assert evaluate_expression("(2+3)*4") == 20
    assert evaluate_expression("--4") == 4
    assert evaluate_expression("10/4") == Fraction(5, 2)


def test_replay_decimal_literals_exact():
    assert evaluate_expression("0.1+0.2") == Fraction(3, 10)
    assert replay_computation("0.1+0.2", 0.3).status == PASS


def test_replay_tolerance_boundary():
    # within 1e-9 relative: passes
    assert replay_computation("1000000000", 1000000000.0).status == PASS
    assert replay_computation("1000000000+1", 1000000000.0).status == PASS
    assert replay_computation("1000000000+2", 1000000000.0).status == FLAGGED


_int_exprs = st.recursive(
    st.integers(min_value=0, max_value=999).map(str),
    lambda children: st.tuples(children, st.sampled_from("+-*"), children).map(
        lambda t: f"({t[0]}{t[1]}{t[2]})"
    ),
    max_leaves=8,
)


@given(_int_exprs)
def test_replay_integer_expressions_exact(expr):
    # integer +,-,* replay is exact; python eval over ints is the oracle
    assert evaluate_expression(expr) == eval(expr)


# --- temporal -----------------------------------------------------------------------


def test_future_dated_item_flagged():
    future = (NOW + timedelta(days=2)).isoformat()
    findings = check_temporal([("article", future)], NOW)
    assert findings[0].status == FLAGGED


def test_within_skew_allowance_passes():
    soon = (NOW + timedelta(hours=12)).isoformat()
    assert check_temporal([("article", soon)], NOW)[0].status == PASS


def test_past_items_pass():
    findings = check_temporal(
        [("a", "2024-01-01T00:00:00Z"), ("b", "2023-06-15T08:30:00+02:00")], NOW
    )
    assert all(f.status == PASS for f in findings)


def test_unparseable_timestamp_indeterminate():
    assert check_temporal([("bad", "not-a-date")], NOW)[0].status == INDETERMINATE


def test_declared_order_checked():
    items = [
        ("published", "2024-02-01T00:00:00Z"),
        ("retrieved", "2024-02-10T00:00:00Z"),
    ]
    ok = check_temporal(items, NOW, order=[("published", "retrieved")])
    assert [f.status for f in ok] == [PASS, PASS, PASS]
    bad = check_temporal(items, NOW, order=[("retrieved", "published")])
    assert [f.status for f in bad][-1] == FLAGGED


def test_order_against_brute_comparator():
    stamps = {
        "a": "2024-01-01T00:00:00Z",
        "b": "2024-01-02T00:00:00Z",
        "c": "2024-01-02T00:00:00Z",
    }
    parsed = {k: datetime.fromisoformat(v.replace("Z", "+00:00")) for k, v in stamps.items()}
    for earlier in stamps:
        for later in stamps:
            findings = check_temporal(
                list(stamps.items()), NOW, order=[(earlier, later)]
            )
            expected = PASS if parsed[earlier] <= parsed[later] else FLAGGED
            assert findings[-1].status == expected, (earlier, later)


# --- cross-source -------------------------------------------------------------------


def test_cross_source_spec_example(fetcher):
    # claimed 150 vs independent 148.50 at 1% tolerance: relative diff ~1.01%
    findings = cross_source_check([("acme close", 150, "acme-close")], fetcher, Fraction(1, 100))
    assert findings[0].status == FLAGGED


def test_cross_source_exact_match_passes(fetcher):
    findings = cross_source_check([("acme close", 148.5, "acme-close")], fetcher)
    assert findings[0].status == PASS


def test_cross_source_sign_flip_flagged():
    fetcher = FixtureFetcher({"sources": {"q": -148.5}})
    findings = cross_source_check([("x", 148.5, "q")], fetcher)
    assert findings[0].status == FLAGGED


def test_cross_source_unknown_query_indeterminate(fetcher):
    findings = cross_source_check([("x", 1.0, "no-such-query")], fetcher)
    assert findings[0].status == INDETERMINATE


def test_cross_source_grid_against_formula():
    # brute-force the relative-difference rule over a grid
    rel_tol = Fraction(1, 100)
    eps = Fraction(1, 10**12)
    grid = [-150, -148.5, -1, 0, 0.5, 1, 100, 148.5, 150, 151.9]
    for claimed in grid:
        for independent in grid:
            fetcher = FixtureFetcher({"sources": {"q": independent}})
            finding = cross_source_check([("x", claimed, "q")], fetcher, rel_tol)[0]
            c, i = Fraction(str(claimed)), Fraction(str(independent))
            expected = FLAGGED if abs(c - i) / max(abs(i), eps) > rel_tol else PASS
            assert finding.status == expected, (claimed, independent)


def test_rel_tol_validation(fetcher):
    with pytest.raises(ValueError):
        cross_source_check([], fetcher, 0)
    with pytest.raises(ValueError):
        cross_source_check([], fetcher, 1.5)


# --- composition --------------------------------------------------------------------


def clean_output():
    return DeepAgentOutput(
        result={"price": 148.5},
        schema={"price": "number"},
        cited_urls=[("https://real.example/page", "closed at 148.50")],
        computations=[("148.50*2", 297.0)],
        dated_items=[("published", "2024-02-01T00:00:00Z")],
        temporal_order=[],
        key_facts=[("acme close", 148.5, "acme-close")],
    )


def test_crosscheck_clean_output(fetcher):
    report = crosscheck(clean_output(), fetcher, now=NOW)
    assert report.flagged == 0
    assert report.indeterminate == 0
    assert len(report.findings) == 5


def test_crosscheck_one_fabricated_url(fetcher):
    output = clean_output()
    output.cited_urls.append(("https://gone.example/page", None))
    report = crosscheck(output, fetcher, now=NOW)
    assert report.flagged == 1


def test_crosscheck_offline_determinism(fetcher):
    a = crosscheck(clean_output(), fetcher, now=NOW).to_dict()
    b = crosscheck(clean_output(), fetcher, now=NOW).to_dict()
    a.pop("elapsed_ms")
    b.pop("elapsed_ms")
    assert a == b


def test_crosscheck_findings_sorted(fetcher):
    output = clean_output()
    output.cited_urls.append(("https://a.example/x", None))
    report = crosscheck(output, fetcher, now=NOW)
    keys = [(f.strategy, f.target) for f in report.findings]
    assert keys == sorted(keys)


def test_statuses_mutually_exclusive(fetcher):
    output = clean_output()
    output.cited_urls.append(("https://slow.example/page", None))
    output.cited_urls.append(("https://gone.example/page", None))
    report = crosscheck(output, fetcher, now=NOW)
    for finding in report.findings:
        assert finding.status in (PASS, FLAGGED, INDETERMINATE)
    assert report.flagged == 1
    assert report.indeterminate == 1


def test_output_round_trip_from_dict():
    data = {
        "result": {"price": 1},
        "schema": {"price": "number"},
        "cited_urls": [{"url": "https://a.example", "excerpt": "x"}],
        "computations": [{"expr": "1+1", "claimed": 2}],
        "dated_items": [{"label": "t", "timestamp": "2024-01-01T00:00:00Z"}],
        "temporal_order": [["t", "t"]],
        "key_facts": [{"name": "n", "claimed": 1.0, "query_id": "q"}],
    }
    output = DeepAgentOutput.from_dict(data)
    assert output.cited_urls == [("https://a.example", "x")]
    assert output.computations == [("1+1", 2)]
    assert output.temporal_order == [("t", "t")]


def test_fixture_fetcher_flat_layout():
    fetcher = FixtureFetcher({"https://x.example": {"status": 200, "body": "ok"}})
    assert fetcher.fetch("https://x.example") == (200, b"ok")
    with pytest.raises(FetchUnavailable):
        fetcher.query_source("anything")
