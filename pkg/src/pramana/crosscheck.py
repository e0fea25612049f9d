"""Cross-checking for autonomous agent outputs that carry no receipts.

When the runtime cannot receipt an agent's internal tool calls, the output
is vetted from the outside instead, with five strategies: schema validation,
independent URL re-fetching, computation replay, temporal consistency, and
cross-source corroboration of key numeric facts.

Every check produces a three-valued finding: pass, flagged, or
indeterminate (the target could not be checked at all, e.g. a fetch timed
out). Indeterminate findings never count toward detection or false
positives. The fetcher is injected so the whole protocol runs offline
against fixtures; the live HTTP fetcher is plumbing for real deployments.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from fractions import Fraction
from typing import Any, Protocol

__all__ = [
    "Finding",
    "FetchUnavailable",
    "Fetcher",
    "FixtureFetcher",
    "LiveFetcher",
    "DeepAgentOutput",
    "CrossCheckReport",
    "validate_schema",
    "refetch_urls",
    "replay_computation",
    "evaluate_expression",
    "check_temporal",
    "cross_source_check",
    "crosscheck",
]

PASS = "pass"
FLAGGED = "flagged"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Finding:
    strategy: str
    target: str
    status: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "target": self.target,
            "status": self.status,
            "detail": self.detail,
        }


class FetchUnavailable(Exception):
    """Fetch or source query could not complete; outcome is indeterminate."""


class Fetcher(Protocol):
    def fetch(self, url: str) -> tuple[int, bytes]: ...

    def query_source(self, query_id: str) -> float: ...


class FixtureFetcher:
    """Deterministic fetcher backed by a canned url -> response map.

    Fixture entries look like {"status": 200, "body": "...", "latency_ms": 5};
    an entry with "timeout": true simulates an unreachable URL. Independent
    source values live under a top-level "sources" table. A flat map of
    url -> entry (no "urls"/"sources" wrapper) is accepted too.
    """

    def __init__(self, fixtures: dict[str, Any]):
        if "urls" in fixtures or "sources" in fixtures:
            self._urls = dict(fixtures.get("urls", {}))
            self._sources = dict(fixtures.get("sources", {}))
        else:
            self._urls = {k: v for k, v in fixtures.items() if k != "sources"}
            self._sources = dict(fixtures.get("sources", {}))

    @classmethod
    def from_file(cls, path) -> "FixtureFetcher":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(json.load(fh))

    def fetch(self, url: str) -> tuple[int, bytes]:
        entry = self._urls.get(url)
        if entry is None:
            # unknown URL: the fixture web simply does not have this page
            return 404, b""
        if entry.get("timeout"):
            raise FetchUnavailable(f"fetch timed out: {url}")
        body = entry.get("body", "")
        if isinstance(body, str):
            body = body.encode("utf-8")
        return int(entry.get("status", 200)), body

    def query_source(self, query_id: str) -> float:
        if query_id not in self._sources:
            raise FetchUnavailable(f"no independent source for query {query_id!r}")
        return float(self._sources[query_id])


class LiveFetcher:
    """requests-backed fetcher with a bounded timeout."""

    def __init__(self, timeout_s: float = 5.0):
        self.timeout_s = timeout_s

    def fetch(self, url: str) -> tuple[int, bytes]:
        import requests

        try:
            resp = requests.get(url, timeout=self.timeout_s)
        except requests.RequestException as exc:
            raise FetchUnavailable(f"fetch failed: {exc}") from exc
        return resp.status_code, resp.content

    def query_source(self, query_id: str) -> float:
        raise FetchUnavailable("live fetcher has no independent source backend")


@dataclass
class DeepAgentOutput:
    """Structured output of an autonomous agent run, as cross-check input.

    cited_urls pairs each URL with an optional claimed excerpt; computations
    pair a replayable expression with its claimed numeric result; dated
    items carry ISO-8601 timestamps, with declared orderings listed as
    (earlier_label, later_label); key facts pair a claimed numeric value
    with the query id of an independent source.
    """

    result: Any = None
    schema: dict | None = None
    cited_urls: list[tuple[str, str | None]] = field(default_factory=list)
    computations: list[tuple[str, float]] = field(default_factory=list)
    dated_items: list[tuple[str, str]] = field(default_factory=list)
    temporal_order: list[tuple[str, str]] = field(default_factory=list)
    key_facts: list[tuple[str, float, str]] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "DeepAgentOutput":
        return cls(
            result=data.get("result"),
            schema=data.get("schema"),
            cited_urls=[
                (item["url"], item.get("excerpt"))
                for item in data.get("cited_urls", [])
            ],
            computations=[
                (item["expr"], item["claimed"])
                for item in data.get("computations", [])
            ],
            dated_items=[
                (item["label"], item["timestamp"])
                for item in data.get("dated_items", [])
            ],
            temporal_order=[tuple(pair) for pair in data.get("temporal_order", [])],
            key_facts=[
                (item["name"], item["claimed"], item["query_id"])
                for item in data.get("key_facts", [])
            ],
        )

    @classmethod
    def from_file(cls, path) -> "DeepAgentOutput":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


# --- strategy 1: schema validation ---------------------------------------------

_TYPE_CHECKS = {
    "string": lambda v: isinstance(v, str),
    "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "boolean": lambda v: isinstance(v, bool),
    "array": lambda v: isinstance(v, list),
    "object": lambda v: isinstance(v, dict),
}


def _schema_violation(value: Any, schema: dict, path: str) -> str | None:
    for name, spec in schema.items():
        child_path = f"{path}.{name}" if path else name
        if not isinstance(value, dict) or name not in value:
            return f"{child_path}: required field missing"
        child = value[name]
        if isinstance(spec, str):
            spec = {"type": spec}
        type_tag = spec.get("type", "string")
        check = _TYPE_CHECKS.get(type_tag)
        if check is None:
            return f"{child_path}: unknown type tag {type_tag!r}"
        if not check(child):
            return f"{child_path}: expected {type_tag}, got {type(child).__name__}"
        if type_tag == "number":
            if "min" in spec and child < spec["min"]:
                return f"{child_path}: {child} below minimum {spec['min']}"
            if "max" in spec and child > spec["max"]:
                return f"{child_path}: {child} above maximum {spec['max']}"
        if type_tag == "object" and "fields" in spec:
            nested = _schema_violation(child, spec["fields"], child_path)
            if nested:
                return nested
    return None


def validate_schema(result: Any, schema: dict) -> Finding:
    """Flag the first missing or mis-typed required field, if any."""
    violation = _schema_violation(result, schema, "")
    if violation:
        return Finding("schema", violation.split(":")[0], FLAGGED, violation)
    return Finding("schema", "result", PASS, "result conforms to the expected shape")


# --- strategy 2: URL re-fetching ------------------------------------------------

_WS_RE = re.compile(r"\s+")


def _normalize_body(text: str) -> str:
    return _WS_RE.sub(" ", text).casefold().strip()


def refetch_urls(
    cited: list[tuple[str, str | None]], fetcher: Fetcher
) -> list[Finding]:
    """Independently fetch every cited URL; flag dead pages and excerpts
    that do not appear in the fetched content."""
    findings = []
    for url, excerpt in cited:
        try:
            status, body = fetcher.fetch(url)
        except FetchUnavailable as exc:
            findings.append(Finding("url", url, INDETERMINATE, str(exc)))
            continue
        if not (200 <= status < 300):
            findings.append(
                Finding("url", url, FLAGGED, f"fetch returned status {status}")
            )
            continue
        if excerpt:
            text = _normalize_body(body.decode("utf-8", errors="replace"))
            if _normalize_body(excerpt) not in text:
                findings.append(
                    Finding(
                        "url", url, FLAGGED,
                        "claimed excerpt not found in fetched content",
                    )
                )
                continue
        findings.append(Finding("url", url, PASS, f"fetched with status {status}"))
    return findings


# --- strategy 3: computation replay ---------------------------------------------


class ExpressionError(ValueError):
    """Expression falls outside the replay grammar."""


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<op>[-+*/()]))")


def _tokenize(expr: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(expr):
        m = _TOKEN_RE.match(expr, pos)
        if not m:
            raise ExpressionError(f"unexpected character at {pos}: {expr[pos:pos+8]!r}")
        if m.group("num") is not None:
            tokens.append(m.group("num"))
        else:
            tokens.append(m.group("op"))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent over: expr := term ((+|-) term)*;
    term := unary ((*|/) unary)*; unary := - unary | number | ( expr )."""

    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise ExpressionError("unexpected end of expression")
        self.pos += 1
        return token

    def parse(self) -> Fraction:
        value = self.expr()
        if self.peek() is not None:
            raise ExpressionError(f"trailing tokens at {self.peek()!r}")
        return value

    def expr(self) -> Fraction:
        value = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                value += self.term()
            else:
                value -= self.term()
        return value

    def term(self) -> Fraction:
        value = self.unary()
        while self.peek() in ("*", "/"):
            if self.take() == "*":
                value *= self.unary()
            else:
                value /= self.unary()
        return value

    def unary(self) -> Fraction:
        token = self.take()
        if token == "-":
            return -self.unary()
        if token == "(":
            value = self.expr()
            if self.take() != ")":
                raise ExpressionError("unbalanced parenthesis")
            return value
        if token in ("+", "*", "/", ")"):
            raise ExpressionError(f"misplaced operator {token!r}")
        return Fraction(token)


def evaluate_expression(expr: str) -> Fraction:
    """Exact rational evaluation of a replay-grammar expression."""
    return _Parser(_tokenize(expr)).parse()


_REPLAY_REL_TOL = Fraction(1, 10**9)


def replay_computation(expr: str, claimed: float) -> Finding:
    """Re-execute an arithmetic claim exactly and compare with the claim.

    The claimed value is interpreted as its decimal literal, so 33.3 means
    exactly 333/10 rather than the nearest binary float.
    """
    try:
        replayed = evaluate_expression(expr)
    except ExpressionError as exc:
        return Finding("computation", expr, INDETERMINATE, f"outside replay grammar: {exc}")
    except ZeroDivisionError:
        return Finding("computation", expr, FLAGGED, "division by zero in replay")
    try:
        claimed_fraction = Fraction(str(claimed))
    except ValueError:
        return Finding("computation", expr, FLAGGED, f"claimed value {claimed!r} is not numeric")
    bound = _REPLAY_REL_TOL * max(Fraction(1), abs(replayed))
    if abs(replayed - claimed_fraction) <= bound:
        return Finding("computation", expr, PASS, f"replayed value matches: {claimed}")
    return Finding(
        "computation", expr, FLAGGED,
        f"replayed {float(replayed):.10g}, claimed {claimed}",
    )


# --- strategy 4: temporal consistency -------------------------------------------

_FUTURE_SKEW = timedelta(hours=24)


def _parse_ts(text: str) -> datetime:
    moment = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment


def check_temporal(
    items: list[tuple[str, str]],
    now: datetime | str,
    order: list[tuple[str, str]] | None = None,
) -> list[Finding]:
    """Flag future-dated items (beyond a 24 h skew allowance) and declared
    orderings that the timestamps violate."""
    now_dt = _parse_ts(now) if isinstance(now, str) else now
    if now_dt.tzinfo is None:
        now_dt = now_dt.replace(tzinfo=timezone.utc)
    findings = []
    parsed: dict[str, datetime] = {}
    for label, text in items:
        try:
            moment = _parse_ts(text)
        except ValueError:
            findings.append(
                Finding("temporal", label, INDETERMINATE, f"unparseable timestamp {text!r}")
            )
            continue
        parsed[label] = moment
        if moment > now_dt + _FUTURE_SKEW:
            findings.append(
                Finding("temporal", label, FLAGGED, f"dated in the future: {text}")
            )
        else:
            findings.append(Finding("temporal", label, PASS, f"plausible date {text}"))
    for earlier, later in order or []:
        target = f"{earlier}<={later}"
        if earlier not in parsed or later not in parsed:
            findings.append(
                Finding("temporal", target, INDETERMINATE, "ordered label missing or unparseable")
            )
        elif parsed[earlier] <= parsed[later]:
            findings.append(Finding("temporal", target, PASS, "declared order holds"))
        else:
            findings.append(
                Finding(
                    "temporal", target, FLAGGED,
                    f"{earlier} is dated after {later}, violating the declared order",
                )
            )
    return findings


# --- strategy 5: cross-source verification --------------------------------------

_CROSS_EPS = Fraction(1, 10**12)


def cross_source_check(
    facts: list[tuple[str, float, str]],
    fetcher: Fetcher,
    rel_tol: Fraction | float = Fraction(1, 100),
) -> list[Finding]:
    """Corroborate claimed numeric facts against independent sources;
    flagged when the relative difference exceeds rel_tol."""
    rel_tol = Fraction(str(rel_tol)) if not isinstance(rel_tol, Fraction) else rel_tol
    if not (0 < rel_tol < 1):
        raise ValueError("rel_tol must be inside (0, 1)")
    findings = []
    for name, claimed, query_id in facts:
        try:
            independent = fetcher.query_source(query_id)
        except FetchUnavailable as exc:
            findings.append(Finding("cross_source", name, INDETERMINATE, str(exc)))
            continue
        claimed_f = Fraction(str(claimed))
        independent_f = Fraction(str(independent))
        denom = max(abs(independent_f), _CROSS_EPS)
        rel_diff = abs(claimed_f - independent_f) / denom
        if rel_diff > rel_tol:
            findings.append(
                Finding(
                    "cross_source", name, FLAGGED,
                    f"claimed {claimed} but independent source reports {independent} "
                    f"(relative difference {float(rel_diff):.4%})",
                )
            )
        else:
            findings.append(
                Finding(
                    "cross_source", name, PASS,
                    f"independent source agrees within tolerance: {independent}",
                )
            )
    return findings


@dataclass
class CrossCheckReport:
    findings: list[Finding]
    flagged: int
    indeterminate: int
    elapsed_ms: float

    def to_dict(self) -> dict:
        return {
            "flagged": self.flagged,
            "indeterminate": self.indeterminate,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "findings": [f.to_dict() for f in self.findings],
        }


def crosscheck(
    output: DeepAgentOutput,
    fetcher: Fetcher,
    rel_tol: Fraction | float = Fraction(1, 100),
    now: datetime | str | None = None,
) -> CrossCheckReport:
    """Run all five strategies over one deep-agent output."""
    started = time.perf_counter()
    findings: list[Finding] = []
    if output.schema is not None:
        findings.append(validate_schema(output.result, output.schema))
    findings.extend(refetch_urls(output.cited_urls, fetcher))
    for expr, claimed in output.computations:
        findings.append(replay_computation(expr, claimed))
    findings.extend(
        check_temporal(
            output.dated_items,
            now if now is not None else datetime.now(timezone.utc),
            output.temporal_order,
        )
    )
    findings.extend(cross_source_check(output.key_facts, fetcher, rel_tol))
    findings.sort(key=lambda f: (f.strategy, f.target))
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return CrossCheckReport(
        findings=findings,
        flagged=sum(1 for f in findings if f.status == FLAGGED),
        indeterminate=sum(1 for f in findings if f.status == INDETERMINATE),
        elapsed_ms=elapsed_ms,
    )
