"""Seeded scenario generation and systematic hallucination injection.

A scenario is built in two layers. The language-independent base fixes the
template, entity slots, receipt ids, timestamps, and (for injected
scenarios) the injection parameters; rendering then produces the per-language
user request, response text, verification block, and ground truth. Because
all four language variants share one base, an injected fault's structural
signature (evidence id, count delta, absence flag) is identical across
languages by construction.

Injections rewrite the response side only; tool outputs always stay
truthful. Fact-mismatch, source-fabrication, and inference-as-fact scenarios
keep their verification block (those faults are invisible without tags),
while the other types participate in the configured non-compliance fraction
and must be caught by the tag-free screen.
"""

from __future__ import annotations

import json
import random
import uuid
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from ..canonical import canonical_json, canonical_scalar
from ..claims import BLOCK_END, BLOCK_START
from ..numerals import LANGS
from .templates import (
    FABRICATED_SOURCES,
    MEETINGS,
    NEWS_SOURCES,
    PEOPLE,
    STOCKS,
    SUBJECTS,
    TIMES,
    count_str,
    decimal_str,
    text,
)

__all__ = [
    "ConfigError",
    "InjectionError",
    "HallucinationType",
    "ToolCallRecord",
    "GroundTruthClaim",
    "Scenario",
    "generate_scenarios",
    "inject_hallucination",
    "render_scenario",
    "save_corpus",
    "load_corpus",
]

_T0_MS = 1_708_300_000_000


class ConfigError(ValueError):
    """Invalid benchmark configuration."""


class InjectionError(ValueError):
    """Scenario/type pair cannot host this injection."""


class HallucinationType(Enum):
    FABRICATED_TOOL_CALL = "fabricated_tool_call"
    COUNT_MISMATCH = "count_mismatch"
    FACT_MISMATCH = "fact_mismatch"
    INFERENCE_AS_FACT = "inference_as_fact"
    FALSE_ABSENCE = "false_absence"
    SOURCE_FABRICATION = "source_fabrication"


# expected engine verdict for the injected claim, per type
EXPECTED_VERDICT = {
    HallucinationType.FABRICATED_TOOL_CALL: "fabricated_tool_call",
    HallucinationType.COUNT_MISMATCH: "count_mismatch",
    HallucinationType.FACT_MISMATCH: "fact_mismatch",
    HallucinationType.INFERENCE_AS_FACT: "fact_mismatch",
    HallucinationType.FALSE_ABSENCE: "false_absence",
    HallucinationType.SOURCE_FABRICATION: "source_unverified",
}

# faults that remain detectable without a verification block; the rest keep
# their block regardless of the configured compliance fraction
TAG_FREE_DETECTABLE = {
    HallucinationType.FABRICATED_TOOL_CALL,
    HallucinationType.COUNT_MISMATCH,
    HallucinationType.FALSE_ABSENCE,
}

# templates each injection type can be planted into (cycled per instance)
INJECTABLE_TEMPLATES = {
    HallucinationType.FABRICATED_TOOL_CALL: ("email_fv", "calendar_fv", "finance_fv", "web_fv"),
    HallucinationType.COUNT_MISMATCH: ("email_fv", "calendar_fv"),
    HallucinationType.FACT_MISMATCH: ("email_fv", "calendar_fv", "finance_fv"),
    HallucinationType.INFERENCE_AS_FACT: ("email_fv",),
    HallucinationType.FALSE_ABSENCE: ("email_fv", "calendar_fv"),
    HallucinationType.SOURCE_FABRICATION: ("email_fv", "finance_fv", "web_fv"),
}

CLEAN_TEMPLATE_CYCLE = (
    "email_fv",
    "calendar_fv",
    "finance_fv",
    "finance_compare",
    "web_fv",
    "email_absence",
    "email_mv",
    "email_partial",
)

_DET_FAIL_VALUES = {
    "fabricated_tool_call",
    "count_mismatch",
    "fact_mismatch",
    "false_absence",
    "signature_invalid",
}


@dataclass
class ToolCallRecord:
    receipt_id: str
    tool_name: str
    input: Any
    structured_output: Any
    raw_output: bytes
    timestamp_ms: int
    duration_ms: int

    def to_dict(self) -> dict:
        return {
            "receipt_id": self.receipt_id,
            "tool_name": self.tool_name,
            "input": self.input,
            "structured_output": self.structured_output,
            "raw_output": self.raw_output.decode("utf-8"),
            "timestamp_ms": self.timestamp_ms,
            "duration_ms": self.duration_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ToolCallRecord":
        return cls(
            receipt_id=data["receipt_id"],
            tool_name=data["tool_name"],
            input=data["input"],
            structured_output=data["structured_output"],
            raw_output=data["raw_output"].encode("utf-8"),
            timestamp_ms=data["timestamp_ms"],
            duration_ms=data["duration_ms"],
        )


@dataclass
class GroundTruthClaim:
    pramana: str              # the claim's true epistemic category
    receipt_index: int | None
    expected_verdict: str
    checkable: bool
    correct: bool             # factual correctness per ground truth

    def to_dict(self) -> dict:
        return {
            "pramana": self.pramana,
            "receipt_index": self.receipt_index,
            "expected_verdict": self.expected_verdict,
            "checkable": self.checkable,
            "correct": self.correct,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GroundTruthClaim":
        return cls(
            pramana=data["pramana"],
            receipt_index=data["receipt_index"],
            expected_verdict=data["expected_verdict"],
            checkable=data["checkable"],
            correct=data["correct"],
        )


@dataclass
class Scenario:
    id: str
    lang: str
    user_request: str
    tool_outputs: list[ToolCallRecord]
    llm_response: str
    compliant: bool
    gt_claims: list[GroundTruthClaim]
    expected_trust: str
    injected: dict | None
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "lang": self.lang,
            "user_request": self.user_request,
            "tool_outputs": [rec.to_dict() for rec in self.tool_outputs],
            "llm_response": self.llm_response,
            "compliant": self.compliant,
            "ground_truth": {
                "claims": [c.to_dict() for c in self.gt_claims],
                "expected_trust": self.expected_trust,
            },
            "injected": self.injected,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        return cls(
            id=data["id"],
            lang=data["lang"],
            user_request=data["user_request"],
            tool_outputs=[ToolCallRecord.from_dict(r) for r in data["tool_outputs"]],
            llm_response=data["llm_response"],
            compliant=data["compliant"],
            gt_claims=[GroundTruthClaim.from_dict(c) for c in data["ground_truth"]["claims"]],
            expected_trust=data["ground_truth"]["expected_trust"],
            injected=data["injected"],
            meta=data.get("meta", {}),
        )


def _uuid_from(rng: random.Random) -> str:
    return str(uuid.UUID(int=rng.getrandbits(128), version=4))


# --- base construction ----------------------------------------------------------


def _make_base(
    rng: random.Random,
    template: str,
    base_key: int,
    compliance_fraction: float,
    force_compliant: bool,
    unv_correct: bool = True,
) -> dict:
    slots: dict[str, Any] = {}
    n_calls = 1
    if template in ("email_fv", "email_mv", "email_partial"):
        slots = {
            "sender": rng.choice(PEOPLE),
            "subject": rng.choice(SUBJECTS),
            "n": rng.randint(2, 9),
            "unv_correct": unv_correct,
        }
    elif template == "email_absence":
        slots = {"sender": rng.choice(PEOPLE), "subject": rng.choice(SUBJECTS), "n": 0}
    elif template == "calendar_fv":
        n = rng.randint(2, 5)
        start = rng.randrange(len(MEETINGS))
        slots = {
            "n": n,
            "titles": [MEETINGS[(start + i) % len(MEETINGS)] for i in range(n)],
            "times": [TIMES[i % len(TIMES)] for i in range(n)],
        }
    elif template == "finance_fv":
        symbol, price = rng.choice(STOCKS)
        slots = {"symbol": symbol, "price": price}
    elif template == "finance_compare":
        first, second = rng.sample(list(STOCKS), 2)
        if first[1] < second[1]:
            first, second = second, first
        slots = {"s1": first[0], "p1": first[1], "s2": second[0], "p2": second[1]}
        n_calls = 2
    elif template == "web_fv":
        name, url = rng.choice(NEWS_SOURCES)
        slots = {"name": name, "url": url}
    else:
        raise ConfigError(f"unknown template {template!r}")

    compliant = True if force_compliant else rng.random() < compliance_fraction
    return {
        "template": template,
        "base_key": base_key,
        "slots": slots,
        "receipt_ids": [_uuid_from(rng) for _ in range(n_calls)],
        "timestamps": [_T0_MS + base_key * 60_000 + j * 1_000 for j in range(n_calls)],
        "durations": [rng.randint(40, 400) for _ in range(n_calls)],
        "compliant": compliant,
        "block_style": rng.choice(("dash", "json")),
        "injection": None,
        "planted": False,
    }


def _tool_specs(meta: dict) -> list[tuple[str, Any, Any]]:
    """(tool_name, input, structured_output) per call; language-independent."""
    template = meta["template"]
    slots = meta["slots"]
    if template in ("email_fv", "email_mv", "email_partial", "email_absence"):
        results = [
            {
                "sender": slots["sender"],
                "subject": slots["subject"] if i == 0 else f"Re: {slots['subject']}",
            }
            for i in range(slots["n"])
        ]
        return [(
            "email_search",
            {"query": f"from:{slots['sender']}"},
            {"results": results},
        )]
    if template == "calendar_fv":
        results = [
            {"title": title, "time": slots["times"][i]}
            for i, title in enumerate(slots["titles"])
        ]
        return [("calendar_list", {"range": "tomorrow"}, {"results": results})]
    if template == "finance_fv":
        return [(
            "stock_quote",
            {"symbol": slots["symbol"]},
            {"symbol": slots["symbol"], "close": slots["price"]},
        )]
    if template == "finance_compare":
        return [
            (
                "stock_quote",
                {"symbol": slots["s1"]},
                {"symbol": slots["s1"], "close": slots["p1"]},
            ),
            (
                "stock_quote",
                {"symbol": slots["s2"]},
                {"symbol": slots["s2"], "close": slots["p2"]},
            ),
        ]
    if template == "web_fv":
        return [(
            "web_fetch",
            {"url": slots["url"]},
            {"url": slots["url"], "status": 200, "title": f"{slots['name']} Markets"},
        )]
    raise ConfigError(f"unknown template {meta['template']!r}")


# --- claim rendering ------------------------------------------------------------


def _claim(
    text_: str,
    source_type: str,
    evidence: str | None,
    pramana: str,
    receipt_index: int | None,
    expected: str,
    correct: bool,
    checkable: bool = True,
    asserts: dict | None = None,
    premises: list | None = None,
) -> dict:
    return {
        "text": text_,
        "source_type": source_type,
        "evidence": evidence,
        "checkable": checkable,
        "asserts": asserts,
        "premises": premises,
        "pramana": pramana,
        "receipt_index": receipt_index,
        "expected": expected,
        "correct": correct,
    }


def _count_claim(template_role, slots, lang, rid, inj_type, inj):
    """The count-bearing tool_output claim shared by email/calendar templates."""
    n = slots["n"]
    claimed_n = inj["claimed_count"] if inj_type is HallucinationType.COUNT_MISMATCH else n
    evidence = inj["fake_id"] if inj_type is HallucinationType.FABRICATED_TOOL_CALL else rid
    asserts = {"count": count_str(claimed_n, lang)}
    extra = {}
    if template_role == "email_count":
        claimed_sender = slots["sender"]
        if inj_type is HallucinationType.FACT_MISMATCH and inj.get("field") == "sender":
            claimed_sender = inj["claimed_value"]
        asserts["sender"] = claimed_sender
        extra = {"sender": claimed_sender, "subject": slots["subject"]}
        if inj_type is HallucinationType.FACT_MISMATCH and inj.get("field") == "sender":
            expected, correct = "fact_mismatch", False
        elif inj_type is HallucinationType.COUNT_MISMATCH:
            expected, correct = "count_mismatch", False
        elif inj_type is HallucinationType.FABRICATED_TOOL_CALL:
            expected, correct = "fabricated_tool_call", False
        else:
            expected, correct = "verified", True
    else:
        if inj_type is HallucinationType.COUNT_MISMATCH:
            expected, correct = "count_mismatch", False
        elif inj_type is HallucinationType.FABRICATED_TOOL_CALL:
            expected, correct = "fabricated_tool_call", False
        else:
            expected, correct = "verified", True
    body = text(template_role, lang, n=count_str(claimed_n, lang), **extra)
    return _claim(
        body, "tool_output", evidence, "tool_output", 0, expected, correct,
        asserts=asserts,
    )


def _render_claims(meta: dict, lang: str) -> list[dict]:
    template = meta["template"]
    slots = meta["slots"]
    rids = meta["receipt_ids"]
    inj = meta["injection"]
    inj_type = HallucinationType(inj["type"]) if inj else None

    if inj_type is HallucinationType.FALSE_ABSENCE:
        # the whole response is replaced by the language's absence phrase
        return [_claim(
            text("absence_generic", lang), "absence", rids[0], "absence", 0,
            "false_absence", False,
        )]

    claims: list[dict] = []
    if template in ("email_fv", "email_mv", "email_partial"):
        claims.append(_count_claim("email_count", slots, lang, rids[0], inj_type, inj or {}))
        if inj_type is HallucinationType.INFERENCE_AS_FACT:
            # an inference retagged as direct tool output, with assertions the
            # receipt facts cannot back
            claims.append(_claim(
                text("email_inference_direct", lang, sender=slots["sender"]),
                "tool_output", rids[0], "inference", 0, "fact_mismatch", False,
                asserts={"sentiment": "worried"},
            ))
        else:
            claims.append(_claim(
                text("email_inference", lang, sender=slots["sender"]),
                "inference", rids[0], "inference", 0, "premises_verified", True,
                premises=[slots["sender"]],
            ))
        if template in ("email_mv", "email_partial"):
            claims.append(_claim(
                text("email_fact_subject", lang, subject=slots["subject"]),
                "tool_output", rids[0], "tool_output", 0, "verified", True,
                asserts={"subject": slots["subject"]},
            ))
        if template == "email_mv":
            claims.append(_claim(
                text("email_fact_sender", lang, sender=slots["sender"]),
                "tool_output", rids[0], "tool_output", 0, "verified", True,
                asserts={"sender": slots["sender"]},
            ))
            claims.append(_claim(
                text("email_unverifiable_a", lang),
                "inference", rids[0], "inference", 0, "unverifiable",
                slots.get("unv_correct", True),
                premises=["deadline extension"],
            ))
        if template == "email_partial":
            claims.append(_claim(
                text("email_unverifiable_a", lang),
                "inference", rids[0], "inference", 0, "unverifiable",
                slots.get("unv_correct", True),
                premises=["deadline extension"],
            ))
            claims.append(_claim(
                text("email_unverifiable_b", lang),
                "inference", rids[0], "inference", 0, "unverifiable", True,
                premises=["budget risk"],
            ))
    elif template == "email_absence":
        claims.append(_claim(
            text("email_absence", lang), "absence", rids[0], "absence", 0,
            "verified", True,
        ))
    elif template == "calendar_fv":
        claims.append(_count_claim("calendar_count", slots, lang, rids[0], inj_type, inj or {}))
        claimed_title = slots["titles"][0]
        expected, correct = "verified", True
        if inj_type is HallucinationType.FACT_MISMATCH:
            claimed_title = inj["claimed_value"]
            expected, correct = "fact_mismatch", False
        claims.append(_claim(
            text("calendar_fact", lang, title=claimed_title, time=slots["times"][0]),
            "tool_output", rids[0], "tool_output", 0, expected, correct,
            asserts={"first_title": claimed_title},
        ))
    elif template == "finance_fv":
        claimed_close = canonical_scalar(slots["price"])
        expected, correct = "verified", True
        if inj_type is HallucinationType.FACT_MISMATCH:
            claimed_close = inj["claimed_value"]
            expected, correct = "fact_mismatch", False
        evidence = rids[0]
        if inj_type is HallucinationType.FABRICATED_TOOL_CALL:
            evidence = inj["fake_id"]
            expected, correct = "fabricated_tool_call", False
        claims.append(_claim(
            text("finance_fact", lang, symbol=slots["symbol"],
                 price=decimal_str(float(claimed_close), lang)),
            "tool_output", evidence, "tool_output", 0, expected, correct,
            asserts={"symbol": slots["symbol"], "close": claimed_close},
        ))
    elif template == "finance_compare":
        claims.append(_claim(
            text("finance_fact", lang, symbol=slots["s1"],
                 price=decimal_str(slots["p1"], lang)),
            "tool_output", rids[0], "tool_output", 0, "verified", True,
            asserts={"symbol": slots["s1"], "close": canonical_scalar(slots["p1"])},
        ))
        claims.append(_claim(
            text("finance_compare", lang, s1=slots["s1"], s2=slots["s2"]),
            "comparison", None, "comparison", None, "premises_verified", True,
            premises=[slots["s1"], slots["s2"]],
        ))
    elif template == "web_fv":
        evidence = rids[0]
        expected, correct = "verified", True
        if inj_type is HallucinationType.FABRICATED_TOOL_CALL:
            evidence = inj["fake_id"]
            expected, correct = "fabricated_tool_call", False
        claims.append(_claim(
            text("web_source", lang, name=slots["name"], url=slots["url"] + "/"),
            "external_source", evidence, "external_source", 0, expected, correct,
        ))
    else:
        raise ConfigError(f"unknown template {template!r}")

    if inj_type is HallucinationType.SOURCE_FABRICATION:
        claims.append(_claim(
            text("added_citation", lang, name=inj["name"], url=inj["url"]),
            "external_source", None, "external_source", None,
            "source_unverified", False,
        ))
    return claims


def _request_text(meta: dict, lang: str) -> str:
    template = meta["template"]
    slots = meta["slots"]
    if template.startswith("email"):
        return text("email_request", lang, sender=slots["sender"])
    if template == "calendar_fv":
        return text("calendar_request", lang)
    if template == "finance_fv":
        return text("finance_request", lang, symbol=slots["symbol"])
    if template == "finance_compare":
        return text("finance_request", lang, symbol=slots["s1"])
    return text("web_request", lang)


def _render_block(claims: list[dict], style: str) -> str:
    entries = []
    for c in claims:
        entry: dict[str, Any] = {
            "claim": c["text"],
            "source_type": c["source_type"],
        }
        if c["evidence"]:
            entry["evidence"] = c["evidence"]
        entry["checkable"] = c["checkable"]
        if c["asserts"]:
            entry["asserts"] = c["asserts"]
        if c["premises"]:
            entry["premises"] = c["premises"]
        entries.append(entry)
    if style == "json":
        body = json.dumps(entries, ensure_ascii=False, indent=2)
    else:
        lines = []
        for entry in entries:
            lines.append(f'- claim: "{entry["claim"]}"')
            lines.append(f"  source_type: {entry['source_type']}")
            if "evidence" in entry:
                lines.append(f"  evidence: {entry['evidence']}")
            lines.append(f"  checkable: {'true' if entry['checkable'] else 'false'}")
            if "asserts" in entry:
                lines.append(f"  asserts: {json.dumps(entry['asserts'], ensure_ascii=False)}")
            if "premises" in entry:
                lines.append(f"  premises: {json.dumps(entry['premises'], ensure_ascii=False)}")
        body = "\n".join(lines)
    return f"{BLOCK_START}\n{body}\n{BLOCK_END}"


def _expected_trust(gt_claims: list[GroundTruthClaim], compliant: bool, inj_type) -> str:
    if not compliant:
        if inj_type is not None and HallucinationType(inj_type) in TAG_FREE_DETECTABLE:
            return "unreliable"
        return "ungrounded"
    if any(c.expected_verdict in _DET_FAIL_VALUES for c in gt_claims):
        return "unreliable"
    checkable = [c for c in gt_claims if c.checkable]
    if not checkable:
        return "ungrounded"
    p = Fraction(
        sum(1 for c in checkable if c.expected_verdict in ("verified", "premises_verified")),
        len(checkable),
    )
    if p == 1:
        return "fully_verified"
    if p >= Fraction(4, 5):
        return "mostly_verified"
    if p >= Fraction(1, 2):
        return "partial"
    return "unreliable"


def render_scenario(meta: dict, lang: str, scenario_id: str) -> Scenario:
    """Realize one language variant of a base; pure in (meta, lang, id)."""
    lang = lang.upper()
    if lang not in LANGS:
        raise ConfigError(f"unsupported language {lang!r}")
    claims = _render_claims(meta, lang)
    inj = meta["injection"]
    inj_type = inj["type"] if inj else None

    ref_id = meta["receipt_ids"][0]
    if inj_type == HallucinationType.FABRICATED_TOOL_CALL.value:
        ref_id = inj["fake_id"]
    prose = " ".join(c["text"] for c in claims) + " " + text("ref_marker", lang, rid=ref_id)
    response = prose
    if meta["compliant"]:
        response = prose + "\n\n" + _render_block(claims, meta["block_style"])

    records = []
    for idx, (tool_name, input_value, structured) in enumerate(_tool_specs(meta)):
        records.append(ToolCallRecord(
            receipt_id=meta["receipt_ids"][idx],
            tool_name=tool_name,
            input=input_value,
            structured_output=structured,
            raw_output=canonical_json(structured),
            timestamp_ms=meta["timestamps"][idx],
            duration_ms=meta["durations"][idx],
        ))

    gt_claims = [
        GroundTruthClaim(
            pramana=c["pramana"],
            receipt_index=c["receipt_index"],
            expected_verdict=c["expected"],
            checkable=c["checkable"],
            correct=c["correct"] and not (meta["planted"] and i == 0),
        )
        for i, c in enumerate(claims)
    ]
    injected = None
    if inj:
        injected = {"type": inj["type"], "claim_index": inj["claim_index"]}
    return Scenario(
        id=scenario_id,
        lang=lang,
        user_request=_request_text(meta, lang),
        tool_outputs=records,
        llm_response=response,
        compliant=meta["compliant"],
        gt_claims=gt_claims,
        expected_trust=_expected_trust(gt_claims, meta["compliant"], inj_type),
        injected=injected,
        meta=meta,
    )


# --- injection ------------------------------------------------------------------


def _injection_params(meta: dict, t: HallucinationType, seed: int) -> dict:
    rng = random.Random(seed * 1_000_003 + meta["base_key"])
    template = meta["template"]
    slots = meta["slots"]
    params: dict[str, Any] = {"type": t.value}
    if t is HallucinationType.FABRICATED_TOOL_CALL:
        fake = _uuid_from(rng)
        while fake in meta["receipt_ids"]:
            fake = _uuid_from(rng)
        params.update(fake_id=fake, claim_index=0)
    elif t is HallucinationType.COUNT_MISMATCH:
        # must differ from every receipt's count in the scenario
        params.update(claimed_count=slots["n"] + rng.randint(2, 5), claim_index=0)
    elif t is HallucinationType.FACT_MISMATCH:
        if template == "email_fv":
            candidates = [p for p in PEOPLE if p != slots["sender"]]
            params.update(field="sender", claimed_value=rng.choice(candidates), claim_index=0)
        elif template == "calendar_fv":
            candidates = [m for m in MEETINGS if m != slots["titles"][0]]
            params.update(field="first_title", claimed_value=rng.choice(candidates), claim_index=1)
        elif template == "finance_fv":
            delta = rng.randint(2, 9) + 0.25
            params.update(
                field="close",
                claimed_value=canonical_scalar(round(slots["price"] + delta, 2)),
                claim_index=0,
            )
        else:
            raise InjectionError(f"fact mismatch not supported on {template!r}")
    elif t is HallucinationType.INFERENCE_AS_FACT:
        params.update(claim_index=1)
    elif t is HallucinationType.FALSE_ABSENCE:
        if slots.get("n", 0) <= 0:
            raise InjectionError("false absence needs a non-empty tool result")
        params.update(claim_index=0)
    elif t is HallucinationType.SOURCE_FABRICATION:
        name, url = FABRICATED_SOURCES[rng.randrange(len(FABRICATED_SOURCES))]
        base_claims = {"email_fv": 2, "finance_fv": 1, "web_fv": 1}[template]
        params.update(name=name, url=url, claim_index=base_claims)
    return params


def inject_hallucination(clean: Scenario, t: HallucinationType, seed: int) -> Scenario:
    """Plant one fault of the given type into a clean scenario.

    Parameters derive from (seed, base key) only, so injecting the same base
    in different languages produces the same structural signature.
    """
    if clean.injected is not None:
        raise InjectionError("scenario already carries an injection")
    if clean.meta.get("template") not in INJECTABLE_TEMPLATES[t]:
        raise InjectionError(
            f"template {clean.meta.get('template')!r} has no claim compatible with {t.value}"
        )
    meta = dict(clean.meta)
    meta["injection"] = _injection_params(meta, t, seed)
    return render_scenario(meta, clean.lang, clean.id)


# --- corpus generation ----------------------------------------------------------


def generate_scenarios(
    seed: int,
    hallucinated_per_lang: int = 60,
    clean_per_lang: int = 30,
    compliance_fraction: float = 0.9,
    langs: tuple[str, ...] = LANGS,
    plant_error_rate: float = 0.0,
    id_prefix: str = "s",
) -> list[Scenario]:
    """Deterministically generate the benchmark corpus for a seed.

    Produces `hallucinated_per_lang` injected and `clean_per_lang` clean
    scenarios for each language, with every hallucination type appearing
    equally often per language. 1 - compliance_fraction of the eligible
    scenarios omit the verification block. `plant_error_rate` marks that
    share of fully-verified clean scenarios as carrying a tool-data error
    (wrong data, valid receipt) in the ground truth, for calibration runs.
    """
    if hallucinated_per_lang % len(HallucinationType) != 0:
        raise ConfigError(
            f"hallucinated_per_lang must be divisible by {len(HallucinationType)}"
        )
    if not 0.0 <= compliance_fraction <= 1.0:
        raise ConfigError("compliance_fraction must be within [0, 1]")
    langs = tuple(l.upper() for l in langs)
    for lang in langs:
        if lang not in LANGS:
            raise ConfigError(f"unsupported language {lang!r}")

    rng = random.Random(seed)
    per_type = hallucinated_per_lang // len(HallucinationType)
    base_key = 0
    injected_bases: list[tuple[dict, HallucinationType]] = []
    for t in HallucinationType:
        cycle = INJECTABLE_TEMPLATES[t]
        for i in range(per_type):
            meta = _make_base(
                rng,
                cycle[i % len(cycle)],
                base_key,
                compliance_fraction,
                force_compliant=t not in TAG_FREE_DETECTABLE,
            )
            injected_bases.append((meta, t))
            base_key += 1

    clean_bases: list[dict] = []
    mv_count = 0
    partial_count = 0
    for i in range(clean_per_lang):
        template = CLEAN_TEMPLATE_CYCLE[i % len(CLEAN_TEMPLATE_CYCLE)]
        # the unverifiable inferences are usually true; a fixed share are not,
        # so the mostly-verified and partial calibration rows sit strictly
        # below the fully-verified row
        unv_correct = True
        if template == "email_mv":
            mv_count += 1
            unv_correct = mv_count % 3 != 0
        elif template == "email_partial":
            partial_count += 1
            unv_correct = partial_count % 2 != 0
        # the shaped templates exist to populate the mostly-verified and
        # partial calibration rows; keep them compliant so those buckets
        # have a seed-independent composition
        clean_bases.append(_make_base(
            rng, template, base_key, compliance_fraction,
            force_compliant=template in ("email_mv", "email_partial"),
            unv_correct=unv_correct,
        ))
        base_key += 1

    scenarios: list[Scenario] = []
    index = 0
    for meta, t in injected_bases:
        meta = dict(meta)
        meta["injection"] = _injection_params(meta, t, seed)
        for lang in langs:
            scenarios.append(render_scenario(meta, lang, f"{id_prefix}{index:05d}-{lang.lower()}"))
        index += 1
    clean_rendered: list[Scenario] = []
    for meta in clean_bases:
        for lang in langs:
            scenario = render_scenario(meta, lang, f"{id_prefix}{index:05d}-{lang.lower()}")
            scenarios.append(scenario)
            clean_rendered.append(scenario)
        index += 1

    if plant_error_rate > 0:
        # a planted error means the tool data itself was wrong: receipts stay
        # valid and the engine still fully verifies, but ground truth marks
        # the response incorrect
        eligible = [
            s for s in clean_rendered
            if s.compliant and s.expected_trust == "fully_verified"
        ]
        planted_count = min(len(eligible), max(1, round(plant_error_rate * len(eligible))))
        for scenario in rng.sample(eligible, planted_count):
            scenario.gt_claims[0].correct = False
            scenario.meta = {**scenario.meta, "planted": True}
    return scenarios


def save_corpus(scenarios: list[Scenario], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for scenario in scenarios:
            fh.write(json.dumps(scenario.to_dict(), ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")


def load_corpus(path) -> list[Scenario]:
    scenarios = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                scenarios.append(Scenario.from_dict(json.loads(line)))
    return scenarios
