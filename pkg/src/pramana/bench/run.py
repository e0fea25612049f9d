"""Benchmark execution: detectors, detection/FPR/latency metrics, calibration.

For each scenario the runner mints the receipt ledger from the recorded tool
calls, hands the response to the chosen detector, and scores the outcome:

- an injection counts as detected when the injected claim receives its
  expected verdict or any deterministic-failure verdict; inference-as-fact,
  whose check is heuristic, counts when the claim is anything but Verified
- a clean scenario is a false positive when any deterministic-failure
  verdict appears at all

Timing covers verification only (parse + verify + aggregate); ledger
construction is excluded. The regex baseline detector works from the raw
tool outputs and response text alone, with no receipts or self-tags.
"""

from __future__ import annotations

import hashlib
import json
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..claims import extract_urls
from ..engine import (
    DEFAULT_FETCH_TOOLS,
    DETERMINISTIC_FAILURES,
    TrustLevel,
    TrustReport,
    Verdict,
    VerdictType,
    normalize_url,
    verify_response,
)
from ..numerals import LANGS, count_references, detect_absence_phrase
from ..policy import Constitution
from ..receipts import Ledger, generate_receipt
from .generate import GroundTruthClaim, HallucinationType, Scenario
from .templates import BENCH_FACT_EXTRACTORS

__all__ = [
    "BENCH_KEY",
    "BenchReport",
    "build_ledger",
    "run_benchmark",
    "regex_baseline",
    "compute_calibration",
]

# fixed session key for benchmark runs; reproducibility matters here, secrecy
# does not
BENCH_KEY = hashlib.sha256(b"pramana benchmark session key").digest()


def build_ledger(scenario: Scenario, key: bytes = BENCH_KEY) -> Ledger:
    """Mint receipts for a scenario's tool calls exactly as the runtime would."""
    ledger = Ledger()
    for rec in scenario.tool_outputs:
        ledger.append(generate_receipt(
            rec.tool_name,
            rec.input,
            rec.raw_output,
            rec.structured_output,
            key=key,
            cfg=BENCH_FACT_EXTRACTORS,
            clock=rec.timestamp_ms,
            duration_ms=rec.duration_ms,
            receipt_id=rec.receipt_id,
        ))
    return ledger


def _engine_detected(scenario: Scenario, report: TrustReport) -> bool:
    injected = scenario.injected
    expected = scenario.gt_claims[injected["claim_index"]].expected_verdict
    if not scenario.compliant:
        return any(
            v.type.value == expected or v.type in DETERMINISTIC_FAILURES
            for _, v in report.results
        )
    idx = injected["claim_index"]
    if idx >= len(report.results):
        return False
    verdict = report.results[idx][1]
    if injected["type"] == HallucinationType.INFERENCE_AS_FACT.value:
        return verdict.type is not VerdictType.VERIFIED
    return verdict.type.value == expected or verdict.type in DETERMINISTIC_FAILURES


def _collect_numbers(value, into: set) -> None:
    if isinstance(value, bool):
        return
    if isinstance(value, (int, float)):
        into.add(int(value) if float(value).is_integer() else value)
    elif isinstance(value, list):
        for item in value:
            _collect_numbers(item, into)
    elif isinstance(value, dict):
        for item in value.values():
            _collect_numbers(item, into)


def _collect_urls(value, into: set) -> None:
    if isinstance(value, str):
        if value.startswith(("http://", "https://")):
            into.add(normalize_url(value))
    elif isinstance(value, list):
        for item in value:
            _collect_urls(item, into)
    elif isinstance(value, dict):
        for item in value.values():
            _collect_urls(item, into)


def regex_baseline(scenario: Scenario) -> list[Verdict]:
    """Pattern-matching detector over tool output text and the response.

    Flags count words that match no number in the tool output, absence
    phrasing against non-empty results, and cited URLs the tools never
    returned. No receipts, signatures, or self-tags are consulted.
    """
    verdicts: list[Verdict] = []
    tool_numbers: set = set()
    tool_urls: set = set()
    result_lengths: list[int] = []
    for rec in scenario.tool_outputs:
        _collect_numbers(rec.structured_output, tool_numbers)
        _collect_urls(rec.structured_output, tool_urls)
        if isinstance(rec.structured_output, dict):
            results = rec.structured_output.get("results")
            if isinstance(results, list):
                result_lengths.append(len(results))
                tool_numbers.add(len(results))

    response = scenario.llm_response
    if detect_absence_phrase(response, scenario.lang) and any(n > 0 for n in result_lengths):
        verdicts.append(Verdict(
            VerdictType.FALSE_ABSENCE,
            "response claims no results but tool output is non-empty",
        ))
    for value in count_references(response, scenario.lang):
        if value not in tool_numbers:
            verdicts.append(Verdict(
                VerdictType.COUNT_MISMATCH,
                f"count {value} appears in no tool output",
            ))
    for url in extract_urls(response):
        if normalize_url(url) not in tool_urls:
            verdicts.append(Verdict(
                VerdictType.SOURCE_UNVERIFIED,
                f"cited URL not present in tool output: {url}",
            ))
    return verdicts


def _regex_detected(scenario: Scenario, verdicts: list[Verdict]) -> bool:
    expected = scenario.gt_claims[scenario.injected["claim_index"]].expected_verdict
    return any(
        v.type.value == expected or v.type in DETERMINISTIC_FAILURES for v in verdicts
    )


def compute_calibration(
    items: list[tuple[TrustReport, list[GroundTruthClaim]]],
) -> dict[str, dict]:
    """Per trust level: response count and the fraction whose ground-truth
    claims are all factually correct."""
    buckets: dict[str, list[bool]] = {level.value: [] for level in TrustLevel}
    for report, gt_claims in items:
        buckets[report.trust.value].append(all(c.correct for c in gt_claims))
    table = {}
    for level in TrustLevel:
        outcomes = buckets[level.value]
        table[level.value] = {
            "count": len(outcomes),
            "correct_fraction": (
                round(sum(outcomes) / len(outcomes), 6) if outcomes else None
            ),
        }
    return table


@dataclass
class BenchReport:
    detector: str
    total: int
    injected_total: int
    clean_total: int
    detection_overall: float | None
    per_type: dict[str, float | None]
    per_lang: dict[str, float | None]
    per_type_lang: dict[str, dict[str, float | None]]
    fpr: float | None
    false_positives: int
    latency_median_ms: float
    latency_p95_ms: float
    calibration: dict[str, dict]
    trust_counts: dict[str, int]

    def to_dict(self, include_latency: bool = True) -> dict:
        out = {
            "detector": self.detector,
            "total": self.total,
            "injected_total": self.injected_total,
            "clean_total": self.clean_total,
            "detection_overall": self.detection_overall,
            "per_type": self.per_type,
            "per_lang": self.per_lang,
            "per_type_lang": self.per_type_lang,
            "fpr": self.fpr,
            "false_positives": self.false_positives,
            "calibration": self.calibration,
            "trust_counts": self.trust_counts,
        }
        if include_latency:
            out["latency_median_ms"] = round(self.latency_median_ms, 3)
            out["latency_p95_ms"] = round(self.latency_p95_ms, 3)
        return out

    def to_json(self, include_latency: bool = True) -> str:
        return json.dumps(self.to_dict(include_latency), ensure_ascii=False, indent=2)

    def format_tables(self) -> str:
        def pct(value) -> str:
            return "   n/a" if value is None else f"{100 * value:6.1f}"

        lines = [
            f"detector: {self.detector}   scenarios: {self.total} "
            f"({self.injected_total} injected / {self.clean_total} clean)",
            "",
            "detection rate by type and language (%)",
            f"{'type':<22}" + "".join(f"{lang:>8}" for lang in self.per_lang) + f"{'all':>8}",
        ]
        for type_name, by_lang in self.per_type_lang.items():
            row = f"{type_name:<22}"
            for lang in self.per_lang:
                row += f"{pct(by_lang.get(lang)):>8}"
            row += f"{pct(self.per_type.get(type_name)):>8}"
            lines.append(row)
        lines.append(
            f"{'all types':<22}"
            + "".join(f"{pct(self.per_lang[lang]):>8}" for lang in self.per_lang)
            + f"{pct(self.detection_overall):>8}"
        )
        lines += [
            "",
            f"false positive rate: {pct(self.fpr).strip()}%  "
            f"({self.false_positives}/{self.clean_total} clean scenarios)",
            f"latency per response: median {self.latency_median_ms:.2f} ms, "
            f"p95 {self.latency_p95_ms:.2f} ms",
            "",
            "trust calibration",
            f"{'level':<18}{'responses':>10}{'correct':>10}",
        ]
        for level, row in self.calibration.items():
            frac = row["correct_fraction"]
            lines.append(
                f"{level:<18}{row['count']:>10}"
                + (f"{100 * frac:>9.1f}%" if frac is not None else f"{'n/a':>10}")
            )
        return "\n".join(lines)


def _percentile(values: list[float], fraction: float) -> float:
    if not values:
        return 0.0
    ordered = sorted(values)
    rank = max(0, min(len(ordered) - 1, int(round(fraction * (len(ordered) - 1)))))
    return ordered[rank]


def run_benchmark(
    scenarios: list[Scenario],
    detector: str = "engine",
    constitution: Constitution | None = None,
    jobs: int = 1,
) -> BenchReport:
    """Evaluate a corpus with the receipt engine or the regex baseline."""
    if not scenarios:
        raise ValueError("no scenarios to run")
    if detector not in ("engine", "regex"):
        raise ValueError(f"unknown detector {detector!r}")
    policy = constitution.trust_policy if constitution else None
    fetch_tools = constitution.fetch_tools if constitution else DEFAULT_FETCH_TOOLS

    def evaluate(scenario: Scenario) -> dict:
        if detector == "engine":
            ledger = build_ledger(scenario)
            report = verify_response(
                scenario.llm_response,
                ledger,
                BENCH_KEY,
                lang=scenario.lang,
                policy=policy,
                fetch_tools=fetch_tools,
            )
            detected = (
                _engine_detected(scenario, report) if scenario.injected else None
            )
            false_positive = (
                report.deterministic_failures > 0 if not scenario.injected else None
            )
            return {
                "scenario": scenario,
                "detected": detected,
                "false_positive": false_positive,
                "latency_ms": report.elapsed_ms,
                "trust": report.trust.value,
                "report": report,
            }
        started = time.perf_counter()
        verdicts = regex_baseline(scenario)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        detected = _regex_detected(scenario, verdicts) if scenario.injected else None
        false_positive = (
            any(v.type in DETERMINISTIC_FAILURES for v in verdicts)
            if not scenario.injected
            else None
        )
        return {
            "scenario": scenario,
            "detected": detected,
            "false_positive": false_positive,
            "latency_ms": elapsed_ms,
            "trust": None,
            "report": None,
        }

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(evaluate, scenarios))
    else:
        outcomes = [evaluate(s) for s in scenarios]

    langs = [lang for lang in LANGS if any(s.lang == lang for s in scenarios)]
    type_names = [t.value for t in HallucinationType]
    hits: dict[tuple[str, str], list[bool]] = {}
    for outcome in outcomes:
        scenario = outcome["scenario"]
        if scenario.injected is None:
            continue
        key = (scenario.injected["type"], scenario.lang)
        hits.setdefault(key, []).append(outcome["detected"])

    def rate(flags: list[bool]) -> float | None:
        return round(sum(flags) / len(flags), 6) if flags else None

    per_type_lang = {
        t: {
            lang: rate(hits.get((t, lang), []))
            for lang in langs
            if (t, lang) in hits
        }
        for t in type_names
        if any((t, lang) in hits for lang in langs)
    }
    per_type = {
        t: rate([d for lang in langs for d in hits.get((t, lang), [])])
        for t in per_type_lang
    }
    per_lang = {
        lang: rate([d for t in type_names for d in hits.get((t, lang), [])])
        for lang in langs
    }
    all_detected = [d for flags in hits.values() for d in flags]
    clean_outcomes = [o for o in outcomes if o["scenario"].injected is None]
    false_positives = sum(1 for o in clean_outcomes if o["false_positive"])
    latencies = [o["latency_ms"] for o in outcomes]

    calibration: dict[str, dict] = {}
    trust_counts: dict[str, int] = {}
    if detector == "engine":
        calibration = compute_calibration(
            [(o["report"], o["scenario"].gt_claims) for o in outcomes]
        )
        for o in outcomes:
            trust_counts[o["trust"]] = trust_counts.get(o["trust"], 0) + 1
        trust_counts = {
            level.value: trust_counts.get(level.value, 0) for level in TrustLevel
        }

    return BenchReport(
        detector=detector,
        total=len(scenarios),
        injected_total=len(all_detected),
        clean_total=len(clean_outcomes),
        detection_overall=rate(all_detected),
        per_type=per_type,
        per_lang=per_lang,
        per_type_lang=per_type_lang,
        fpr=(
            round(false_positives / len(clean_outcomes), 6) if clean_outcomes else None
        ),
        false_positives=false_positives,
        latency_median_ms=statistics.median(latencies) if latencies else 0.0,
        latency_p95_ms=_percentile(latencies, 0.95),
        calibration=calibration,
        trust_counts=trust_counts,
    )
