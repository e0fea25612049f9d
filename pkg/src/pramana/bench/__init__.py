"""Scenario benchmark: generation, fault injection, detectors, and metrics."""

from .generate import (
    ConfigError,
    GroundTruthClaim,
    HallucinationType,
    InjectionError,
    Scenario,
    ToolCallRecord,
    generate_scenarios,
    inject_hallucination,
    load_corpus,
    save_corpus,
)
from .run import (
    BENCH_KEY,
    BenchReport,
    build_ledger,
    compute_calibration,
    regex_baseline,
    run_benchmark,
)
from .templates import BENCH_FACT_EXTRACTORS

__all__ = [
    "ConfigError",
    "GroundTruthClaim",
    "HallucinationType",
    "InjectionError",
    "Scenario",
    "ToolCallRecord",
    "generate_scenarios",
    "inject_hallucination",
    "load_corpus",
    "save_corpus",
    "BENCH_KEY",
    "BenchReport",
    "build_ledger",
    "compute_calibration",
    "regex_baseline",
    "run_benchmark",
    "BENCH_FACT_EXTRACTORS",
]
