"""Command-line entry points: verify, receipt, bench, crosscheck.

Exit codes are part of the contract: 0 = pass, 1 = warn, 2 = block,
3 = usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

from .bench import generate_scenarios, load_corpus, run_benchmark, save_corpus
from .crosscheck import DeepAgentOutput, FixtureFetcher, LiveFetcher, crosscheck
from .engine import verify_response
from .policy import Constitution, ConstitutionError, apply_policy, load_constitution_file
from .receipts import (
    DEFAULT_KEY_ENV,
    ConfigError,
    Ledger,
    LedgerFormatError,
    generate_receipt,
    load_key_from_env,
    verify_receipt_signature,
)

EXIT_PASS = 0
EXIT_WARN = 1
EXIT_BLOCK = 2
EXIT_USAGE = 3

_ACTION_EXIT = {"pass": EXIT_PASS, "warn": EXIT_WARN, "block": EXIT_BLOCK}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems via exit code 3."""

    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="pramana", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="verify one response against a ledger")
    p_verify.add_argument("--response", required=True, help="file with the agent response text")
    p_verify.add_argument("--ledger", required=True, help="receipt ledger (JSON lines)")
    p_verify.add_argument("--constitution", help="constitution TOML")
    p_verify.add_argument("--lang", default="EN", help="response language (EN/HI/ZH/ES)")
    p_verify.add_argument("--key-env", default=DEFAULT_KEY_ENV, help="env var holding the hex signing key")
    p_verify.add_argument("--json", action="store_true", help="machine-readable output")

    p_receipt = sub.add_parser("receipt", help="mint, check, or inspect receipts")
    p_receipt.add_argument("action", choices=("sign", "check", "inspect"))
    p_receipt.add_argument("--ledger", required=True)
    p_receipt.add_argument("--call", help="tool-call JSON for 'sign'")
    p_receipt.add_argument("--constitution", help="constitution TOML (fact extractors)")
    p_receipt.add_argument("--key-env", default=DEFAULT_KEY_ENV)
    p_receipt.add_argument("--json", action="store_true")

    p_bench = sub.add_parser("bench", help="generate or run the scenario benchmark")
    p_bench.add_argument("action", choices=("gen", "run"))
    p_bench.add_argument("--corpus", required=True, help="scenario corpus file (JSON lines)")
    p_bench.add_argument("--seed", type=int, default=20240219)
    p_bench.add_argument("--hallucinated", type=int, default=60, help="injected scenarios per language")
    p_bench.add_argument("--clean", type=int, default=30, help="clean scenarios per language")
    p_bench.add_argument("--compliance", type=float, default=0.9, help="fraction of responses carrying the block")
    p_bench.add_argument("--plant-errors", type=float, default=0.0, help="tool-data error rate for calibration")
    p_bench.add_argument("--detector", choices=("engine", "regex"), default="engine")
    p_bench.add_argument("--constitution")
    p_bench.add_argument("--lang", help="restrict run to one language")
    p_bench.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_bench.add_argument("--json", action="store_true")

    p_cross = sub.add_parser("crosscheck", help="cross-check a deep-agent output")
    p_cross.add_argument("--output", required=True, help="deep-agent output JSON")
    p_cross.add_argument("--fixtures", help="fixture fetcher JSON (required unless --live)")
    p_cross.add_argument("--constitution")
    p_cross.add_argument("--live", action="store_true", help="fetch over real HTTP")
    p_cross.add_argument("--now", help="ISO timestamp for temporal checks")
    p_cross.add_argument("--json", action="store_true")
    return parser


def _load_constitution(path) -> Constitution:
    if path is None:
        return Constitution()
    return load_constitution_file(path)


def _cmd_verify(args) -> int:
    constitution = _load_constitution(args.constitution)
    ledger = Ledger.load(args.ledger)
    key = load_key_from_env(args.key_env)
    with open(args.response, "r", encoding="utf-8") as fh:
        response = fh.read()
    report = verify_response(
        response,
        ledger,
        key,
        lang=args.lang,
        policy=constitution.trust_policy,
        fetch_tools=constitution.fetch_tools,
    )
    decision = apply_policy(report, constitution)
    if args.json:
        print(json.dumps(
            {"report": report.to_dict(), "decision": decision.to_dict()},
            ensure_ascii=False, indent=2,
        ))
    else:
        print(f"trust: {report.trust.value}   action: {decision.action}")
        frac = report.verified_fraction
        print(
            f"claims: {len(report.results)}   verified fraction: "
            + (f"{float(frac):.2f}" if frac is not None else "n/a")
            + f"   deterministic failures: {report.deterministic_failures}"
        )
        for note in decision.annotations:
            print(f"  - {note}")
    return _ACTION_EXIT[decision.action]


def _cmd_receipt(args) -> int:
    if args.action == "sign":
        if not args.call:
            raise _UsageError("receipt sign requires --call")
        constitution = _load_constitution(args.constitution)
        key = load_key_from_env(args.key_env)
        with open(args.call, "r", encoding="utf-8") as fh:
            call = json.load(fh)
        raw_output = call.get("raw_output")
        raw = (
            raw_output.encode("utf-8")
            if isinstance(raw_output, str)
            else json.dumps(call["structured_output"], ensure_ascii=False).encode("utf-8")
        )
        receipt = generate_receipt(
            call["tool_name"],
            call.get("input"),
            raw,
            call.get("structured_output"),
            key=key,
            cfg=constitution.fact_extractors,
            duration_ms=int(call.get("duration_ms", 0)),
        )
        ledger = Ledger.load(args.ledger) if os.path.exists(args.ledger) else Ledger()
        ledger.append(receipt)
        ledger.save(args.ledger)
        print(receipt.to_json_line() if args.json else f"signed receipt {receipt.id}")
        return EXIT_PASS

    ledger = Ledger.load(args.ledger)
    if args.action == "check":
        key = load_key_from_env(args.key_env)
        bad = [r.id for r in ledger if not verify_receipt_signature(r, key)]
        if args.json:
            print(json.dumps({"total": len(ledger), "invalid": bad}, indent=2))
        elif bad:
            print(f"{len(bad)} invalid signature(s):")
            for rid in bad:
                print(f"  {rid}")
        else:
            print(f"all {len(ledger)} receipt signatures valid")
        return EXIT_BLOCK if bad else EXIT_PASS

    # inspect
    if args.json:
        print(json.dumps([r.to_dict() for r in ledger], ensure_ascii=False, indent=2))
    else:
        for r in ledger:
            facts = ", ".join(f"{k}={v}" for k, v in r.facts.items())
            print(
                f"{r.id}  {r.tool_name}  results={r.result_count}  "
                f"t={r.timestamp_ms}  {r.duration_ms}ms  facts: {facts or '-'}"
            )
    return EXIT_PASS


def _cmd_bench(args) -> int:
    if args.action == "gen":
        scenarios = generate_scenarios(
            seed=args.seed,
            hallucinated_per_lang=args.hallucinated,
            clean_per_lang=args.clean,
            compliance_fraction=args.compliance,
            plant_error_rate=args.plant_errors,
        )
        save_corpus(scenarios, args.corpus)
        print(f"wrote {len(scenarios)} scenarios to {args.corpus}")
        return EXIT_PASS
    if not os.path.exists(args.corpus):
        raise _UsageError(f"corpus not found: {args.corpus}")
    scenarios = load_corpus(args.corpus)
    if args.lang:
        scenarios = [s for s in scenarios if s.lang == args.lang.upper()]
        if not scenarios:
            raise _UsageError(f"no scenarios for language {args.lang!r}")
    constitution = _load_constitution(args.constitution) if args.constitution else None
    report = run_benchmark(
        scenarios, detector=args.detector, constitution=constitution, jobs=args.jobs
    )
    print(report.to_json() if args.json else report.format_tables())
    return EXIT_PASS


def _cmd_crosscheck(args) -> int:
    constitution = _load_constitution(args.constitution)
    output = DeepAgentOutput.from_file(args.output)
    if args.live:
        fetcher = LiveFetcher()
    else:
        if not args.fixtures:
            raise _UsageError("crosscheck requires --fixtures unless --live is given")
        fetcher = FixtureFetcher.from_file(args.fixtures)
    now = args.now or datetime.now(timezone.utc).isoformat()
    report = crosscheck(output, fetcher, rel_tol=constitution.crosscheck_rel_tol, now=now)
    if args.json:
        print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
    else:
        for finding in report.findings:
            print(f"[{finding.status:>13}] {finding.strategy:<12} {finding.target}  {finding.detail}")
        print(f"flagged: {report.flagged}   indeterminate: {report.indeterminate}")
        if report.indeterminate and not report.flagged:
            print("warning: some targets could not be checked")
    return EXIT_WARN if report.flagged else EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "receipt":
            return _cmd_receipt(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_crosscheck(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ConstitutionError, LedgerFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
