"""Per-agent verification constitution: TOML config and policy actions.

The constitution decides what happens to a response at each trust level:
block it, warn the user, or pass it through. Three presets cover the common
deployments:

- paranoid:   block anything with unresolved contradictions or thin evidence
              (trading bots, medical agents)
- standard:   warn on contradictions, deliver everything (general assistants)
- permissive: pass everything, annotations only

Explicit per-level actions override the preset, except that paranoid mode
insists on blocking Unreliable responses and at least warning on Partial.
The file also carries the trust thresholds, the set of tools that count as
web fetches, per-tool fact extractors, and cross-check tolerances.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .engine import TrustLevel, TrustPolicy, TrustReport, VerdictType
from .receipts import FactExtractorConfig

__all__ = [
    "ConstitutionError",
    "Constitution",
    "PolicyDecision",
    "load_constitution",
    "load_constitution_file",
    "apply_policy",
    "ACTIONS",
    "MODES",
    "MODE_PRESETS",
]

ACTIONS = ("block", "warn", "pass")
MODES = ("paranoid", "standard", "permissive")

MODE_PRESETS: dict[str, dict[TrustLevel, str]] = {
    "permissive": {level: "pass" for level in TrustLevel},
    "standard": {
        level: ("warn" if level is TrustLevel.UNRELIABLE else "pass")
        for level in TrustLevel
    },
    "paranoid": {
        TrustLevel.FULLY_VERIFIED: "pass",
        TrustLevel.MOSTLY_VERIFIED: "warn",
        TrustLevel.PARTIAL: "block",
        TrustLevel.UNRELIABLE: "block",
        TrustLevel.UNGROUNDED: "block",
    },
}


class ConstitutionError(ValueError):
    """Constitution failed to load; the message names the offending field."""


@dataclass
class Constitution:
    mode: str = "standard"
    actions: dict[TrustLevel, str] = field(
        default_factory=lambda: dict(MODE_PRESETS["standard"])
    )
    mostly_min: Fraction = Fraction(4, 5)
    partial_min: Fraction = Fraction(1, 2)
    fetch_tools: tuple[str, ...] = ("web_fetch", "http_get")
    fact_extractors: FactExtractorConfig = field(default_factory=FactExtractorConfig)
    crosscheck_rel_tol: Fraction = Fraction(1, 100)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Constitution):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.actions == other.actions
            and self.mostly_min == other.mostly_min
            and self.partial_min == other.partial_min
            and self.fetch_tools == other.fetch_tools
            and self.fact_extractors.selectors == other.fact_extractors.selectors
            and self.crosscheck_rel_tol == other.crosscheck_rel_tol
        )

    @property
    def trust_policy(self) -> TrustPolicy:
        return TrustPolicy(mostly_min=self.mostly_min, partial_min=self.partial_min)

    def to_toml(self) -> str:
        lines = ["[mode]", f'preset = "{self.mode}"', "", "[actions]"]
        for level in TrustLevel:
            lines.append(f'{level.value} = "{self.actions[level]}"')
        lines += [
            "",
            "[thresholds]",
            f"mostly_min = {float(self.mostly_min)}",
            f"partial_min = {float(self.partial_min)}",
            "",
            "[tools.fetch]",
            "names = [" + ", ".join(f'"{t}"' for t in self.fetch_tools) + "]",
        ]
        for tool, selectors in self.fact_extractors.selectors.items():
            lines += ["", f"[facts.{tool}]"]
            for fact_key, path in selectors:
                lines.append(f'{fact_key} = "{path}"')
        lines += ["", "[crosscheck]", f"rel_tol = {float(self.crosscheck_rel_tol)}", ""]
        return "\n".join(lines)


def _parse_fraction(value, path: str, low: Fraction, high: Fraction) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ConstitutionError(f"{path}: expected a number, got {value!r}")
    try:
        fraction = Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConstitutionError(f"{path}: not a number: {value!r}") from exc
    if not (low <= fraction <= high):
        raise ConstitutionError(
            f"{path}: {value} outside allowed range [{float(low)}, {float(high)}]"
        )
    return fraction


def load_constitution(toml_text: str) -> Constitution:
    """Parse and validate a constitution; missing fields take the defaults
    (standard mode: warn on Unreliable, pass otherwise; thresholds 0.8/0.5)."""
    try:
        data = _toml.loads(toml_text)
    except _toml.TOMLDecodeError as exc:
        raise ConstitutionError(f"malformed TOML: {exc}") from exc

    mode_section = data.get("mode", {})
    if isinstance(mode_section, str):
        mode = mode_section
    elif isinstance(mode_section, dict):
        mode = mode_section.get("preset", "standard")
    else:
        raise ConstitutionError("mode: expected a preset name or [mode] table")
    if mode not in MODES:
        raise ConstitutionError(f"mode.preset: unknown mode {mode!r}; expected one of {MODES}")

    actions = dict(MODE_PRESETS[mode])
    by_value = {level.value: level for level in TrustLevel}
    for key, value in data.get("actions", {}).items():
        level = by_value.get(str(key).lower())
        if level is None:
            raise ConstitutionError(f"actions.{key}: unknown trust level")
        if value not in ACTIONS:
            raise ConstitutionError(
                f"actions.{key}: unknown action {value!r}; expected one of {ACTIONS}"
            )
        actions[level] = value

    if mode == "paranoid":
        if actions[TrustLevel.UNRELIABLE] != "block":
            raise ConstitutionError(
                "actions.unreliable: paranoid mode requires 'block'"
            )
        if actions[TrustLevel.PARTIAL] == "pass":
            raise ConstitutionError(
                "actions.partial: paranoid mode requires 'block' or 'warn'"
            )

    thresholds = data.get("thresholds", {})
    mostly_min = _parse_fraction(
        thresholds.get("mostly_min", "0.8"), "thresholds.mostly_min",
        Fraction(1, 2), Fraction(1),
    )
    partial_min = _parse_fraction(
        thresholds.get("partial_min", "0.5"), "thresholds.partial_min",
        Fraction(1, 2), Fraction(1),
    )
    if partial_min > mostly_min:
        raise ConstitutionError(
            "thresholds.partial_min: must not exceed thresholds.mostly_min"
        )

    fetch = data.get("tools", {}).get("fetch", {}).get("names", ["web_fetch", "http_get"])
    if not isinstance(fetch, list) or not all(isinstance(t, str) for t in fetch):
        raise ConstitutionError("tools.fetch.names: expected a list of tool names")

    selectors: dict[str, list[tuple[str, str]]] = {}
    for tool, table in data.get("facts", {}).items():
        if not isinstance(table, dict):
            raise ConstitutionError(f"facts.{tool}: expected a table of fact = path")
        pairs = []
        for fact_key, path in table.items():
            if not isinstance(path, str):
                raise ConstitutionError(f"facts.{tool}.{fact_key}: path must be a string")
            pairs.append((fact_key, path))
        selectors[tool] = pairs

    rel_tol = _parse_fraction(
        data.get("crosscheck", {}).get("rel_tol", "0.01"), "crosscheck.rel_tol",
        Fraction(0), Fraction(1),
    )
    if rel_tol == 0 or rel_tol == 1:
        raise ConstitutionError("crosscheck.rel_tol: must be strictly inside (0, 1)")

    return Constitution(
        mode=mode,
        actions=actions,
        mostly_min=mostly_min,
        partial_min=partial_min,
        fetch_tools=tuple(fetch),
        fact_extractors=FactExtractorConfig(selectors),
        crosscheck_rel_tol=rel_tol,
    )


def load_constitution_file(path) -> Constitution:
    with open(path, "r", encoding="utf-8") as fh:
        return load_constitution(fh.read())


@dataclass(frozen=True)
class PolicyDecision:
    action: str
    trust: TrustLevel
    annotations: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "action": self.action,
            "trust": self.trust.value,
            "annotations": list(self.annotations),
        }


def apply_policy(report: TrustReport, constitution: Constitution) -> PolicyDecision:
    """Look up the action for the report's trust level and annotate every
    claim that did not come back fully verified."""
    annotations = tuple(
        f"[{verdict.type.value}] {claim.text[:120]}" + ("" if not verdict.detail else f" - {verdict.detail}")
        for claim, verdict in report.results
        if verdict.type is not VerdictType.VERIFIED
    )
    return PolicyDecision(
        action=constitution.actions[report.trust],
        trust=report.trust,
        annotations=annotations,
    )
