from fractions import Fraction

import pytest

from pramana.claims import Claim, Pramana
from pramana.engine import TrustLevel, TrustReport, Verdict, VerdictType
from pramana.policy import (
    MODE_PRESETS,
    Constitution,
    ConstitutionError,
    PolicyDecision,
    apply_policy,
    load_constitution,
)

TRADING_BOT_TOML = """
[mode]
preset = "paranoid"

[actions]
partial = "block"
unreliable = "block"

[thresholds]
mostly_min = 0.9
partial_min = 0.6

[tools.fetch]
names = ["web_fetch", "http_get", "finance_api"]

[facts.stock_quote]
symbol = "symbol"
close = "close"

[crosscheck]
rel_tol = 0.005
"""


def report_at(level: TrustLevel, results=None) -> TrustReport:
    return TrustReport(
        response_id="r1",
        lang="EN",
        results=results or [],
        trust=level,
        verified_fraction=None,
        deterministic_failures=0,
        compliant=True,
        elapsed_ms=0.5,
    )


def test_empty_toml_gives_defaults():
    constitution = load_constitution("")
    assert constitution.mode == "standard"
    assert constitution.actions[TrustLevel.UNRELIABLE] == "warn"
    for level in (
        TrustLevel.FULLY_VERIFIED, TrustLevel.MOSTLY_VERIFIED,
        TrustLevel.PARTIAL, TrustLevel.UNGROUNDED,
    ):
        assert constitution.actions[level] == "pass"
    assert constitution.mostly_min == Fraction(4, 5)
    assert constitution.partial_min == Fraction(1, 2)
    assert constitution.fetch_tools == ("web_fetch", "http_get")
    assert constitution.crosscheck_rel_tol == Fraction(1, 100)


def test_paranoid_requires_block_on_unreliable():
    with pytest.raises(ConstitutionError) as err:
        load_constitution('[mode]\npreset = "paranoid"\n[actions]\nunreliable = "pass"\n')
    assert "actions.unreliable" in str(err.value)


def test_paranoid_partial_cannot_pass():
    with pytest.raises(ConstitutionError) as err:
        load_constitution('[mode]\npreset = "paranoid"\n[actions]\npartial = "pass"\n')
    assert "actions.partial" in str(err.value)


def test_trading_bot_fixture_round_trip():
    first = load_constitution(TRADING_BOT_TOML)
    assert first.mode == "paranoid"
    assert first.actions[TrustLevel.PARTIAL] == "block"
    assert first.actions[TrustLevel.UNRELIABLE] == "block"
    assert first.mostly_min == Fraction(9, 10)
    assert first.fetch_tools == ("web_fetch", "http_get", "finance_api")
    assert first.fact_extractors.selectors["stock_quote"] == [
        ("symbol", "symbol"), ("close", "close"),
    ]
    assert first.crosscheck_rel_tol == Fraction(1, 200)
    # parse -> serialize -> parse is a fixed point
    second = load_constitution(first.to_toml())
    assert second == first
    assert load_constitution(second.to_toml()) == second


def test_top_level_mode_shorthand():
    assert load_constitution('mode = "permissive"').mode == "permissive"


def test_unknown_mode_rejected():
    with pytest.raises(ConstitutionError):
        load_constitution('[mode]\npreset = "yolo"\n')


def test_unknown_action_token_rejected():
    with pytest.raises(ConstitutionError) as err:
        load_constitution('[actions]\npartial = "quarantine"\n')
    assert "actions.partial" in str(err.value)


def test_unknown_trust_level_rejected():
    with pytest.raises(ConstitutionError):
        load_constitution('[actions]\nsuspicious = "warn"\n')


@pytest.mark.parametrize("toml_text,path", [
    ('[thresholds]\nmostly_min = 1.2\n', "thresholds.mostly_min"),
    ('[thresholds]\npartial_min = 0.4\n', "thresholds.partial_min"),
    ('[thresholds]\nmostly_min = 0.6\npartial_min = 0.7\n', "thresholds.partial_min"),
    ('[crosscheck]\nrel_tol = 0.0\n', "crosscheck.rel_tol"),
    ('[crosscheck]\nrel_tol = 1.5\n', "crosscheck.rel_tol"),
])
def test_threshold_validation_names_field(toml_text, path):
    with pytest.raises(ConstitutionError) as err:
        load_constitution(toml_text)
    assert path in str(err.value)


def test_malformed_toml_rejected():
    with pytest.raises(ConstitutionError):
        load_constitution("[unterminated\n")


def test_explicit_action_overrides_preset():
    constitution = load_constitution('[actions]\nungrounded = "warn"\n')
    assert constitution.actions[TrustLevel.UNGROUNDED] == "warn"
    assert constitution.actions[TrustLevel.UNRELIABLE] == "warn"


# --- apply_policy --------------------------------------------------------------


def test_unreliable_blocked_under_paranoid():
    constitution = load_constitution('[mode]\npreset = "paranoid"\n')
    decision = apply_policy(report_at(TrustLevel.UNRELIABLE), constitution)
    assert decision.action == "block"


def test_fully_verified_passes_everywhere():
    for mode in ("paranoid", "standard", "permissive"):
        constitution = load_constitution(f'[mode]\npreset = "{mode}"\n')
        assert apply_policy(report_at(TrustLevel.FULLY_VERIFIED), constitution).action == "pass"


def test_action_table_per_mode():
    # table-driven over every (level, mode) pair
    for mode, table in MODE_PRESETS.items():
        constitution = load_constitution(f'[mode]\npreset = "{mode}"\n')
        for level, action in table.items():
            decision = apply_policy(report_at(level), constitution)
            assert decision.action == action, (mode, level)
            assert decision.trust is level


def test_paranoid_at_least_as_strict_as_standard():
    strictness = {"pass": 0, "warn": 1, "block": 2}
    paranoid = load_constitution('[mode]\npreset = "paranoid"\n')
    standard = load_constitution("")
    for level in TrustLevel:
        assert (
            strictness[apply_policy(report_at(level), paranoid).action]
            >= strictness[apply_policy(report_at(level), standard).action]
        )


def test_annotations_cover_non_verified_verdicts():
    results = [
        (Claim("good", Pramana.PRATYAKSHA), Verdict(VerdictType.VERIFIED)),
        (Claim("inferred", Pramana.ANUMANA), Verdict(VerdictType.PREMISES_VERIFIED)),
        (Claim("bad count", Pramana.PRATYAKSHA),
         Verdict(VerdictType.COUNT_MISMATCH, "claimed 5, receipt 3")),
    ]
    decision = apply_policy(report_at(TrustLevel.UNRELIABLE, results), load_constitution(""))
    assert len(decision.annotations) == 2
    assert any("bad count" in a and "count_mismatch" in a for a in decision.annotations)
    assert isinstance(decision, PolicyDecision)


def test_totality_over_all_levels():
    constitution = Constitution()
    for level in TrustLevel:
        assert apply_policy(report_at(level), constitution).action in ("block", "warn", "pass")
