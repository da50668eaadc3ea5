"""Diagnostic rubrics, assessment scoring, and the layered trace shape."""

import itertools
import random

import pytest

from reliefdao import agents
from reliefdao.agents import (
    ACE_LAYERS,
    FEATURE_NAMES,
    CaseFeatures,
    diagnose_legal_aid,
    diagnose_sextortion,
    role_information,
    score_mental_health_assessment,
    score_situation_assessment,
)
from reliefdao.errors import BadAnswerCount, OutOfRange, UnknownRole

# independent copy of the shipped rubric, for the brute-force oracle
ORACLE_WEIGHTS = {
    "minor_involved": 3,
    "explicit_content_shared": 2,
    "threats_made": 2,
    "deadline_pressure": 1,
    "self_harm_indicators": 4,
    "prior_relationship": 1,
    "monetary_demand": 1,
}


def oracle_band(score):
    if score <= 2:
        return "Low"
    if score <= 5:
        return "Elevated"
    if score <= 8:
        return "High"
    return "Critical"


def features_from_bits(bits):
    return CaseFeatures(**dict(zip(FEATURE_NAMES, bits)))


# -- sextortion diagnoser ---------------------------------------------------------


def test_all_false_is_low(engine):
    verdict = diagnose_sextortion(CaseFeatures())
    assert verdict.score == 0
    assert verdict.band == "Low"
    assert list(verdict.recommended_actions) == ["PreserveEvidence"]


def test_hand_summed_critical_case():
    features = CaseFeatures(self_harm_indicators=True, minor_involved=True, threats_made=True)
    verdict = diagnose_sextortion(features)
    assert verdict.score == 4 + 3 + 2 == 9
    assert verdict.band == "Critical"
    assert verdict.recommended_actions[0] == "CrisisProtocol"
    assert "ReportToPolice" in verdict.recommended_actions
    assert "EngagePsychologist" in verdict.recommended_actions


def test_exhaustive_feature_grid_matches_brute_force():
    for bits in itertools.product((False, True), repeat=7):
        features = features_from_bits(bits)
        verdict = diagnose_sextortion(features)
        expected_score = sum(w for name, w in ORACLE_WEIGHTS.items() if getattr(features, name))
        assert verdict.score == expected_score
        assert verdict.band == oracle_band(expected_score)
        # action rules, restated independently
        expected_actions = []
        if oracle_band(expected_score) == "Critical":
            expected_actions.append("CrisisProtocol")
        expected_actions.append("PreserveEvidence")
        if features.threats_made or features.minor_involved:
            expected_actions.append("ReportToPolice")
        if oracle_band(expected_score) != "Low":
            expected_actions.append("EngagePsychologist")
        assert list(verdict.recommended_actions) == expected_actions


def test_monotonicity_on_every_single_bit_flip():
    for bits in itertools.product((False, True), repeat=7):
        base = diagnose_sextortion(features_from_bits(bits)).score
        for i, already in enumerate(bits):
            if already:
                continue
            flipped = bits[:i] + (True,) + bits[i + 1:]
            assert diagnose_sextortion(features_from_bits(flipped)).score >= base


def test_band_partition_covers_every_achievable_score():
    achievable = {
        sum(w for (name, w), bit in zip(ORACLE_WEIGHTS.items(), bits) if bit)
        for bits in itertools.product((False, True), repeat=7)
    }
    assert achievable == set(range(0, 15))
    bands = [oracle_band(s) for s in sorted(achievable)]
    assert bands == ["Low"] * 3 + ["Elevated"] * 3 + ["High"] * 3 + ["Critical"] * 6


def test_diagnoser_is_pure():
    features = CaseFeatures(threats_made=True, monetary_demand=True)
    assert diagnose_sextortion(features) == diagnose_sextortion(features)


def test_trace_has_six_layers_in_order():
    for verdict in (
        diagnose_sextortion(CaseFeatures(minor_involved=True)),
        diagnose_legal_aid(CaseFeatures(), "generic"),
    ):
        layers = [e.layer_name for e in verdict.trace.entries]
        assert layers == list(ACE_LAYERS)
        assert layers[0] == "Aspirational"


# -- legal-aid diagnoser ------------------------------------------------------------


def test_legal_all_false():
    rec = diagnose_legal_aid(CaseFeatures(), "generic")
    assert list(rec.actions) == ["EvidencePreservationGuide"]
    assert len(rec.resources) > 0


def test_legal_threats_and_monetary_fixed_order():
    rec = diagnose_legal_aid(CaseFeatures(threats_made=True, monetary_demand=True), "generic")
    assert list(rec.actions) == [
        "FileComplaint",
        "RequestRestrainingInfo",
        "DocumentPaymentDemands",
        "EvidencePreservationGuide",
    ]


def test_legal_rule_table_enumeration():
    for threats, minor, money in itertools.product((False, True), repeat=3):
        rec = diagnose_legal_aid(
            CaseFeatures(threats_made=threats, minor_involved=minor, monetary_demand=money),
            "generic",
        )
        expected = []
        if threats:
            expected += ["FileComplaint", "RequestRestrainingInfo"]
        if minor:
            expected += ["NotifyChildProtection"]
        if money:
            expected += ["DocumentPaymentDemands"]
        expected += ["EvidencePreservationGuide"]
        assert list(rec.actions) == expected


def test_unknown_jurisdiction_falls_back_to_generic():
    rec = diagnose_legal_aid(CaseFeatures(), "atlantis")
    generic = diagnose_legal_aid(CaseFeatures(), "generic")
    assert rec.resources == generic.resources
    assert len(rec.resources) > 0


def test_known_jurisdictions_have_specific_resources():
    eu = diagnose_legal_aid(CaseFeatures(), "eu")
    us = diagnose_legal_aid(CaseFeatures(), "us")
    assert eu.resources != us.resources


# -- self-assessments --------------------------------------------------------------------


def test_mental_health_all_zeros():
    result = score_mental_health_assessment([0] * 10)
    assert result.total == 0
    assert result.band == "Stable"


def test_mental_health_max_is_crisis():
    result = score_mental_health_assessment([4] * 10)
    assert result.total == 40
    assert result.band == "Crisis"
    assert result.guidance[0] == "res-immediate-help"


def test_mental_health_random_vectors_match_summation():
    rng = random.Random(11)

    def oracle(total):
        if total <= 10:
            return "Stable"
        if total <= 20:
            return "Strained"
        if total <= 30:
            return "Distressed"
        return "Crisis"

    for _ in range(10_000):
        answers = [rng.randint(0, 4) for _ in range(10)]
        result = score_mental_health_assessment(answers)
        assert result.total == sum(answers)
        assert result.band == oracle(sum(answers))


def test_mental_health_band_boundaries():
    cases = {10: "Stable", 11: "Strained", 20: "Strained", 21: "Distressed", 30: "Distressed", 31: "Crisis"}
    for total, band in cases.items():
        answers = [4] * (total // 4) + ([total % 4] if total % 4 else [])
        answers += [0] * (10 - len(answers))
        assert sum(answers) == total
        assert score_mental_health_assessment(answers).band == band


def test_mental_health_input_validation():
    with pytest.raises(BadAnswerCount):
        score_mental_health_assessment([0] * 9)
    with pytest.raises(OutOfRange):
        score_mental_health_assessment([0] * 9 + [5])
    with pytest.raises(OutOfRange):
        score_mental_health_assessment([0] * 9 + [-1])


def test_situation_all_zeros_and_max():
    assert score_situation_assessment([0] * 8).band == "Low"
    top = score_situation_assessment([4] * 8)
    assert top.total == 32
    assert top.band == "Emergency"
    assert "ReportToPolice" in top.guidance


def test_situation_band_boundaries():
    cases = {8: "Low", 9: "Moderate", 16: "Moderate", 17: "Severe", 24: "Severe", 25: "Emergency"}
    for total, band in cases.items():
        answers = [4] * (total // 4) + ([total % 4] if total % 4 else [])
        answers += [0] * (8 - len(answers))
        assert sum(answers) == total
        assert score_situation_assessment(answers).band == band


def test_situation_random_vectors_match_summation():
    rng = random.Random(13)
    for _ in range(2_000):
        answers = [rng.randint(0, 4) for _ in range(8)]
        result = score_situation_assessment(answers)
        assert result.total == sum(answers)


def test_situation_input_validation():
    with pytest.raises(BadAnswerCount):
        score_situation_assessment([1] * 7)
    with pytest.raises(OutOfRange):
        score_situation_assessment([1] * 7 + [9])


# -- role information store ------------------------------------------------------------------


def test_victim_emergency_bundle_contains_legal_and_police():
    bundle = role_information("victim", "Emergency")
    assert "res-legal-aid-directory" in bundle
    assert "res-police-hotline" in bundle


def test_every_known_role_has_resources_for_every_band():
    rubric = agents.Rubric.load_default()
    for role in rubric.role_resources:
        for band in ("Low", "Moderate", "Severe", "Emergency"):
            assert len(role_information(role, band)) > 0


def test_unknown_role_rejected():
    with pytest.raises(UnknownRole):
        role_information("astronaut", "Low")


def test_role_information_orders_band_extras_after_defaults():
    low = role_information("victim", "Low")
    emergency = role_information("victim", "Emergency")
    assert list(emergency[: len(low)]) == list(low)
    assert len(emergency) > len(low)
