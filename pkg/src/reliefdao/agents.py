"""Deterministic diagnostic agents and self-assessment scoring tools.

Everything here is a pure function of its inputs and the loaded rubric:
feature weights, band edges, questionnaire items, and the resource store all
live in a JSON config (``data/rubric.json`` by default) rather than in code.
Each agent records its pass through the six cognition layers as an ordered
trace; the layers annotate, they do not act autonomously.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import BadAnswerCount, OutOfRange, UnknownRole

ACE_LAYERS = (
    "Aspirational",
    "GlobalStrategy",
    "AgentModel",
    "ExecutiveFunction",
    "CognitiveControl",
    "TaskProsecution",
)

FEATURE_NAMES = (
    "minor_involved",
    "explicit_content_shared",
    "threats_made",
    "deadline_pressure",
    "self_harm_indicators",
    "prior_relationship",
    "monetary_demand",
)


@dataclass(frozen=True)
class CaseFeatures:
    minor_involved: bool = False
    explicit_content_shared: bool = False
    threats_made: bool = False
    deadline_pressure: bool = False
    self_harm_indicators: bool = False
    prior_relationship: bool = False
    monetary_demand: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "CaseFeatures":
        return cls(**{k: bool(d.get(k, False)) for k in FEATURE_NAMES})

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in FEATURE_NAMES}


@dataclass(frozen=True)
class AceLayerEntry:
    layer_name: str
    note: str
    output: object


@dataclass(frozen=True)
class AceTrace:
    entries: tuple[AceLayerEntry, ...]

    def __post_init__(self):
        assert tuple(e.layer_name for e in self.entries) == ACE_LAYERS

    def to_json_obj(self):
        return [
            {"layer_name": e.layer_name, "note": e.note, "output": e.output}
            for e in self.entries
        ]


@dataclass(frozen=True)
class RiskVerdict:
    score: int
    band: str
    recommended_actions: tuple[str, ...]
    trace: AceTrace


@dataclass(frozen=True)
class LegalRecommendation:
    actions: tuple[str, ...]
    resources: tuple[str, ...]
    trace: AceTrace


@dataclass(frozen=True)
class AssessmentResult:
    total: int
    band: str
    guidance: tuple[str, ...]


class Rubric:
    """Loaded scoring configuration; see data/rubric.json for the defaults."""

    def __init__(self, config: dict):
        self.config = config
        self.risk_weights: dict[str, int] = config["risk_weights"]
        self.risk_bands = config["risk_bands"]
        self.mental_health = config["mental_health"]
        self.situation = config["situation"]
        self.jurisdictions = config["jurisdictions"]
        self.role_resources = config["role_resources"]

    @classmethod
    def load_default(cls) -> "Rubric":
        raw = resources.files("reliefdao.data").joinpath("rubric.json").read_text("utf-8")
        return cls(json.loads(raw))

    @classmethod
    def load(cls, path: str | Path) -> "Rubric":
        return cls(json.loads(Path(path).read_text("utf-8")))


def band_for(score: int, bands: list[dict]) -> str:
    for spec in bands:
        upper = spec["max"]
        if score >= spec["min"] and (upper is None or score <= upper):
            return spec["band"]
    raise ValueError(f"score {score} not covered by band table")


def _trace(agent: str, context: str, decision_note: str, output) -> AceTrace:
    notes = {
        "Aspirational": f"{agent}: ethics gate — victim safety and privacy outrank all other goals",
        "GlobalStrategy": f"contextualize inputs: {context}",
        "AgentModel": f"{agent} operates a fixed deterministic rubric; no learning, no external calls",
        "ExecutiveFunction": "select rubric tables and allocate the single scoring pass",
        "CognitiveControl": decision_note,
        "TaskProsecution": "emit verdict and recommended actions",
    }
    return AceTrace(
        entries=tuple(
            AceLayerEntry(layer_name=layer, note=notes[layer], output=output if layer == "TaskProsecution" else None)
            for layer in ACE_LAYERS
        )
    )


def diagnose_sextortion(features: CaseFeatures, rubric: Optional[Rubric] = None) -> RiskVerdict:
    rubric = rubric or _default_rubric()
    score = sum(
        weight for name, weight in rubric.risk_weights.items() if getattr(features, name)
    )
    band = band_for(score, rubric.risk_bands)
    actions: list[str] = []
    if band == "Critical":
        actions.append("CrisisProtocol")
    actions.append("PreserveEvidence")
    if features.threats_made or features.minor_involved:
        actions.append("ReportToPolice")
    if band != "Low":
        actions.append("EngagePsychologist")
    trace = _trace(
        "sextortion_diagnoser",
        f"features={sorted(k for k, v in features.as_dict().items() if v)}",
        f"score {score} falls in band {band}",
        list(actions),
    )
    return RiskVerdict(score=score, band=band, recommended_actions=tuple(actions), trace=trace)


LEGAL_RULES = (
    # (feature, actions in emit order)
    ("threats_made", ("FileComplaint", "RequestRestrainingInfo")),
    ("minor_involved", ("NotifyChildProtection",)),
    ("monetary_demand", ("DocumentPaymentDemands",)),
)


def diagnose_legal_aid(
    features: CaseFeatures, jurisdiction_tag: str, rubric: Optional[Rubric] = None
) -> LegalRecommendation:
    rubric = rubric or _default_rubric()
    actions: list[str] = []
    for feature, feature_actions in LEGAL_RULES:
        if getattr(features, feature):
            actions.extend(feature_actions)
    actions.append("EvidencePreservationGuide")
    tag = jurisdiction_tag if jurisdiction_tag in rubric.jurisdictions else "generic"
    resources_ = tuple(rubric.jurisdictions[tag])
    trace = _trace(
        "legal_aid_diagnoser",
        f"jurisdiction={tag}",
        f"{len(actions)} actions from the rule table",
        {"actions": list(actions), "resources": list(resources_)},
    )
    return LegalRecommendation(actions=tuple(actions), resources=resources_, trace=trace)


def _score_assessment(answers: list[int], spec: dict) -> tuple[int, str]:
    expected = len(spec["items"])
    if len(answers) != expected:
        raise BadAnswerCount(f"expected {expected} answers, got {len(answers)}")
    for a in answers:
        if not isinstance(a, int) or not (0 <= a <= spec["scale_max"]):
            raise OutOfRange(f"answer {a!r} outside 0..{spec['scale_max']}")
    total = sum(answers)
    return total, band_for(total, spec["bands"])


def score_mental_health_assessment(answers: list[int], rubric: Optional[Rubric] = None) -> AssessmentResult:
    rubric = rubric or _default_rubric()
    total, band = _score_assessment(answers, rubric.mental_health)
    return AssessmentResult(total=total, band=band, guidance=tuple(rubric.mental_health["guidance"][band]))


def score_situation_assessment(answers: list[int], rubric: Optional[Rubric] = None) -> AssessmentResult:
    rubric = rubric or _default_rubric()
    total, band = _score_assessment(answers, rubric.situation)
    return AssessmentResult(total=total, band=band, guidance=tuple(rubric.situation["guidance"][band]))


def role_information(role_name: str, situation_band: str, rubric: Optional[Rubric] = None) -> tuple[str, ...]:
    """Ordered resource bundle for a role, widened by the situation band."""
    rubric = rubric or _default_rubric()
    entry = rubric.role_resources.get(role_name)
    if entry is None:
        raise UnknownRole(f"no resources registered for role {role_name!r}")
    bundle = list(entry["default"])
    for res in entry.get("bands", {}).get(situation_band, []):
        if res not in bundle:
            bundle.append(res)
    return tuple(bundle)


def passthrough_verdict(agent_role: str, subject: str, rubric: Optional[Rubric] = None) -> dict:
    """Verdict of the advisory agents that have no scoring rule of their own."""
    trace = _trace(
        agent_role,
        f"subject={subject}",
        "no dedicated rubric; acknowledging and passing through",
        {"verdict": "acknowledged"},
    )
    return {"agent": agent_role, "verdict": "acknowledged", "trace": trace.to_json_obj()}


_RUBRIC_CACHE: Optional[Rubric] = None


def _default_rubric() -> Rubric:
    global _RUBRIC_CACHE
    if _RUBRIC_CACHE is None:
        _RUBRIC_CACHE = Rubric.load_default()
    return _RUBRIC_CACHE
