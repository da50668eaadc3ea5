"""Victim-relief case workflow.

A case moves along one spine — reported, identity-verified, recorded,
legal contract active, provider engaged, in proceedings, resolved, feedback
collected, closed — with a dead end for failed identity verification.
Financial support, counseling, progress notes, and evidence anchoring are
orthogonal events, legal in any non-terminal state from Recorded onward.

Every mutation appends exactly one transition record; replaying a case's
records (resolving payload digests through the ledger's payload store)
reconstructs the identical Case value. Raw details never reach the chain.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from . import kinds
from .errors import (
    DuplicateContent,
    IllegalTransition,
    NoLegalAidAvailable,
    NoPsychologistAvailable,
    NotActive,
    UnknownActor,
    UnknownCase,
    WrongState,
)
from .identity import IdentityService, SessionState
from .ledger import Ledger, TransactionRecord
from .roles import AssignmentStatus, RolesService
from .tokens import TokenBank


class CaseState(str, Enum):
    REPORTED = "Reported"
    IDENTITY_VERIFIED = "IdentityVerified"
    RECORDED = "Recorded"
    LEGAL_CONTRACT_ACTIVE = "LegalContractActive"
    PROVIDER_ENGAGED = "ProviderEngaged"
    IN_PROCEEDINGS = "InProceedings"
    RESOLVED = "Resolved"
    FEEDBACK_COLLECTED = "FeedbackCollected"
    CLOSED = "Closed"
    REJECTED_UNVERIFIED = "RejectedUnverified"


class Resolution(str, Enum):
    LEGAL_ACTION = "LegalAction"
    SETTLEMENT = "Settlement"
    OTHER = "Other"


# the complete legal transition relation (spine events)
TRANSITIONS: dict[tuple[CaseState, str], CaseState] = {
    (CaseState.REPORTED, "identity_passed"): CaseState.IDENTITY_VERIFIED,
    (CaseState.REPORTED, "identity_failed"): CaseState.REJECTED_UNVERIFIED,
    (CaseState.IDENTITY_VERIFIED, "record"): CaseState.RECORDED,
    (CaseState.RECORDED, "activate_legal_contract"): CaseState.LEGAL_CONTRACT_ACTIVE,
    (CaseState.LEGAL_CONTRACT_ACTIVE, "engage_team"): CaseState.PROVIDER_ENGAGED,
    (CaseState.PROVIDER_ENGAGED, "start_proceedings"): CaseState.IN_PROCEEDINGS,
    (CaseState.IN_PROCEEDINGS, "resolve"): CaseState.RESOLVED,
    (CaseState.RESOLVED, "collect_feedback"): CaseState.FEEDBACK_COLLECTED,
    (CaseState.FEEDBACK_COLLECTED, "close"): CaseState.CLOSED,
}

ORTHOGONAL_EVENTS = (
    "attach_evidence",
    "grant_financial_support",
    "start_counseling",
    "progress_update",
)

# non-terminal states from Recorded onward
ORTHOGONAL_STATES = frozenset(
    {
        CaseState.RECORDED,
        CaseState.LEGAL_CONTRACT_ACTIVE,
        CaseState.PROVIDER_ENGAGED,
        CaseState.IN_PROCEEDINGS,
        CaseState.RESOLVED,
        CaseState.FEEDBACK_COLLECTED,
    }
)

TERMINAL_STATES = frozenset({CaseState.CLOSED, CaseState.REJECTED_UNVERIFIED})

EVENT_NAMES = tuple(sorted({e for _, e in TRANSITIONS} | set(ORTHOGONAL_EVENTS)))

EVENT_KIND_REFS = {
    "identity_passed": kinds.IDENTITY,
    "identity_failed": kinds.IDENTITY,
    "record": kinds.CASE_RECORDED,
    "activate_legal_contract": kinds.CASE_LEGAL_CONTRACT,
    "engage_team": kinds.TEAM_LEGAL,
    "start_proceedings": kinds.CASE_PROCEEDINGS,
    "resolve": kinds.CASE_RESOLVED,
    "collect_feedback": kinds.CASE_FEEDBACK,
    "close": kinds.CASE_CLOSED,
    "attach_evidence": kinds.EVIDENCE,
    "grant_financial_support": kinds.CASE_FINANCIAL,
    "start_counseling": kinds.CASE_COUNSELING,
    "progress_update": kinds.CASE_PROGRESS,
}


def legal_events(state: CaseState) -> list[str]:
    events = [event for (s, event) in TRANSITIONS if s is state]
    if state in ORTHOGONAL_STATES:
        events.extend(ORTHOGONAL_EVENTS)
    return sorted(events)


@dataclass
class Case:
    case_id: str
    reporter: str
    state: CaseState = CaseState.REPORTED
    identity_session: Optional[str] = None
    evidence: list[str] = field(default_factory=list)
    team: list[str] = field(default_factory=list)
    financial_support_active: bool = False
    counseling_active: bool = False
    progress_log: list[tuple[int, str]] = field(default_factory=list)
    resolution: Optional[Resolution] = None
    feedback_digest: Optional[str] = None


class CaseService:
    def __init__(
        self,
        ledger: Ledger,
        bank: TokenBank,
        roles: RolesService,
        identity: IdentityService,
        next_id: Callable[[str], str],
        known_actor: Callable[[str], bool],
        team_selector: Optional[Callable[["CaseService"], list[str]]] = None,
        on_case_changed: Optional[Callable[[Case], None]] = None,
    ):
        self.ledger = ledger
        self.bank = bank
        self.roles = roles
        self.identity = identity
        self._next_id = next_id
        self._known_actor = known_actor
        self._team_selector = team_selector or _first_fit_team
        self._on_case_changed = on_case_changed
        self.cases: dict[str, Case] = {}

    def case(self, case_id: str) -> Case:
        try:
            return self.cases[case_id]
        except KeyError:
            raise UnknownCase(f"no case {case_id}") from None

    # -- intake ------------------------------------------------------------

    def report_incident(self, reporter: str, details: bytes) -> Case:
        if not self._known_actor(reporter):
            raise UnknownActor(f"reporter {reporter!r} is not known to the engine")
        case = Case(case_id=self._next_id("case"), reporter=reporter)
        self.cases[case.case_id] = case
        self._append(
            kinds.CASE_REPORTED,
            case,
            actor_ids=[reporter],
            payload={
                "event": "case_event",
                "case_event": "report_incident",
                "case_id": case.case_id,
                "reporter": reporter,
                "details_digest": hashlib.sha256(details).hexdigest(),
            },
        )
        self._changed(case)
        return case

    # -- the transition relation --------------------------------------------

    def advance(self, case_id: str, event: str, **args) -> Case:
        case = self.case(case_id)
        if event in ORTHOGONAL_EVENTS:
            if case.state not in ORTHOGONAL_STATES:
                raise IllegalTransition(f"{event} is not legal in {case.state.value}")
            return self._apply_orthogonal(case, event, args)
        key = (case.state, event)
        if key not in TRANSITIONS:
            raise IllegalTransition(f"{event} is not legal in {case.state.value}")
        handler = getattr(self, f"_on_{event}")
        payload_fields = handler(case, args) or {}
        case.state = TRANSITIONS[key]
        self._append(
            EVENT_KIND_REFS[event],
            case,
            actor_ids=[case.reporter],
            payload={
                "event": "case_event",
                "case_event": event,
                "case_id": case.case_id,
                **payload_fields,
            },
        )
        self._changed(case)
        return case

    # spine-event handlers: validate args, mutate non-state fields, and
    # return the payload fields the replay needs

    def _on_identity_passed(self, case: Case, args: dict) -> dict:
        session_id = args.get("session_id")
        if session_id is None:
            raise IllegalTransition("identity_passed requires session_id")
        session = self.identity.session(session_id)
        if session.actor_id != case.reporter or session.state is not SessionState.PASSED:
            raise IllegalTransition(
                f"session {session_id} does not prove {case.reporter}'s identity"
            )
        case.identity_session = session_id
        return {"session_id": session_id}

    def _on_identity_failed(self, case: Case, args: dict) -> dict:
        session_id = args.get("session_id")
        if session_id is not None:
            session = self.identity.session(session_id)
            if session.actor_id != case.reporter or session.state is SessionState.PASSED:
                raise IllegalTransition(f"session {session_id} is not a failed verification of the reporter")
            case.identity_session = session_id
        return {"session_id": session_id}

    def _on_record(self, case: Case, args: dict) -> dict:
        return {}

    def _on_activate_legal_contract(self, case: Case, args: dict) -> dict:
        return {}

    def _on_engage_team(self, case: Case, args: dict) -> dict:
        team = args.get("team")
        if team is None:
            team = self.assemble_response_team(case.case_id)
        else:
            self._validate_team(list(team))
        case.team = list(team)
        return {"team": list(team)}

    def _on_start_proceedings(self, case: Case, args: dict) -> dict:
        return {}

    def _on_resolve(self, case: Case, args: dict) -> dict:
        kind = args.get("kind")
        try:
            case.resolution = Resolution(kind)
        except ValueError:
            raise IllegalTransition(f"unknown resolution kind {kind!r}") from None
        return {"kind": case.resolution.value}

    def _on_collect_feedback(self, case: Case, args: dict) -> dict:
        if "digest" in args and args["digest"] is not None:
            digest = str(args["digest"])
        elif "feedback" in args and args["feedback"] is not None:
            digest = hashlib.sha256(str(args["feedback"]).encode("utf-8")).hexdigest()
        else:
            raise IllegalTransition("collect_feedback requires digest or feedback text")
        case.feedback_digest = digest
        return {"digest": digest}

    def _on_close(self, case: Case, args: dict) -> dict:
        return {}

    # -- orthogonal events ---------------------------------------------------

    def _apply_orthogonal(self, case: Case, event: str, args: dict) -> Case:
        if event == "attach_evidence":
            content = args.get("content", b"")
            if isinstance(content, str):
                content = content.encode("utf-8")
            self.attach_evidence(case.case_id, content)
            return case
        if event == "grant_financial_support":
            case.financial_support_active = True
            fields = {}
        elif event == "start_counseling":
            case.counseling_active = True
            fields = {}
        else:  # progress_update
            note = str(args.get("note", ""))
            fields = {"note_digest": hashlib.sha256(note.encode("utf-8")).hexdigest()}
        record = self._append(
            EVENT_KIND_REFS[event],
            case,
            actor_ids=[case.reporter],
            payload={"event": "case_event", "case_event": event, "case_id": case.case_id, **fields},
        )
        if event == "progress_update":
            case.progress_log.append((record.logical_time, fields["note_digest"]))
        self._changed(case)
        return case

    def attach_evidence(self, case_id: str, content: bytes, owner: Optional[str] = None) -> str:
        """Anchor evidence: mint the content-bound token and list it on the case."""
        case = self.case(case_id)
        if case.state not in ORTHOGONAL_STATES:
            raise WrongState(f"evidence cannot be attached in {case.state.value}")
        digest = hashlib.sha256(content).digest()
        receipt = self.bank.mint_nft(owner or case.reporter, digest)  # DuplicateContent propagates
        case.evidence.append(receipt.asset_id)
        self._append(
            kinds.EVIDENCE,
            case,
            actor_ids=[case.reporter],
            payload={
                "event": "case_event",
                "case_event": "attach_evidence",
                "case_id": case.case_id,
                "asset_id": receipt.asset_id,
                "content_digest": digest.hex(),
            },
        )
        self._changed(case)
        return receipt.asset_id

    # -- response team -------------------------------------------------------

    def assemble_response_team(self, case_id: str) -> list[str]:
        case = self.case(case_id)
        if case.state is not CaseState.LEGAL_CONTRACT_ACTIVE:
            raise WrongState(f"team assembly requires an active legal contract, case is {case.state.value}")
        team = self._team_selector(self)
        for kind_ref, coordination in ((kinds.TEAM_LEGAL, "legal"), (kinds.TEAM_PSYCH, "psychological")):
            self._append(
                kind_ref,
                case,
                actor_ids=[self.roles.assignment(a).actor_id for a in team],
                payload={
                    "event": "team_assembled",
                    "case_id": case.case_id,
                    "team": team,
                    "coordination": coordination,
                },
            )
        return team

    def _validate_team(self, team: list[str]) -> None:
        role_names = []
        for assignment_id in team:
            assignment = self.roles.assignment(assignment_id)
            if assignment.status is not AssignmentStatus.ACTIVE:
                raise NotActive(f"team member {assignment_id} is {assignment.status.value}")
            role_names.append(assignment.role_name)
        if "psychologist" not in role_names:
            raise NoPsychologistAvailable("engaged team lacks an active psychologist")
        if "legal_aid_provider" not in role_names:
            raise NoLegalAidAvailable("engaged team lacks an active legal aid provider")

    # -- projections ---------------------------------------------------------

    def case_report(self, case_id: str) -> dict:
        case = self.case(case_id)
        return {
            "case_id": case.case_id,
            "reporter": case.reporter,
            "state": case.state.value,
            "identity_session": case.identity_session,
            "evidence": list(case.evidence),
            "evidence_digests": [
                self.bank.assets[a].content_digest.hex() for a in case.evidence
            ],
            "team": list(case.team),
            "financial_support_active": case.financial_support_active,
            "counseling_active": case.counseling_active,
            "progress_count": len(case.progress_log),
            "resolution": case.resolution.value if case.resolution else None,
            "feedback_digest": case.feedback_digest,
            "next_events": legal_events(case.state),
        }

    # -- plumbing --------------------------------------------------------------

    def _append(self, kind_ref, case: Case, actor_ids, payload: dict) -> TransactionRecord:
        return self.ledger.append_transaction(
            kind_ref,
            actor_ids=actor_ids,
            component_ids=["sextortion_aid_provider", case.case_id],
            payload=json.dumps(payload, sort_keys=True).encode("utf-8"),
        )

    def _changed(self, case: Case) -> None:
        if self._on_case_changed is not None:
            self._on_case_changed(case)


def _first_fit_team(service: CaseService) -> list[str]:
    """Default selector: first active specialist of each kind by onboarding order."""
    psychologists = service.roles.active_assignments("psychologist")
    if not psychologists:
        raise NoPsychologistAvailable("no active psychologist in the registry")
    legal = service.roles.active_assignments("legal_aid_provider")
    if not legal:
        raise NoLegalAidAvailable("no active legal aid provider in the registry")
    team = [psychologists[0].assignment_id, legal[0].assignment_id]
    for agent_role in ("sextortion_diagnoser", "legal_aid_diagnoser"):
        agents_active = service.roles.active_assignments(agent_role)
        if agents_active:
            team.append(agents_active[0].assignment_id)
        else:
            team.append(service.roles.onboard(f"agent:{agent_role}", agent_role).assignment_id)
    return team


def replay_case(
    case_id: str,
    records: list[TransactionRecord],
    payload_of: Callable[[bytes], bytes],
) -> Case:
    """Event-sourcing reconstruction from a case's ledger records.

    ``payload_of`` resolves a payload digest to the original payload bytes
    (the off-ledger payload store). Records that are not case events for
    this case (e.g. team-assembly coordination notices) are skipped.
    """
    case: Optional[Case] = None
    for record in records:
        payload = json.loads(payload_of(record.payload_digest))
        if payload.get("event") != "case_event" or payload.get("case_id") != case_id:
            continue
        event = payload["case_event"]
        if event == "report_incident":
            case = Case(case_id=case_id, reporter=payload["reporter"])
            continue
        if case is None:
            raise UnknownCase(f"records for {case_id} start before its report")
        if event == "identity_passed":
            case.identity_session = payload["session_id"]
            case.state = CaseState.IDENTITY_VERIFIED
        elif event == "identity_failed":
            if payload.get("session_id"):
                case.identity_session = payload["session_id"]
            case.state = CaseState.REJECTED_UNVERIFIED
        elif event == "record":
            case.state = CaseState.RECORDED
        elif event == "activate_legal_contract":
            case.state = CaseState.LEGAL_CONTRACT_ACTIVE
        elif event == "engage_team":
            case.team = list(payload["team"])
            case.state = CaseState.PROVIDER_ENGAGED
        elif event == "start_proceedings":
            case.state = CaseState.IN_PROCEEDINGS
        elif event == "resolve":
            case.resolution = Resolution(payload["kind"])
            case.state = CaseState.RESOLVED
        elif event == "collect_feedback":
            case.feedback_digest = payload["digest"]
            case.state = CaseState.FEEDBACK_COLLECTED
        elif event == "close":
            case.state = CaseState.CLOSED
        elif event == "attach_evidence":
            case.evidence.append(payload["asset_id"])
        elif event == "grant_financial_support":
            case.financial_support_active = True
        elif event == "start_counseling":
            case.counseling_active = True
        elif event == "progress_update":
            case.progress_log.append((record.logical_time, payload["note_digest"]))
        else:
            raise ValueError(f"unknown case event {event!r} in ledger payload")
    if case is None:
        raise UnknownCase(f"no records found for {case_id}")
    return case
