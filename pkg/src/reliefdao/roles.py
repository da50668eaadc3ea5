"""Role registry and the four lifecycle operations.

Onboarding gates human roles behind a passed identity session (each session
activates at most one assignment) plus approval by the onboarder oracle, and
mints the role-bond SBT where the role demands one. Offboarding is the
administrative exit; participation termination is the safety path reserved
for friends and family. Rewards mint utility tokens weighted by contribution
and countersigned by the reward-support agent. Each lifecycle transition
appends exactly one ledger record.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from . import agents, kinds
from .errors import (
    AuthRequired,
    NotActive,
    OracleRejected,
    UnauthorizedReporter,
    UnknownAssignment,
    UnknownRole,
    ZeroWeight,
)
from .identity import IdentityService, OracleStub
from .ledger import Ledger
from .tokens import TokenBank, TokenType

ONBOARDER_ORACLE_ID = "onboarder"
TERMINATION_REPORTER_ROLES = ("friend", "family_member")


class RoleKind(str, Enum):
    HUMAN = "Human"
    AI_AGENT = "AIAgent"
    ORACLE = "Oracle"


class AssignmentStatus(str, Enum):
    PENDING_AUTH = "PendingAuth"
    ACTIVE = "Active"
    OFFBOARDED = "Offboarded"
    TERMINATED_FOR_CAUSE = "TerminatedForCause"


@dataclass(frozen=True)
class RoleDefinition:
    role_name: str
    kind: RoleKind
    sbt_required: bool


@dataclass
class RoleAssignment:
    assignment_id: str
    actor_id: str
    role_name: str
    status: AssignmentStatus
    onboard_session: Optional[str] = None
    reward_total_ut: int = 0


def load_registry(path: Optional[str | Path] = None) -> dict[str, RoleDefinition]:
    if path is None:
        raw = resources.files("reliefdao.data").joinpath("roles.json").read_text("utf-8")
    else:
        raw = Path(path).read_text("utf-8")
    defs = [
        RoleDefinition(role_name=e["role_name"], kind=RoleKind(e["kind"]), sbt_required=e["sbt_required"])
        for e in json.loads(raw)
    ]
    return {d.role_name: d for d in defs}


class RolesService:
    def __init__(
        self,
        ledger: Ledger,
        bank: TokenBank,
        identity: IdentityService,
        oracle: OracleStub,
        next_id: Callable[[str], str],
        registry: Optional[dict[str, RoleDefinition]] = None,
        base_reward: int = 1,
        require_auth_for_nonhuman: bool = False,
    ):
        self.ledger = ledger
        self.bank = bank
        self.identity = identity
        self.oracle = oracle
        self._next_id = next_id
        self.registry = registry if registry is not None else load_registry()
        self.base_reward = base_reward
        self.require_auth_for_nonhuman = require_auth_for_nonhuman
        self.assignments: dict[str, RoleAssignment] = {}
        self._consumed_sessions: set[str] = set()
        self.total_reward_ut = 0

    # -- lookups -----------------------------------------------------------

    def definition(self, role_name: str) -> RoleDefinition:
        try:
            return self.registry[role_name]
        except KeyError:
            raise UnknownRole(f"no role {role_name!r} in registry") from None

    def assignment(self, assignment_id: str) -> RoleAssignment:
        try:
            return self.assignments[assignment_id]
        except KeyError:
            raise UnknownAssignment(f"no assignment {assignment_id}") from None

    def active_assignments(self, role_name: Optional[str] = None) -> list[RoleAssignment]:
        """Active assignments in onboarding order (assignment ids are sequential)."""
        out = [
            a
            for a in self.assignments.values()
            if a.status is AssignmentStatus.ACTIVE and (role_name is None or a.role_name == role_name)
        ]
        out.sort(key=lambda a: _id_ordinal(a.assignment_id))
        return out

    def has_active_role(self, actor_id: str, role_name: str) -> bool:
        return any(
            a.actor_id == actor_id and a.role_name == role_name
            for a in self.active_assignments(role_name)
        )

    # -- lifecycle ---------------------------------------------------------

    def onboard(self, actor_id: str, role_name: str) -> RoleAssignment:
        role = self.definition(role_name)
        session_id = None
        if role.kind is RoleKind.HUMAN or self.require_auth_for_nonhuman:
            session_id = self.identity.has_passed_session(actor_id, exclude=self._consumed_sessions)
            if session_id is None:
                raise AuthRequired(f"{actor_id} has no unconsumed passed identity session")
        if not self.oracle.attest(ONBOARDER_ORACLE_ID):
            raise OracleRejected(f"onboarder oracle rejected {actor_id} for {role_name}")

        assignment = RoleAssignment(
            assignment_id=self._next_id("assign"),
            actor_id=actor_id,
            role_name=role_name,
            status=AssignmentStatus.ACTIVE,
            onboard_session=session_id,
        )
        if session_id is not None:
            self._consumed_sessions.add(session_id)
        self.assignments[assignment.assignment_id] = assignment

        sbt_asset_id = None
        if role.sbt_required:
            sbt_asset_id = self.bank.mint_sbt(actor_id, label=f"role-bond:{role_name}", mandatory=True).asset_id

        self.ledger.append_transaction(
            kinds.ROLE_CREATION,
            actor_ids=[actor_id],
            component_ids=["roles_manager"],
            payload=_payload(
                event="role_onboarded",
                assignment_id=assignment.assignment_id,
                actor_id=actor_id,
                role_name=role_name,
                onboard_session=session_id,
                sbt_asset_id=sbt_asset_id,
                # sibling components learn of the new role through the payload
                notified=["participation_terminator", "role_rewarder"],
            ),
        )
        return assignment

    def offboard(self, assignment_id: str, reason: str) -> RoleAssignment:
        assignment = self.assignment(assignment_id)
        if assignment.status is not AssignmentStatus.ACTIVE:
            raise NotActive(f"assignment {assignment_id} is {assignment.status.value}")
        assignment.status = AssignmentStatus.OFFBOARDED
        self.ledger.append_transaction(
            kinds.ROLE_REMOVAL,
            actor_ids=[assignment.actor_id],
            component_ids=["roles_manager"],
            payload=_payload(
                event="role_offboarded",
                assignment_id=assignment_id,
                actor_id=assignment.actor_id,
                role_name=assignment.role_name,
                reason_digest=_digest_hex(reason),
            ),
        )
        return assignment

    def terminate_participation(self, assignment_id: str, reporter_role: str, concern: str) -> RoleAssignment:
        assignment = self.assignment(assignment_id)
        if assignment.status is not AssignmentStatus.ACTIVE:
            raise NotActive(f"assignment {assignment_id} is {assignment.status.value}")
        if reporter_role not in TERMINATION_REPORTER_ROLES:
            raise UnauthorizedReporter(
                f"only {'/'.join(TERMINATION_REPORTER_ROLES)} may trigger termination, not {reporter_role!r}"
            )
        assignment.status = AssignmentStatus.TERMINATED_FOR_CAUSE
        self.ledger.append_transaction(
            kinds.ROLE_STATUS_UPDATE,
            actor_ids=[assignment.actor_id],
            component_ids=["roles_manager"],
            payload=_payload(
                event="participation_terminated",
                assignment_id=assignment_id,
                actor_id=assignment.actor_id,
                role_name=assignment.role_name,
                reporter_role=reporter_role,
                concern_digest=_digest_hex(concern),
            ),
        )
        return assignment

    def reward(self, assignment_id: str, kind: str, weight: int) -> dict:
        assignment = self.assignment(assignment_id)
        if assignment.status is not AssignmentStatus.ACTIVE:
            raise NotActive(f"assignment {assignment_id} is {assignment.status.value}")
        if weight <= 0:
            raise ZeroWeight("contribution weight must be positive")
        amount = weight * self.base_reward
        self.bank.mint_fungible(TokenType.UT, assignment.actor_id, amount)
        assignment.reward_total_ut += amount
        self.total_reward_ut += amount
        verdict = agents.passthrough_verdict("reward_support", f"{kind} x{weight} for {assignment.actor_id}")
        self.ledger.append_transaction(
            kinds.REWARD,
            actor_ids=[assignment.actor_id],
            component_ids=["roles_manager"],
            payload=_payload(
                event="role_rewarded",
                assignment_id=assignment_id,
                actor_id=assignment.actor_id,
                contribution_kind=kind,
                weight=weight,
                ut_amount=amount,
                agent_verdict=verdict["verdict"],
            ),
        )
        return {"assignment_id": assignment_id, "ut_amount": amount, "agent_verdict": verdict["verdict"]}


def _id_ordinal(ident: str) -> int:
    return int(ident.rsplit("-", 1)[1])


def _digest_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _payload(**fields) -> bytes:
    return json.dumps(fields, sort_keys=True).encode("utf-8")
