"""Governance-token weighted proposals, voting, tallying, and execution.

Voting weight is frozen in a snapshot of all GT balances at proposal
creation, so tokens acquired mid-vote never change an outcome. Quorum is a
third of the snapshot weight (ceiling), acceptance needs a strict majority
of cast yes/no weight (ties reject, abstain counts toward quorum only).
Executing an accepted proposal applies its payload: a policy-store version,
a content-moderation flag, or a token grant.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from . import kinds
from .errors import (
    AlreadyExecuted,
    AlreadyVoted,
    BadConfig,
    NoGovernanceTokens,
    NotAccepted,
    NotEligible,
    NotOpen,
    StillOpen,
    UnknownProposal,
)
from .ledger import Ledger
from .tokens import TokenBank, TokenType

DEFAULT_VOTING_PERIOD = 100  # logical ticks


class ProposalKind(str, Enum):
    POLICY_UPDATE = "PolicyUpdate"
    CONTENT_MODERATION = "ContentModeration"
    RESOURCE_ALLOCATION = "ResourceAllocation"
    REWARD_GRANT = "RewardGrant"


class ProposalState(str, Enum):
    OPEN = "Open"
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"
    EXECUTED = "Executed"


class VoteChoice(str, Enum):
    YES = "Yes"
    NO = "No"
    ABSTAIN = "Abstain"


@dataclass
class Vote:
    proposal_id: str
    voter: str
    choice: VoteChoice
    weight: int


@dataclass
class Proposal:
    proposal_id: str
    proposer: str
    kind: ProposalKind
    payload: dict
    payload_digest: str
    snapshot: dict[str, int]
    opens_at: int
    closes_at: int
    state: ProposalState = ProposalState.OPEN
    votes: dict[str, Vote] = field(default_factory=dict)

    @property
    def total_snapshot_weight(self) -> int:
        return sum(self.snapshot.values())


@dataclass
class TallyOutcome:
    accepted: bool
    yes: int
    no: int
    abstain: int
    quorum_met: bool


class PolicyStore:
    """Versioned policy documents: writes append, history is never edited."""

    def __init__(self):
        self.policies: dict[str, list[dict]] = {}

    def put(self, name: str, document: dict) -> int:
        versions = self.policies.setdefault(name, [])
        versions.append(document)
        return len(versions)

    def current(self, name: str) -> Optional[dict]:
        versions = self.policies.get(name)
        return versions[-1] if versions else None


def quorum_threshold(total_weight: int) -> int:
    return -(-total_weight // 3)  # ceil(total/3)


class GovernanceService:
    def __init__(
        self,
        ledger: Ledger,
        bank: TokenBank,
        next_id: Callable[[str], str],
        current_time: Callable[[], int],
        voting_period: int = DEFAULT_VOTING_PERIOD,
    ):
        self.ledger = ledger
        self.bank = bank
        self._next_id = next_id
        self._current_time = current_time
        self.voting_period = voting_period
        self.proposals: dict[str, Proposal] = {}
        self.policy_store = PolicyStore()
        self.moderation_flags: dict[str, str] = {}

    def proposal(self, proposal_id: str) -> Proposal:
        try:
            return self.proposals[proposal_id]
        except KeyError:
            raise UnknownProposal(f"no proposal {proposal_id}") from None

    def propose(self, proposer: str, kind: ProposalKind | str, payload: dict) -> Proposal:
        kind = ProposalKind(kind)
        if self.bank.balance(proposer, TokenType.GT) <= 0:
            raise NoGovernanceTokens(f"{proposer} holds no governance tokens")
        snapshot = {
            actor: acct.gt_balance
            for actor, acct in sorted(self.bank.accounts.items())
            if acct.gt_balance > 0
        }
        payload_bytes = json.dumps(payload, sort_keys=True).encode("utf-8")
        record = self.ledger.append_transaction(
            kinds.GOVERNANCE,
            actor_ids=[proposer],
            component_ids=["governance"],
            payload=_payload(
                event="proposal_created",
                kind=kind.value,
                proposer=proposer,
                payload_digest=hashlib.sha256(payload_bytes).hexdigest(),
            ),
        )
        proposal = Proposal(
            proposal_id=self._next_id("prop"),
            proposer=proposer,
            kind=kind,
            payload=payload,
            payload_digest=hashlib.sha256(payload_bytes).hexdigest(),
            snapshot=snapshot,
            opens_at=record.logical_time,
            closes_at=record.logical_time + self.voting_period,
        )
        self.proposals[proposal.proposal_id] = proposal
        return proposal

    def vote(self, proposal_id: str, voter: str, choice: VoteChoice | str) -> Vote:
        choice = VoteChoice(choice)
        proposal = self.proposal(proposal_id)
        now = self._current_time()
        if proposal.state is not ProposalState.OPEN or not (proposal.opens_at <= now < proposal.closes_at):
            raise NotOpen(f"proposal {proposal_id} is not open for voting at t={now}")
        weight = proposal.snapshot.get(voter, 0)
        if weight <= 0:
            raise NotEligible(f"{voter} had no governance weight at the snapshot")
        if voter in proposal.votes:
            raise AlreadyVoted(f"{voter} already voted on {proposal_id}")
        vote = Vote(proposal_id=proposal_id, voter=voter, choice=choice, weight=weight)
        proposal.votes[voter] = vote
        self.ledger.append_transaction(
            kinds.GOVERNANCE,
            actor_ids=[voter],
            component_ids=["governance"],
            payload=_payload(
                event="vote_cast",
                proposal_id=proposal_id,
                choice=choice.value,
                weight=weight,
            ),
        )
        return vote

    def tally(self, proposal_id: str, now: Optional[int] = None) -> TallyOutcome:
        proposal = self.proposal(proposal_id)
        if proposal.state is not ProposalState.OPEN:
            # idempotent read-back of a settled proposal would hide bugs; refuse
            raise NotOpen(f"proposal {proposal_id} already {proposal.state.value}")
        if now is None:
            now = self._current_time()
        if now < proposal.closes_at:
            raise StillOpen(f"voting closes at t={proposal.closes_at}, now t={now}")
        sums = {c: 0 for c in VoteChoice}
        for vote in proposal.votes.values():
            sums[vote.choice] += vote.weight
        cast = sums[VoteChoice.YES] + sums[VoteChoice.NO] + sums[VoteChoice.ABSTAIN]
        quorum_met = cast >= quorum_threshold(proposal.total_snapshot_weight)
        accepted = quorum_met and sums[VoteChoice.YES] > sums[VoteChoice.NO]
        proposal.state = ProposalState.ACCEPTED if accepted else ProposalState.REJECTED
        self.ledger.append_transaction(
            kinds.GOVERNANCE,
            actor_ids=[],
            component_ids=["governance"],
            payload=_payload(
                event="proposal_tallied",
                proposal_id=proposal_id,
                yes=sums[VoteChoice.YES],
                no=sums[VoteChoice.NO],
                abstain=sums[VoteChoice.ABSTAIN],
                quorum_met=quorum_met,
                accepted=accepted,
            ),
        )
        return TallyOutcome(
            accepted=accepted,
            yes=sums[VoteChoice.YES],
            no=sums[VoteChoice.NO],
            abstain=sums[VoteChoice.ABSTAIN],
            quorum_met=quorum_met,
        )

    def execute(self, proposal_id: str) -> dict:
        proposal = self.proposal(proposal_id)
        if proposal.state is ProposalState.EXECUTED:
            raise AlreadyExecuted(f"proposal {proposal_id} already executed")
        if proposal.state is not ProposalState.ACCEPTED:
            raise NotAccepted(f"proposal {proposal_id} is {proposal.state.value}")
        effect = self._apply(proposal)
        proposal.state = ProposalState.EXECUTED
        self.ledger.append_transaction(
            kinds.GOVERNANCE,
            actor_ids=[proposal.proposer],
            component_ids=["governance"],
            payload=_payload(
                event="proposal_executed",
                proposal_id=proposal_id,
                kind=proposal.kind.value,
                effect=effect,
            ),
        )
        return effect

    def _apply(self, proposal: Proposal) -> dict:
        payload = proposal.payload
        if proposal.kind is ProposalKind.POLICY_UPDATE:
            version = self.policy_store.put(payload["policy"], payload["document"])
            return {"policy": payload["policy"], "version": version}
        if proposal.kind is ProposalKind.CONTENT_MODERATION:
            self.moderation_flags[payload["target"]] = payload["action"]
            return {"target": payload["target"], "action": payload["action"]}
        if proposal.kind is ProposalKind.REWARD_GRANT:
            token_type = TokenType(payload.get("token_type", "UT"))
            if not token_type.fungible:
                raise BadConfig("reward grants mint fungible tokens only")
            self.bank.mint_fungible(token_type, payload["recipient"], int(payload["amount"]))
            return {"recipient": payload["recipient"], "token_type": token_type.value, "amount": int(payload["amount"])}
        # ResourceAllocation funds a recipient in utility tokens
        self.bank.mint_fungible(TokenType.UT, payload["recipient"], int(payload["amount"]))
        return {"resource": payload.get("resource", ""), "recipient": payload["recipient"], "amount": int(payload["amount"])}


def _payload(**fields) -> bytes:
    return json.dumps(fields, sort_keys=True).encode("utf-8")
