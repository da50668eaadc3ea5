"""Challenge-set identity authentication lifecycle.

Challenge sets are created, sessions opened against them, responses
collected, and a single evaluation decides pass/fail. Every lifecycle step
except opening a session is anchored on the ledger (digests only — raw
responses never leave the session store). A failed evaluation terminates
the session, which closes any communication channel keyed to it.

Three verifier kinds cover responses originating from systems, devices,
organizations, or individuals:

* ``SecretDigest`` — SHA-256 of the response must equal the expected digest.
* ``AttributeAssertion`` — the response must equal the expected constant.
* ``OracleAttestation`` — a configured oracle stub supplies the verdict.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from . import kinds
from .errors import BadPolicy, EmptySet, SessionClosed, UnknownChallenge, UnknownSession, UnknownSet
from .ledger import Ledger


class ChallengeKind(str, Enum):
    SECRET_DIGEST = "SecretDigest"
    ATTRIBUTE_ASSERTION = "AttributeAssertion"
    ORACLE_ATTESTATION = "OracleAttestation"


class SessionState(str, Enum):
    OPEN = "Open"
    PASSED = "Passed"
    FAILED = "Failed"
    TERMINATED = "Terminated"


@dataclass(frozen=True)
class Challenge:
    challenge_id: str
    kind: ChallengeKind
    expected: str  # digest hex, constant text, or oracle id
    prompt: str


@dataclass(frozen=True)
class Policy:
    """``All`` or ``MofN(m)``; m must satisfy 1 <= m <= set size."""

    kind: str  # "All" | "MofN"
    m: Optional[int] = None

    @classmethod
    def parse(cls, spec) -> "Policy":
        if isinstance(spec, Policy):
            return spec
        if isinstance(spec, str):
            if spec == "All":
                return cls(kind="All")
            raise BadPolicy(f"unknown policy {spec!r}")
        if isinstance(spec, dict):
            if spec.get("kind") == "All":
                return cls(kind="All")
            if spec.get("kind") == "MofN":
                return cls(kind="MofN", m=int(spec["m"]))
        raise BadPolicy(f"unknown policy {spec!r}")

    def to_json_obj(self):
        return {"kind": self.kind} if self.kind == "All" else {"kind": self.kind, "m": self.m}


@dataclass
class ChallengeSet:
    set_id: str
    context: str
    challenges: list[Challenge]
    policy: Policy

    def challenge(self, challenge_id: str) -> Challenge:
        for c in self.challenges:
            if c.challenge_id == challenge_id:
                return c
        raise UnknownChallenge(f"{challenge_id} not in set {self.set_id}")

    def definition_digest(self) -> bytes:
        doc = {
            "set_id": self.set_id,
            "context": self.context,
            "policy": self.policy.to_json_obj(),
            "challenges": [
                {"challenge_id": c.challenge_id, "kind": c.kind.value, "expected": c.expected, "prompt": c.prompt}
                for c in self.challenges
            ],
        }
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode("utf-8")).digest()


@dataclass
class AuthSession:
    session_id: str
    actor_id: str
    set_id: str
    responses: dict[str, bytes] = field(default_factory=dict)
    state: SessionState = SessionState.OPEN


@dataclass
class AuthDecision:
    session_id: str
    passed: bool
    per_challenge: dict[str, bool]


class OracleStub:
    """Trusted single oracle: configured verdict per oracle id, default pass."""

    def __init__(self):
        self.verdicts: dict[str, bool] = {}

    def set_verdict(self, oracle_id: str, verdict: bool) -> None:
        self.verdicts[oracle_id] = verdict

    def attest(self, oracle_id: str) -> bool:
        return self.verdicts.get(oracle_id, True)


def evaluate_challenge(challenge: Challenge, response: Optional[bytes], oracle: OracleStub) -> bool:
    if challenge.kind is ChallengeKind.ORACLE_ATTESTATION:
        return oracle.attest(challenge.expected)
    if response is None:
        return False
    if challenge.kind is ChallengeKind.SECRET_DIGEST:
        return hashlib.sha256(response).hexdigest() == challenge.expected.lower()
    return response.decode("utf-8", errors="replace") == challenge.expected


def policy_satisfied(policy: Policy, results: list[bool]) -> bool:
    if policy.kind == "All":
        return all(results)
    return sum(results) >= policy.m


class IdentityService:
    def __init__(self, ledger: Ledger, oracle: OracleStub, next_id: Callable[[str], str]):
        self.ledger = ledger
        self.oracle = oracle
        self._next_id = next_id
        self.sets: dict[str, ChallengeSet] = {}
        self.sessions: dict[str, AuthSession] = {}

    # -- lifecycle ---------------------------------------------------------

    def create_challenge_set(
        self, context: str, challenges: list[Challenge], policy, set_id: Optional[str] = None
    ) -> ChallengeSet:
        if not challenges:
            raise EmptySet("a challenge set needs at least one challenge")
        pol = Policy.parse(policy)
        if pol.kind == "MofN" and not (1 <= pol.m <= len(challenges)):
            raise BadPolicy(f"MofN m={pol.m} out of bounds for {len(challenges)} challenges")
        if set_id is not None and set_id in self.sets:
            raise ValueError(f"challenge set {set_id} already exists")
        cs = ChallengeSet(
            set_id=set_id or self._next_id("set"), context=context, challenges=list(challenges), policy=pol
        )
        self.sets[cs.set_id] = cs
        self.ledger.append_transaction(
            kinds.IDENTITY,
            actor_ids=[],
            component_ids=["identity"],
            payload=_payload(
                event="challenge_set_created",
                set_id=cs.set_id,
                context=context,
                definition_digest=cs.definition_digest().hex(),
            ),
        )
        return cs

    def open_session(self, actor_id: str, set_id: str) -> AuthSession:
        if set_id not in self.sets:
            raise UnknownSet(f"no challenge set {set_id}")
        session = AuthSession(session_id=self._next_id("session"), actor_id=actor_id, set_id=set_id)
        self.sessions[session.session_id] = session
        return session

    def session(self, session_id: str) -> AuthSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSession(f"no session {session_id}") from None

    def submit_response(self, session_id: str, challenge_id: str, response: bytes) -> None:
        session = self.session(session_id)
        if session.state is not SessionState.OPEN:
            raise SessionClosed(f"session {session_id} is {session.state.value}")
        self.sets[session.set_id].challenge(challenge_id)  # membership check
        session.responses[challenge_id] = response  # last write wins before evaluation
        self.ledger.append_transaction(
            kinds.IDENTITY,
            actor_ids=[session.actor_id],
            component_ids=["identity"],
            payload=_payload(
                event="response_submitted",
                session_id=session_id,
                challenge_id=challenge_id,
                response_digest=hashlib.sha256(response).hexdigest(),
            ),
        )

    def evaluate(self, session_id: str) -> AuthDecision:
        session = self.session(session_id)
        if session.state is not SessionState.OPEN:
            raise SessionClosed(f"session {session_id} is {session.state.value}")
        cs = self.sets[session.set_id]
        per_challenge = {
            c.challenge_id: evaluate_challenge(c, session.responses.get(c.challenge_id), self.oracle)
            for c in cs.challenges
        }
        passed = policy_satisfied(cs.policy, [per_challenge[c.challenge_id] for c in cs.challenges])
        if passed:
            session.state = SessionState.PASSED
        else:
            session.state = SessionState.FAILED
            session.state = SessionState.TERMINATED  # failure concludes the communication
        self.ledger.append_transaction(
            kinds.IDENTITY,
            actor_ids=[session.actor_id],
            component_ids=["identity"],
            payload=_payload(
                event="session_evaluated",
                session_id=session_id,
                passed=passed,
                per_challenge=per_challenge,
                final_state=session.state.value,
            ),
        )
        return AuthDecision(session_id=session_id, passed=passed, per_challenge=per_challenge)

    # -- queries -----------------------------------------------------------

    def has_passed_session(self, actor_id: str, exclude: set[str] = frozenset()) -> Optional[str]:
        """Earliest Passed session of the actor not yet consumed, if any."""
        for sid in sorted(self.sessions, key=_session_sort_key):
            s = self.sessions[sid]
            if s.actor_id == actor_id and s.state is SessionState.PASSED and sid not in exclude:
                return sid
        return None


def load_challenge_set_definition(path) -> dict:
    """Parse a challenge-set definition file.

    Format: JSON object with set_id, context, policy, and
    challenges[{challenge_id, kind, expected_hex_or_text, prompt}].
    Returns kwargs for ``IdentityService.create_challenge_set`` plus the
    declared set_id.
    """
    from pathlib import Path

    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    challenges = [
        Challenge(
            challenge_id=c["challenge_id"],
            kind=ChallengeKind(c["kind"]),
            expected=str(c["expected_hex_or_text"]),
            prompt=c.get("prompt", ""),
        )
        for c in doc.get("challenges", [])
    ]
    return {
        "set_id": doc.get("set_id"),
        "context": doc.get("context", ""),
        "challenges": challenges,
        "policy": doc.get("policy", "All"),
    }


def _session_sort_key(session_id: str):
    head, _, tail = session_id.rpartition("-")
    return (head, int(tail)) if tail.isdigit() else (session_id, 0)


def _payload(**fields) -> bytes:
    return json.dumps(fields, sort_keys=True).encode("utf-8")
