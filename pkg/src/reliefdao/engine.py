"""Coordination engine: one process-wide composition of every subsystem.

The engine owns the logical clock, the id counters, the single-writer lock,
and persistence, and exposes JSON-friendly operations the HTTP service, the
CLI, and the scenario runner all share. Identical operation sequences yield
byte-identical ledgers and snapshots.
"""

from __future__ import annotations

import base64
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import agents, kinds
from .casework import Case, CaseService, CaseState
from .errors import BadConfig, CorruptSnapshot, NonEmptyEngine
from .governance import GovernanceService, Proposal, ProposalState
from .identity import AuthSession, Challenge, ChallengeKind, IdentityService, OracleStub
from .ledger import Catalog, Ledger, TransactionRecord, record_from_json_obj, record_hash, GENESIS_HASH
from .roles import RoleAssignment, RolesService, load_registry
from .tokens import TokenBank, TokenType


class LogicalClock:
    """Monotone counter; every ledger record consumes one tick."""

    def __init__(self, start: int = 0):
        self.value = start

    def tick(self) -> int:
        t = self.value
        self.value += 1
        return t

    def peek(self) -> int:
        return self.value


@dataclass
class EngineConfig:
    data_dir: Optional[str] = None
    rubric_path: Optional[str] = None
    registry_path: Optional[str] = None
    base_reward: int = 1
    voting_period: int = 100


class Engine:
    def __init__(self, config: Optional[EngineConfig] = None):
        self.config = config or EngineConfig()
        self._lock = threading.RLock()
        self.clock = LogicalClock()
        self._counters: dict[str, int] = {}
        self.catalog = Catalog.load_default()
        self.rubric = (
            agents.Rubric.load(self.config.rubric_path)
            if self.config.rubric_path
            else agents.Rubric.load_default()
        )
        self.oracle = OracleStub()
        self.bank = TokenBank()
        self._data_dir = Path(self.config.data_dir) if self.config.data_dir else None
        if self._data_dir is not None:
            self._data_dir.mkdir(parents=True, exist_ok=True)
            (self._data_dir / "cases").mkdir(exist_ok=True)
            ledger_file = self._data_dir / "ledger.jsonl"
            if ledger_file.exists() and ledger_file.stat().st_size > 0:
                raise BadConfig(
                    f"{ledger_file} already holds records; use a fresh data directory or import a snapshot"
                )
        self.ledger = Ledger(self.catalog, clock=self.clock.tick, on_append=self._persist_record)
        registry = load_registry(self.config.registry_path) if self.config.registry_path else load_registry()
        self.identity = IdentityService(self.ledger, self.oracle, self._next_id)
        self.roles = RolesService(
            self.ledger,
            self.bank,
            self.identity,
            self.oracle,
            self._next_id,
            registry=registry,
            base_reward=self.config.base_reward,
        )
        self.governance = GovernanceService(
            self.ledger,
            self.bank,
            self._next_id,
            current_time=self.clock.peek,
            voting_period=self.config.voting_period,
        )
        self.casework = CaseService(
            self.ledger,
            self.bank,
            self.roles,
            self.identity,
            self._next_id,
            known_actor=self.known_actor,
            on_case_changed=self._persist_case,
        )

    # -- infrastructure ------------------------------------------------------

    def _next_id(self, prefix: str) -> str:
        n = self._counters.get(prefix, 0) + 1
        self._counters[prefix] = n
        return f"{prefix}-{n}"

    def _persist_record(self, record: TransactionRecord) -> None:
        if self._data_dir is None:
            return
        with open(self._data_dir / "ledger.jsonl", "a", encoding="utf-8") as f:
            f.write(record.to_line() + "\n")
        payload = self.ledger.payload_store.get(record.payload_digest, b"")
        with open(self._data_dir / "payloads.jsonl", "a", encoding="utf-8") as f:
            line = {"digest": record.payload_digest.hex(), "data_b64": base64.b64encode(payload).decode("ascii")}
            f.write(json.dumps(line, sort_keys=True) + "\n")

    def _persist_case(self, case: Case) -> None:
        if self._data_dir is None:
            return
        path = self._data_dir / "cases" / f"{case.case_id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self.casework.case_report(case.case_id), sort_keys=True, indent=2))
        os.replace(tmp, path)

    def known_actor(self, actor_id: str) -> bool:
        if actor_id in self.bank.accounts:
            return True
        if any(s.actor_id == actor_id for s in self.identity.sessions.values()):
            return True
        return any(a.actor_id == actor_id for a in self.roles.assignments.values())

    def is_empty(self) -> bool:
        return (
            len(self.ledger) == 0
            and not self.bank.accounts
            and not self.identity.sessions
            and not self.identity.sets
            and not self.roles.assignments
            and not self.governance.proposals
            and not self.casework.cases
        )

    def advance_clock(self, ticks: int) -> dict:
        with self._lock:
            for _ in range(int(ticks)):
                self.clock.tick()
            return {"logical_time": self.clock.peek()}

    # -- ledger ----------------------------------------------------------------

    def append_transaction(self, component: str, local_id: int, actor_ids=(), component_ids=(), payload: bytes | str = b"") -> dict:
        if isinstance(payload, str):
            payload = payload.encode("utf-8")
        with self._lock:
            record = self.ledger.append_transaction(
                (component, int(local_id)), list(actor_ids), list(component_ids), payload
            )
            return record.to_json_obj()

    def verify_chain(self) -> dict:
        report = self.ledger.verify_chain()
        return {"ok": report.ok, "first_bad_seq": report.first_bad_seq}

    def catalog_lookup(self, component: str, local_id: int) -> dict:
        kind = self.catalog.lookup(component, int(local_id))
        return {
            "component": kind.component.value,
            "local_id": kind.local_id,
            "description": kind.description,
            "stakeholders": list(kind.stakeholders),
            "info_exchanged": kind.info_exchanged,
        }

    def query_ledger(self, component=None, actor_id=None, kind=None, time_range=None, component_id=None) -> list[dict]:
        if kind is not None and not isinstance(kind, tuple):
            kind = (kind[0], int(kind[1]))
        if time_range is not None and not isinstance(time_range, tuple):
            time_range = (int(time_range[0]), int(time_range[1]))
        records = self.ledger.query(
            component=component, actor_id=actor_id, kind=kind, time_range=time_range, component_id=component_id
        )
        return [r.to_json_obj() for r in records]

    def payload_of(self, digest: bytes) -> bytes:
        return self.ledger.payload_of(digest)

    # -- tokens -----------------------------------------------------------------

    def mint(self, token_type: str, recipient: str, amount: Optional[int] = None,
             content_hex: Optional[str] = None, label: Optional[str] = None) -> dict:
        tt = TokenType(token_type)
        with self._lock:
            if tt.fungible:
                if amount is None:
                    raise ValueError(f"minting {tt.value} requires an amount")
                receipt = self.bank.mint_fungible(tt, recipient, int(amount))
                detail = {"amount": receipt.amount}
            elif tt is TokenType.NFT:
                if content_hex is None:
                    raise ValueError("minting an NFT requires content_hex")
                receipt = self.bank.mint_nft(recipient, bytes.fromhex(content_hex))
                detail = {"asset_id": receipt.asset_id, "content_digest": content_hex}
            else:
                receipt = self.bank.mint_sbt(recipient, label or "bond")
                detail = {"asset_id": receipt.asset_id, "label": label or "bond"}
            self._append_token_event("token_minted", recipient, tt, detail)
            return {"token_type": tt.value, "recipient": recipient, **detail}

    def transfer(self, token_type: str, from_actor: str, to_actor: str,
                 amount: Optional[int] = None, asset_id: Optional[str] = None) -> dict:
        tt = TokenType(token_type)
        with self._lock:
            if tt.fungible:
                if amount is None:
                    raise ValueError(f"transferring {tt.value} requires an amount")
                self.bank.transfer_fungible(tt, from_actor, to_actor, int(amount))
                detail = {"amount": int(amount)}
            else:
                if asset_id is None:
                    raise ValueError("asset transfers require an asset_id")
                self.bank.transfer_asset(from_actor, to_actor, asset_id)
                detail = {"asset_id": asset_id}
            self._append_token_event(
                "token_transferred", to_actor, tt, {**detail, "from": from_actor}
            )
            return {"token_type": tt.value, "from": from_actor, "to": to_actor, **detail}

    def mint_evidence_nft(self, case_id: str, owner: Optional[str] = None, content: bytes | str = b"") -> dict:
        if isinstance(content, str):
            content = content.encode("utf-8")
        with self._lock:
            asset_id = self.casework.attach_evidence(case_id, content, owner=owner)
            return {"case_id": case_id, "owner": self.bank.owner_of(asset_id), "asset_id": asset_id}

    def balance(self, actor: str, token_type: str):
        value = self.bank.balance(actor, TokenType(token_type))
        return sorted(value) if isinstance(value, set) else value

    def token_state(self, actor: str) -> dict:
        acct = self.bank.accounts.get(actor)
        return {
            "actor_id": actor,
            "gt_balance": acct.gt_balance if acct else 0,
            "ut_balance": acct.ut_balance if acct else 0,
            "nft_assets": sorted(acct.nft_assets) if acct else [],
            "sbt_assets": sorted(acct.sbt_assets) if acct else [],
        }

    def _append_token_event(self, event: str, actor: str, tt: TokenType, detail: dict) -> None:
        payload = json.dumps(
            {"event": event, "actor": actor, "token_type": tt.value, **detail}, sort_keys=True
        ).encode("utf-8")
        self.ledger.append_transaction(
            kinds.TOKEN_EVENT, actor_ids=[actor], component_ids=["tokens"], payload=payload
        )

    # -- identity -----------------------------------------------------------------

    def create_challenge_set(self, context: str, challenges: list[dict], policy) -> dict:
        with self._lock:
            parsed = [
                Challenge(
                    challenge_id=c.get("challenge_id") or self._next_id("challenge"),
                    kind=ChallengeKind(c["kind"]),
                    expected=str(c["expected"]),
                    prompt=c.get("prompt", ""),
                )
                for c in challenges
            ]
            cs = self.identity.create_challenge_set(context, parsed, policy)
            return {
                "set_id": cs.set_id,
                "context": cs.context,
                "policy": cs.policy.to_json_obj(),
                "challenges": [
                    {"challenge_id": c.challenge_id, "kind": c.kind.value, "prompt": c.prompt}
                    for c in cs.challenges
                ],
            }

    def create_challenge_set_from_file(self, path: str | Path) -> dict:
        from .identity import load_challenge_set_definition

        definition = load_challenge_set_definition(path)
        with self._lock:
            cs = self.identity.create_challenge_set(
                context=definition["context"],
                challenges=definition["challenges"],
                policy=definition["policy"],
                set_id=definition["set_id"],
            )
            return {"set_id": cs.set_id, "context": cs.context, "challenges": len(cs.challenges)}

    def open_session(self, actor_id: str, set_id: str) -> dict:
        with self._lock:
            return _session_obj(self.identity.open_session(actor_id, set_id))

    def submit_response(self, session_id: str, challenge_id: str,
                        response_text: Optional[str] = None, response_hex: Optional[str] = None) -> dict:
        response = bytes.fromhex(response_hex) if response_hex is not None else (response_text or "").encode("utf-8")
        with self._lock:
            self.identity.submit_response(session_id, challenge_id, response)
            return {"session_id": session_id, "challenge_id": challenge_id, "accepted": True}

    def evaluate(self, session_id: str) -> dict:
        with self._lock:
            decision = self.identity.evaluate(session_id)
            return {
                "session_id": session_id,
                "passed": decision.passed,
                "per_challenge": decision.per_challenge,
                "state": self.identity.session(session_id).state.value,
            }

    def session_info(self, session_id: str) -> dict:
        return _session_obj(self.identity.session(session_id))

    # -- roles ----------------------------------------------------------------------

    def onboard(self, actor_id: str, role_name: str) -> dict:
        with self._lock:
            return _assignment_obj(self.roles.onboard(actor_id, role_name))

    def offboard(self, assignment_id: str, reason: str = "") -> dict:
        with self._lock:
            return _assignment_obj(self.roles.offboard(assignment_id, reason))

    def terminate_participation(self, assignment_id: str, reporter_role: str, concern: str = "") -> dict:
        with self._lock:
            return _assignment_obj(self.roles.terminate_participation(assignment_id, reporter_role, concern))

    def reward(self, assignment_id: str, kind: str, weight: int) -> dict:
        with self._lock:
            return self.roles.reward(assignment_id, kind, int(weight))

    def roles_overview(self) -> dict:
        return {
            "roles": [
                {"role_name": d.role_name, "kind": d.kind.value, "sbt_required": d.sbt_required}
                for d in self.roles.registry.values()
            ],
            "assignments": [_assignment_obj(a) for a in self.roles.assignments.values()],
        }

    # -- governance --------------------------------------------------------------------

    def propose(self, proposer: str, kind: str, payload: dict) -> dict:
        with self._lock:
            return _proposal_obj(self.governance.propose(proposer, kind, payload))

    def vote(self, proposal_id: str, voter: str, choice: str) -> dict:
        with self._lock:
            vote = self.governance.vote(proposal_id, voter, choice)
            return {"proposal_id": proposal_id, "voter": voter, "choice": vote.choice.value, "weight": vote.weight}

    def tally(self, proposal_id: str, now: Optional[int] = None) -> dict:
        with self._lock:
            outcome = self.governance.tally(proposal_id, now=now)
            return {
                "proposal_id": proposal_id,
                "accepted": outcome.accepted,
                "yes": outcome.yes,
                "no": outcome.no,
                "abstain": outcome.abstain,
                "quorum_met": outcome.quorum_met,
            }

    def execute(self, proposal_id: str) -> dict:
        with self._lock:
            effect = self.governance.execute(proposal_id)
            if self._data_dir is not None:
                path = self._data_dir / "policies.json"
                path.write_text(json.dumps(self.governance.policy_store.policies, sort_keys=True, indent=2))
            return {"proposal_id": proposal_id, "effect": effect}

    def proposal_info(self, proposal_id: str) -> dict:
        return _proposal_obj(self.governance.proposal(proposal_id))

    # -- casework ---------------------------------------------------------------------------

    def report_incident(self, reporter: str, details: bytes | str = b"") -> dict:
        if isinstance(details, str):
            details = details.encode("utf-8")
        with self._lock:
            case = self.casework.report_incident(reporter, details)
            return self.casework.case_report(case.case_id)

    def advance(self, case_id: str, event: str, **args) -> dict:
        with self._lock:
            self.casework.advance(case_id, event, **args)
            return self.casework.case_report(case_id)

    def assemble_response_team(self, case_id: str) -> dict:
        with self._lock:
            return {"case_id": case_id, "team": self.casework.assemble_response_team(case_id)}

    def attach_evidence(self, case_id: str, content: bytes | str) -> dict:
        if isinstance(content, str):
            content = content.encode("utf-8")
        with self._lock:
            asset_id = self.casework.attach_evidence(case_id, content)
            return {"case_id": case_id, "asset_id": asset_id}

    def case_report(self, case_id: str) -> dict:
        return self.casework.case_report(case_id)

    def list_cases(self, reporter: Optional[str] = None) -> list[dict]:
        reports = [self.casework.case_report(cid) for cid in self.casework.cases]
        if reporter is not None:
            reports = [r for r in reports if r["reporter"] == reporter]
        return reports

    # -- agents -----------------------------------------------------------------------------

    def diagnose_sextortion(self, **features) -> dict:
        verdict = agents.diagnose_sextortion(agents.CaseFeatures.from_dict(features), self.rubric)
        return {
            "score": verdict.score,
            "band": verdict.band,
            "recommended_actions": list(verdict.recommended_actions),
            "trace": verdict.trace.to_json_obj(),
        }

    def diagnose_legal_aid(self, jurisdiction_tag: str = "generic", **features) -> dict:
        rec = agents.diagnose_legal_aid(agents.CaseFeatures.from_dict(features), jurisdiction_tag, self.rubric)
        return {"actions": list(rec.actions), "resources": list(rec.resources), "trace": rec.trace.to_json_obj()}

    def score_mental_health_assessment(self, answers: list[int]) -> dict:
        result = agents.score_mental_health_assessment(list(answers), self.rubric)
        return {"total": result.total, "band": result.band, "guidance": list(result.guidance)}

    def score_situation_assessment(self, answers: list[int]) -> dict:
        result = agents.score_situation_assessment(list(answers), self.rubric)
        return {"total": result.total, "band": result.band, "guidance": list(result.guidance)}

    def role_information(self, role_name: str, situation_band: str = "Low") -> dict:
        self.roles.definition(role_name)  # UnknownRole for unregistered names
        bundle = agents.role_information(role_name, situation_band, self.rubric)
        return {"role_name": role_name, "situation_band": situation_band, "resources": list(bundle)}

    # -- snapshots ----------------------------------------------------------------------------

    def export_state(self, path: Optional[str | Path] = None) -> str:
        with self._lock:
            text = json.dumps(self._snapshot(), sort_keys=True, indent=2) + "\n"
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    def import_state(self, path: str | Path) -> dict:
        with self._lock:
            if not self.is_empty():
                raise NonEmptyEngine("snapshots may only be imported into an empty engine")
            snap = json.loads(Path(path).read_text(encoding="utf-8"))
            records = [record_from_json_obj(obj, self.catalog) for obj in snap["ledger"]]
            prev = GENESIS_HASH
            for i, rec in enumerate(records):
                expected = record_hash(
                    rec.seq, rec.logical_time, rec.kind.key, rec.actor_ids,
                    rec.component_ids, rec.payload_digest, rec.prev_hash,
                )
                if rec.seq != i or rec.prev_hash != prev or rec.hash != expected:
                    raise CorruptSnapshot(f"chain verification failed at seq {i}")
                prev = rec.hash
            self._restore(snap, records)
            if self._data_dir is not None:
                with open(self._data_dir / "ledger.jsonl", "w", encoding="utf-8") as f:
                    for rec in records:
                        f.write(rec.to_line() + "\n")
            for case in self.casework.cases.values():
                self._persist_case(case)
            return {"ledger_len": len(records)}

    def _snapshot(self) -> dict:
        return {
            "ledger": [r.to_json_obj() for r in self.ledger.records],
            "payloads": {
                digest.hex(): base64.b64encode(data).decode("ascii")
                for digest, data in sorted(self.ledger.payload_store.items())
            },
            "tokens": self.bank.snapshot(),
            "identity": {
                "sets": [
                    {
                        "set_id": cs.set_id,
                        "context": cs.context,
                        "policy": cs.policy.to_json_obj(),
                        "challenges": [
                            {
                                "challenge_id": c.challenge_id,
                                "kind": c.kind.value,
                                "expected": c.expected,
                                "prompt": c.prompt,
                            }
                            for c in cs.challenges
                        ],
                    }
                    for cs in sorted(self.identity.sets.values(), key=lambda s: s.set_id)
                ],
                "sessions": [
                    {
                        "session_id": s.session_id,
                        "actor_id": s.actor_id,
                        "set_id": s.set_id,
                        "state": s.state.value,
                        "responses": {
                            cid: base64.b64encode(resp).decode("ascii")
                            for cid, resp in sorted(s.responses.items())
                        },
                    }
                    for s in sorted(self.identity.sessions.values(), key=lambda s: s.session_id)
                ],
            },
            "roles": {
                "assignments": [
                    _assignment_obj(a)
                    for a in sorted(self.roles.assignments.values(), key=lambda a: a.assignment_id)
                ],
                "consumed_sessions": sorted(self.roles._consumed_sessions),
                "total_reward_ut": self.roles.total_reward_ut,
            },
            "governance": {
                "proposals": [
                    {
                        **_proposal_obj(p),
                        "payload": p.payload,
                        "snapshot": p.snapshot,
                        "votes": [
                            {"voter": v.voter, "choice": v.choice.value, "weight": v.weight}
                            for v in sorted(p.votes.values(), key=lambda v: v.voter)
                        ],
                    }
                    for p in sorted(self.governance.proposals.values(), key=lambda p: p.proposal_id)
                ],
                "policies": self.governance.policy_store.policies,
                "moderation_flags": self.governance.moderation_flags,
            },
            "cases": [
                {
                    "case_id": c.case_id,
                    "reporter": c.reporter,
                    "state": c.state.value,
                    "identity_session": c.identity_session,
                    "evidence": list(c.evidence),
                    "team": list(c.team),
                    "financial_support_active": c.financial_support_active,
                    "counseling_active": c.counseling_active,
                    "progress_log": [list(entry) for entry in c.progress_log],
                    "resolution": c.resolution.value if c.resolution else None,
                    "feedback_digest": c.feedback_digest,
                }
                for c in sorted(self.casework.cases.values(), key=lambda c: c.case_id)
            ],
            "counters": dict(sorted(self._counters.items())),
            "clock": self.clock.peek(),
        }

    def _restore(self, snap: dict, records: list[TransactionRecord]) -> None:
        from .casework import Resolution
        from .governance import ProposalKind, Vote, VoteChoice
        from .identity import ChallengeSet, Policy, SessionState
        from .roles import AssignmentStatus

        self.ledger.records = records
        self.ledger.payload_store = {
            bytes.fromhex(d): base64.b64decode(b) for d, b in snap["payloads"].items()
        }
        self.bank.restore(snap["tokens"])
        self.identity.sets = {
            s["set_id"]: ChallengeSet(
                set_id=s["set_id"],
                context=s["context"],
                policy=Policy.parse(s["policy"]),
                challenges=[
                    Challenge(
                        challenge_id=c["challenge_id"],
                        kind=ChallengeKind(c["kind"]),
                        expected=c["expected"],
                        prompt=c["prompt"],
                    )
                    for c in s["challenges"]
                ],
            )
            for s in snap["identity"]["sets"]
        }
        self.identity.sessions = {
            s["session_id"]: AuthSession(
                session_id=s["session_id"],
                actor_id=s["actor_id"],
                set_id=s["set_id"],
                responses={cid: base64.b64decode(b) for cid, b in s["responses"].items()},
                state=SessionState(s["state"]),
            )
            for s in snap["identity"]["sessions"]
        }
        self.roles.assignments = {
            a["assignment_id"]: RoleAssignment(
                assignment_id=a["assignment_id"],
                actor_id=a["actor_id"],
                role_name=a["role_name"],
                status=AssignmentStatus(a["status"]),
                onboard_session=a["onboard_session"],
                reward_total_ut=a["reward_total_ut"],
            )
            for a in snap["roles"]["assignments"]
        }
        self.roles._consumed_sessions = set(snap["roles"]["consumed_sessions"])
        self.roles.total_reward_ut = snap["roles"]["total_reward_ut"]
        self.governance.proposals = {
            p["proposal_id"]: Proposal(
                proposal_id=p["proposal_id"],
                proposer=p["proposer"],
                kind=ProposalKind(p["kind"]),
                payload=p["payload"],
                payload_digest=p["payload_digest"],
                snapshot={k: int(v) for k, v in p["snapshot"].items()},
                opens_at=p["opens_at"],
                closes_at=p["closes_at"],
                state=ProposalState(p["state"]),
                votes={
                    v["voter"]: Vote(
                        proposal_id=p["proposal_id"],
                        voter=v["voter"],
                        choice=VoteChoice(v["choice"]),
                        weight=v["weight"],
                    )
                    for v in p["votes"]
                },
            )
            for p in snap["governance"]["proposals"]
        }
        self.governance.policy_store.policies = snap["governance"]["policies"]
        self.governance.moderation_flags = snap["governance"]["moderation_flags"]
        self.casework.cases = {
            c["case_id"]: Case(
                case_id=c["case_id"],
                reporter=c["reporter"],
                state=CaseState(c["state"]),
                identity_session=c["identity_session"],
                evidence=list(c["evidence"]),
                team=list(c["team"]),
                financial_support_active=c["financial_support_active"],
                counseling_active=c["counseling_active"],
                progress_log=[tuple(e) for e in c["progress_log"]],
                resolution=Resolution(c["resolution"]) if c["resolution"] else None,
                feedback_digest=c["feedback_digest"],
            )
            for c in snap["cases"]
        }
        self._counters = dict(snap["counters"])
        self.clock.value = snap["clock"]


def _session_obj(session: AuthSession) -> dict:
    return {
        "session_id": session.session_id,
        "actor_id": session.actor_id,
        "set_id": session.set_id,
        "state": session.state.value,
        "responses_submitted": sorted(session.responses),
    }


def _assignment_obj(a: RoleAssignment) -> dict:
    return {
        "assignment_id": a.assignment_id,
        "actor_id": a.actor_id,
        "role_name": a.role_name,
        "status": a.status.value,
        "onboard_session": a.onboard_session,
        "reward_total_ut": a.reward_total_ut,
    }


def _proposal_obj(p: Proposal) -> dict:
    cast = {"Yes": 0, "No": 0, "Abstain": 0}
    for vote in p.votes.values():
        cast[vote.choice.value] += vote.weight
    return {
        "proposal_id": p.proposal_id,
        "proposer": p.proposer,
        "kind": p.kind.value,
        "payload_digest": p.payload_digest,
        "opens_at": p.opens_at,
        "closes_at": p.closes_at,
        "state": p.state.value,
        "total_snapshot_weight": p.total_snapshot_weight,
        "votes_cast": cast,
    }
