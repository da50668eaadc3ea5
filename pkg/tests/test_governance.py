"""Proposal lifecycle, snapshot isolation, and tally arithmetic."""

import math
import random

import pytest

from reliefdao.engine import Engine, EngineConfig
from reliefdao.errors import (
    AlreadyExecuted,
    AlreadyVoted,
    NoGovernanceTokens,
    NotAccepted,
    NotEligible,
    NotOpen,
    StillOpen,
)


def grant_gt(engine, holdings):
    for actor, amount in holdings.items():
        engine.mint("GT", actor, amount=amount)


def close_voting(engine, proposal):
    engine.advance_clock(proposal["closes_at"] - engine.clock.peek() + 1)


def test_propose_snapshots_all_current_holders(engine):
    grant_gt(engine, {"a": 5, "b": 2, "c": 1})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "conduct", "document": {"v": 1}})
    snap = engine.governance.proposal(proposal["proposal_id"]).snapshot
    assert snap == {"a": 5, "b": 2, "c": 1}
    assert proposal["state"] == "Open"
    assert proposal["total_snapshot_weight"] == 8


def test_propose_without_gt(engine):
    with pytest.raises(NoGovernanceTokens):
        engine.propose("pauper", "PolicyUpdate", {"policy": "x", "document": {}})


def test_snapshots_are_independent_across_proposals(engine):
    grant_gt(engine, {"a": 3})
    p1 = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    engine.mint("GT", "b", amount=9)
    p2 = engine.propose("a", "PolicyUpdate", {"policy": "y", "document": {}})
    snap1 = engine.governance.proposal(p1["proposal_id"]).snapshot
    snap2 = engine.governance.proposal(p2["proposal_id"]).snapshot
    assert "b" not in snap1
    assert snap2["b"] == 9


def test_vote_weight_echoes_snapshot(engine):
    grant_gt(engine, {"a": 4, "b": 1})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    vote = engine.vote(proposal["proposal_id"], "a", "Yes")
    assert vote["weight"] == 4


def test_vote_by_actor_outside_snapshot(engine):
    grant_gt(engine, {"a": 4})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    engine.mint("GT", "late", amount=10)
    with pytest.raises(NotEligible):
        engine.vote(proposal["proposal_id"], "late", "Yes")


def test_double_vote_rejected(engine):
    grant_gt(engine, {"a": 4})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    engine.vote(proposal["proposal_id"], "a", "Yes")
    with pytest.raises(AlreadyVoted):
        engine.vote(proposal["proposal_id"], "a", "No")


def test_vote_after_window_closes(engine):
    grant_gt(engine, {"a": 4})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    close_voting(engine, proposal)
    with pytest.raises(NotOpen):
        engine.vote(proposal["proposal_id"], "a", "Yes")


def test_tally_requires_closed_window(engine):
    grant_gt(engine, {"a": 4})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    with pytest.raises(StillOpen):
        engine.tally(proposal["proposal_id"])


def test_tally_quorum_and_acceptance(engine):
    # total weight 9, quorum ceil(9/3)=3, yes=3 no=0 -> accepted
    grant_gt(engine, {"a": 3, "b": 3, "c": 3})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    engine.vote(proposal["proposal_id"], "a", "Yes")
    close_voting(engine, proposal)
    outcome = engine.tally(proposal["proposal_id"])
    assert outcome == {
        "proposal_id": proposal["proposal_id"],
        "accepted": True,
        "yes": 3,
        "no": 0,
        "abstain": 0,
        "quorum_met": True,
    }


def test_tie_rejects_even_with_quorum(engine):
    grant_gt(engine, {"a": 3, "b": 3})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    engine.vote(proposal["proposal_id"], "a", "Yes")
    engine.vote(proposal["proposal_id"], "b", "No")
    close_voting(engine, proposal)
    outcome = engine.tally(proposal["proposal_id"])
    assert outcome["quorum_met"] is True
    assert outcome["accepted"] is False


def test_missed_quorum_rejects(engine):
    # cast 2 of total 9 < quorum 3
    grant_gt(engine, {"a": 2, "b": 7})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    engine.vote(proposal["proposal_id"], "a", "Yes")
    close_voting(engine, proposal)
    outcome = engine.tally(proposal["proposal_id"])
    assert outcome["quorum_met"] is False
    assert outcome["accepted"] is False


def test_abstain_counts_toward_quorum_only(engine):
    grant_gt(engine, {"a": 1, "b": 8})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    engine.vote(proposal["proposal_id"], "a", "Yes")
    engine.vote(proposal["proposal_id"], "b", "Abstain")
    close_voting(engine, proposal)
    outcome = engine.tally(proposal["proposal_id"])
    assert outcome["quorum_met"] is True  # 9 cast >= 3
    assert outcome["accepted"] is True  # yes 1 > no 0


def test_execute_reward_grant(engine):
    grant_gt(engine, {"a": 3})
    proposal = engine.propose("a", "RewardGrant", {"recipient": "helper", "token_type": "UT", "amount": 5})
    engine.vote(proposal["proposal_id"], "a", "Yes")
    close_voting(engine, proposal)
    engine.tally(proposal["proposal_id"])
    before = engine.balance("helper", "UT")
    engine.execute(proposal["proposal_id"])
    assert engine.balance("helper", "UT") == before + 5
    with pytest.raises(AlreadyExecuted):
        engine.execute(proposal["proposal_id"])


def test_execute_rejected_proposal(engine):
    grant_gt(engine, {"a": 3})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "x", "document": {}})
    close_voting(engine, proposal)
    engine.tally(proposal["proposal_id"])  # no votes -> rejected
    with pytest.raises(NotAccepted):
        engine.execute(proposal["proposal_id"])


def test_execute_policy_update_versions(engine):
    grant_gt(engine, {"a": 3})
    for version in (1, 2):
        proposal = engine.propose("a", "PolicyUpdate", {"policy": "conduct", "document": {"rev": version}})
        engine.vote(proposal["proposal_id"], "a", "Yes")
        close_voting(engine, proposal)
        engine.tally(proposal["proposal_id"])
        engine.execute(proposal["proposal_id"])
    assert engine.governance.policy_store.policies["conduct"] == [{"rev": 1}, {"rev": 2}]
    assert engine.governance.policy_store.current("conduct") == {"rev": 2}


def test_execute_content_moderation_flag(engine):
    grant_gt(engine, {"a": 3})
    proposal = engine.propose("a", "ContentModeration", {"target": "post-9", "action": "remove"})
    engine.vote(proposal["proposal_id"], "a", "Yes")
    close_voting(engine, proposal)
    engine.tally(proposal["proposal_id"])
    engine.execute(proposal["proposal_id"])
    assert engine.governance.moderation_flags == {"post-9": "remove"}


def test_each_governance_step_appends_one_record(engine):
    grant_gt(engine, {"a": 3})
    marks = [len(engine.ledger)]
    proposal = engine.propose("a", "ResourceAllocation", {"resource": "fund", "recipient": "ngo", "amount": 2})
    marks.append(len(engine.ledger))
    engine.vote(proposal["proposal_id"], "a", "Yes")
    marks.append(len(engine.ledger))
    close_voting(engine, proposal)
    engine.tally(proposal["proposal_id"])
    marks.append(len(engine.ledger))
    engine.execute(proposal["proposal_id"])
    marks.append(len(engine.ledger))
    assert [b - a for a, b in zip(marks, marks[1:])] == [1, 1, 1, 1]


# -- brute-force recount oracle ---------------------------------------------------


def recount(snapshot, votes):
    """Independent tally: recount every vote at snapshot weight."""
    yes = sum(snapshot[v] for v, c in votes.items() if c == "Yes")
    no = sum(snapshot[v] for v, c in votes.items() if c == "No")
    abstain = sum(snapshot[v] for v, c in votes.items() if c == "Abstain")
    total = sum(snapshot.values())
    quorum_met = (yes + no + abstain) >= math.ceil(total / 3)
    return {"yes": yes, "no": no, "abstain": abstain, "quorum_met": quorum_met,
            "accepted": quorum_met and yes > no}


def run_random_tally(weights, votes):
    engine = Engine(EngineConfig())
    grant_gt(engine, weights)
    proposer = next(iter(weights))
    proposal = engine.propose(proposer, "PolicyUpdate", {"policy": "p", "document": {}})
    for voter, choice in votes.items():
        engine.vote(proposal["proposal_id"], voter, choice)
    close_voting(engine, proposal)
    return engine.tally(proposal["proposal_id"])


def test_tally_matches_brute_force_recount():
    rng = random.Random(20260808)
    for _ in range(60):
        n = rng.randint(1, 6)
        weights = {f"v{i}": rng.randint(1, 10) for i in range(n)}
        votes = {
            f"v{i}": rng.choice(["Yes", "No", "Abstain"])
            for i in range(n)
            if rng.random() < 0.7
        }
        outcome = run_random_tally(weights, votes)
        expected = recount(weights, votes)
        assert {k: outcome[k] for k in expected} == expected


def test_snapshot_isolation_under_mid_vote_transfers():
    engine = Engine(EngineConfig())
    grant_gt(engine, {"a": 6, "b": 3})
    proposal = engine.propose("a", "PolicyUpdate", {"policy": "p", "document": {}})
    engine.transfer("GT", "a", "b", amount=6)  # post-snapshot shuffle
    engine.mint("GT", "c", amount=50)
    vote = engine.vote(proposal["proposal_id"], "a", "Yes")
    assert vote["weight"] == 6
    engine.vote(proposal["proposal_id"], "b", "No")
    close_voting(engine, proposal)
    outcome = engine.tally(proposal["proposal_id"])
    assert (outcome["yes"], outcome["no"]) == (6, 3)
    assert outcome["accepted"] is True


def test_weight_scaling_preserves_outcomes():
    rng = random.Random(5150)
    for _ in range(20):
        n = rng.randint(1, 5)
        weights = {f"v{i}": rng.randint(1, 8) for i in range(n)}
        votes = {f"v{i}": rng.choice(["Yes", "No", "Abstain"]) for i in range(n) if rng.random() < 0.8}
        base = run_random_tally(weights, votes)
        for k in (2, 7):
            scaled = run_random_tally({v: w * k for v, w in weights.items()}, votes)
            assert scaled["accepted"] == base["accepted"]
            assert scaled["quorum_met"] == base["quorum_met"]
