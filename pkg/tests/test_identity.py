"""Challenge-response lifecycle, policy evaluation, and ledger anchoring."""

import hashlib
import itertools
import json

import pytest

from reliefdao.errors import BadPolicy, EmptySet, SessionClosed, UnknownChallenge, UnknownSet


def digest_hex(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def make_set(engine, n, policy, prefix="q"):
    challenges = [
        {
            "challenge_id": f"{prefix}{i}",
            "kind": "SecretDigest",
            "expected": digest_hex(f"secret-{i}"),
            "prompt": f"secret {i}",
        }
        for i in range(n)
    ]
    return engine.create_challenge_set("test", challenges, policy)


def run_pattern(engine, set_id, n, pattern, actor="actor-x"):
    """Submit correct/incorrect responses per the boolean pattern and evaluate."""
    session = engine.open_session(actor, set_id)
    for i, correct in enumerate(pattern):
        text = f"secret-{i}" if correct else "wrong"
        engine.submit_response(session["session_id"], f"q{i}", response_text=text)
    return engine.evaluate(session["session_id"])


# -- lifecycle ----------------------------------------------------------------


def test_set_constructor_echo(engine):
    cs = make_set(engine, 3, "All")
    assert len(cs["challenges"]) == 3
    assert cs["policy"] == {"kind": "All"}


def test_mofn_bound_violation(engine):
    with pytest.raises(BadPolicy):
        make_set(engine, 3, {"kind": "MofN", "m": 4})
    with pytest.raises(BadPolicy):
        make_set(engine, 3, {"kind": "MofN", "m": 0})


def test_empty_set_rejected(engine):
    with pytest.raises(EmptySet):
        engine.create_challenge_set("ctx", [], "All")


def test_set_creation_appends_one_identity_record(engine):
    before = len(engine.ledger)
    make_set(engine, 2, "All")
    assert len(engine.ledger) == before + 1
    record = engine.ledger.records[-1]
    assert record.kind.key == ("RolesManager", 3)
    payload = json.loads(engine.ledger.payload_of(record.payload_digest))
    assert payload["event"] == "challenge_set_created"


def test_open_unknown_set(engine):
    with pytest.raises(UnknownSet):
        engine.open_session("a", "set-999")


def test_two_sessions_have_distinct_ids(engine):
    cs = make_set(engine, 1, "All")
    s1 = engine.open_session("a", cs["set_id"])
    s2 = engine.open_session("b", cs["set_id"])
    assert s1["session_id"] != s2["session_id"]


def test_submit_grows_ledger_by_one(engine):
    cs = make_set(engine, 1, "All")
    session = engine.open_session("a", cs["set_id"])
    before = len(engine.ledger)
    engine.submit_response(session["session_id"], "q0", response_text="secret-0")
    assert len(engine.ledger) == before + 1


def test_submit_to_unknown_challenge(engine):
    cs = make_set(engine, 1, "All")
    session = engine.open_session("a", cs["set_id"])
    with pytest.raises(UnknownChallenge):
        engine.submit_response(session["session_id"], "q9", response_text="x")


def test_submit_after_evaluate_rejected(engine):
    cs = make_set(engine, 1, "All")
    session = engine.open_session("a", cs["set_id"])
    engine.submit_response(session["session_id"], "q0", response_text="secret-0")
    engine.evaluate(session["session_id"])
    with pytest.raises(SessionClosed):
        engine.submit_response(session["session_id"], "q0", response_text="again")


def test_resubmission_replaces_before_evaluation(engine):
    cs = make_set(engine, 1, "All")
    session = engine.open_session("a", cs["set_id"])
    engine.submit_response(session["session_id"], "q0", response_text="wrong")
    engine.submit_response(session["session_id"], "q0", response_text="secret-0")
    decision = engine.evaluate(session["session_id"])
    assert decision["passed"] is True


def test_all_policy_every_correct_passes(engine):
    cs = make_set(engine, 3, "All")
    decision = run_pattern(engine, cs["set_id"], 3, (True, True, True))
    assert decision["passed"] is True
    assert decision["state"] == "Passed"


def test_failed_session_terminates_and_blocks(engine):
    cs = make_set(engine, 2, "All")
    session = engine.open_session("a", cs["set_id"])
    engine.submit_response(session["session_id"], "q0", response_text="secret-0")
    decision = engine.evaluate(session["session_id"])  # q1 missing -> fail
    assert decision["passed"] is False
    assert decision["state"] == "Terminated"
    with pytest.raises(SessionClosed):
        engine.submit_response(session["session_id"], "q1", response_text="secret-1")
    with pytest.raises(SessionClosed):
        engine.evaluate(session["session_id"])


def test_mofn_two_of_three(engine):
    cs = make_set(engine, 3, {"kind": "MofN", "m": 2})
    assert run_pattern(engine, cs["set_id"], 3, (True, True, False))["passed"] is True
    cs2 = make_set(engine, 3, {"kind": "MofN", "m": 2})
    assert run_pattern(engine, cs2["set_id"], 3, (True, False, False))["passed"] is False


def test_attribute_assertion_and_oracle_challenges(engine):
    challenges = [
        {"challenge_id": "attr", "kind": "AttributeAssertion", "expected": "blue", "prompt": "color"},
        {"challenge_id": "orc", "kind": "OracleAttestation", "expected": "registry-check", "prompt": ""},
    ]
    cs = engine.create_challenge_set("mixed", challenges, "All")
    session = engine.open_session("a", cs["set_id"])
    engine.submit_response(session["session_id"], "attr", response_text="blue")
    assert engine.evaluate(session["session_id"])["passed"] is True

    engine.oracle.set_verdict("registry-check", False)
    cs2 = engine.create_challenge_set("mixed", challenges, "All")
    session2 = engine.open_session("a", cs2["set_id"])
    engine.submit_response(session2["session_id"], "attr", response_text="blue")
    decision = engine.evaluate(session2["session_id"])
    assert decision["passed"] is False
    assert decision["per_challenge"] == {"attr": True, "orc": False}


# -- exhaustive small-case oracle ------------------------------------------------


def brute_force_passes(policy_kind, m, pattern):
    count = sum(pattern)
    return count == len(pattern) if policy_kind == "All" else count >= m


def test_exhaustive_policies_up_to_four_challenges(engine):
    for n in range(1, 5):
        policies = [("All", None)] + [("MofN", m) for m in range(1, n + 1)]
        for policy_kind, m in policies:
            policy = "All" if policy_kind == "All" else {"kind": "MofN", "m": m}
            for pattern in itertools.product((False, True), repeat=n):
                cs = make_set(engine, n, policy)
                decision = run_pattern(engine, cs["set_id"], n, pattern)
                expected = brute_force_passes(policy_kind, m, pattern)
                assert decision["passed"] is expected, (n, policy, pattern)
                state = engine.session_info(decision["session_id"])["state"]
                assert state == ("Passed" if expected else "Terminated")


def test_mofn_monotonicity(engine):
    # correcting one more response never flips a pass into a failure
    for n in range(1, 5):
        for m in range(1, n + 1):
            for pattern in itertools.product((False, True), repeat=n):
                for flip in range(n):
                    if pattern[flip]:
                        continue
                    improved = pattern[:flip] + (True,) + pattern[flip + 1:]
                    before = brute_force_passes("MofN", m, pattern)
                    after = brute_force_passes("MofN", m, improved)
                    assert not (before and not after)


def test_evaluation_is_deterministic(engine):
    cs1 = make_set(engine, 3, {"kind": "MofN", "m": 2})
    cs2 = make_set(engine, 3, {"kind": "MofN", "m": 2})
    d1 = run_pattern(engine, cs1["set_id"], 3, (True, False, True))
    d2 = run_pattern(engine, cs2["set_id"], 3, (True, False, True))
    assert d1["passed"] == d2["passed"]
    assert d1["per_challenge"] == d2["per_challenge"]


def test_ledger_replay_reconstructs_outcome(engine):
    cs = make_set(engine, 2, "All")
    decision = run_pattern(engine, cs["set_id"], 2, (True, True))
    evaluated = [
        json.loads(engine.ledger.payload_of(r.payload_digest))
        for r in engine.ledger.query(kind=("RolesManager", 3))
    ]
    outcomes = [p for p in evaluated if p["event"] == "session_evaluated"]
    assert outcomes[-1]["session_id"] == decision["session_id"]
    assert outcomes[-1]["passed"] is True
    assert outcomes[-1]["final_state"] == "Passed"


def test_raw_responses_never_reach_the_ledger(engine):
    cs = make_set(engine, 1, "All")
    session = engine.open_session("a", cs["set_id"])
    engine.submit_response(session["session_id"], "q0", response_text="secret-0")
    for record in engine.ledger.records:
        payload = engine.ledger.payload_of(record.payload_digest)
        assert b"secret-0" not in payload


def test_challenge_set_definition_file(engine, tmp_path):
    doc = {
        "set_id": "set-victims",
        "context": "victim intake",
        "policy": {"kind": "MofN", "m": 1},
        "challenges": [
            {"challenge_id": "c-a", "kind": "SecretDigest",
             "expected_hex_or_text": digest_hex("pw"), "prompt": "password"},
            {"challenge_id": "c-b", "kind": "AttributeAssertion",
             "expected_hex_or_text": "case-handle", "prompt": "handle"},
        ],
    }
    path = tmp_path / "set.json"
    path.write_text(json.dumps(doc))
    created = engine.create_challenge_set_from_file(path)
    assert created == {"set_id": "set-victims", "context": "victim intake", "challenges": 2}
    session = engine.open_session("a", "set-victims")
    engine.submit_response(session["session_id"], "c-a", response_text="pw")
    assert engine.evaluate(session["session_id"])["passed"] is True
    with pytest.raises(ValueError):
        engine.create_challenge_set_from_file(path)  # declared id already taken
