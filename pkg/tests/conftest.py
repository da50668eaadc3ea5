import itertools

import pytest

from reliefdao.engine import Engine, EngineConfig
from reliefdao.ledger import Catalog, Ledger


@pytest.fixture
def catalog():
    return Catalog.load_default()


@pytest.fixture
def make_ledger(catalog):
    def factory():
        counter = itertools.count()
        return Ledger(catalog, clock=lambda: next(counter))

    return factory


@pytest.fixture
def ledger(make_ledger):
    return make_ledger()


@pytest.fixture
def engine():
    return Engine(EngineConfig())


def passed_session(engine, actor_id, secret="open-sesame"):
    """Open and pass a one-challenge identity session for the actor."""
    import hashlib

    cs = engine.create_challenge_set(
        context=f"auth for {actor_id}",
        challenges=[
            {
                "challenge_id": f"c-{actor_id}-{engine.clock.peek()}",
                "kind": "SecretDigest",
                "expected": hashlib.sha256(secret.encode()).hexdigest(),
                "prompt": "shared secret",
            }
        ],
        policy="All",
    )
    session = engine.open_session(actor_id, cs["set_id"])
    challenge_id = cs["challenges"][0]["challenge_id"]
    engine.submit_response(session["session_id"], challenge_id, response_text=secret)
    decision = engine.evaluate(session["session_id"])
    assert decision["passed"]
    return session["session_id"]


def onboard_actor(engine, actor_id, role_name):
    passed_session(engine, actor_id)
    return engine.onboard(actor_id, role_name)
