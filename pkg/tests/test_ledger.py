"""Chain, catalog, and query behavior of the audit ledger."""

import hashlib
import random
import struct
from dataclasses import replace

import pytest

from reliefdao.errors import LedgerSealed, UnknownKind
from reliefdao.ledger import GENESIS_HASH, Component


def independent_record_hash(rec):
    """Recompute a record hash from the documented wire format only."""

    def pre(data: bytes) -> bytes:
        return struct.pack(">I", len(data)) + data

    def str_list(items) -> bytes:
        out = struct.pack(">I", len(items))
        for item in items:
            out += pre(item.encode("utf-8"))
        return out

    buf = b"".join(
        [
            pre(struct.pack(">Q", rec.seq)),
            pre(struct.pack(">Q", rec.logical_time)),
            pre(f"{rec.kind.component.value}:{rec.kind.local_id}".encode("utf-8")),
            pre(str_list(rec.actor_ids)),
            pre(str_list(rec.component_ids)),
            pre(rec.payload_digest),
            pre(rec.prev_hash),
        ]
    )
    return hashlib.sha256(buf).digest()


# -- catalog ---------------------------------------------------------------


def test_catalog_has_exactly_77_kinds(catalog):
    assert len(catalog) == 77
    counts = {}
    for kind in catalog:
        counts[kind.component.value] = counts.get(kind.component.value, 0) + 1
    assert counts == {"Preventer": 38, "RolesManager": 8, "AidProvider": 19, "HelpActivator": 12}


def test_catalog_local_ids_are_dense(catalog):
    expected = {"Preventer": 38, "RolesManager": 8, "AidProvider": 19, "HelpActivator": 12}
    for component, top in expected.items():
        ids = sorted(k.local_id for k in catalog if k.component.value == component)
        assert ids == list(range(1, top + 1))


def test_catalog_spot_rows(catalog):
    entry = catalog.lookup("Preventer", 1)
    assert entry.description == "Transfer of educational content"
    assert entry.info_exchanged == "Educational content, progress data"
    assert catalog.lookup("RolesManager", 4).description == "Security Report"
    aid19 = catalog.lookup("AidProvider", 19)
    assert aid19.description == "Victim chat support"
    assert aid19.info_exchanged == "Sextortion details, assistance"
    assert catalog.lookup("HelpActivator", 1).description == "Mental health self-assessment"


def test_catalog_lookup_past_end(catalog):
    with pytest.raises(UnknownKind):
        catalog.lookup("HelpActivator", 13)


def test_catalog_keeps_duplicate_descriptions_distinct(catalog):
    # same wording, distinct rows by local_id
    assert catalog.lookup("Preventer", 25).description == catalog.lookup("Preventer", 27).description
    assert ("Preventer", 25) in catalog and ("Preventer", 27) in catalog


# -- append / chain -----------------------------------------------------------


def test_genesis_record(ledger):
    rec = ledger.append_transaction(("Preventer", 1), ["educator-1"], ["sextortion_preventer"], b"hello")
    assert rec.seq == 0
    assert rec.prev_hash == GENESIS_HASH
    assert rec.payload_digest == hashlib.sha256(b"hello").digest()


def test_roles_manager_append_carries_catalog_row(ledger):
    rec = ledger.append_transaction(("RolesManager", 1), ["rm", "onboarder"], ["roles_manager"], b"{}")
    assert rec.kind.description == "Role Creation"
    assert rec.kind.info_exchanged == "Role details, responsibilities, actor assignment"


def test_stored_hash_matches_independent_recomputation(ledger):
    for i in range(5):
        ledger.append_transaction(("AidProvider", 9), [f"victim-{i}"], ["aid"], f"payload-{i}".encode())
    for rec in ledger.records:
        assert rec.hash == independent_record_hash(rec)


def test_append_unknown_kind(ledger):
    with pytest.raises(UnknownKind):
        ledger.append_transaction(("Preventer", 39), [], [], b"")


def test_sealed_ledger_rejects_appends(ledger):
    ledger.append_transaction(("Preventer", 1), [], [], b"x")
    ledger.seal()
    with pytest.raises(LedgerSealed):
        ledger.append_transaction(("Preventer", 1), [], [], b"y")
    assert len(ledger) == 1


def test_empty_chain_verifies(ledger):
    assert ledger.verify_chain().ok is True


def test_untouched_chain_verifies_by_brute_recomputation(ledger):
    for i in range(10):
        ledger.append_transaction(("Preventer", (i % 38) + 1), [f"a{i}"], ["c"], bytes([i]))
    report = ledger.verify_chain()
    assert report.ok is True and report.first_bad_seq is None
    # brute-force: every link and every digest, recomputed independently
    prev = GENESIS_HASH
    for rec in ledger.records:
        assert rec.prev_hash == prev
        assert independent_record_hash(rec) == rec.hash
        prev = rec.hash


def test_tampered_payload_digest_detected(ledger):
    for i in range(8):
        ledger.append_transaction(("Preventer", 2), [f"a{i}"], [], bytes([i]))
    victim = ledger.records[4]
    mutated = bytearray(victim.payload_digest)
    mutated[0] ^= 0xFF
    ledger.records[4] = replace(victim, payload_digest=bytes(mutated))
    report = ledger.verify_chain()
    assert report.ok is False
    assert report.first_bad_seq == 4


def test_single_byte_tamper_any_field_localizes(ledger, make_ledger):
    rng = random.Random(20260809)
    for trial in range(25):
        lg = make_ledger()
        n = rng.randint(1, 12)
        for i in range(n):
            lg.append_transaction(
                ("AidProvider", rng.randint(1, 19)),
                [f"actor-{rng.randint(0, 3)}"],
                ["aid"],
                rng.randbytes(rng.randint(0, 20)),
            )
        target = rng.randrange(n)
        rec = lg.records[target]
        field = rng.choice(["payload_digest", "prev_hash", "hash", "logical_time", "actor_ids"])
        if field == "logical_time":
            lg.records[target] = replace(rec, logical_time=rec.logical_time + 1)
        elif field == "actor_ids":
            lg.records[target] = replace(rec, actor_ids=rec.actor_ids + ("intruder",))
        else:
            blob = bytearray(getattr(rec, field))
            blob[rng.randrange(len(blob))] ^= 1 << rng.randrange(8)
            lg.records[target] = replace(rec, **{field: bytes(blob)})
        report = lg.verify_chain()
        assert report.ok is False
        assert report.first_bad_seq == target


# -- query ---------------------------------------------------------------------


def test_query_empty_ledger(ledger):
    assert ledger.query() == []
    assert ledger.query(actor_id="nobody") == []


def test_query_by_actor_matches_linear_scan(ledger):
    rng = random.Random(7)
    actors = ["victim-1", "psy-1", "legal-1"]
    for i in range(30):
        ledger.append_transaction(("Preventer", 1), [rng.choice(actors)], [], bytes([i]))
    got = ledger.query(actor_id="victim-1")
    expected = [r for r in ledger.records if "victim-1" in r.actor_ids]
    assert got == expected
    assert [r.seq for r in got] == sorted(r.seq for r in got)


def test_query_by_component_returns_only_that_kind(ledger):
    ledger.append_transaction(("Preventer", 1), [], [], b"a")
    ledger.append_transaction(("RolesManager", 1), [], [], b"b")
    ledger.append_transaction(("RolesManager", 3), [], [], b"c")
    ledger.append_transaction(("AidProvider", 10), [], [], b"d")
    got = ledger.query(component="RolesManager")
    assert [r.seq for r in got] == [1, 2]
    assert all(r.kind.component is Component.ROLES_MANAGER for r in got)


def test_query_by_kind_and_time_range(ledger):
    for i in range(6):
        ledger.append_transaction(("HelpActivator", 1 + (i % 2)), [], [], bytes([i]))
    by_kind = ledger.query(kind=("HelpActivator", 1))
    assert [r.seq for r in by_kind] == [0, 2, 4]
    window = ledger.query(time_range=(1, 3))
    assert [r.logical_time for r in window] == [1, 2, 3]


def test_query_empty_filter_returns_all(ledger):
    for i in range(4):
        ledger.append_transaction(("Preventer", 5), [], [], bytes([i]))
    assert ledger.query() == ledger.records


# -- properties --------------------------------------------------------------------


def test_chain_valid_after_any_number_of_appends(make_ledger):
    rng = random.Random(99)
    for n in (0, 1, 2, 5, 17):
        lg = make_ledger()
        for i in range(n):
            lg.append_transaction(("Preventer", rng.randint(1, 38)), [f"a{i}"], [], rng.randbytes(8))
        assert lg.verify_chain().ok is True
        assert len(lg) == n


def test_identical_append_sequences_are_byte_identical(make_ledger):
    def build():
        lg = make_ledger()
        lg.append_transaction(("RolesManager", 1), ["rm"], ["roles_manager"], b"alpha")
        lg.append_transaction(("AidProvider", 19), ["victim-1"], ["aid"], b"beta")
        lg.append_transaction(("HelpActivator", 6), ["victim-1"], ["help"], b"gamma")
        return "\n".join(r.to_line() for r in lg.records)

    assert build() == build()


def test_payload_store_resolves_digests(ledger):
    rec = ledger.append_transaction(("Preventer", 3), [], [], b"feedback body")
    assert ledger.payload_of(rec.payload_digest) == b"feedback body"
