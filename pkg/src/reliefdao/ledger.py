"""Append-only, hash-chained transaction log plus the 77-kind catalog.

The chain format is a wire contract:

* ``payload_digest`` is SHA-256 of the raw payload bytes.
* Each record's ``hash`` is SHA-256 over the length-prefixed concatenation
  of its fields in declared order: seq and logical_time as 8-byte
  big-endian unsigned ints, the kind as ``"<Component>:<local_id>"`` UTF-8,
  actor_ids and component_ids as count-prefixed lists of length-prefixed
  UTF-8 items, then the raw 32-byte payload_digest and prev_hash. Every
  variable-length field carries a 4-byte big-endian length prefix, so the
  encoding is unambiguous and re-implementable from this description.
* ``prev_hash`` of record 0 is 32 zero bytes; record N links to N-1.

Records are immutable once appended; verification is a report, never an
exception. The on-disk format is one canonical JSON object per line with
keys in the order: seq, logical_time, component, local_id, actor_ids,
component_ids, payload_digest, prev_hash, hash (digests lowercase hex).
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Callable, Iterable, Optional, Sequence

from .errors import LedgerSealed, UnknownKind

GENESIS_HASH = b"\x00" * 32


class Component(str, Enum):
    PREVENTER = "Preventer"
    ROLES_MANAGER = "RolesManager"
    AID_PROVIDER = "AidProvider"
    HELP_ACTIVATOR = "HelpActivator"


@dataclass(frozen=True)
class TransactionKind:
    """One catalogued on-chain transaction type."""

    component: Component
    local_id: int
    description: str
    stakeholders: tuple[str, ...]
    info_exchanged: str

    @property
    def key(self) -> tuple[str, int]:
        return (self.component.value, self.local_id)


class Catalog:
    """The fixed transaction vocabulary; exactly 77 kinds."""

    def __init__(self, kinds: Iterable[TransactionKind]):
        self._by_key: dict[tuple[str, int], TransactionKind] = {}
        for kind in kinds:
            if kind.key in self._by_key:
                raise ValueError(f"duplicate catalog key {kind.key}")
            self._by_key[kind.key] = kind

    @classmethod
    def load_default(cls) -> "Catalog":
        raw = resources.files("reliefdao.data").joinpath("catalog.json").read_text("utf-8")
        kinds = [
            TransactionKind(
                component=Component(e["component"]),
                local_id=e["local_id"],
                description=e["description"],
                stakeholders=tuple(e["stakeholders"]),
                info_exchanged=e["info_exchanged"],
            )
            for e in json.loads(raw)
        ]
        return cls(kinds)

    def lookup(self, component: Component | str, local_id: int) -> TransactionKind:
        key = (Component(component).value, local_id)
        try:
            return self._by_key[key]
        except KeyError:
            raise UnknownKind(f"no catalogued transaction {key}") from None

    def __contains__(self, key: tuple[str, int]) -> bool:
        return key in self._by_key

    def __len__(self) -> int:
        return len(self._by_key)

    def __iter__(self):
        order = {c: i for i, c in enumerate(Component)}
        return iter(sorted(self._by_key.values(), key=lambda k: (order[k.component], k.local_id)))


@dataclass(frozen=True)
class TransactionRecord:
    seq: int
    logical_time: int
    kind: TransactionKind
    actor_ids: tuple[str, ...]
    component_ids: tuple[str, ...]
    payload_digest: bytes
    prev_hash: bytes
    hash: bytes

    def to_json_obj(self) -> dict:
        # key order here is the persisted line format
        return {
            "seq": self.seq,
            "logical_time": self.logical_time,
            "component": self.kind.component.value,
            "local_id": self.kind.local_id,
            "actor_ids": list(self.actor_ids),
            "component_ids": list(self.component_ids),
            "payload_digest": self.payload_digest.hex(),
            "prev_hash": self.prev_hash.hex(),
            "hash": self.hash.hex(),
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))


@dataclass
class IntegrityReport:
    ok: bool
    first_bad_seq: Optional[int] = None


def _prefixed(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


def _prefixed_list(items: Sequence[str]) -> bytes:
    out = struct.pack(">I", len(items))
    for item in items:
        out += _prefixed(item.encode("utf-8"))
    return out


def serialize_for_hash(
    seq: int,
    logical_time: int,
    kind_key: tuple[str, int],
    actor_ids: Sequence[str],
    component_ids: Sequence[str],
    payload_digest: bytes,
    prev_hash: bytes,
) -> bytes:
    """Canonical byte serialization hashed into a record's ``hash``."""
    parts = [
        _prefixed(struct.pack(">Q", seq)),
        _prefixed(struct.pack(">Q", logical_time)),
        _prefixed(f"{kind_key[0]}:{kind_key[1]}".encode("utf-8")),
        _prefixed(_prefixed_list(actor_ids)),
        _prefixed(_prefixed_list(component_ids)),
        _prefixed(payload_digest),
        _prefixed(prev_hash),
    ]
    return b"".join(parts)


def record_hash(
    seq: int,
    logical_time: int,
    kind_key: tuple[str, int],
    actor_ids: Sequence[str],
    component_ids: Sequence[str],
    payload_digest: bytes,
    prev_hash: bytes,
) -> bytes:
    return hashlib.sha256(
        serialize_for_hash(seq, logical_time, kind_key, actor_ids, component_ids, payload_digest, prev_hash)
    ).digest()


def payload_digest(payload: bytes) -> bytes:
    return hashlib.sha256(payload).digest()


class Ledger:
    """Single-writer append-only chain.

    ``clock`` supplies the logical time of each append; callers inject it so
    identical append sequences produce byte-identical ledgers. ``on_append``
    is the persistence hook (one call per durable record).
    """

    def __init__(
        self,
        catalog: Catalog,
        clock: Callable[[], int],
        on_append: Optional[Callable[[TransactionRecord], None]] = None,
    ):
        self.catalog = catalog
        self._clock = clock
        self._on_append = on_append
        self.records: list[TransactionRecord] = []
        # raw payload bytes by digest; the chain itself carries digests only
        self.payload_store: dict[bytes, bytes] = {}
        self._sealed = False

    def __len__(self) -> int:
        return len(self.records)

    def seal(self) -> None:
        self._sealed = True

    @property
    def sealed(self) -> bool:
        return self._sealed

    def append_transaction(
        self,
        kind_ref: tuple[str, int],
        actor_ids: Sequence[str],
        component_ids: Sequence[str],
        payload: bytes,
    ) -> TransactionRecord:
        if self._sealed:
            raise LedgerSealed("ledger is sealed; no further appends accepted")
        kind = self.catalog.lookup(kind_ref[0], kind_ref[1])
        seq = len(self.records)
        prev_hash = self.records[-1].hash if self.records else GENESIS_HASH
        logical_time = self._clock()
        digest = payload_digest(payload)
        actors = tuple(actor_ids)
        components = tuple(component_ids)
        h = record_hash(seq, logical_time, kind.key, actors, components, digest, prev_hash)
        record = TransactionRecord(
            seq=seq,
            logical_time=logical_time,
            kind=kind,
            actor_ids=actors,
            component_ids=components,
            payload_digest=digest,
            prev_hash=prev_hash,
            hash=h,
        )
        self.records.append(record)
        self.payload_store[digest] = payload
        if self._on_append is not None:
            self._on_append(record)
        return record

    def payload_of(self, digest: bytes) -> bytes:
        return self.payload_store[digest]

    def verify_chain(self) -> IntegrityReport:
        prev = GENESIS_HASH
        for i, rec in enumerate(self.records):
            expected = record_hash(
                rec.seq,
                rec.logical_time,
                rec.kind.key,
                rec.actor_ids,
                rec.component_ids,
                rec.payload_digest,
                rec.prev_hash,
            )
            if rec.seq != i or rec.prev_hash != prev or rec.hash != expected:
                return IntegrityReport(ok=False, first_bad_seq=i)
            prev = rec.hash
        return IntegrityReport(ok=True)

    def query(
        self,
        component: Optional[str] = None,
        actor_id: Optional[str] = None,
        kind: Optional[tuple[str, int]] = None,
        time_range: Optional[tuple[int, int]] = None,
        component_id: Optional[str] = None,
    ) -> list[TransactionRecord]:
        """Filtered scan in seq order; empty filter returns every record.

        ``component`` filters on the record kind's component; ``component_id``
        on membership in the record's component_ids tags (used for per-case
        and per-subsystem queries).
        """
        out = []
        for rec in self.records:
            if component is not None and rec.kind.component.value != Component(component).value:
                continue
            if actor_id is not None and actor_id not in rec.actor_ids:
                continue
            if kind is not None and rec.kind.key != (Component(kind[0]).value, kind[1]):
                continue
            if time_range is not None and not (time_range[0] <= rec.logical_time <= time_range[1]):
                continue
            if component_id is not None and component_id not in rec.component_ids:
                continue
            out.append(rec)
        return out


def record_from_json_obj(obj: dict, catalog: Catalog) -> TransactionRecord:
    kind = catalog.lookup(obj["component"], obj["local_id"])
    return TransactionRecord(
        seq=obj["seq"],
        logical_time=obj["logical_time"],
        kind=kind,
        actor_ids=tuple(obj["actor_ids"]),
        component_ids=tuple(obj["component_ids"]),
        payload_digest=bytes.fromhex(obj["payload_digest"]),
        prev_hash=bytes.fromhex(obj["prev_hash"]),
        hash=bytes.fromhex(obj["hash"]),
    )
