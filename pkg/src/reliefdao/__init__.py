"""Desk-scale, token-governed coordination engine for victim relief.

Subsystems: a hash-chained audit ledger with a fixed 77-kind transaction
catalog, a four-token economy (GT/UT/NFT/SBT), challenge-response identity
authentication, role lifecycle management, token-weighted governance, the
victim-relief case workflow, and deterministic diagnostic agents, exposed
as a library, an HTTP service, a CLI, and a scenario runner.
"""

from .engine import Engine, EngineConfig
from .errors import DaoError
from .ledger import Catalog, Component, Ledger, TransactionKind, TransactionRecord
from .tokens import TokenBank, TokenType

__all__ = [
    "Engine",
    "EngineConfig",
    "DaoError",
    "Catalog",
    "Component",
    "Ledger",
    "TransactionKind",
    "TransactionRecord",
    "TokenBank",
    "TokenType",
]

__version__ = "0.1.0"
