"""Four-token economy: fungible GT/UT balances, unique NFTs, soulbound SBTs.

TokenBank is a pure state machine — no ledger coupling, no clocks — so the
conservation and ownership invariants can be tested in isolation. The engine
pairs each mutation with its ledger record.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import (
    DuplicateContent,
    InsufficientBalance,
    NotOwner,
    SoulboundViolation,
    UnknownAsset,
    ZeroAmount,
)

MAX_AMOUNT = 2**64 - 1


class TokenType(str, Enum):
    GT = "GT"
    UT = "UT"
    NFT = "NFT"
    SBT = "SBT"

    @property
    def fungible(self) -> bool:
        return self in (TokenType.GT, TokenType.UT)


@dataclass
class TokenAccount:
    actor_id: str
    gt_balance: int = 0
    ut_balance: int = 0
    nft_assets: set[str] = field(default_factory=set)
    sbt_assets: set[str] = field(default_factory=set)

    def balance(self, token_type: TokenType) -> int:
        return self.gt_balance if token_type is TokenType.GT else self.ut_balance


@dataclass
class TokenAsset:
    asset_id: str
    token_type: TokenType
    content_digest: Optional[bytes] = None
    bound_actor: Optional[str] = None  # SBT only
    mandatory: bool = False  # SBT only; mirrors the role's sbt_required flag


@dataclass
class MintReceipt:
    token_type: TokenType
    recipient: str
    amount: Optional[int] = None
    asset_id: Optional[str] = None


class TokenBank:
    def __init__(self):
        self.accounts: dict[str, TokenAccount] = {}
        self.assets: dict[str, TokenAsset] = {}
        # global evidence uniqueness: one NFT per content digest, ever
        self.content_index: dict[bytes, str] = {}
        self._asset_seq = 0

    def account(self, actor_id: str) -> TokenAccount:
        if actor_id not in self.accounts:
            self.accounts[actor_id] = TokenAccount(actor_id=actor_id)
        return self.accounts[actor_id]

    def _next_asset_id(self, token_type: TokenType) -> str:
        self._asset_seq += 1
        return f"{token_type.value.lower()}-{self._asset_seq}"

    def mint_fungible(self, token_type: TokenType, recipient: str, amount: int) -> MintReceipt:
        if not token_type.fungible:
            raise ValueError(f"{token_type} is not fungible")
        if amount <= 0:
            raise ZeroAmount("mint amount must be positive")
        acct = self.account(recipient)
        if token_type is TokenType.GT:
            acct.gt_balance += amount
        else:
            acct.ut_balance += amount
        return MintReceipt(token_type=token_type, recipient=recipient, amount=amount)

    def mint_nft(self, recipient: str, content_digest: bytes) -> MintReceipt:
        if content_digest in self.content_index:
            raise DuplicateContent(
                f"content digest {content_digest.hex()[:16]}… already anchored as "
                f"{self.content_index[content_digest]}"
            )
        asset_id = self._next_asset_id(TokenType.NFT)
        self.assets[asset_id] = TokenAsset(
            asset_id=asset_id, token_type=TokenType.NFT, content_digest=content_digest
        )
        self.content_index[content_digest] = asset_id
        self.account(recipient).nft_assets.add(asset_id)
        return MintReceipt(token_type=TokenType.NFT, recipient=recipient, asset_id=asset_id)

    def mint_sbt(self, recipient: str, label: str, mandatory: bool = False) -> MintReceipt:
        asset_id = self._next_asset_id(TokenType.SBT)
        self.assets[asset_id] = TokenAsset(
            asset_id=asset_id,
            token_type=TokenType.SBT,
            content_digest=hashlib.sha256(label.encode("utf-8")).digest(),
            bound_actor=recipient,
            mandatory=mandatory,
        )
        self.account(recipient).sbt_assets.add(asset_id)
        return MintReceipt(token_type=TokenType.SBT, recipient=recipient, asset_id=asset_id)

    def transfer_fungible(self, token_type: TokenType, src: str, dst: str, amount: int) -> None:
        if not token_type.fungible:
            raise ValueError(f"{token_type} is not fungible")
        if amount <= 0:
            raise ZeroAmount("transfer amount must be positive")
        src_acct = self.account(src)
        if src_acct.balance(token_type) < amount:
            raise InsufficientBalance(
                f"{src} holds {src_acct.balance(token_type)} {token_type.value}, needs {amount}"
            )
        if src == dst:
            return  # self-transfer identity
        dst_acct = self.account(dst)
        if token_type is TokenType.GT:
            src_acct.gt_balance -= amount
            dst_acct.gt_balance += amount
        else:
            src_acct.ut_balance -= amount
            dst_acct.ut_balance += amount

    def transfer_asset(self, src: str, dst: str, asset_id: str) -> None:
        asset = self.assets.get(asset_id)
        if asset is None:
            raise UnknownAsset(f"no asset {asset_id}")
        if asset.token_type is TokenType.SBT:
            raise SoulboundViolation(f"{asset_id} is soulbound to {asset.bound_actor}")
        src_acct = self.account(src)
        if asset_id not in src_acct.nft_assets:
            raise NotOwner(f"{src} does not own {asset_id}")
        if src == dst:
            return
        src_acct.nft_assets.discard(asset_id)
        self.account(dst).nft_assets.add(asset_id)

    def owner_of(self, asset_id: str) -> str:
        asset = self.assets.get(asset_id)
        if asset is None:
            raise UnknownAsset(f"no asset {asset_id}")
        if asset.token_type is TokenType.SBT:
            return asset.bound_actor
        for acct in self.accounts.values():
            if asset_id in acct.nft_assets:
                return acct.actor_id
        raise UnknownAsset(f"asset {asset_id} has no owner")  # unreachable if invariants hold

    def balance(self, actor_id: str, token_type: TokenType):
        """Current holdings; unknown actors read as zero/empty."""
        acct = self.accounts.get(actor_id)
        if token_type.fungible:
            return acct.balance(token_type) if acct else 0
        if acct is None:
            return set()
        return set(acct.nft_assets if token_type is TokenType.NFT else acct.sbt_assets)

    def total_supply(self, token_type: TokenType) -> int:
        if not token_type.fungible:
            raise ValueError("total_supply is defined for fungibles")
        attr = "gt_balance" if token_type is TokenType.GT else "ut_balance"
        return sum(getattr(a, attr) for a in self.accounts.values())

    def snapshot(self) -> dict:
        """Canonical JSON-safe snapshot with deterministic key order."""
        return {
            "accounts": {
                actor: {
                    "gt_balance": acct.gt_balance,
                    "ut_balance": acct.ut_balance,
                    "nft_assets": sorted(acct.nft_assets),
                    "sbt_assets": sorted(acct.sbt_assets),
                }
                for actor, acct in sorted(self.accounts.items())
            },
            "assets": {
                asset_id: {
                    "token_type": asset.token_type.value,
                    "content_digest": asset.content_digest.hex() if asset.content_digest else None,
                    "bound_actor": asset.bound_actor,
                    "mandatory": asset.mandatory,
                }
                for asset_id, asset in sorted(self.assets.items())
            },
            "asset_seq": self._asset_seq,
        }

    def restore(self, snap: dict) -> None:
        self.accounts.clear()
        self.assets.clear()
        self.content_index.clear()
        for actor, a in snap["accounts"].items():
            self.accounts[actor] = TokenAccount(
                actor_id=actor,
                gt_balance=a["gt_balance"],
                ut_balance=a["ut_balance"],
                nft_assets=set(a["nft_assets"]),
                sbt_assets=set(a["sbt_assets"]),
            )
        for asset_id, a in snap["assets"].items():
            asset = TokenAsset(
                asset_id=asset_id,
                token_type=TokenType(a["token_type"]),
                content_digest=bytes.fromhex(a["content_digest"]) if a["content_digest"] else None,
                bound_actor=a["bound_actor"],
                mandatory=a["mandatory"],
            )
            self.assets[asset_id] = asset
            if asset.token_type is TokenType.NFT and asset.content_digest:
                self.content_index[asset.content_digest] = asset_id
        self._asset_seq = snap["asset_seq"]
