"""Append-only hash-chained ledger with duplicate detection, signature
checking at append time, tamper verification, and history queries."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from . import identity as ids
from .encoding import ZERO_DIGEST, canon, canon_json, digest_fields
from .errors import BadFormat, BadSignature, DuplicateContent, EmptyBatch


class TxKind(str, Enum):
    GENESIS = "Genesis"
    LISTING_POSTED = "ListingPosted"
    PAYMENT = "Payment"
    CONTRACT_ISSUED = "ContractIssued"
    DELIVERY_COMPLETED = "DeliveryCompleted"
    REWARD_GRANTED = "RewardGranted"
    PENALTY_IMPOSED = "PenaltyImposed"
    REFUND = "Refund"
    MINER_REGISTERED = "MinerRegistered"
    QUERY_SERVED = "QueryServed"


GENESIS_ACTOR = "00" * 32


def _check_payload(payload: dict) -> dict:
    # payloads carry only pseudonyms/digests and plain values, never identities
    for key, value in payload.items():
        if not isinstance(key, str) or not isinstance(value, (str, int)):
            raise BadFormat(f"payload field {key!r} must map str -> str|int")
    return dict(payload)


@dataclass
class Transaction:
    kind: TxKind
    actor: str
    counterparty: str | None
    payload: dict
    timestamp: int
    signature: bytes
    tx_id: str = ""

    def signing_bytes(self) -> bytes:
        return canon(
            "tx-sign",
            self.kind.value,
            self.actor,
            self.counterparty,
            canon_json(self.payload),
            self.timestamp,
        )

    def compute_id(self) -> str:
        return digest_fields(
            "tx",
            self.kind.value,
            self.actor,
            self.counterparty,
            canon_json(self.payload),
            self.timestamp,
            self.signature,
        )

    @classmethod
    def signed(
        cls,
        kind: TxKind,
        actor: ids.PseudonymousId,
        counterparty: str | None,
        payload: dict,
        timestamp: int,
    ) -> "Transaction":
        tx = cls(
            kind=kind,
            actor=actor.pseudonym,
            counterparty=counterparty,
            payload=_check_payload(payload),
            timestamp=timestamp,
            signature=b"",
        )
        tx.signature = ids.sign(actor, tx.signing_bytes())
        tx.tx_id = tx.compute_id()
        return tx

    def to_dict(self) -> dict:
        return {
            "tx_id": self.tx_id,
            "kind": self.kind.value,
            "actor": self.actor,
            "counterparty": self.counterparty,
            "payload": self.payload,
            "timestamp": self.timestamp,
            "signature": self.signature.hex(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Transaction":
        try:
            return cls(
                kind=TxKind(raw["kind"]),
                actor=raw["actor"],
                counterparty=raw["counterparty"],
                payload=_check_payload(raw["payload"]),
                timestamp=int(raw["timestamp"]),
                signature=bytes.fromhex(raw["signature"]),
                tx_id=raw["tx_id"],
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise BadFormat(f"bad transaction record: {exc}") from exc


@dataclass
class Block:
    index: int
    prev_hash: str
    timestamp: int
    transactions: list[Transaction]
    block_hash: str = ""

    def compute_hash(self) -> str:
        return digest_fields(
            "block",
            self.index,
            self.prev_hash,
            self.timestamp,
            *[tx.tx_id for tx in self.transactions],
        )

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "prev_hash": self.prev_hash,
            "timestamp": self.timestamp,
            "transactions": [tx.to_dict() for tx in self.transactions],
            "block_hash": self.block_hash,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Block":
        try:
            return cls(
                index=int(raw["index"]),
                prev_hash=raw["prev_hash"],
                timestamp=int(raw["timestamp"]),
                transactions=[Transaction.from_dict(t) for t in raw["transactions"]],
                block_hash=raw["block_hash"],
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise BadFormat(f"bad block record: {exc}") from exc


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    first_bad_index: int | None = None


def _genesis_block() -> Block:
    # fixed content so every chain shares a known root
    marker = Transaction(
        kind=TxKind.GENESIS,
        actor=GENESIS_ACTOR,
        counterparty=None,
        payload={},
        timestamp=0,
        signature=b"",
    )
    marker.tx_id = marker.compute_id()
    block = Block(index=0, prev_hash=ZERO_DIGEST, timestamp=0, transactions=[marker])
    block.block_hash = block.compute_hash()
    return block


class Chain:
    """Hash-chained block store. One exclusive appender; readers may verify
    or query any snapshot freely."""

    def __init__(self) -> None:
        self.blocks: list[Block] = [_genesis_block()]
        self.seen_digests: set[str] = set()
        self.key_registry: dict[str, bytes] = {}
        self.listings: dict[str, dict] = {}

    # -- identity plumbing -------------------------------------------------

    def register_key(self, pseudonym: str, public_key: bytes) -> None:
        self.key_registry[pseudonym] = bytes(public_key)

    def register_identity(self, identity: ids.PseudonymousId) -> None:
        self.register_key(identity.pseudonym, identity.public_key)

    # -- append ------------------------------------------------------------

    @property
    def tip(self) -> Block:
        return self.blocks[-1]

    def __len__(self) -> int:
        return len(self.blocks)

    def append_block(self, txs: Iterable[Transaction], now: int) -> Block:
        """Validate and append one block carrying the given transactions.

        The chain is left untouched when any transaction fails validation.
        """
        batch = list(txs)
        if not batch:
            raise EmptyBatch("a block must carry at least one transaction")
        for tx in batch:
            if tx.kind is TxKind.GENESIS:
                raise BadSignature("the genesis marker cannot be appended")
            public = self.key_registry.get(tx.actor)
            if public is None:
                raise BadSignature(f"no key registered for actor {tx.actor[:12]}")
            if tx.compute_id() != tx.tx_id:
                raise BadSignature("transaction id does not match its content")
            if not ids.verify(public, tx.signing_bytes(), tx.signature):
                raise BadSignature("transaction signature does not verify")
        fresh = set()
        for tx in batch:
            if tx.kind is TxKind.LISTING_POSTED:
                digest = tx.payload.get("listing")
                if digest in self.seen_digests or digest in fresh:
                    raise DuplicateContent(f"listing {str(digest)[:12]} already recorded")
                fresh.add(digest)
        block = Block(
            index=len(self.blocks),
            prev_hash=self.tip.block_hash,
            timestamp=now,
            transactions=batch,
        )
        block.block_hash = block.compute_hash()
        self.blocks.append(block)
        self.seen_digests |= fresh
        for tx in batch:
            if tx.kind is TxKind.LISTING_POSTED:
                self._index_listing(tx)
        return block

    def _index_listing(self, tx: Transaction) -> None:
        payload = tx.payload
        self.listings[payload["listing"]] = {
            "seller": tx.actor,
            "headline": payload.get("headline", ""),
            "teaser": payload.get("teaser", ""),
            "category": payload.get("category", ""),
            "price": int(payload.get("price", 0)),
            "size": int(payload.get("size", 0)),
            "tx_id": tx.tx_id,
        }

    # -- verification ------------------------------------------------------

    def verify_chain(self) -> VerifyReport:
        """Recompute every hash and link; report the first violating index.

        A report, never a failure: tampered chains yield valid=False.
        """
        for position, block in enumerate(self.blocks):
            ok = block.index == position
            if position == 0:
                ok = ok and block.prev_hash == ZERO_DIGEST
            else:
                ok = ok and block.prev_hash == self.blocks[position - 1].block_hash
            if ok:
                for tx in block.transactions:
                    if tx.compute_id() != tx.tx_id:
                        ok = False
                        break
            ok = ok and block.compute_hash() == block.block_hash
            if not ok:
                return VerifyReport(valid=False, first_bad_index=position)
        return VerifyReport(valid=True)

    # -- history -----------------------------------------------------------

    def transactions(self) -> Iterator[Transaction]:
        for block in self.blocks:
            yield from block.transactions

    def query_history(
        self,
        actor: str | None = None,
        kind: TxKind | None = None,
        listing: str | None = None,
        time_range: tuple[int, int] | None = None,
    ) -> list[Transaction]:
        """All and only transactions matching every supplied filter, in chain
        order. The listing filter matches the payload's listing digest."""
        matches = []
        for tx in self.transactions():
            if kind is not None and tx.kind is not kind:
                continue
            if actor is not None and tx.actor != actor:
                continue
            if listing is not None and tx.payload.get("listing") != listing:
                continue
            if time_range is not None:
                lo, hi = time_range
                if not lo <= tx.timestamp <= hi:
                    continue
            matches.append(tx)
        return matches

    # -- dump / load ---------------------------------------------------------

    def to_jsonl(self) -> str:
        """One JSON object per block, one block per line."""
        return "".join(canon_json(block.to_dict()) + "\n" for block in self.blocks)

    @classmethod
    def from_jsonl(cls, text: str) -> "Chain":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise BadFormat("empty ledger dump")
        records = []
        for n, line in enumerate(lines, start=1):
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise BadFormat(f"line {n}: {exc.msg}") from exc
        return cls.from_block_dicts(records)

    @classmethod
    def from_block_dicts(cls, records: list[dict]) -> "Chain":
        chain = cls.__new__(cls)
        chain.blocks = [Block.from_dict(raw) for raw in records]
        chain.seen_digests = set()
        chain.key_registry = {}
        chain.listings = {}
        if not chain.blocks:
            raise BadFormat("ledger has no blocks")
        for block in chain.blocks:
            for tx in block.transactions:
                if tx.kind is TxKind.LISTING_POSTED:
                    chain.seen_digests.add(tx.payload.get("listing"))
                    chain._index_listing(tx)
        return chain
