"""Budget-constrained storage allocation.

Given a file size, a coin budget and a registry of file miners charging
per byte, derive the per-byte budget ceiling, collect qualifying candidate
miners (first come, up to a threshold), keep the cheapest prefix that can
hold the file, and split the file so the cheapest miners fill up first.
The resulting total price never exceeds the budget: every selected fee is
at most budget/size and the allotted bytes sum to the file size.

All fee and cost arithmetic is exact rational arithmetic, never floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadFormat, InsufficientCapacity, NoCandidates, ZeroFileSize


def as_rational(value) -> Fraction:
    """Accept int, Fraction, decimal string, or 'p/q' string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise BadFormat("booleans are not coin amounts")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # trust the printed decimal, not the binary expansion
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise BadFormat(f"cannot parse rational {value!r}") from exc
    raise BadFormat(f"cannot parse rational from {type(value).__name__}")


@dataclass
class FileMinerProfile:
    miner_id: str
    fee: Fraction  # coin per byte
    free_space: int  # bytes


@dataclass(frozen=True)
class AllocationRequest:
    file_size: int
    budget: Fraction
    threshold: int


@dataclass(frozen=True)
class PlanEntry:
    miner_id: str
    allotted: int


@dataclass
class AllocationPlan:
    entries: list[PlanEntry]
    total_cost: Fraction


def unit_budget(budget: Fraction, file_size: int) -> Fraction:
    """Per-byte budget ceiling: budget divided by file size, exactly."""
    if file_size <= 0:
        raise ZeroFileSize("file size must be positive")
    return Fraction(budget) / file_size


def select_candidates(
    miners: Iterable[FileMinerProfile], b: Fraction, threshold: int
) -> list[FileMinerProfile]:
    """Scan miners in the given order, keeping those with fee <= b and free
    space, until the threshold is reached or the registry is exhausted."""
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    picked: list[FileMinerProfile] = []
    for miner in miners:
        if miner.fee <= b and miner.free_space > 0:
            picked.append(miner)
            if len(picked) == threshold:
                break
    if not picked:
        raise NoCandidates("no miner fits within the per-byte budget")
    return picked


def finalize(sfm: Sequence[FileMinerProfile], file_size: int) -> list[FileMinerProfile]:
    """Sort candidates by ascending fee (ties by miner id) and keep the
    shortest prefix whose combined free space covers the file."""
    ordered = sorted(sfm, key=lambda m: (m.fee, m.miner_id))
    remaining = file_size
    final: list[FileMinerProfile] = []
    for miner in ordered:
        remaining -= miner.free_space
        final.append(miner)
        if remaining <= 0:
            break
    if remaining > 0:
        raise InsufficientCapacity(
            f"candidates are {remaining} bytes short of the file size"
        )
    return final


def allot(fsfm: Sequence[FileMinerProfile], file_size: int) -> list[PlanEntry]:
    """Walk the finalized list in order, filling each miner completely;
    the last chunk may be smaller than the miner's space."""
    remaining = file_size
    entries: list[PlanEntry] = []
    for miner in fsfm:
        if remaining <= 0:
            break
        if remaining - miner.free_space < 0:
            entries.append(PlanEntry(miner.miner_id, remaining))
            remaining = 0
        else:
            remaining -= miner.free_space
            entries.append(PlanEntry(miner.miner_id, miner.free_space))
    if remaining > 0:
        raise InsufficientCapacity(
            f"allotment is {remaining} bytes short of the file size"
        )
    return entries


def plan_cost(entries: Sequence[PlanEntry], miners: Iterable[FileMinerProfile]) -> Fraction:
    """Total price: sum of allotted bytes times each miner's fee, exactly."""
    fees = {miner.miner_id: miner.fee for miner in miners}
    return sum(
        (Fraction(entry.allotted) * fees[entry.miner_id] for entry in entries),
        Fraction(0),
    )


def allocate(
    miners: Sequence[FileMinerProfile], request: AllocationRequest
) -> AllocationPlan:
    """Run the whole pipeline; the returned plan covers the file exactly,
    respects every miner's space, and costs at most the budget."""
    b = unit_budget(request.budget, request.file_size)
    candidates = select_candidates(miners, b, request.threshold)
    final = finalize(candidates, request.file_size)
    entries = allot(final, request.file_size)
    total = plan_cost(entries, final)
    assert total <= request.budget
    return AllocationPlan(entries=entries, total_cost=total)


def load_registry(text: str) -> list[FileMinerProfile]:
    """Parse a miner registry: one JSON object {miner_id, fee, free_space}
    per line, in registry (scan) order."""
    profiles = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            profile = FileMinerProfile(
                miner_id=str(raw["miner_id"]),
                fee=as_rational(raw["fee"]),
                free_space=int(raw["free_space"]),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise BadFormat(f"registry line {n}: {exc}") from exc
        if profile.fee < 0 or profile.free_space < 0:
            raise BadFormat(f"registry line {n}: negative fee or space")
        profiles.append(profile)
    return profiles
