"""Nonlocal box pairs: honest and rigged supplies.

A box pair is a pair of single-use black boxes, one per party.  Each side
accepts one input index k in {0..3} and emits one outcome in {+1, -1}; a
second query on the same side is a protocol violation and raises.  Outcomes
are announced as bits with the fixed encoding +1 <-> 0 and -1 <-> 1.

Behaviors:

* ``HonestQuantum`` reproduces maximally entangled pair statistics: the
  first side queried gets a uniform outcome, the second agrees with it
  with probability (1 + cos(angle_1 - angle_2)) / 2.
* ``LocalDeterministic`` answers from per-side output tables fixed at
  manufacture time; the supplier keeps a ledger of those tables.
* ``TimerCheat`` behaves honestly until the supply-wide query clock reaches
  an activation count, then answers from tables.  The effective mode of a
  pair latches at its first query, so both boxes of a pair flip together.
* ``RemoteControlled`` behaves honestly until the supplier engages the
  switch, then answers from tables.

Every behavior computes a side's outcome from that side's input, pair-local
hidden data, and the pair's own generator only, never from the other side's
input, so no behavior can signal across sides.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .quantum import CORRELATOR_TABLE
from .rng import Rng, mix64

SIDE_A = "A"
SIDE_B = "B"

Table = Tuple[int, int, int, int]


class DoubleQueryError(Exception):
    """A box side was queried twice; one measurement consumes the box."""


class SupplyExhaustedError(Exception):
    """No unused box pairs remain in the supply."""


def outcome_to_bit(outcome: int) -> int:
    """Announce encoding: +1 -> 0, -1 -> 1."""
    if outcome == 1:
        return 0
    if outcome == -1:
        return 1
    raise ValueError(f"outcome must be +1 or -1, got {outcome}")


def bit_to_outcome(bit: int) -> int:
    if bit == 0:
        return 1
    if bit == 1:
        return -1
    raise ValueError(f"bit must be 0 or 1, got {bit}")


def _check_table(table) -> Table:
    table = tuple(table)
    if len(table) != 4 or any(v not in (1, -1) for v in table):
        raise ValueError(f"a table needs four +-1 entries, got {table!r}")
    return table


@dataclass(frozen=True)
class HonestQuantum:
    variant = "honest"


@dataclass(frozen=True)
class LocalDeterministic:
    table_a: Table
    table_b: Table
    variant = "local"

    def __post_init__(self):
        object.__setattr__(self, "table_a", _check_table(self.table_a))
        object.__setattr__(self, "table_b", _check_table(self.table_b))


@dataclass(frozen=True)
class TimerCheat:
    activation_index: int
    table_a: Table
    table_b: Table
    variant = "timer"

    def __post_init__(self):
        if self.activation_index < 0:
            raise ValueError("activation_index must be >= 0")
        object.__setattr__(self, "table_a", _check_table(self.table_a))
        object.__setattr__(self, "table_b", _check_table(self.table_b))


@dataclass
class RemoteControlled:
    table_a: Table
    table_b: Table
    switched: bool = False
    variant = "remote"

    def __post_init__(self):
        self.table_a = _check_table(self.table_a)
        self.table_b = _check_table(self.table_b)


Behavior = object


class BoxPair:
    """Single-use box pair, owned by the supply it came from."""

    __slots__ = ("pair_id", "behavior", "_supply", "queried_a", "queried_b",
                 "_rng", "_first", "_table_mode")

    def __init__(self, pair_id: int, behavior: Behavior, supply: "BoxSupply"):
        self.pair_id = pair_id
        self.behavior = behavior
        self._supply = supply
        self.queried_a = False
        self.queried_b = False
        self._rng: Optional[Rng] = None   # created lazily at first query
        self._first = None                # (side, input, outcome) of first query
        self._table_mode: Optional[bool] = None  # latched at first query

    def _pair_rng(self) -> Rng:
        if self._rng is None:
            self._rng = Rng(mix64(self._supply.pair_seed_base ^ self.pair_id))
        return self._rng

    def _uses_tables(self) -> bool:
        b = self.behavior
        if b.variant == "local":
            return True
        if b.variant == "timer":
            return self._supply.clock >= b.activation_index
        if b.variant == "remote":
            return b.switched
        return False

    def query(self, side: str, k: int) -> int:
        """Feed input ``k`` into this pair's box on ``side``; returns +-1."""
        if k not in (0, 1, 2, 3):
            raise ValueError(f"box input index must be 0..3, got {k}")
        if side == SIDE_A:
            if self.queried_a:
                raise DoubleQueryError(f"side A of pair {self.pair_id} already queried")
            self.queried_a = True
        elif side == SIDE_B:
            if self.queried_b:
                raise DoubleQueryError(f"side B of pair {self.pair_id} already queried")
            self.queried_b = True
        else:
            raise ValueError(f"side must be 'A' or 'B', got {side!r}")

        # The pair's mode (honest vs tables) latches when it is first
        # consumed; a timer flip mid-pair would split one physical pair
        # across modes, which the shared per-pair timer cannot do.
        if self._table_mode is None:
            self._table_mode = self._uses_tables()
        self._supply.clock += 1

        if self._table_mode:
            table = self.behavior.table_a if side == SIDE_A else self.behavior.table_b
            outcome = table[k]
        elif self._first is None:
            outcome = self._pair_rng().pm_one()
        else:
            _, k0, out0 = self._first
            p_equal = 0.5 * (1.0 + CORRELATOR_TABLE[k0][k])
            outcome = out0 if self._pair_rng().random() < p_equal else -out0
        if self._first is None:
            self._first = (side, k, outcome)
        return outcome

    @property
    def used(self) -> bool:
        return self.queried_a or self.queried_b

    @property
    def in_table_mode(self) -> bool:
        """Whether this pair answers (or would answer now) from its tables."""
        if self._table_mode is not None:
            return self._table_mode
        return self._uses_tables()


@dataclass(frozen=True)
class LedgerEntry:
    """Supplier-side record of one rigged pair."""

    pair_id: int
    variant: str
    table_a: Table
    table_b: Table
    activation_index: Optional[int] = None


class SupplyLedger:
    """Which pairs were rigged and what they will answer.

    The ledger is private to the supplier: honest parties never read it,
    cheating strategies may.
    """

    def __init__(self):
        self.entries: Dict[int, LedgerEntry] = {}

    def add(self, entry: LedgerEntry) -> None:
        self.entries[entry.pair_id] = entry

    def get(self, pair_id: int) -> Optional[LedgerEntry]:
        return self.entries.get(pair_id)

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> str:
        rows = []
        for pair_id in sorted(self.entries):
            e = self.entries[pair_id]
            row = {"id": e.pair_id, "variant": e.variant,
                   "tables": {"A": list(e.table_a), "B": list(e.table_b)}}
            if e.activation_index is not None:
                row["activation_index"] = e.activation_index
            rows.append(row)
        return json.dumps(rows)


@dataclass
class SupplierStrategy:
    """How a supplier manufactures a batch of box pairs.

    ``fraction_local`` of the pairs are independently made local
    deterministic; the rest are honest.  ``table_rule`` fixes how local
    output tables are drawn:

    * ``"shared_constant"``: one uniform +-1 value per pair, used for every
      input on both sides.  Same-input queries then always agree, so the
      rigging is visible only through the CHSH statistics.
    * ``"independent"``: all eight table entries drawn independently.

    ``special_all`` turns every pair into a ``"timer"`` or ``"remote"``
    cheat (tables drawn by the same rule); ``special`` does the same for
    selected pair ids only.
    """

    fraction_local: float = 0.0
    table_rule: str = "shared_constant"
    special_all: Optional[str] = None
    activation_index: Optional[int] = None
    special: Dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.fraction_local <= 1.0:
            raise ValueError("fraction_local must be in [0, 1]")
        if self.table_rule not in ("shared_constant", "independent"):
            raise ValueError(f"unknown table rule {self.table_rule!r}")
        for name in [self.special_all, *self.special.values()]:
            if name not in (None, "timer", "remote"):
                raise ValueError(f"unknown special behavior {name!r}")
        if (self.special_all == "timer" or "timer" in self.special.values()) \
                and self.activation_index is None:
            raise ValueError("timer placements need an activation_index")


class BoxSupply:
    """An ordered batch of box pairs plus the supplier's ledger.

    ``clock`` counts every query made to any pair in the batch; timer
    behaviors key off it.
    """

    def __init__(self, pairs, ledger: SupplyLedger, pair_seed_base: int):
        self.pairs = list(pairs)
        self.ledger = ledger
        self.pair_seed_base = pair_seed_base
        self.clock = 0

    def __len__(self) -> int:
        return len(self.pairs)

    def engage_remote(self, pair_id: int) -> None:
        """Supplier-only: flip a remote-controlled pair into table mode."""
        behavior = self.pairs[pair_id].behavior
        if behavior.variant != "remote":
            raise ValueError(f"pair {pair_id} is not remote controlled")
        behavior.switched = True


def _draw_tables(rule: str, rng: Rng) -> Tuple[Table, Table]:
    if rule == "shared_constant":
        c = rng.pm_one()
        table = (c, c, c, c)
        return table, table
    table_a = tuple(rng.pm_one() for _ in range(4))
    table_b = tuple(rng.pm_one() for _ in range(4))
    return table_a, table_b


def make_supply(strategy: SupplierStrategy, count: int, rng: Rng) -> BoxSupply:
    """Manufacture ``count`` box pairs according to the supplier strategy.

    Returns the supply; rigged pairs are recorded in ``supply.ledger`` for
    the supplier's later use and are indistinguishable from honest pairs
    through the query interface alone.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    ledger = SupplyLedger()
    pair_seed_base = rng.next_u64()
    supply = BoxSupply([], ledger, pair_seed_base)
    for pair_id in range(count):
        special = strategy.special.get(pair_id, strategy.special_all)
        if special == "timer":
            table_a, table_b = _draw_tables(strategy.table_rule, rng)
            behavior = TimerCheat(strategy.activation_index, table_a, table_b)
            ledger.add(LedgerEntry(pair_id, "timer", table_a, table_b,
                                   strategy.activation_index))
        elif special == "remote":
            table_a, table_b = _draw_tables(strategy.table_rule, rng)
            behavior = RemoteControlled(table_a, table_b)
            ledger.add(LedgerEntry(pair_id, "remote", table_a, table_b))
        elif strategy.fraction_local > 0.0 and rng.random() < strategy.fraction_local:
            table_a, table_b = _draw_tables(strategy.table_rule, rng)
            behavior = LocalDeterministic(table_a, table_b)
            ledger.add(LedgerEntry(pair_id, "local", table_a, table_b))
        else:
            behavior = HonestQuantum()
        supply.pairs.append(BoxPair(pair_id, behavior, supply))
    return supply
