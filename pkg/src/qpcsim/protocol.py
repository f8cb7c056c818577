"""Two-party private comparison engines.

Both engines compare the parties' keyed hash values bit by bit, aborting at
the first disagreement so that later hash bits are never exchanged:

* ``run_dd_protocol``: the prepare-and-measure version.  In round i one
  party encodes a random bit in the basis given by its i-th hash bit and
  the other measures in the basis given by its own i-th hash bit.  The
  measuring party announces its bit first; the preparing party announces
  second.  Equal hash bits agree with certainty, unequal ones agree with
  probability 1/2.
* ``run_di_protocol``: the device-independent version.  Rounds consume
  nonlocal box pairs instead of qubits: the round owner picks an unused
  pair, feeds its hash bit into its own box, records the output, and only
  then reveals which pair it picked; the other party then queries its box
  and announces first, the owner announces second.  Check rounds, in which
  one side publicly announces its input and output before the other side
  queries, interleave with compare rounds and feed CHSH and same-input
  correlation statistics that certify the boxes.

Failing a statistical check yields a ``cheat_detected`` verdict, distinct
from the normal ``not_equal`` abort, and ordering violations (revealing the
pick before recording) are refused deterministically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .adversary import Honest
from .bits import BitString
from .boxes import (SIDE_A, SIDE_B, BoxPair, BoxSupply, DoubleQueryError,
                    SupplyExhaustedError)
from .hashing import hash_bits
from .quantum import QubitState
from .rng import Rng

TSIRELSON = 2.0 * math.sqrt(2.0)

# CHSH polynomial cells as (A input, B input), last cell entering negatively.
C1_CELLS = ((2, 0), (2, 1), (3, 0), (3, 1))
C2_CELLS = ((0, 2), (1, 2), (0, 3), (1, 3))
_SIGNS = (1.0, 1.0, 1.0, -1.0)
_NEEDED_CELLS = frozenset(C1_CELLS) | frozenset(C2_CELLS)


def _other(side: str) -> str:
    return SIDE_B if side == SIDE_A else SIDE_A


@dataclass(frozen=True)
class CheckPolicy:
    """Acceptance rules applied to the check-mode statistics.

    ``c_min`` is the sharp acceptance threshold on both CHSH point
    estimates.  ``match_tolerance`` is the admissible mismatch rate on
    same-input check rounds (0 in the noiseless model: a single mismatch is
    conclusive).  ``check_rounds_per_party`` sizes the sequential schedule's
    check phase; 0 disables checking entirely for compare-only experiments.
    ``min_cell_records`` is the per-cell sample size a CHSH evaluation
    window must reach before the threshold is applied; smaller windows
    would flag honest devices too often.
    """

    c_min: float = 2.5
    match_tolerance: float = 0.0
    check_rounds_per_party: int = 2000
    min_cell_records: int = 175

    def __post_init__(self):
        if not 2.0 < self.c_min <= TSIRELSON:
            raise ValueError(f"c_min must be in (2, 2*sqrt(2)], got {self.c_min}")
        if not 0.0 <= self.match_tolerance <= 1.0:
            raise ValueError("match_tolerance must be in [0, 1]")
        if self.check_rounds_per_party < 0:
            raise ValueError("check_rounds_per_party must be >= 0")
        if self.min_cell_records < 1:
            raise ValueError("min_cell_records must be >= 1")


@dataclass(frozen=True)
class Sequential:
    """All check rounds first, then all compare rounds."""

    name = "sequential"


@dataclass(frozen=True)
class Interleaved:
    """Random check blocks between compare rounds.

    The number of check rounds before each compare round is drawn uniformly
    from [1, 2*mean - 1], the drawing party alternating round by round.
    """

    mean_checks_between_compares: int = 150
    name = "interleaved"

    def __post_init__(self):
        if self.mean_checks_between_compares < 1:
            raise ValueError("mean_checks_between_compares must be >= 1")


def required_supply(schedule, policy: CheckPolicy, n: int) -> int:
    """Number of box pairs guaranteed to cover a run of the given shape."""
    if isinstance(schedule, Interleaved):
        return n * (2 * schedule.mean_checks_between_compares - 1) + n
    return 2 * policy.check_rounds_per_party + n


EQUAL = "equal"
NOT_EQUAL = "not_equal"
CHEAT_DETECTED = "cheat_detected"

REASON_CHSH = "chsh_failure"
REASON_MATCH = "correlation_mismatch"
REASON_ORDERING = "ordering_violation"
REASON_DOUBLE_QUERY = "double_query"


@dataclass(frozen=True)
class Verdict:
    outcome: str
    abort_round: Optional[int] = None
    reason: Optional[str] = None

    @classmethod
    def equal(cls) -> "Verdict":
        return cls(EQUAL)

    @classmethod
    def not_equal(cls, abort_round: int) -> "Verdict":
        return cls(NOT_EQUAL, abort_round=abort_round)

    @classmethod
    def cheat(cls, reason: str) -> "Verdict":
        return cls(CHEAT_DETECTED, reason=reason)

    @property
    def is_equal(self) -> bool:
        return self.outcome == EQUAL

    @property
    def is_not_equal(self) -> bool:
        return self.outcome == NOT_EQUAL

    @property
    def is_cheat_detected(self) -> bool:
        return self.outcome == CHEAT_DETECTED

    def to_json(self) -> dict:
        out = {"outcome": self.outcome}
        if self.abort_round is not None:
            out["abort_round"] = self.abort_round
        if self.reason is not None:
            out["reason"] = self.reason
        return out


class Transcript:
    """Ordered log of every message of one execution.

    Events are appended strictly in exchange order and never rewritten.
    Compare-phase events carry announced bits and pair ids only; an honest
    party's inputs never appear there.
    """

    __slots__ = ("n", "schedule", "events", "verdict", "chsh", "_record")

    def __init__(self, n: int, schedule: str, record: bool = True):
        self.n = n
        self.schedule = schedule
        self.events: List[dict] = []
        self.verdict: Optional[Verdict] = None
        self.chsh: Optional[dict] = None
        self._record = record

    def emit(self, event: dict) -> None:
        if self._record:
            self.events.append(event)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "schedule": self.schedule,
            "events": self.events,
            "verdict": self.verdict.to_json() if self.verdict else None,
            "chsh": self.chsh,
        }

    def json_str(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_json(), indent=indent)


@dataclass(frozen=True)
class CheckRecord:
    """Completed check round: both inputs and outcomes, by party."""

    pair_id: int
    announcer: str
    k_a: int
    out_a: int
    k_b: int
    out_b: int


@dataclass(frozen=True)
class ChshEstimate:
    """Point estimates of both CHSH polynomials with sampling errors."""

    c1: float
    c2: float
    stderr_c1: float
    stderr_c2: float
    correlators: Dict[Tuple[int, int], Tuple[int, float, float]]

    def to_json(self) -> dict:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "stderr_c1": self.stderr_c1,
            "stderr_c2": self.stderr_c2,
            "correlators": {
                f"{k1},{k2}": {"n": n, "value": c, "stderr": se}
                for (k1, k2), (n, c, se) in sorted(self.correlators.items())
            },
        }


def estimate_chsh(records) -> ChshEstimate:
    """Estimate both CHSH polynomials from completed check rounds.

    Each correlator is the sample mean of the +-1 outcome products in its
    input cell, with standard error sqrt((1 - c^2) / N).  Raises if a cell
    required by either polynomial has no records.
    """
    counts: Dict[Tuple[int, int], int] = {}
    sums: Dict[Tuple[int, int], int] = {}
    for rec in records:
        cell = (rec.k_a, rec.k_b)
        counts[cell] = counts.get(cell, 0) + 1
        sums[cell] = sums.get(cell, 0) + rec.out_a * rec.out_b
    correlators: Dict[Tuple[int, int], Tuple[int, float, float]] = {}
    for cell in sorted(set(counts) | _NEEDED_CELLS):
        n = counts.get(cell, 0)
        if n == 0:
            if cell in _NEEDED_CELLS:
                raise ValueError(f"no check records for required input cell {cell}")
            continue
        c = sums[cell] / n
        se = math.sqrt(max(0.0, 1.0 - c * c) / n)
        correlators[cell] = (n, c, se)

    def polynomial(cells):
        value = 0.0
        var = 0.0
        for cell, sign in zip(cells, _SIGNS):
            n, c, se = correlators[cell]
            value += sign * c
            var += se * se
        return value, math.sqrt(var)

    c1, se1 = polynomial(C1_CELLS)
    c2, se2 = polynomial(C2_CELLS)
    return ChshEstimate(c1, c2, se1, se2, correlators)


def run_check_round(pair: BoxPair, announcing_side: str, rng: Rng,
                    transcript: Optional[Transcript] = None) -> CheckRecord:
    """Run one check round on an unused pair.

    The announcing side picks a uniform input, queries its box, and
    announces input and outcome; only then does the other side pick its own
    uniform input and query.  The announcement event precedes the completed
    round event in the transcript, witnessing the order.
    """
    if pair.used:
        raise DoubleQueryError(f"pair {pair.pair_id} was already used")
    k1 = rng.below(4)
    out1 = pair.query(announcing_side, k1)
    if transcript is not None:
        transcript.emit({"type": "check_announce", "pair": pair.pair_id,
                         "announcer": announcing_side, "input": k1, "outcome": out1})
    responder = _other(announcing_side)
    k2 = rng.below(4)
    out2 = pair.query(responder, k2)
    if announcing_side == SIDE_A:
        rec = CheckRecord(pair.pair_id, SIDE_A, k1, out1, k2, out2)
    else:
        rec = CheckRecord(pair.pair_id, SIDE_B, k2, out2, k1, out1)
    if transcript is not None:
        transcript.emit({"type": "check", "pair": pair.pair_id,
                         "announcer": announcing_side, "input": k1, "outcome": out1,
                         "responder_input": k2, "responder_outcome": out2})
    return rec


class _PairPool:
    """Unused pairs of a supply, drawn uniformly without replacement."""

    __slots__ = ("_avail", "_rng")

    def __init__(self, pairs, rng: Rng):
        self._avail = list(pairs)
        self._rng = rng

    def take(self) -> BoxPair:
        if not self._avail:
            raise SupplyExhaustedError("no unused box pairs left")
        i = self._rng.below(len(self._avail))
        pair = self._avail[i]
        last = self._avail.pop()
        if i < len(self._avail):
            self._avail[i] = last
        return pair


class _CheckAccumulator:
    """Streaming CHSH windows plus same-input match counters.

    CHSH estimates are evaluated over consecutive windows: a window closes
    as soon as every required input cell holds ``min_cell_records`` samples,
    which keeps the sharp ``c_min`` threshold meaningful.  A trailing
    partial window is never evaluated.  Totals over all records are kept
    for reporting.
    """

    __slots__ = ("min_cell", "win_n", "win_s", "tot_n", "tot_s",
                 "_cells_ready", "same_total", "same_mismatch")

    def __init__(self, min_cell: int):
        self.min_cell = min_cell
        self.win_n = [[0] * 4 for _ in range(4)]
        self.win_s = [[0] * 4 for _ in range(4)]
        self.tot_n = [[0] * 4 for _ in range(4)]
        self.tot_s = [[0] * 4 for _ in range(4)]
        self._cells_ready = 0
        self.same_total = 0
        self.same_mismatch = 0

    def add(self, rec: CheckRecord) -> bool:
        """Account one record; True when the current window just completed."""
        ka, kb = rec.k_a, rec.k_b
        prod = rec.out_a * rec.out_b
        self.tot_n[ka][kb] += 1
        self.tot_s[ka][kb] += prod
        if ka == kb:
            self.same_total += 1
            if prod < 0:
                self.same_mismatch += 1
            return False
        n = self.win_n[ka][kb] + 1
        self.win_n[ka][kb] = n
        self.win_s[ka][kb] += prod
        if n == self.min_cell and (ka, kb) in _NEEDED_CELLS:
            self._cells_ready += 1
            if self._cells_ready == len(_NEEDED_CELLS):
                return True
        return False

    def evaluate_window(self) -> Tuple[float, float]:
        """Close the current window: return (C1, C2) and start a new one."""
        def poly(cells):
            return sum(sign * self.win_s[k1][k2] / self.win_n[k1][k2]
                       for (k1, k2), sign in zip(cells, _SIGNS))
        c1, c2 = poly(C1_CELLS), poly(C2_CELLS)
        self.win_n = [[0] * 4 for _ in range(4)]
        self.win_s = [[0] * 4 for _ in range(4)]
        self._cells_ready = 0
        return c1, c2

    def mismatch_rate(self) -> Optional[float]:
        if self.same_total == 0:
            return None
        return self.same_mismatch / self.same_total

    def totals_report(self) -> Optional[dict]:
        """Cumulative CHSH estimate when every required cell has data."""
        if any(self.tot_n[k1][k2] == 0 for k1, k2 in _NEEDED_CELLS):
            return None
        correlators = {}
        for cell in sorted(_NEEDED_CELLS):
            k1, k2 = cell
            n, s = self.tot_n[k1][k2], self.tot_s[k1][k2]
            c = s / n
            correlators[cell] = (n, c, math.sqrt(max(0.0, 1.0 - c * c) / n))

        def poly(cells):
            value = sum(sign * correlators[cell][1]
                        for cell, sign in zip(cells, _SIGNS))
            var = sum(correlators[cell][2] ** 2 for cell in cells)
            return value, math.sqrt(var)

        c1, se1 = poly(C1_CELLS)
        c2, se2 = poly(C2_CELLS)
        return ChshEstimate(c1, c2, se1, se2, correlators).to_json()


def _validate_inputs(a: BitString, b: BitString, rng: Rng) -> None:
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")
    if rng is None:
        raise ValueError("an explicit Rng is required for reproducibility")


def run_dd_protocol(a: BitString, b: BitString, key: int,
                    strategy_a=None, strategy_b=None, rng: Rng = None,
                    record_transcript: bool = True) -> Tuple[Verdict, Transcript]:
    """Prepare-and-measure comparison of H(a) and H(b).

    Odd rounds: Alice encodes a random bit in her hash-bit basis, Bob
    measures in his and announces first, Alice announces second.  Even
    rounds are mirrored.  The first disagreement aborts with the round
    index; agreement on all n rounds yields ``equal``.
    """
    _validate_inputs(a, b, rng)
    strategy_a = strategy_a if strategy_a is not None else Honest()
    strategy_b = strategy_b if strategy_b is not None else Honest()
    h = {SIDE_A: hash_bits(key, a), SIDE_B: hash_bits(key, b)}
    transcript = Transcript(a.n, "dd", record_transcript)
    verdict = Verdict.equal()
    for i in range(1, a.n + 1):
        owner = SIDE_A if i % 2 == 1 else SIDE_B
        other = _other(owner)
        strat_owner = strategy_a if owner == SIDE_A else strategy_b
        strat_other = strategy_b if owner == SIDE_A else strategy_a
        prepared = strat_owner.prepare_bit(rng)
        state = QubitState(prepared, h[owner][i - 1])
        first_bit = strat_other.measure_announce_first(state, h[other][i - 1], rng)
        transcript.emit({"type": "gamma", "i": i, "side": other, "value": first_bit})
        second_bit = strat_owner.second_announcement(prepared, first_bit)
        transcript.emit({"type": "gamma", "i": i, "side": owner, "value": second_bit})
        aborted = first_bit != second_bit
        transcript.emit({"type": "compare", "i": i, "owner": owner,
                         "gammaOwner": second_bit, "gammaOther": first_bit,
                         "aborted": aborted})
        if aborted:
            verdict = Verdict.not_equal(i)
            break
    transcript.verdict = verdict
    return verdict, transcript


def run_di_protocol(a: BitString, b: BitString, key: int, supply: BoxSupply,
                    schedule=None, policy: CheckPolicy = None,
                    strategy_a=None, strategy_b=None, rng: Rng = None,
                    record_transcript: bool = True) -> Tuple[Verdict, Transcript]:
    """Box-pair comparison of H(a) and H(b) with device checking.

    Check and compare rounds follow ``schedule``.  CHSH windows are
    evaluated as soon as they hold enough samples and a failed window, an
    excessive same-input mismatch rate, an ordering violation, or a double
    query each end the run with ``cheat_detected``.
    """
    _validate_inputs(a, b, rng)
    schedule = schedule if schedule is not None else Sequential()
    if not isinstance(schedule, (Sequential, Interleaved)):
        raise ValueError(f"unknown schedule {schedule!r}")
    policy = policy if policy is not None else CheckPolicy()
    strategy_a = strategy_a if strategy_a is not None else Honest()
    strategy_b = strategy_b if strategy_b is not None else Honest()
    n = a.n
    h = {SIDE_A: hash_bits(key, a), SIDE_B: hash_bits(key, b)}
    transcript = Transcript(n, schedule.name, record_transcript)
    pool = _PairPool(supply.pairs, rng)
    acc = _CheckAccumulator(policy.min_cell_records)
    announcer = SIDE_B  # Alice chooses the first checked pair, Bob announces

    def check_round() -> Optional[str]:
        nonlocal announcer
        rec = run_check_round(pool.take(), announcer, rng, transcript)
        announcer = _other(announcer)
        window_done = acc.add(rec)
        if rec.k_a == rec.k_b and rec.out_a != rec.out_b \
                and policy.match_tolerance == 0.0:
            return REASON_MATCH
        if window_done:
            c1, c2 = acc.evaluate_window()
            if c1 < policy.c_min or c2 < policy.c_min:
                return REASON_CHSH
        return None

    def match_rate_failure() -> Optional[str]:
        rate = acc.mismatch_rate()
        if rate is not None and rate > policy.match_tolerance:
            return REASON_MATCH
        return None

    def compare_round(i: int):
        owner = SIDE_A if i % 2 == 1 else SIDE_B
        other = _other(owner)
        strat_owner = strategy_a if owner == SIDE_A else strategy_b
        strat_other = strategy_b if owner == SIDE_A else strategy_a
        if strat_owner.announce_pick_before_record:
            # Revealing the pick before measuring would let a rigged box be
            # switched remotely; the run is refused outright.
            return Verdict.cheat(REASON_ORDERING)
        pair = pool.take()
        try:
            owner_bit = strat_owner.owner_outcome(pair, owner, h[owner][i - 1], rng)
        except DoubleQueryError:
            return Verdict.cheat(REASON_DOUBLE_QUERY)
        transcript.emit({"type": "compare_pick", "i": i, "owner": owner,
                         "pair": pair.pair_id})
        try:
            first_bit = strat_other.first_announcement(
                pair, other, h[other][i - 1], rng, owner_bit)
        except DoubleQueryError:
            return Verdict.cheat(REASON_DOUBLE_QUERY)
        transcript.emit({"type": "gamma", "i": i, "side": other, "value": first_bit})
        second_bit = strat_owner.second_announcement(owner_bit, first_bit)
        transcript.emit({"type": "gamma", "i": i, "side": owner, "value": second_bit})
        aborted = first_bit != second_bit
        transcript.emit({"type": "compare", "i": i, "pair": pair.pair_id,
                         "owner": owner, "gammaOwner": second_bit,
                         "gammaOther": first_bit, "aborted": aborted})
        if aborted:
            return Verdict.not_equal(i)
        return None

    def finish(verdict: Verdict) -> Tuple[Verdict, Transcript]:
        if not verdict.is_cheat_detected:
            reason = match_rate_failure()
            if reason is not None:
                verdict = Verdict.cheat(reason)
        transcript.verdict = verdict
        transcript.chsh = acc.totals_report()
        return verdict, transcript

    if isinstance(schedule, Sequential):
        if policy.check_rounds_per_party > 0:
            transcript.emit({"type": "mode_shift", "mode": "check"})
            for _ in range(2 * policy.check_rounds_per_party):
                reason = check_round()
                if reason is not None:
                    return finish(Verdict.cheat(reason))
        transcript.emit({"type": "mode_shift", "mode": "compare"})
        for i in range(1, n + 1):
            res = compare_round(i)
            if res is not None:
                return finish(res)
    else:
        drawer = SIDE_A
        mean = schedule.mean_checks_between_compares
        for i in range(1, n + 1):
            gap = rng.randint(1, 2 * mean - 1)
            transcript.emit({"type": "mode_shift", "mode": "check",
                             "drawn_by": drawer, "planned_checks": gap})
            drawer = _other(drawer)
            for _ in range(gap):
                reason = check_round()
                if reason is not None:
                    return finish(Verdict.cheat(reason))
            transcript.emit({"type": "mode_shift", "mode": "compare"})
            res = compare_round(i)
            if res is not None:
                return finish(res)
    return finish(Verdict.equal())
