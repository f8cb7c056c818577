"""Party strategies: honest behavior and pluggable cheating.

A strategy object drives one party through either protocol engine.  The
engine owns message ordering; strategies only decide what to announce and
how to use their devices, so a single cheating class covers a dishonest
Alice or a dishonest Bob by role reflection.

The dishonest party's generic play: in rounds where it announces last it
simply echoes the other party's announcement (those rounds can never
abort); in rounds where it must announce first it guesses the other
party's outcome using a :class:`GuessMethod`.
"""

from __future__ import annotations

import math
from .boxes import BoxPair, SupplyLedger, outcome_to_bit
from .quantum import QubitState, measure_direction, measure_qubit
from .rng import Rng

# Best achievable guessing probability against an honest pair, obtained by
# measuring one's own box in the intermediate direction (input index 2):
# cos^2(pi/8).
QUANTUM_GUESS_PROBABILITY = 0.5 * (1.0 + math.cos(math.pi / 4))

# Intermediate measurement direction used for the optimal guess.
_GUESS_INPUT = 2
_GUESS_ANGLE = math.pi / 4


def echo_announcement(observed_bit: int) -> int:
    """Announce-last cheat: repeat whatever the other party announced."""
    return observed_bit


def effective_guess_probability(fraction_local: float, p_quantum: float) -> float:
    """Per-round guessing probability of a mixed supply.

    Local pairs are guessed with certainty, honest pairs with ``p_quantum``:
    ``fraction_local * 1 + (1 - fraction_local) * p_quantum``.
    """
    if not 0.0 <= fraction_local <= 1.0:
        raise ValueError("fraction_local must be in [0, 1]")
    if not 0.0 <= p_quantum <= 1.0:
        raise ValueError("p_quantum must be in [0, 1]")
    return fraction_local + (1.0 - fraction_local) * p_quantum


class GuessMethod:
    """How a cheater predicts the outcome the other party will announce."""

    def guess(self, pair: BoxPair, own_side: str, own_input: int,
              ledger: SupplyLedger | None, other_bit: int, rng: Rng) -> int:
        raise NotImplementedError


class QuantumOptimalGuess(GuessMethod):
    """Query one's own box in the intermediate direction and announce that.

    Correct with probability cos^2(pi/8) against an honest pair whichever
    compare input the other side used.  This consumes the guesser's box, so
    the nominal input for the round is never physically made; the other
    party cannot observe the difference.
    """

    def guess(self, pair, own_side, own_input, ledger, other_bit, rng):
        return outcome_to_bit(pair.query(own_side, _GUESS_INPUT))


class LocalBoxReadout(GuessMethod):
    """Read rigged pairs from the supplier ledger; fall back to measuring.

    If the picked pair is currently answering from tables whose compare-mode
    entries are input independent, the ledger predicts the other side's
    outcome with certainty.  Otherwise the method falls back to
    :class:`QuantumOptimalGuess`.
    """

    def __init__(self, fallback: GuessMethod | None = None):
        self.fallback = fallback if fallback is not None else QuantumOptimalGuess()

    def guess(self, pair, own_side, own_input, ledger, other_bit, rng):
        entry = ledger.get(pair.pair_id) if ledger is not None else None
        if entry is not None and pair.in_table_mode:
            table = entry.table_a if own_side == "B" else entry.table_b
            if table[0] == table[1]:
                return outcome_to_bit(table[0])
        return self.fallback.guess(pair, own_side, own_input, ledger, other_bit, rng)


class BernoulliOracle(GuessMethod):
    """Guess correctly with an exact probability ``p``.

    Validation-only strategy: it peeks at the other party's already recorded
    outcome, which no physical cheater could do, and flips it with
    probability ``1 - p``.  Used to sweep leakage curves over the guessing
    probability directly.
    """

    def __init__(self, p: float):
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        self.p = p

    def guess(self, pair, own_side, own_input, ledger, other_bit, rng):
        if rng.random() < self.p:
            return other_bit
        return 1 - other_bit


class Honest:
    """Follows the protocol: true announcements, secret inputs."""

    announce_pick_before_record = False

    # box-pair engine hooks -------------------------------------------------

    def owner_outcome(self, pair: BoxPair, side: str, h_bit: int, rng: Rng) -> int:
        """Round owner: query the box with the hash-bit input, keep the bit."""
        return outcome_to_bit(pair.query(side, h_bit))

    def first_announcement(self, pair: BoxPair, side: str, h_bit: int,
                           rng: Rng, other_bit: int) -> int:
        return outcome_to_bit(pair.query(side, h_bit))

    def second_announcement(self, own_bit: int, heard_bit: int) -> int:
        return own_bit

    # prepare-and-measure engine hooks --------------------------------------

    def prepare_bit(self, rng: Rng) -> int:
        return rng.bit()

    def measure_announce_first(self, state: QubitState, basis_bit: int,
                               rng: Rng) -> int:
        return measure_qubit(state, basis_bit, rng)


class Cheating(Honest):
    """Dishonest party: echoes when announcing last, guesses when first.

    ``ledger`` is the supply ledger when this party manufactured the boxes;
    honest-looking rounds (box picks, qubit preparations) stay honest since
    deviating there gains nothing.
    """

    def __init__(self, method: GuessMethod | None = None,
                 ledger: SupplyLedger | None = None):
        self.method = method if method is not None else QuantumOptimalGuess()
        self.ledger = ledger

    def first_announcement(self, pair, side, h_bit, rng, other_bit):
        return self.method.guess(pair, side, h_bit, self.ledger, other_bit, rng)

    def second_announcement(self, own_bit, heard_bit):
        return echo_announcement(heard_bit)

    def measure_announce_first(self, state, basis_bit, rng):
        # Breidbart-style guess: measure in the direction halfway between
        # the two possible preparation bases; correct with cos^2(pi/8).
        return measure_direction(state, _GUESS_ANGLE, rng)


class MisorderedPicker(Honest):
    """Flawed round owner that reveals its pick before measuring.

    Models the implementation mistake that a remote-control box supplier
    exploits; the engine refuses the round and flags the run.
    """

    announce_pick_before_record = True
