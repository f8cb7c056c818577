"""Leakage analysis of the comparison protocols under one-sided cheating.

When the dishonest party echoes in its announce-last rounds and guesses
with per-round success probability ``p_guess`` in its announce-first
rounds, aborts happen only at the guessing rounds, i.e. at even round
indices when Alice cheats.  Writing k = m/2:

* probability of aborting exactly at round m:
  ``p_guess**(k-1) * (1 - p_guess)``;
* expected number of hash-bit rounds revealed before the run ends, with
  K = floor(n/2):
  ``sum_{k=1..K} 2k * p_guess**(k-1) * (1 - p_guess) + n * p_guess**K``.

The revealed-round count is an upper bound on the information gained; the
guessing rounds reveal announced outcomes, not the other party's inputs.
Everything here evaluates those expressions exactly and validates them by
Monte Carlo over the box-pair engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .adversary import (Cheating, GuessMethod, Honest,
                        QUANTUM_GUESS_PROBABILITY)
from .bits import BitString
from .boxes import SupplierStrategy, make_supply
from .protocol import (CheckPolicy, Sequential, C1_CELLS, C2_CELLS,
                       required_supply, run_di_protocol)
from .rng import Rng

_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"guess probability must be in [0, 1], got {p}")


def abort_probability(m: int, p_guess: float) -> float:
    """Probability that a cheating run aborts exactly at round ``m``.

    ``m`` must be even and positive; the echoing rounds in between cannot
    abort.
    """
    _check_p(p_guess)
    if m < 2 or m % 2 != 0:
        raise ValueError(f"abort rounds are even and >= 2, got {m}")
    k = m // 2
    return p_guess ** (k - 1) * (1.0 - p_guess)


@dataclass(frozen=True)
class AbortDistribution:
    """Abort-round law for a run of length ``n``: (m, probability) points.

    The points plus the completion probability ``p_guess**floor(n/2)`` sum
    to one.
    """

    n: int
    p_guess: float
    points: Tuple[Tuple[int, float], ...]
    completion_probability: float

    def total(self) -> float:
        return sum(p for _, p in self.points) + self.completion_probability


def abort_distribution(n: int, p_guess: float) -> AbortDistribution:
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_p(p_guess)
    points = tuple((2 * k, abort_probability(2 * k, p_guess))
                   for k in range(1, n // 2 + 1))
    return AbortDistribution(n, p_guess, points, p_guess ** (n // 2))


def expected_leakage(n: int, p_guess: float) -> float:
    """Expected revealed rounds for string length ``n`` (direct summation).

    Terms beyond double-precision underflow are dropped; the result is
    stable for arbitrarily large ``n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_p(p_guess)
    k_max = n // 2
    q = 1.0 - p_guess
    total = 0.0
    p_pow = 1.0  # p_guess**(k-1)
    for k in range(1, k_max + 1):
        total += 2.0 * k * p_pow * q
        p_pow *= p_guess
        if p_pow < 1e-300:
            break
    return total + n * p_guess ** k_max


def leakage_closed_form(n: int, p_guess: float) -> float:
    """Closed form of :func:`expected_leakage`.

    For even n this is ``2 * (1 - p**(n/2)) / (1 - p)``; an odd final round
    adds ``p**floor(n/2)``.  ``p_guess = 1`` is the removable singularity,
    where every round is revealed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_p(p_guess)
    if p_guess == 1.0:
        return float(n)
    k_max = n // 2
    p_pow = p_guess ** k_max
    value = 2.0 * (1.0 - p_pow) / (1.0 - p_guess)
    if n % 2 == 1:
        value += p_pow
    return value


def leakage_limit(p_guess: float) -> float:
    """Supremum of the expected leakage over all string lengths."""
    _check_p(p_guess)
    if p_guess == 1.0:
        return math.inf
    return 2.0 / (1.0 - p_guess)


def dd_leakage_bound() -> float:
    """Leakage ceiling of the prepare-and-measure protocol.

    Against qubits the best per-round guess succeeds with cos^2(pi/8), so
    the revealed-round expectation stays below
    2 / (1 - cos^2(pi/8)) ~= 13.657 < 14 bits for every string length.
    """
    bound = leakage_limit(QUANTUM_GUESS_PROBABILITY)
    if not bound <= 14.0:
        raise RuntimeError(f"leakage ceiling {bound} exceeds 14 bits")
    return bound


def chsh_for_tables(table_a, table_b) -> Tuple[float, float]:
    """Exact CHSH values of a deterministic fixed-output pair."""
    c1 = sum(sign * table_a[k1] * table_b[k2]
             for (k1, k2), sign in zip(C1_CELLS, (1, 1, 1, -1)))
    c2 = sum(sign * table_a[k1] * table_b[k2]
             for (k1, k2), sign in zip(C2_CELLS, (1, 1, 1, -1)))
    return float(c1), float(c2)


def fixed_output_c1(table_a, table_b) -> float:
    """Exact C1 for fixed tables whose B side ignores the compare inputs.

    With ``table_b[0] == table_b[1]`` the four C1 correlators collapse
    pairwise and C1 equals ``2 * table_a[2] * table_b[0]``, which can never
    exceed 2.
    """
    if table_b[0] != table_b[1]:
        raise ValueError("requires table_b[0] == table_b[1]")
    c1, _ = chsh_for_tables(table_a, table_b)
    return c1


def iter_constrained_tables():
    """All deterministic table pairs with input-independent B compare outputs.

    Yields (table_a, table_b) over every combination of the eight +-1 table
    entries, filtered to table_b[0] == table_b[1].
    """
    values = (1, -1)
    for a0 in values:
        for a1 in values:
            for a2 in values:
                for a3 in values:
                    for b0 in values:
                        for b1 in values:
                            if b0 != b1:
                                continue
                            for b2 in values:
                                for b3 in values:
                                    yield (a0, a1, a2, a3), (b0, b1, b2, b3)


def mixture_expected_chsh(fraction_local: float) -> float:
    """Expected CHSH value of a supply mixing honest and rigged pairs.

    Honest pairs contribute 2*sqrt(2); shared-constant local pairs
    contribute exactly 2.
    """
    if not 0.0 <= fraction_local <= 1.0:
        raise ValueError("fraction_local must be in [0, 1]")
    return (1.0 - fraction_local) * 2.0 * math.sqrt(2.0) + fraction_local * 2.0


@dataclass
class LeakageExperiment:
    """Configuration of one Monte Carlo leakage measurement.

    ``guess_method`` drives the cheating party's announce-first rounds; the
    other fields configure the run.  Checking defaults to off so that the
    measured abort law is the pure compare-mode law.
    """

    n: int
    guess_method: GuessMethod
    key: int = 0
    cheater: str = "A"
    supplier: SupplierStrategy = field(default_factory=SupplierStrategy)
    policy: CheckPolicy = field(
        default_factory=lambda: CheckPolicy(check_rounds_per_party=0))
    schedule: object = field(default_factory=Sequential)


@dataclass(frozen=True)
class MonteCarloReport:
    """Empirical abort histogram and revealed-round statistics."""

    trials: int
    n: int
    histogram: Dict[int, int]
    completed: int
    cheat_detected: int
    mean_revealed: float
    stderr_revealed: float
    ci99: Tuple[float, float]
    analytic_p_guess: Optional[float] = None
    analytic_mean: Optional[float] = None

    def abort_frequency(self, m: int) -> float:
        counted = self.trials - self.cheat_detected
        return self.histogram.get(m, 0) / counted if counted else 0.0

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "n": self.n,
            "histogram": {str(m): c for m, c in sorted(self.histogram.items())},
            "completed": self.completed,
            "cheat_detected": self.cheat_detected,
            "mean_revealed": self.mean_revealed,
            "stderr_revealed": self.stderr_revealed,
            "ci99": list(self.ci99),
            "analytic_p_guess": self.analytic_p_guess,
            "analytic_mean": self.analytic_mean,
        }


def monte_carlo_leakage(experiment: LeakageExperiment, trials: int, rng: Rng,
                        analytic_p_guess: Optional[float] = None) -> MonteCarloReport:
    """Run independent protocol executions and histogram the abort rounds.

    Each trial draws fresh secrets and a fresh supply from a child
    generator; revealed rounds count the abort round on a mismatch and the
    full length on completion.  Runs flagged as cheating (possible only
    when checking is enabled) are tallied separately and excluded from the
    revealed-round statistics.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    exp = experiment
    supply_size = required_supply(exp.schedule, exp.policy, exp.n)
    histogram: Dict[int, int] = {}
    completed = 0
    cheat_detected = 0
    total = 0.0
    total_sq = 0.0
    for t in range(trials):
        t_rng = rng.child(t)
        a = BitString.random(exp.n, t_rng)
        b = BitString.random(exp.n, t_rng)
        supply = make_supply(exp.supplier, supply_size, t_rng)
        cheat = Cheating(exp.guess_method, supply.ledger)
        strat_a, strat_b = (cheat, Honest()) if exp.cheater == "A" else (Honest(), cheat)
        verdict, _ = run_di_protocol(a, b, exp.key, supply, exp.schedule,
                                     exp.policy, strat_a, strat_b, t_rng,
                                     record_transcript=False)
        if verdict.is_cheat_detected:
            cheat_detected += 1
            continue
        revealed = exp.n if verdict.is_equal else verdict.abort_round
        if verdict.is_not_equal:
            histogram[verdict.abort_round] = histogram.get(verdict.abort_round, 0) + 1
        else:
            completed += 1
        total += revealed
        total_sq += revealed * revealed
    counted = trials - cheat_detected
    mean = total / counted if counted else 0.0
    var = max(0.0, total_sq / counted - mean * mean) if counted else 0.0
    stderr = math.sqrt(var / counted) if counted else 0.0
    ci99 = (mean - _Z99 * stderr, mean + _Z99 * stderr)
    analytic_mean = (expected_leakage(exp.n, analytic_p_guess)
                     if analytic_p_guess is not None else None)
    return MonteCarloReport(trials, exp.n, histogram, completed, cheat_detected,
                            mean, stderr, ci99, analytic_p_guess, analytic_mean)
