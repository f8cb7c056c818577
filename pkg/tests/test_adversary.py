import math

import pytest

from qpcsim.adversary import (BernoulliOracle, Cheating, Honest,
                              LocalBoxReadout, QUANTUM_GUESS_PROBABILITY,
                              QuantumOptimalGuess, echo_announcement,
                              effective_guess_probability)
from qpcsim.bits import BitString
from qpcsim.boxes import (SIDE_A, SIDE_B, SupplierStrategy, make_supply,
                          outcome_to_bit)
from qpcsim.protocol import CheckPolicy, Sequential, run_dd_protocol, run_di_protocol
from qpcsim.rng import Rng
from qpcsim.stats import binomial_stderr

KEY = 9
NO_CHECKS = CheckPolicy(check_rounds_per_party=0)


def test_echo_announcement():
    assert echo_announcement(0) == 0
    assert echo_announcement(1) == 1


def test_effective_guess_probability_values():
    assert effective_guess_probability(0.39, 0.8536) == pytest.approx(0.910696)
    assert effective_guess_probability(0.0, 0.77) == pytest.approx(0.77)
    assert effective_guess_probability(1.0, 0.1) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        effective_guess_probability(-0.1, 0.5)
    with pytest.raises(ValueError):
        effective_guess_probability(0.5, 1.5)


def test_quantum_guess_probability_constant():
    assert QUANTUM_GUESS_PROBABILITY == pytest.approx(math.cos(math.pi / 8) ** 2)


def even_round_guess_rate(method, supplier, trials, seed):
    """Simulate announce-first rounds: owner B queries, A guesses."""
    rng = Rng(seed)
    supply = make_supply(supplier, trials, rng)
    hits = 0
    for pair in supply.pairs:
        owner_bit = outcome_to_bit(pair.query(SIDE_B, rng.bit()))
        guess = method.guess(pair, SIDE_A, rng.bit(), supply.ledger, owner_bit, rng)
        hits += guess == owner_bit
    return hits / trials


def test_local_readout_is_certain_on_rigged_pairs():
    rate = even_round_guess_rate(LocalBoxReadout(),
                                 SupplierStrategy(fraction_local=1.0), 2000, 1)
    assert rate == 1.0


def test_quantum_guess_rate_on_honest_pairs():
    trials = 40000
    rate = even_round_guess_rate(QuantumOptimalGuess(), SupplierStrategy(), trials, 2)
    p = QUANTUM_GUESS_PROBABILITY
    assert abs(rate - p) <= 3 * binomial_stderr(p, trials)


def test_bernoulli_oracle_rates():
    trials = 40000
    for p, seed in ((0.5, 3), (0.91, 4), (1.0, 5), (0.0, 6)):
        rate = even_round_guess_rate(BernoulliOracle(p), SupplierStrategy(), trials, seed)
        assert abs(rate - p) <= 3 * binomial_stderr(p, trials) + 1e-12
    with pytest.raises(ValueError):
        BernoulliOracle(1.0001)


def test_mixed_stack_guess_rate():
    trials = 60000
    rate = even_round_guess_rate(LocalBoxReadout(),
                                 SupplierStrategy(fraction_local=0.39), trials, 7)
    p = effective_guess_probability(0.39, QUANTUM_GUESS_PROBABILITY)
    assert abs(rate - p) <= 3 * binomial_stderr(p, trials)


def test_cheating_alice_aborts_only_at_even_rounds():
    a = BitString.from_text("1011001011010010")
    rng = Rng(8)
    aborts = []
    for t in range(3000):
        t_rng = rng.child(t)
        b = BitString.random(16, t_rng)
        supply = make_supply(SupplierStrategy(), 16, t_rng)
        cheat = Cheating(QuantumOptimalGuess(), supply.ledger)
        verdict, _ = run_di_protocol(a, b, KEY, supply, Sequential(), NO_CHECKS,
                                     cheat, Honest(), t_rng, record_transcript=False)
        if verdict.is_not_equal:
            aborts.append(verdict.abort_round)
    assert aborts and all(m % 2 == 0 for m in aborts)


def test_cheating_bob_aborts_only_at_odd_rounds():
    a = BitString.from_text("1011001011010010")
    rng = Rng(9)
    aborts = []
    for t in range(3000):
        t_rng = rng.child(t)
        b = BitString.random(16, t_rng)
        supply = make_supply(SupplierStrategy(), 16, t_rng)
        cheat = Cheating(QuantumOptimalGuess(), supply.ledger)
        verdict, _ = run_di_protocol(a, b, KEY, supply, Sequential(), NO_CHECKS,
                                     Honest(), cheat, t_rng, record_transcript=False)
        if verdict.is_not_equal:
            aborts.append(verdict.abort_round)
    assert aborts and all(m % 2 == 1 for m in aborts)


def test_cheating_survival_rate_matches_effective_p():
    # per even round the full stack survives with the mixed guess probability
    a = BitString.from_text("10110010")
    rng = Rng(10)
    survived = 0
    exposed = 0
    for t in range(20000):
        t_rng = rng.child(t)
        b = BitString.random(8, t_rng)
        supply = make_supply(SupplierStrategy(fraction_local=0.39), 8, t_rng)
        cheat = Cheating(LocalBoxReadout(), supply.ledger)
        verdict, _ = run_di_protocol(a, b, KEY, supply, Sequential(), NO_CHECKS,
                                     cheat, Honest(), t_rng, record_transcript=False)
        exposed += 1  # round 2 is always reached (odd rounds echo)
        if verdict.is_equal or verdict.abort_round > 2:
            survived += 1
    p = effective_guess_probability(0.39, QUANTUM_GUESS_PROBABILITY)
    assert abs(survived / exposed - p) <= 3 * binomial_stderr(p, exposed)


def test_dd_cheating_guess_rate_is_quantum_optimal():
    # in the prepare-and-measure engine the cheater measures received qubits
    # in the intermediate direction
    a = BitString.from_text("1011001011010010")
    rng = Rng(11)
    survived = 0
    trials = 30000
    for t in range(trials):
        t_rng = rng.child(t)
        b = BitString.random(16, t_rng)
        cheat = Cheating(QuantumOptimalGuess())
        verdict, _ = run_dd_protocol(a, b, KEY, cheat, Honest(), t_rng,
                                     record_transcript=False)
        if verdict.is_equal or verdict.abort_round > 2:
            survived += 1
    p = QUANTUM_GUESS_PROBABILITY
    assert abs(survived / trials - p) <= 3 * binomial_stderr(p, trials)


def test_cheating_run_never_aborts_with_perfect_oracle():
    a = BitString.from_text("10110010")
    rng = Rng(12)
    for t in range(500):
        t_rng = rng.child(t)
        b = BitString.random(8, t_rng)
        supply = make_supply(SupplierStrategy(), 8, t_rng)
        cheat = Cheating(BernoulliOracle(1.0), supply.ledger)
        verdict, _ = run_di_protocol(a, b, KEY, supply, Sequential(), NO_CHECKS,
                                     cheat, Honest(), t_rng, record_transcript=False)
        assert verdict.is_equal  # echo odd rounds, perfect guess even rounds
