"""Simulator and analysis toolkit for two-party quantum private comparison.

Two parties holding secret bit strings learn whether the strings are equal,
and nothing more, by comparing keyed hash values bit by bit over quantum
carriers: either prepare-and-measure qubits or device-independent nonlocal
box pairs certified through CHSH statistics.  The package provides both
protocol engines, honest and adversarial box supplies, pluggable cheating
strategies, and closed-form plus Monte Carlo leakage analysis.
"""

from .adversary import (BernoulliOracle, Cheating, GuessMethod, Honest,
                        LocalBoxReadout, MisorderedPicker,
                        QUANTUM_GUESS_PROBABILITY, QuantumOptimalGuess,
                        echo_announcement, effective_guess_probability)
from .analysis import (AbortDistribution, LeakageExperiment, MonteCarloReport,
                       abort_distribution, abort_probability, chsh_for_tables,
                       dd_leakage_bound, expected_leakage,
                       iter_constrained_tables, leakage_closed_form,
                       leakage_limit, mixture_expected_chsh,
                       monte_carlo_leakage, fixed_output_c1)
from .bits import BitString, hamming_distance
from .boxes import (BoxPair, BoxSupply, DoubleQueryError, HonestQuantum,
                    LocalDeterministic, RemoteControlled, SIDE_A, SIDE_B,
                    SupplierStrategy, SupplyExhaustedError, SupplyLedger,
                    TimerCheat, bit_to_outcome, make_supply, outcome_to_bit)
from .hashing import HashKey, MAX_BITS, hash_bits, unhash_bits
from .protocol import (CheckPolicy, CheckRecord, ChshEstimate, Interleaved,
                       Sequential, Transcript, TSIRELSON, Verdict,
                       estimate_chsh, required_supply, run_check_round,
                       run_dd_protocol, run_di_protocol)
from .quantum import (QubitState, bell_correlator, input_angle, measure_direction,
                      measure_qubit, sample_correlated_pair)
from .rng import Rng, mix64

__version__ = "0.1.0"

__all__ = [
    "AbortDistribution", "BernoulliOracle", "BitString", "BoxPair", "BoxSupply",
    "Cheating", "CheckPolicy", "CheckRecord", "ChshEstimate", "DoubleQueryError",
    "GuessMethod", "HashKey", "Honest", "HonestQuantum", "Interleaved",
    "LeakageExperiment", "LocalBoxReadout", "LocalDeterministic", "MAX_BITS",
    "MisorderedPicker", "MonteCarloReport", "QUANTUM_GUESS_PROBABILITY",
    "QuantumOptimalGuess", "QubitState", "RemoteControlled", "Rng", "SIDE_A",
    "SIDE_B", "Sequential", "SupplierStrategy", "SupplyExhaustedError",
    "SupplyLedger", "TSIRELSON", "TimerCheat", "Transcript", "Verdict",
    "abort_distribution", "abort_probability", "bell_correlator",
    "bit_to_outcome", "chsh_for_tables", "dd_leakage_bound",
    "echo_announcement", "effective_guess_probability", "estimate_chsh",
    "expected_leakage", "hamming_distance", "hash_bits", "input_angle",
    "iter_constrained_tables", "leakage_closed_form", "leakage_limit",
    "make_supply", "measure_direction", "measure_qubit", "mix64",
    "mixture_expected_chsh", "monte_carlo_leakage", "outcome_to_bit",
    "required_supply", "run_check_round", "run_dd_protocol", "run_di_protocol",
    "sample_correlated_pair", "fixed_output_c1", "unhash_bits",
]
