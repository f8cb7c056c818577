import math

import pytest

from qpcsim.quantum import (CORRELATOR_TABLE, INPUT_ANGLES, QubitState,
                            bell_correlator, input_angle, measure_direction,
                            measure_qubit, sample_correlated_pair)
from qpcsim.rng import Rng
from qpcsim.stats import chi2_critical, chi_square_homogeneity

SQRT_HALF = math.sqrt(0.5)


# ---------------------------------------------------------------------------
# Explicit state-vector oracles, kept independent of the implementation under
# test: 2- and 4-dimensional complex arithmetic, no trig shortcuts.

def _direction_op(theta):
    # cos(theta) sigma_z + sin(theta) sigma_x
    return [[math.cos(theta), math.sin(theta)],
            [math.sin(theta), -math.cos(theta)]]


def _kron4(m, n):
    out = [[0.0] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[2 * i + k][2 * j + l] = m[i][j] * n[k][l]
    return out


def oracle_pair_correlator(theta_a, theta_b):
    """<Phi+| O(a) x O(b) |Phi+> by direct 4-dimensional arithmetic."""
    phi = [SQRT_HALF, 0.0, 0.0, SQRT_HALF]
    op = _kron4(_direction_op(theta_a), _direction_op(theta_b))
    applied = [sum(op[r][c] * phi[c] for c in range(4)) for r in range(4)]
    return sum(phi[r] * applied[r] for r in range(4))


def oracle_outcome_probability(state, theta):
    """Born probability that measuring along theta reproduces the state bit."""
    prep = _state_vector(state)
    op = _direction_op(theta)
    # projector onto the +1 eigenvector of O(theta): (I + O)/2
    proj = [[(1.0 if r == c else 0.0) + op[r][c] for c in range(2)] for r in range(2)]
    proj = [[v / 2.0 for v in row] for row in proj]
    applied = [sum(proj[r][c] * prep[c] for c in range(2)) for r in range(2)]
    p_plus = sum(prep[r] * applied[r] for r in range(2))
    return p_plus if state.gamma == 0 else 1.0 - p_plus


def _state_vector(state):
    if state.sigma == 0:
        return [1.0, 0.0] if state.gamma == 0 else [0.0, 1.0]
    return [SQRT_HALF, SQRT_HALF] if state.gamma == 0 else [SQRT_HALF, -SQRT_HALF]


# ---------------------------------------------------------------------------

def test_input_angles():
    assert INPUT_ANGLES == (0.0, math.pi / 2, math.pi / 4, -math.pi / 4)
    for k in range(4):
        assert input_angle(k) == INPUT_ANGLES[k]
    with pytest.raises(ValueError):
        input_angle(4)


def test_correlator_matches_state_vector_oracle():
    for k1 in range(4):
        for k2 in range(4):
            expected = oracle_pair_correlator(INPUT_ANGLES[k1], INPUT_ANGLES[k2])
            assert bell_correlator(INPUT_ANGLES[k1], INPUT_ANGLES[k2]) == pytest.approx(expected, abs=1e-12)
            assert CORRELATOR_TABLE[k1][k2] == pytest.approx(expected, abs=1e-12)


def test_correlator_values():
    assert bell_correlator(0.0, 0.0) == pytest.approx(1.0)
    assert bell_correlator(math.pi / 4, 0.0) == pytest.approx(SQRT_HALF)


def test_equal_angles_always_perfectly_correlated():
    rng = Rng(17)
    for _ in range(200):
        theta = (rng.random() - 0.5) * 20.0
        assert bell_correlator(theta, theta) == pytest.approx(1.0)


def test_chsh_cell_sum_reaches_tsirelson():
    # Sum the four compare-against-check correlators with the standard signs.
    total = (bell_correlator(INPUT_ANGLES[2], INPUT_ANGLES[0])
             + bell_correlator(INPUT_ANGLES[2], INPUT_ANGLES[1])
             + bell_correlator(INPUT_ANGLES[3], INPUT_ANGLES[0])
             - bell_correlator(INPUT_ANGLES[3], INPUT_ANGLES[1]))
    assert total == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)


def test_correlator_rejects_non_finite():
    with pytest.raises(ValueError):
        bell_correlator(math.nan, 0.0)


def test_measure_same_basis_is_deterministic():
    rng = Rng(1)
    for gamma in (0, 1):
        for sigma in (0, 1):
            state = QubitState(gamma, sigma)
            assert all(measure_qubit(state, sigma, rng) == gamma for _ in range(50))


def test_measure_cross_basis_matches_born_rule():
    state = QubitState(0, 1)
    p_oracle = oracle_outcome_probability(state, 0.0)
    assert p_oracle == pytest.approx(0.5, abs=1e-12)
    rng = Rng(2)
    n = 100000
    zeros = sum(measure_qubit(state, 0, rng) == 0 for _ in range(n))
    sigma = math.sqrt(0.25 / n)
    assert abs(zeros / n - 0.5) <= 3 * sigma


def test_cross_basis_outcome_independent_of_prepared_bit():
    rng = Rng(3)
    n = 50000
    table = []
    for gamma in (0, 1):
        state = QubitState(gamma, 1)
        zeros = sum(measure_qubit(state, 0, rng) == 0 for _ in range(n))
        table.append([zeros, n - zeros])
    stat, dof = chi_square_homogeneity(table)
    assert stat < chi2_critical(dof)


def test_measure_direction_matches_born_oracle():
    rng = Rng(4)
    n = 60000
    theta = math.pi / 4
    for gamma in (0, 1):
        for sigma in (0, 1):
            state = QubitState(gamma, sigma)
            p = oracle_outcome_probability(state, theta)
            hits = sum(measure_direction(state, theta, rng) == gamma for _ in range(n))
            assert abs(hits / n - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_sample_correlated_pair_extremes():
    rng = Rng(5)
    for _ in range(200):
        a, b = sample_correlated_pair(1.0, rng)
        assert a == b
        a, b = sample_correlated_pair(-1.0, rng)
        assert a == -b


def test_sample_correlated_pair_zero_correlation():
    rng = Rng(60)
    n = 100000
    equal = 0
    a_plus = 0
    b_plus = 0
    for _ in range(n):
        a, b = sample_correlated_pair(0.0, rng)
        equal += a == b
        a_plus += a == 1
        b_plus += b == 1
    sigma = math.sqrt(0.25 / n)
    assert abs(equal / n - 0.5) <= 3 * sigma
    assert abs(a_plus / n - 0.5) <= 3 * sigma
    assert abs(b_plus / n - 0.5) <= 3 * sigma


@pytest.mark.parametrize("corr", [-0.8, -0.3, 0.2, 0.7071, 0.95])
def test_sample_correlated_pair_agreement_rate(corr):
    rng = Rng(int((corr + 2) * 1000))
    n = 40000
    equal = sum(a == b for a, b in (sample_correlated_pair(corr, rng) for _ in range(n)))
    p = 0.5 * (1 + corr)
    assert abs(equal / n - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_sample_correlated_pair_range_check():
    with pytest.raises(ValueError):
        sample_correlated_pair(1.5, Rng(1))


def test_qubit_state_validation():
    with pytest.raises(ValueError):
        QubitState(2, 0)
    with pytest.raises(ValueError):
        QubitState(0, 5)
