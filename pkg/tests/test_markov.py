import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfdim.cf_core import convergents, interval_length
from cfdim.errors import DomainError
from cfdim.frequencies import FrequencyVector, gauss_frequencies
from cfdim.markov import (
    MarkovMeasure,
    bernoulli_measure,
    block_entropy,
    block_probabilities,
    cylinder_probability,
    entropy_rate,
    jensen_gap,
    log_qk_moment,
    lyapunov_functional,
    markov_measure,
    perturb,
    truncate_frequencies,
)

HALF = FrequencyVector.from_sequence([0.5, 0.5])
DIRAC = FrequencyVector.from_sequence([1.0])


def random_chain(seed, A, order, alphabet=None):
    rng = np.random.default_rng(seed)
    kernel = rng.dirichlet(np.ones(A), size=A**order)
    return markov_measure(alphabet or tuple(range(1, A + 1)), kernel)


def test_truncate_examples():
    geo = FrequencyVector.power_log(2.0, 0.0, {1: 0.5, 2: 0.25, 3: 0.125})
    assert truncate_frequencies(geo, 3).tolist() == [0.5, 0.25, 0.25]
    assert truncate_frequencies(FrequencyVector.from_sequence([1.0, 0.0]), 2).tolist() == [1.0, 0.0]
    g = truncate_frequencies(gauss_frequencies(), 5)
    assert g[-1] == pytest.approx(1 - sum(math.log2(1 + 1 / (j * (j + 2))) for j in range(1, 5)), abs=1e-15)
    assert math.fsum(g) == pytest.approx(1, abs=1e-15)
    with pytest.raises(DomainError):
        truncate_frequencies(HALF, 1)


def test_bernoulli_examples():
    P = bernoulli_measure(HALF, 2)
    assert cylinder_probability(P, (1, 2)) == 0.25
    assert cylinder_probability(P, (1, 2, 1)) == 0.125
    D = bernoulli_measure(DIRAC, 1)
    assert cylinder_probability(D, (1,) * 7) == 1
    G = bernoulli_measure(gauss_frequencies(), 10)
    assert np.allclose(G.kernel.sum(axis=1), 1, atol=1e-12)
    assert G.stationarity_residual() < 1e-10
    with pytest.raises(DomainError):
        cylinder_probability(P, (3,))


def test_zero_digit_dropped():
    P = bernoulli_measure(FrequencyVector.from_sequence([0.5, 0.0, 0.5]), 3)
    assert P.alphabet == (1, 3)
    assert cylinder_probability(P, (2, 1)) == 0
    assert cylinder_probability(P, (3, 1)) == 0.25


def test_order_one_cylinder():
    P = markov_measure((1, 2), [[0.5, 0.5], [0.5, 0.5]])
    assert cylinder_probability(P, (1, 2)) == pytest.approx(P.stationary[0] * 0.5)
    Q = markov_measure((1, 2), [[0.9, 0.1], [0.3, 0.7]])
    # pi = (3/4, 1/4)
    assert np.allclose(Q.stationary, [0.75, 0.25], atol=1e-13)
    assert cylinder_probability(Q, (2, 1, 1)) == pytest.approx(0.25 * 0.3 * 0.9)
    assert cylinder_probability(Q, (2,)) == pytest.approx(0.25)


def test_invalid_kernel():
    with pytest.raises(DomainError):
        markov_measure((1, 2), [[0.5, 0.6], [0.5, 0.5]])
    with pytest.raises(DomainError):
        markov_measure((1, 2), [[1.0, 0.0]] * 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(0, 2), st.integers(1, 4))
def test_kolmogorov_and_markov_property(seed, A, order, n):
    P = random_chain(seed, A, order)
    assert P.stationarity_residual() < 1e-10
    probs = block_probabilities(P, n)
    longer = block_probabilities(P, n + 1).reshape(-1, A)
    assert np.allclose(longer.sum(axis=1), probs, atol=1e-14)
    assert math.fsum(probs) == pytest.approx(1, abs=1e-12)
    k = order + 1
    rng = np.random.default_rng(seed)
    for _ in range(5):
        w = tuple(int(a) for a in rng.integers(1, A + 1, size=k + 3))
        lhs = cylinder_probability(P, w) / cylinder_probability(P, w[:-1])
        tail = w[-(k):]
        rhs = cylinder_probability(P, tail) / cylinder_probability(P, tail[:-1]) if k > 1 else cylinder_probability(P, tail)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_entropy_rate_examples():
    assert entropy_rate(bernoulli_measure(DIRAC, 1)) == 0
    assert entropy_rate(bernoulli_measure(HALF, 2)) == pytest.approx(math.log(2), abs=1e-15)
    Q = markov_measure((1, 2), [[0.9, 0.1], [0.3, 0.7]])
    for k in (2, 4, 7):
        assert block_entropy(Q, k + 1) - block_entropy(Q, k) == pytest.approx(entropy_rate(Q), abs=1e-10)


def test_block_entropy_per_digit_converges():
    P = random_chain(3, 3, 2)
    gaps = [block_entropy(P, k) / k - entropy_rate(P) for k in range(2, 8)]
    assert all(g >= -1e-12 for g in gaps)
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))


def test_lyapunov_examples():
    D = bernoulli_measure(DIRAC, 1)
    assert lyapunov_functional(D, 4) == pytest.approx(-2 * math.log(3 / 5), abs=1e-14)
    assert lyapunov_functional(bernoulli_measure(HALF, 2), 1) == pytest.approx(math.log(2), abs=1e-15)


def test_log_qk_examples():
    D = bernoulli_measure(DIRAC, 1)
    assert log_qk_moment(D, 4) == pytest.approx(math.log(5), abs=1e-14)
    P = bernoulli_measure(HALF, 2)
    assert log_qk_moment(P, 1) == pytest.approx(0.5 * math.log(2), abs=1e-15)
    # q_2(a, b) = ab + 1 over the four cylinders
    expected = 0.25 * (math.log(2) + 2 * math.log(3) + math.log(5))
    assert log_qk_moment(P, 2) == pytest.approx(expected, abs=1e-15)


def test_functionals_by_enumeration():
    P = random_chain(5, 3, 1)
    lyap = logq = gap = 0.0
    ent = 0.0
    for w in itertools.product((1, 2, 3), repeat=3):
        p = cylinder_probability(P, w)
        c = convergents(w)[-1]
        lyap += -2 * p * math.log(c.p / c.q)
        logq += p * math.log(c.q)
        gap += -p * math.log(interval_length(w))
        ent += -p * math.log(p)
    assert lyapunov_functional(P, 3) == pytest.approx(lyap, abs=1e-12)
    assert log_qk_moment(P, 3) == pytest.approx(logq, abs=1e-12)
    assert jensen_gap(P, 3) == pytest.approx(gap - ent, abs=1e-12)


def test_jensen_gap_examples():
    U = bernoulli_measure(HALF, 2)
    expected = (-0.5 * math.log(0.5) - 0.5 * math.log(1 / 6)) - math.log(2)
    assert jensen_gap(U, 1) == pytest.approx(expected, abs=1e-15)
    D = bernoulli_measure(DIRAC, 1)
    for k in (1, 3, 6):
        assert jensen_gap(D, k) == pytest.approx(-math.log(interval_length((1,) * k)), abs=1e-13)
    for seed in range(30):
        assert jensen_gap(random_chain(seed, 3, 1), 3) >= 0


def test_perturb_examples():
    P = bernoulli_measure(FrequencyVector.from_sequence([0.6, 0.0, 0.4]), 3)
    for k in (1, 2, 3):
        Q = perturb(P, 1e-6, k)
        assert Q.alphabet == (1, 2, 3)
        assert block_probabilities(Q, k).min() >= 1e-6 / 3**k * (1 - 1e-9)
        assert Q.stationarity_residual() < 1e-10
    # digit marginals move by exactly eps * (1/N - p_j)
    Q = perturb(P, 1e-3, 2)
    assert np.allclose(Q.digit_marginals(), 0.999 * np.array([0.6, 0.0, 0.4]) + 1e-3 / 3, atol=1e-12)
    Q = perturb(P, 1e-9, 2)
    assert cylinder_probability(Q, (1, 3)) == pytest.approx(cylinder_probability(P, (1, 3)), abs=1e-8)
    with pytest.raises(DomainError):
        perturb(P, 0.0)
    chain = markov_measure((1, 3), [[0.2, 0.8], [0.7, 0.3]])
    with pytest.raises(DomainError):
        perturb(chain, 1e-6, 1)
    assert perturb(chain, 1e-6).k == 2


def test_perturb_entropy_limit():
    P = random_chain(9, 2, 1, alphabet=(1, 3))
    h = entropy_rate(P)
    diffs = [abs(entropy_rate(perturb(P, 10.0**-e, 2)) - h) for e in range(2, 9)]
    assert all(a > b for a, b in zip(diffs, diffs[1:]))
    assert diffs[-1] < 1e-6


def test_measure_is_immutable():
    P = bernoulli_measure(HALF, 2)
    with pytest.raises(ValueError):
        P.kernel[0, 0] = 1.0
    assert isinstance(P, MarkovMeasure) and P.k == 1 and P.N == 2
