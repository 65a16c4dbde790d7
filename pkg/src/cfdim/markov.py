"""Stationary multi-step Markov measures on bounded-digit sequences.

A measure of order ``m`` lives on words over a finite ``alphabet`` of digits.
It is stored as a transition kernel ``t(a | w)`` indexed by the states
``w in alphabet^m`` (lexicographic order) together with the stationary law
``pi`` of the induced state chain.  Cylinder values are derived from these:
``P(w a_1 ... a_r) = pi(w) t(a_1 | w) ...``.

Digits missing from the alphabet carry no mass.  ``N`` is the alphabet bound
``max(alphabet)``; cylinder functionals sum over ``alphabet^k`` only, which is
the same as summing over ``{1..N}^k`` since the other cylinders are null.
"""

from dataclasses import dataclass
import math

import numpy as np

from .cf_core import DEFAULT_BUDGET, as_word, enumerate_words, word_convergent_logs
from .errors import BudgetExceededError, DomainError
from .perron import stationary_distribution

__all__ = [
    "MarkovMeasure",
    "truncate_frequencies",
    "support_alphabet",
    "bernoulli_measure",
    "markov_measure",
    "from_block_probabilities",
    "cylinder_probability",
    "block_probabilities",
    "block_entropy",
    "entropy_rate",
    "lyapunov_functional",
    "log_qk_moment",
    "jensen_gap",
    "perturb",
    "ratio_terms",
    "ROW_TOL",
    "STATIONARY_TOL",
]

ROW_TOL = 1e-12
STATIONARY_TOL = 1e-10


def _xlogx(p):
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, p * np.log(p), 0.0)


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    alphabet: tuple
    order: int
    kernel: np.ndarray
    stationary: np.ndarray

    def __post_init__(self):
        A = len(self.alphabet)
        if self.kernel.shape != (A**self.order, A):
            raise DomainError(f"kernel shape {self.kernel.shape} does not match alphabet/order")
        if np.any(self.kernel < 0) or np.abs(self.kernel.sum(axis=1) - 1).max() > ROW_TOL:
            raise DomainError("kernel rows must be probability vectors")
        self.kernel.setflags(write=False)
        self.stationary.setflags(write=False)

    @property
    def N(self):
        return max(self.alphabet)

    @property
    def k(self):
        """Cylinder depth that determines the measure (``order + 1``)."""
        return self.order + 1

    def state_matrix(self):
        """Transition matrix of the chain on ``alphabet^order``."""
        A, m = len(self.alphabet), self.order
        S = A**m
        if m == 0:
            return np.ones((1, 1))
        T = np.zeros((S, S))
        nxt = (np.arange(S)[:, None] * A) % S + np.arange(A)[None, :]
        np.add.at(T, (np.repeat(np.arange(S), A), nxt.ravel()), self.kernel.ravel())
        return T

    def stationarity_residual(self):
        """Total-variation distance between ``pi`` and ``pi T``."""
        return float(np.abs(self.stationary @ self.state_matrix() - self.stationary).sum())

    def digit_marginals(self):
        """``P(I(j))`` for each alphabet digit."""
        return block_probabilities(self, 1)


def truncate_frequencies(freq, N):
    """``(p_1, ..., p_{N-1}, 1 - sum_{j<N} p_j)``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    head = freq.head(N - 1) if N > 1 else np.zeros(0)
    excess = math.fsum(head) - 1
    if excess > 1e-12:
        raise DomainError(f"sum_(j<{N}) p_j exceeds 1 by {excess:g}")
    if N == 1 and freq.pmf(1) < 1 - 1e-12:
        raise DomainError("N = 1 requires p_1 = 1")
    last = freq.mass_beyond(N - 1)
    return np.append(head, max(last, 0.0))


def support_alphabet(marginals):
    """Digits with positive truncated mass."""
    return tuple(int(j) + 1 for j in np.flatnonzero(np.asarray(marginals) > 0))


def markov_measure(alphabet, kernel, stationary=None):
    """Measure from a kernel; ``pi`` comes from power iteration unless supplied."""
    alphabet = tuple(int(a) for a in alphabet)
    kernel = np.array(kernel, dtype=float)
    A, S = len(alphabet), kernel.shape[0]
    order = _order_of(S, A)
    shell = MarkovMeasure(alphabet, order, kernel, np.ones(S) / S)
    if stationary is None:
        stationary = stationary_distribution(shell.state_matrix())
    return MarkovMeasure(alphabet, order, kernel, np.array(stationary, dtype=float))


def bernoulli_measure(freq, N):
    """Order-0 measure with ``P(I(j))`` equal to the truncated frequencies.

    Zero-mass digits are dropped from the alphabet.
    """
    probs = truncate_frequencies(freq, N)
    alphabet = support_alphabet(probs)
    if not alphabet:
        raise DomainError("all truncated frequencies vanish")
    row = probs[np.asarray(alphabet) - 1]
    row = row / math.fsum(row)
    return MarkovMeasure(alphabet, 0, row[None, :], np.ones(1))


def from_block_probabilities(alphabet, probs):
    """Order ``k-1`` measure from a shift-consistent law on ``alphabet^k``.

    ``probs`` is flat, lexicographic.  Prefix states of zero mass get a
    uniform row; they carry no weight under ``pi``.
    """
    alphabet = tuple(int(a) for a in alphabet)
    A = len(alphabet)
    probs = np.asarray(probs, dtype=float)
    if A == 1:
        return MarkovMeasure(alphabet, 0, np.ones((1, 1)), np.ones(1))
    k = _order_of(len(probs), A)
    table = probs.reshape(A ** (k - 1), A)
    pi = table.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel = np.where(pi[:, None] > 0, table / pi[:, None], 1.0 / A)
    kernel /= kernel.sum(axis=1, keepdims=True)
    return MarkovMeasure(alphabet, k - 1, kernel, pi / pi.sum())


def _digit_index(P, word):
    """Positions of the word's digits in the alphabet; ``None`` if a digit is null."""
    lookup = {a: i for i, a in enumerate(P.alphabet)}
    idx = []
    for a in word:
        if a > P.N:
            raise DomainError(f"digit {a} exceeds the alphabet bound N={P.N}")
        if a not in lookup:
            return None
        idx.append(lookup[a])
    return idx


def cylinder_probability(P, word):
    """``P(I(word))``."""
    word = as_word(word)
    idx = _digit_index(P, word)
    if idx is None:
        return 0.0
    A, m = len(P.alphabet), P.order
    if len(idx) <= m:
        # marginal of pi over the first len(word) coordinates
        pi = P.stationary.reshape((A,) * m) if m else P.stationary
        return float(pi[tuple(idx)].sum())
    state = 0
    for i in idx[:m]:
        state = state * A + i
    prob = P.stationary[state]
    S = A**m
    for i in idx[m:]:
        prob *= P.kernel[state, i]
        state = (state * A) % S + i if m else 0
    return float(prob)


def block_probabilities(P, n, budget=DEFAULT_BUDGET):
    """Flat array of ``P(I(w))`` for ``w in alphabet^n``, lexicographic."""
    A, m = len(P.alphabet), P.order
    if A**n > budget:
        raise BudgetExceededError(f"{A}^{n} cylinders exceeds budget {budget}")
    if n <= m:
        pi = P.stationary.reshape((A,) * m) if m else P.stationary
        return pi.reshape(A**n, -1).sum(axis=1) if n else np.ones(1)
    probs = np.array(P.stationary, dtype=float)
    S = A**m
    for step in range(n - m):
        # probs indexed by words of length m + step; the state is the last m digits
        states = np.arange(len(probs)) % S
        probs = (probs[:, None] * P.kernel[states]).ravel()
    return probs


def block_entropy(P, k):
    """Entropy (nats) of the law of ``k``-cylinders."""
    return -math.fsum(_xlogx(block_probabilities(P, k)))


def entropy_rate(P):
    """``h_P = -sum_w pi(w) sum_a t(a|w) log t(a|w)``."""
    return -math.fsum((P.stationary[:, None] * _xlogx(P.kernel)).ravel())


def _cylinder_tables(P, k, budget):
    words = enumerate_words(P.alphabet, k, budget)
    probs = block_probabilities(P, k, budget)
    log_p, log_q, log_q1 = word_convergent_logs(words)
    return probs, log_p, log_q, log_q1


def lyapunov_functional(P, k, budget=DEFAULT_BUDGET):
    """``-2 sum_w p(w) log(p_k(w)/q_k(w))`` over ``k``-cylinders."""
    probs, log_p, log_q, _ = _cylinder_tables(P, k, budget)
    return -2 * math.fsum(probs * (log_p - log_q))


def log_qk_moment(P, k, budget=DEFAULT_BUDGET):
    """``sum_w p(w) log q_k(w)`` over ``k``-cylinders."""
    probs, _, log_q, _ = _cylinder_tables(P, k, budget)
    return math.fsum(probs * log_q)


def jensen_gap(P, k, budget=DEFAULT_BUDGET):
    """``[-sum p log|I(w)|] - [-sum p log p]``; nonnegative by Jensen."""
    probs, _, log_q, log_q1 = _cylinder_tables(P, k, budget)
    # log|I| = -log q - log(q + q') = -2 log q - log1p(q'/q)
    log_len = -2 * log_q - np.log1p(np.exp(log_q1 - log_q))
    return math.fsum(-probs * log_len) - math.fsum(-_xlogx(probs))


def ratio_terms(P, k, budget=DEFAULT_BUDGET):
    """Numerator ``(1/k) H_k`` and denominator of the depth-``k`` dimension ratio."""
    probs, log_p, log_q, _ = _cylinder_tables(P, k, budget)
    num = -math.fsum(_xlogx(probs)) / k
    den = -2 * math.fsum(probs * (log_p - log_q))
    return num, den


def perturb(P, eps, k=None):
    """Mix the ``k``-cylinder law with the uniform law on ``{1..N}^k``.

    ``p_eps(w) = (1 - eps) P(w) + eps/N^k``; the result is the order ``k-1``
    measure with these cylinder values, over the full alphabet ``{1..N}``.
    ``k`` defaults to ``P.k``; a smaller ``k`` would forget ``P``'s memory, so
    it is refused.
    """
    if not 0 < eps < 1:
        raise DomainError(f"eps = {eps} is not in (0, 1)")
    k = P.k if k is None else k
    if k < max(P.k, 1):
        raise DomainError(f"k = {k} is below the measure's cylinder depth {P.k}")
    N = P.N
    full = tuple(range(1, N + 1))
    probs = np.zeros(N**k)
    words = enumerate_words(P.alphabet, k)
    # positions of alphabet^k words inside {1..N}^k, lexicographic
    pos = np.zeros(len(words), dtype=np.int64)
    for i in range(k):
        pos = pos * N + (words[:, i] - 1)
    probs[pos] = block_probabilities(P, k)
    probs = (1 - eps) * probs + eps / N**k
    if k == 1:
        return MarkovMeasure(full, 0, probs[None, :] / probs.sum(), np.ones(1))
    table = probs.reshape(N ** (k - 1), N)
    marg = table.sum(axis=1)
    kernel = table / marg[:, None]
    return _with_power_pi(full, kernel, marg)


def _order_of(rows, A):
    m = 0
    while A**m < rows and A > 1:
        m += 1
    if A**m != rows:
        raise DomainError(f"{rows} kernel rows is not a power of the alphabet size {A}")
    return m


def _with_power_pi(alphabet, kernel, guess):
    order = _order_of(kernel.shape[0], len(alphabet))
    shell = MarkovMeasure(alphabet, order, kernel, guess / guess.sum())
    pi = stationary_distribution(shell.state_matrix(), x0=guess)
    return MarkovMeasure(alphabet, shell.order, kernel, pi)
