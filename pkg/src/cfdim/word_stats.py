"""Digit and block statistics of finite words.

Block occurrences are counted at start positions ``1..n-k+1``, i.e. only
windows lying completely inside the word.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .cf_core import as_word, enumerate_words, interval_length, log_fraction, word_convergent_logs
from .errors import BudgetExceededError, DomainError

__all__ = [
    "BlockFrequencyTable",
    "digit_frequency",
    "block_counts",
    "block_entropy",
    "entropy_of_counts",
    "count_low_entropy_words",
    "low_entropy_counts",
    "interval_log_bound_sides",
]

ENUMERATION_BUDGET = 10**8
# H_k(w) <= k h is tested with this slack so that exact ties survive rounding
ENTROPY_TIE_TOL = 1e-12


@dataclass
class BlockFrequencyTable:
    k: int
    N: int
    n: int
    counts: Counter = field(default_factory=Counter)

    @property
    def windows(self):
        return max(self.n - self.k + 1, 0)

    def frequencies(self):
        """``p(u|w) = count(u)/(n-k+1)`` as exact rationals."""
        L = self.windows
        return {u: Fraction(c, L) for u, c in self.counts.items()}

    def entropy(self):
        return entropy_of_counts(list(self.counts.values()))


def _check_alphabet(word, N):
    if N is None:
        return max(word)
    bad = [a for a in word if a > N]
    if bad:
        raise DomainError(f"digit {bad[0]} exceeds alphabet bound N={N}")
    return N


def digit_frequency(word, j):
    """``(tau_j(word), tau_j(word)/n)``."""
    word = as_word(word)
    if j < 1:
        raise DomainError("digit must be >= 1")
    c = word.count(j)
    return c, Fraction(c, len(word))


def block_counts(word, k, N=None):
    word = as_word(word)
    if not 1 <= k <= len(word):
        raise DomainError(f"block length k={k} outside 1..{len(word)}")
    N = _check_alphabet(word, N)
    counts = Counter(word[i : i + k] for i in range(len(word) - k + 1))
    return BlockFrequencyTable(k=k, N=N, n=len(word), counts=counts)


def entropy_of_counts(counts):
    """Shannon entropy (nats) of the empirical law given by nonnegative counts."""
    total = sum(counts)
    if total == 0:
        raise DomainError("no observations")
    terms = [-(c / total) * math.log(c / total) for c in counts if c]
    return math.fsum(terms)


def block_entropy(word, k, N=None):
    """``H_k(w) = sum_u phi(p(u|w))`` in nats, ``phi(t) = -t log t``."""
    return block_counts(word, k, N).entropy()


def _entropy_rows(counts, L):
    p = counts / L
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(p > 0, -p * np.log(p), 0.0)
    return t.sum(axis=1)


def _iter_block_entropies(N, n, k, chunk_words=1 << 16):
    """Yield arrays of ``H_k`` for all words of ``Sigma_N^n``, lexicographic, in chunks.

    Words are split into a fixed prefix and an enumerated suffix so memory stays
    ``O(chunk * N^k)``.
    """
    suffix_len = n
    while suffix_len > 0 and N**suffix_len > chunk_words:
        suffix_len -= 1
    suffix_len = max(suffix_len, 1)
    prefix_len = n - suffix_len
    digits = np.arange(N, dtype=np.int64)
    suffixes = enumerate_words(digits, suffix_len, budget=ENUMERATION_BUDGET)
    L = n - k + 1
    powers = N ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for prefix in enumerate_words(digits, prefix_len, budget=ENUMERATION_BUDGET):
        words = np.hstack([np.broadcast_to(prefix, (len(suffixes), prefix_len)), suffixes])
        codes = sum(words[:, i : i + L] * powers[i] for i in range(k))
        rows = np.repeat(np.arange(len(words)), L)
        counts = np.bincount(rows * N**k + codes.ravel(), minlength=len(words) * N**k)
        yield _entropy_rows(counts.reshape(len(words), N**k).astype(float), L)


def low_entropy_counts(N, n, k, hs, budget=ENUMERATION_BUDGET):
    """``Card{w in Sigma_N^n : H_k(w) <= k h}`` for each ``h`` in ``hs`` by exhaustive enumeration."""
    if N < 1 or n < 1 or not 1 <= k <= n:
        raise DomainError(f"bad parameters N={N}, n={n}, k={k}")
    if N**n > budget:
        raise BudgetExceededError(f"N^n = {N}^{n} exceeds enumeration budget {budget}")
    hs = np.atleast_1d(np.asarray(hs, dtype=float))
    totals = np.zeros(len(hs), dtype=np.int64)
    for H in _iter_block_entropies(N, n, k):
        totals += (H[None, :] <= k * hs[:, None] + ENTROPY_TIE_TOL).sum(axis=1)
    return [int(t) for t in totals]


def count_low_entropy_words(N, n, k, h, budget=ENUMERATION_BUDGET):
    return low_entropy_counts(N, n, k, [h], budget)[0]


def interval_log_bound_sides(word, N, k):
    """Both sides of ``log|I_n| <= 2 sum_u tau_u log(p_k(u)/q_k(u)) + 8 + 8n/2^k``."""
    word = as_word(word)
    _check_alphabet(word, N)
    if k < 1:
        raise DomainError("k must be >= 1")
    n = len(word)
    lhs = log_fraction(interval_length(word))
    if n >= k:
        table = block_counts(word, k, N)
        blocks = np.array(sorted(table.counts), dtype=np.int64)
        weights = np.array([table.counts[tuple(b)] for b in blocks.tolist()], dtype=float)
        log_p, log_q, _ = word_convergent_logs(blocks)
        total = math.fsum(weights * (log_p - log_q))
    else:
        total = 0.0
    rhs = 2 * total + 8 + 8 * n / 2**k
    return lhs, rhs
