"""Exact continued-fraction arithmetic.

Words are plain tuples of positive integers ``(a_1, ..., a_n)``.  Everything
here works on Python integers and :class:`fractions.Fraction`, so identities
such as ``p_{n-1} q_n - p_n q_{n-1} = (-1)^n`` can be checked with ``==``.
Floating point only shows up in :func:`log_int` and :func:`log_fraction`.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import DomainError, BudgetExceededError

__all__ = [
    "Convergent",
    "BasicInterval",
    "as_word",
    "convergents",
    "continuant",
    "fold",
    "basic_interval",
    "interval_length",
    "cf_expand",
    "parse_rational",
    "insertion_ratio",
    "deletion_length_bound",
    "adjacent_interval_lengths",
    "log_int",
    "log_fraction",
    "enumerate_words",
    "word_convergent_logs",
]

# dense enumeration cap shared by every cylinder sum in the package
DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int

    @property
    def value(self):
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class BasicInterval:
    """Closure of the cylinder ``I(a_1, ..., a_n)``."""

    left: Fraction
    right: Fraction
    word: tuple

    @property
    def length(self):
        return self.right - self.left

    def __contains__(self, x):
        return self.left <= x <= self.right


def as_word(word, allow_empty=False):
    """Validate ``word`` and return it as a tuple of ints."""
    try:
        w = tuple(int(a) for a in word)
    except TypeError:
        raise DomainError(f"not a digit sequence: {word!r}") from None
    if not w and not allow_empty:
        raise DomainError("empty word")
    for i, a in enumerate(w):
        if a < 1:
            raise DomainError(f"digit {a} at position {i + 1} is not a positive integer")
    return w


def _pq(word):
    """Final ``(p_n, q_n, p_{n-1}, q_{n-1})`` of the convergent recursion."""
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for a in word:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q, p_prev, q_prev


def convergents(word):
    """Convergents ``p_i/q_i`` for ``i = 1..n`` of a nonempty word."""
    word = as_word(word)
    out = []
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for i, a in enumerate(word, start=1):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Convergent(p, q, i))
    return out


def continuant(word):
    """``q_n(a_1, ..., a_n)``; the empty word gives ``q_0 = 1``."""
    return _pq(as_word(word, allow_empty=True))[1]


def fold(word):
    """Value ``p_n/q_n`` of the finite continued fraction ``[a_1, ..., a_n]``."""
    p, q, _, _ = _pq(as_word(word))
    return Fraction(p, q)


def basic_interval(word):
    word = as_word(word)
    p, q, p1, q1 = _pq(word)
    a = Fraction(p, q)
    b = Fraction(p + p1, q + q1)
    return BasicInterval(min(a, b), max(a, b), word)


def interval_length(word):
    """``|I(word)| = 1/(q_n (q_n + q_{n-1}))`` as an exact rational."""
    _, q, _, q1 = _pq(as_word(word))
    return Fraction(1, q * (q + q1))


def parse_rational(x):
    """Exact rational from a Fraction, int, or string such as ``"3/7"`` or ``"0.625"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise DomainError("floats are not accepted; pass an exact rational or a decimal string")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse {x!r} as a rational: {exc}") from None


def cf_expand(x, max_digits=None):
    """Partial quotients of a rational ``0 < x < 1`` via exact Gauss-map iteration.

    Stops after ``max_digits`` digits or when the orbit reaches 0.
    """
    x = parse_rational(x)
    if not 0 < x < 1:
        raise DomainError(f"x = {x} is not in (0, 1)")
    digits = []
    while x and (max_digits is None or len(digits) < max_digits):
        y = 1 / x
        a = y.numerator // y.denominator
        digits.append(a)
        x = y - a
    return tuple(digits)


def insertion_ratio(word, position, b):
    """``q_{n+1}(a_1..a_j, b, a_{j+1}..a_n) / q_n(a_1..a_n)`` for ``1 <= j < n``."""
    word = as_word(word)
    n = len(word)
    if not 1 <= position < n:
        raise DomainError(f"position {position} outside 1..{n - 1}")
    b = as_word([b])[0]
    longer = word[:position] + (b,) + word[position:]
    return Fraction(continuant(longer), continuant(word))


def deletion_length_bound(word, position):
    """Lengths ``(|I(word)|, |I(word minus the digit at position)|)``.

    The first never exceeds ``8/(j+1)^2`` times the second, ``j`` the deleted digit.
    """
    word = as_word(word)
    n = len(word)
    if n < 2:
        raise DomainError("need a word of length >= 2")
    if not 1 <= position <= n:
        raise DomainError(f"position {position} outside 1..{n}")
    shorter = word[: position - 1] + word[position:]
    return interval_length(word), interval_length(shorter)


def adjacent_interval_lengths(word):
    """Lengths of the rank-n intervals with last digit ``a_n - 1``, ``a_n``, ``a_n + 1``."""
    word = as_word(word)
    if word[-1] < 2:
        raise DomainError("last digit must be >= 2 so that a_n - 1 is still a digit")
    head, a = word[:-1], word[-1]
    return (
        interval_length(head + (a - 1,)),
        interval_length(word),
        interval_length(head + (a + 1,)),
    )


def log_int(n):
    """Natural log of a positive integer of any size."""
    # math.log splits big ints into mantissa and exponent internally
    if n <= 0:
        raise DomainError("log of a non-positive integer")
    return math.log(n)


def log_fraction(x):
    """Natural log of a positive rational, accurate also when ``x`` is near 1."""
    x = parse_rational(x)
    if x <= 0:
        raise DomainError("log of a non-positive rational")
    num, den = x.numerator, x.denominator
    diff = num - den
    if abs(diff) * 16 < den:
        return math.log1p(diff / den)
    return math.log(num) - math.log(den)


def enumerate_words(alphabet, k, budget=DEFAULT_BUDGET):
    """All words of length ``k`` over ``alphabet`` in lexicographic order, as an int array."""
    alphabet = np.asarray(alphabet, dtype=np.int64)
    size = len(alphabet) ** k
    if size > budget:
        raise BudgetExceededError(f"{len(alphabet)}^{k} = {size} words exceeds budget {budget}")
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([alphabet] * k), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def word_convergent_logs(words):
    """Logs of ``p_k``, ``q_k`` and ``q_{k-1}`` for each row of a word array.

    Uses exact integers: int64 while the recursion provably fits, Python ints
    beyond that.
    """
    words = np.asarray(words, dtype=np.int64)
    m, k = words.shape
    if k == 0:
        raise DomainError("empty words")
    bound = float(np.max(words) + 1) ** k if m else 1.0
    if bound < 2.0**52:
        p_prev, p = np.ones(m, np.int64), np.zeros(m, np.int64)
        q_prev, q = np.zeros(m, np.int64), np.ones(m, np.int64)
        for i in range(k):
            a = words[:, i]
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
        return np.log(p.astype(float)), np.log(q.astype(float)), np.log(q_prev.astype(float))
    logs = np.empty((3, m))
    for r, row in enumerate(words.tolist()):
        p, q, _, q1 = _pq(row)
        logs[:, r] = math.log(p), math.log(q), math.log(q1)
    return logs[0], logs[1], logs[2]
