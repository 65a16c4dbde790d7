"""Randomized and exhaustive checks of the continued-fraction and entropy inequalities.

Each suite returns a :class:`SuiteReport` listing every counterexample it
found.  Comparisons in the continued-fraction suites are exact rational ones.
Suites are keyed by lemma label:

``2.1``  determinant identity and denominator bounds
``2.2``  growth of ``q`` under digit insertion
``2.3``  basic-interval endpoints, length identity and sandwich
``2.4``  length loss under digit deletion
``2.5``  adjacent basic intervals within a factor 3
``2.6``  upper bound on ``log|I_n|`` through ``k``-block counts
``2.7``  counting words with small block entropy
``3.1``  block entropy below the interval-length entropy
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .cf_core import (
    adjacent_interval_lengths,
    basic_interval,
    cf_expand,
    convergents,
    deletion_length_bound,
    fold,
    insertion_ratio,
    interval_length,
)
from .errors import DomainError
from .markov import jensen_gap, markov_measure
from .word_stats import interval_log_bound_sides, low_entropy_counts

__all__ = ["SuiteReport", "SUITES", "run_suite", "run_all", "random_words"]

DEFAULT_TRIALS = {"2.1": 10_000, "2.2": 10_000, "2.3": 10_000, "2.4": 10_000, "2.5": 10_000,
                  "2.6": 100, "2.7": 0, "3.1": 200}


@dataclass
class SuiteReport:
    suite: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def fail(self, message):
        self.failures.append(message)

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        return f"suite {self.suite}: {status} ({self.checks} checks, {len(self.failures)} failures)"


def random_words(rng, count, max_digit=100, max_len=50, min_len=1):
    lengths = rng.integers(min_len, max_len + 1, size=count)
    return [tuple(int(a) for a in rng.integers(1, max_digit + 1, size=n)) for n in lengths]


def _suite_21(rng, trials):
    rep = SuiteReport("2.1")
    for w in random_words(rng, trials):
        prev_p, prev_q = 0, 1
        prod_lo = prod_hi = 1
        for c, a in zip(convergents(w), w):
            n = c.index
            prod_lo *= a
            prod_hi *= a + 1
            rep.checks += 3
            if prev_p * c.q - c.p * prev_q != (-1) ** n:
                rep.fail(f"determinant {w[:n]}")
            if c.q * c.q < 2 ** (n - 1):
                rep.fail(f"q_n < 2^((n-1)/2) for {w[:n]}")
            if not prod_lo <= c.q <= prod_hi:
                rep.fail(f"product bounds for {w[:n]}")
            prev_p, prev_q = c.p, c.q
    return rep


def _suite_22(rng, trials):
    rep = SuiteReport("2.2")
    for w in random_words(rng, trials, min_len=2):
        j = int(rng.integers(1, len(w)))
        b = int(rng.integers(1, 101))
        r = insertion_ratio(w, j, b)
        rep.checks += 1
        if not Fraction(b + 1, 2) <= r <= b + 1:
            rep.fail(f"insert {b} after position {j} of {w}: ratio {r}")
    return rep


def _suite_23(rng, trials):
    rep = SuiteReport("2.3")
    for w in random_words(rng, trials):
        iv = basic_interval(w)
        c = convergents(w)
        q = c[-1].q
        q1 = c[-2].q if len(c) > 1 else 1
        p, p1 = c[-1].p, (c[-2].p if len(c) > 1 else 0)
        length = interval_length(w)
        ext = w + tuple(int(a) for a in rng.integers(1, 101, size=3))
        rep.checks += 5
        if {iv.left, iv.right} != {Fraction(p, q), Fraction(p + p1, q + q1)}:
            rep.fail(f"endpoints of I{w}")
        if iv.length != length or length != Fraction(1, q * (q + q1)):
            rep.fail(f"length identity for {w}")
        if not Fraction(1, 2 * q * q) <= length <= Fraction(1, q * q):
            rep.fail(f"length sandwich for {w}")
        if fold(ext) not in iv:
            rep.fail(f"[{ext}] outside I{w}")
        # the word (1,) folds to 1, outside the domain of the expansion
        if fold(w) < 1 and fold(cf_expand(fold(w))) != fold(w):
            rep.fail(f"expand/fold round trip for {w}")
    return rep


def _suite_24(rng, trials):
    rep = SuiteReport("2.4")
    for w in random_words(rng, trials, min_len=2):
        pos = int(rng.integers(1, len(w) + 1))
        j = w[pos - 1]
        full, short = deletion_length_bound(w, pos)
        rep.checks += 1
        if full * (j + 1) ** 2 > 8 * short:
            rep.fail(f"deleting position {pos} of {w}")
    return rep


def _suite_25(rng, trials):
    rep = SuiteReport("2.5")
    for w in random_words(rng, trials):
        if w[-1] == 1:
            w = w[:-1] + (int(rng.integers(2, 101)),)
        lo, mid, hi = adjacent_interval_lengths(w)
        rep.checks += 2
        for side in (lo, hi):
            if not (mid <= 3 * side and side <= 3 * mid):
                rep.fail(f"neighbor of I{w}: {side} vs {mid}")
    return rep


def _suite_26(rng, trials):
    rep = SuiteReport("2.6")
    for w in random_words(rng, trials, max_digit=5, max_len=40):
        for k in (1, 2, 3):
            lhs, rhs = interval_log_bound_sides(w, 5, k)
            rep.checks += 1
            if not lhs <= rhs:
                rep.fail(f"k={k}, word {w}: {lhs} > {rhs}")
    return rep


def _suite_27(rng, trials, N=2, ns=range(8, 17), ks=(1, 2), hs=(0.1, 0.3, 0.5), eps=0.5):
    rep = SuiteReport("2.7")
    for n in ns:
        for k in ks:
            counts = low_entropy_counts(N, n, k, hs)
            for h, c in zip(hs, counts):
                rep.checks += 1
                if c > math.exp(n * (h + eps)):
                    rep.fail(f"N={N} n={n} k={k} h={h}: count {c} > exp({n * (h + eps):.6g})")
    return rep


def _random_chain(rng, A, order):
    kernel = rng.dirichlet(np.ones(A), size=A**order)
    return markov_measure(tuple(range(1, A + 1)), kernel)


def _suite_31(rng, trials):
    rep = SuiteReport("3.1")
    for _ in range(trials):
        A = int(rng.integers(1, 5))
        order = int(rng.integers(0, 3))
        P = _random_chain(rng, A, order)
        for k in (1, 2, 3):
            gap = jensen_gap(P, k)
            rep.checks += 1
            if not gap >= 0:
                rep.fail(f"alphabet {A}, order {order}, k={k}: gap {gap}")
    return rep


SUITES = {
    "2.1": _suite_21, "2.2": _suite_22, "2.3": _suite_23, "2.4": _suite_24,
    "2.5": _suite_25, "2.6": _suite_26, "2.7": _suite_27, "3.1": _suite_31,
}


def run_suite(name, trials=None, seed=0):
    """Run one suite with a generator seeded by ``(seed, suite index)``."""
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    trials = DEFAULT_TRIALS[name] if trials is None else trials
    rng = np.random.default_rng([seed, list(SUITES).index(name)])
    return SUITES[name](rng, trials)


def run_all(trials=None, seed=0):
    return [run_suite(name, trials, seed) for name in SUITES]
