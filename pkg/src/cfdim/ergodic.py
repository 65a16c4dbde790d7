"""Monte Carlo Birkhoff averages used as oracles for the dimension ratio.

``gauss_orbit_ratio`` follows floating-point orbits of ``T(x) = 1/x mod 1``
from uniform seeds.  It estimates the Lyapunov term ``2 int |log x| dmu`` as the
Birkhoff mean of ``2|log T^i x|`` and the entropy as ``-(1/n) log mu(I_n(x))``
(Shannon-McMillan-Breiman), where ``mu`` is the Gauss measure.  The two are
computed from different data: the orbit points and the digit recursion for
``q_n``.

``bernoulli_lyapunov`` averages ``2|log T^i x|`` along i.i.d. digit strings,
evaluating ``T^i x = [a_{i+1}, a_{i+2}, ...]`` by backward recursion.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError

__all__ = ["OrbitEstimate", "gauss_orbit_ratio", "bernoulli_lyapunov", "GAUSS_LYAPUNOV"]

# 2 int |log x| dmu_Gauss = pi^2 / (6 log 2)
GAUSS_LYAPUNOV = math.pi**2 / (6 * math.log(2))
# digits past the horizon that feed the backward recursion; 1/q^2 for 60 digits is far below eps
_TAIL = 60


@dataclass
class OrbitEstimate:
    entropy: np.ndarray
    lyapunov: np.ndarray
    restarts: int

    @property
    def ratios(self):
        return self.entropy / self.lyapunov

    @property
    def ratio(self):
        return float(self.entropy.sum() / self.lyapunov.sum())

    @property
    def stderr(self):
        r = self.ratios
        return float(r.std(ddof=1) / math.sqrt(len(r))) if len(r) > 1 else math.nan


def gauss_orbit_ratio(orbits=100, length=100_000, seed=0):
    """Per-orbit entropy and Lyapunov estimates for the Gauss measure."""
    if orbits < 1 or length < 1:
        raise DomainError("orbits and length must be positive")
    rng = np.random.default_rng(seed)
    x = rng.random(orbits)
    x0 = x.copy()
    lyap = np.zeros(orbits)
    log_q = np.zeros(orbits)
    r = np.full(orbits, np.inf)  # q_i / q_{i-1}; q_0 / q_{-1} is infinite
    restarts = 0
    for _ in range(length):
        bad = ~(x > 1e-300)
        if bad.any():
            # a float orbit can land on 0; reseed that orbit and keep counting digits
            restarts += int(bad.sum())
            x[bad] = rng.random(int(bad.sum()))
        lyap -= np.log(x)
        y = 1.0 / x
        a = np.floor(y)
        x = y - a
        r = a + 1.0 / r
        log_q += np.log(r)
    # log|I_n| = -log(q_n (q_n + q_{n-1})) and mu(I_n) ~ |I_n| / ((1 + x0) log 2)
    log_len = -2 * log_q - np.log1p(1.0 / r)
    log_mu = log_len - np.log1p(x0) - math.log(math.log(2))
    return OrbitEstimate(entropy=-log_mu / length, lyapunov=2 * lyap / length, restarts=restarts)


def bernoulli_lyapunov(probs, alphabet=None, length=100_000, orbits=10, seed=0, block=10_000):
    """Birkhoff estimate of ``2 int |log x| dP`` for the Bernoulli measure with digit law ``probs``.

    ``alphabet`` defaults to ``1..len(probs)``.
    """
    probs = np.asarray(probs, dtype=float)
    probs = probs / probs.sum()
    alphabet = np.arange(1, len(probs) + 1) if alphabet is None else np.asarray(alphabet)
    rng = np.random.default_rng(seed)
    total = np.zeros(orbits)
    done = 0
    tail = rng.choice(alphabet, size=(orbits, _TAIL), p=probs).astype(float)
    while done < length:
        m = min(block, length - done)
        digits = rng.choice(alphabet, size=(orbits, m), p=probs).astype(float)
        seq = np.hstack([digits, tail])
        y = np.zeros(orbits)
        # backward pass: y_i = 1 / (a_i + y_{i+1}) equals T^{i-1} x up to the tail cutoff
        for i in range(seq.shape[1] - 1, -1, -1):
            y = 1.0 / (seq[:, i] + y)
            if i < m:
                total -= np.log(y)
        # blocks are laid out right to left: the next one is followed by this one
        tail = digits[:, :_TAIL] if m >= _TAIL else np.hstack([digits, tail])[:, :_TAIL]
        done += m
    return 2 * total / length
