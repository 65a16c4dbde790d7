"""Points with prescribed digit frequencies and the Cantor-like set ``F_z(b)``.

``seed_point`` draws a word whose ``m``-th digit never exceeds ``c_m`` and
whose digit frequencies approach the target law.  ``fz_point`` forces a huge
digit in ``(b^{k^2}, 2 b^{k^2}]`` at each square position ``k^2`` and copies
the seed elsewhere; such points keep the seed's digit frequencies because the
squares have density zero.  ``local_dimension_profile`` compares the natural
measure of these sets with exact interval lengths.

``b`` may be passed as a float or through ``log_b``; big integer bounds are
computed in decimal arithmetic with enough digits for ``b^{k^2}``.
"""

from dataclasses import dataclass
import decimal
import functools
import math

import numpy as np

from .cf_core import as_word, interval_length, log_fraction
from .errors import DomainError

__all__ = [
    "GrowthSequence",
    "FzParameters",
    "seed_point",
    "fz_point",
    "fz_digit_range",
    "fz_measure_mass",
    "local_dimension_profile",
    "length_bound_sides",
    "PROFILE_COLUMNS",
]

PROFILE_COLUMNS = (
    "m", "n", "log_mass", "log_length", "ratio", "corrected_ratio", "bound_ok", "verified",
)


class GrowthSequence:
    """Nondecreasing positive integers ``c_n`` tending to infinity.

    ``GrowthSequence()`` is ``c_n = n``; ``GrowthSequence(g)`` is ``ceil(g(n))``
    for a monotone callable ``g``.
    """

    def __init__(self, rule=None, name=None):
        self.rule = rule
        self.name = name or ("identity" if rule is None else getattr(rule, "__name__", "custom"))

    def values(self, n):
        """``(c_1, ..., c_n)`` as an int64 array."""
        idx = np.arange(1, n + 1)
        if self.rule is None:
            return idx.astype(np.int64)
        c = np.array([math.ceil(self.rule(int(i))) for i in idx], dtype=np.int64)
        if (c < 1).any() or (np.diff(c) < 0).any():
            raise DomainError("growth sequence must be positive and nondecreasing")
        return c

    def __call__(self, n):
        return int(self.values(n)[-1])

    def __repr__(self):
        return f"GrowthSequence({self.name})"


def seed_point(freq, growth, n, seed=0):
    """Random word of length ``n`` with ``a_m <= c_m`` and digit law ``freq`` restricted to ``{1..c_m}``.

    Each digit is drawn independently from ``p_i / sum_{j <= c_m} p_j``, or
    uniformly on ``{1..c_m}`` when that sum vanishes.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    growth = growth or GrowthSequence()
    c = growth.values(n)
    cmax = int(c.max())
    support = freq.support_bound
    J = cmax if support is None else min(cmax, support)
    cdf = np.cumsum(freq.head(J))
    mass = cdf[np.minimum(c, J) - 1]
    rng = np.random.default_rng(seed)
    # u in (0, 1] so that a zero-mass digit 1 is never chosen
    u = 1.0 - rng.random(n)
    digits = np.searchsorted(cdf, u * mass, side="left") + 1
    digits = np.minimum(digits, np.minimum(c, J))
    empty = mass <= 0
    if empty.any():
        digits[empty] = 1 + np.floor(rng.random(int(empty.sum())) * c[empty]).astype(np.int64)
    return tuple(int(d) for d in digits)


@dataclass(frozen=True)
class FzParameters:
    """Seed digits ``z``, base ``b > 1`` (or ``log_b``) and usable depth."""

    z: tuple
    b: float = None
    log_b: float = None
    depth: int = None
    check_growth: bool = True

    def __post_init__(self):
        z = as_word(self.z)
        object.__setattr__(self, "z", z)
        if (self.b is None) == (self.log_b is None):
            raise DomainError("give exactly one of b and log_b")
        if self.log_b is None:
            if not self.b > 1:
                raise DomainError(f"b = {self.b} must exceed 1")
            object.__setattr__(self, "log_b", math.log(self.b))
        elif not self.log_b > 0:
            raise DomainError(f"log_b = {self.log_b} must be positive")
        if self.depth is None:
            object.__setattr__(self, "depth", len(z))
        if self.depth > len(z):
            raise DomainError(f"depth {self.depth} exceeds the {len(z)} seed digits")
        if self.check_growth:
            bad = [i for i, a in enumerate(z[: self.depth], 1) if a > i]
            if bad:
                raise DomainError(f"seed digit z_{bad[0]} = {z[bad[0] - 1]} exceeds {bad[0]}")


@functools.lru_cache(maxsize=1024)
def fz_digit_range(log_b, k):
    """Integer range ``floor(b^{k^2}) + 1 .. floor(2 b^{k^2})`` for the ``k^2``-th digit."""
    digits = int(k * k * log_b / math.log(10)) + 30
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        power = (decimal.Decimal(k * k) * decimal.Decimal(log_b)).exp()
        lo = int(power.to_integral_value(decimal.ROUND_FLOOR)) + 1
        hi = int((2 * power).to_integral_value(decimal.ROUND_FLOOR))
    if hi < lo:
        raise DomainError(f"empty digit range at position {k * k}")
    return lo, hi


def _uniform_int(rng, lo, hi):
    """Uniform integer in ``[lo, hi]`` for arbitrarily large bounds."""
    span = hi - lo + 1
    if span <= 2**62:
        return lo + int(rng.integers(0, span))
    nbytes = (span.bit_length() + 7) // 8
    excess = 8 * nbytes - span.bit_length()
    while True:
        v = int.from_bytes(rng.bytes(nbytes), "big") >> excess
        if v < span:
            return lo + v


def fz_point(params, n, seed=0):
    """Word of length ``n`` in ``F_z(b)``: uniform huge digits at squares, ``z`` elsewhere."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if n > params.depth:
        raise DomainError(f"n = {n} exceeds depth {params.depth}")
    rng = np.random.default_rng(seed)
    word = list(params.z[:n])
    for k in range(1, math.isqrt(n) + 1):
        lo, hi = fz_digit_range(params.log_b, k)
        word[k * k - 1] = _uniform_int(rng, lo, hi)
    return tuple(word)


def fz_measure_mass(m, b=None, log_b=None):
    """``log mu(I_m) = -(sum_{k <= n} k^2) log b`` with ``n = floor(sqrt(m))``."""
    if m < 1:
        raise DomainError("m must be >= 1")
    if (b is None) == (log_b is None):
        raise DomainError("give exactly one of b and log_b")
    log_b = math.log(b) if log_b is None else log_b
    n = math.isqrt(m)
    return -(n * (n + 1) * (2 * n + 1) // 6) * log_b


def length_bound_sides(word, m, log_b):
    """``(-log|I(x_1..x_{m+1})|, log 2 + 2(n+1) log 3 + 2 sum_{k<=n+1} k^2 log b + 2 sum_{k<=(n+1)^2} log(k+1))``."""
    n = math.isqrt(m)
    lhs = -log_fraction(interval_length(word[: m + 1]))
    squares = (n + 1) * (n + 2) * (2 * n + 3) // 6
    rhs = (
        math.log(2) + 2 * (n + 1) * math.log(3) + 2 * squares * log_b
        + 2 * math.fsum(math.log(k + 1) for k in range(1, (n + 1) ** 2 + 1))
    )
    return lhs, rhs


def _matches(word, log_b, upto):
    for k in range(1, math.isqrt(upto) + 1):
        lo, hi = fz_digit_range(log_b, k)
        if not lo <= word[k * k - 1] <= hi:
            return False
    return True


def local_dimension_profile(word, b=None, depths=None, log_b=None):
    """Rows ``(m, n, log_mass, log_length, ratio, corrected_ratio, bound_ok, verified)``.

    ``ratio = log mu(I(x_1..x_{n^2})) / log|I(x_1..x_{m+1})|`` with ``n^2 <= m < (n+1)^2``;
    ``corrected_ratio`` uses ``3 mu`` and ``|I|/3`` in place of ``mu`` and ``|I|``.
    ``verified`` says whether the square digits lie in the ranges for ``b``.
    """
    word = as_word(word)
    if (b is None) == (log_b is None):
        raise DomainError("give exactly one of b and log_b")
    log_b = math.log(b) if log_b is None else log_b
    depths = range(1, len(word)) if depths is None else depths
    rows = []
    for m in depths:
        if not 1 <= m <= len(word) - 1:
            raise DomainError(f"depth m = {m} needs m + 1 <= {len(word)} digits")
        n = math.isqrt(m)
        log_mass = fz_measure_mass(m, log_b=log_b)
        log_len = log_fraction(interval_length(word[: m + 1]))
        lhs, rhs = length_bound_sides(word, m, log_b)
        rows.append({
            "m": m,
            "n": n,
            "log_mass": log_mass,
            "log_length": log_len,
            "ratio": log_mass / log_len,
            "corrected_ratio": (log_mass + math.log(3)) / (log_len - math.log(3)),
            "bound_ok": lhs <= rhs,
            "verified": _matches(word, log_b, m + 1),
        })
    return rows
