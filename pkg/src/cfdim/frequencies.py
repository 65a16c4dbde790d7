"""Prescribed digit-frequency laws ``p = (p_1, p_2, ...)``.

A law is a finite table of explicit entries plus an optional parametric tail
covering every digit past the last explicit one.  Two tails are built in:

``power_log``  ``p_j = c j^{-a} log(j+1)^{-b}``
``gauss``      ``p_j = log2(1 + 1/(j(j+2)))`` (digit law of the Gauss measure)

JSON form::

    {"entries": [[1, 0.5], [2, 0.25]],
     "tail": null | {"family": "power_log", "c": 1.0, "a": 1.0, "b": 2.0}
                  | {"family": "gauss"},
     "normalize": false}
"""

from dataclasses import dataclass, field
from functools import lru_cache
import json
import math

import numpy as np
from scipy import integrate

from .errors import DomainError

__all__ = [
    "PowerLogTail",
    "GaussTail",
    "FrequencyVector",
    "gauss_frequencies",
    "load_frequency_vector",
]

MASS_TOL = 1e-12
_HEAD_TERMS = 1000


def _power_log_integral(a, b, s):
    """``int_s^inf x^{-a} log(x+1)^{-b} dx`` for ``s >= 2``."""

    def integrand(v):
        ev = math.exp(v) if v < 700 else math.inf
        log_l = math.log(ev + math.log1p(math.exp(-ev))) if ev < 40 else v
        lead = (1 - a) * ev if a != 1 else 0.0
        return math.exp(lead + v - b * log_l)

    v0 = math.log(math.log(s))
    cuts = [v0, v0 + 1, v0 + 3, v0 + 10, v0 + 30, math.inf]
    return math.fsum(
        integrate.quad(integrand, lo, hi, epsabs=0, epsrel=1e-13, limit=200)[0]
        for lo, hi in zip(cuts, cuts[1:])
    )


@dataclass(frozen=True)
class PowerLogTail:
    c: float
    a: float
    b: float
    family: str = "power_log"

    def pmf(self, j):
        j = np.asarray(j, dtype=float)
        return self.c * j ** (-self.a) * np.log(j + 1) ** (-self.b)

    @lru_cache(maxsize=None)
    def shape_sum(self, start):
        """``sum_{j >= start} j^{-a} log(j+1)^{-b}`` (without ``c``).

        Direct sum up to 1000, then Euler-Maclaurin with the integral taken
        after the substitution ``x = exp(exp(v))``, which turns the slowly
        decaying integrand into an exponentially decaying one.
        """
        a, b = self.a, self.b
        if a < 1 or (a == 1 and b <= 1):
            raise DomainError(f"power_log tail with a={a}, b={b} is not summable")
        s = max(start, _HEAD_TERMS)
        j = np.arange(start, s, dtype=float)
        head = math.fsum(j ** (-a) * np.log(j + 1) ** (-b))
        f = s ** (-a) * math.log(s + 1) ** (-b)
        df = f * (-a / s - b / ((s + 1) * math.log(s + 1)))
        return head + _power_log_integral(a, b, s) + f / 2 - df / 12

    def mass_from(self, start):
        return self.c * self.shape_sum(start)

    def log_moment_class(self):
        # sum j^{-a} log(j+1)^{-b} log j < inf  iff  a > 1 or b > 2
        return "finite" if self.a > 1 or self.b > 2 else "infinite"

    def to_json(self):
        return {"family": "power_log", "c": self.c, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class GaussTail:
    family: str = "gauss"

    def pmf(self, j):
        j = np.asarray(j, dtype=float)
        return np.log1p(1.0 / (j * (j + 2))) / math.log(2)

    def mass_from(self, start):
        # telescoping: sum_{j <= J} p_j = log2(2(J+1)/(J+2))
        return math.log2((start + 1) / start)

    def log_moment_class(self):
        return "finite"

    def to_json(self):
        return {"family": "gauss"}


@dataclass(frozen=True)
class FrequencyVector:
    """Digit law with explicit entries for ``j < tail_start`` and a tail beyond."""

    entries: dict = field(default_factory=dict)
    tail: object = None

    def __post_init__(self):
        clean = {}
        for j, p in dict(self.entries).items():
            j, p = int(j), float(p)
            if j < 1:
                raise DomainError(f"digit {j} is not a positive integer")
            if p < 0 or not math.isfinite(p):
                raise DomainError(f"p_{j} = {p} is not a nonnegative real")
            clean[j] = p
        object.__setattr__(self, "entries", clean)
        total = self.total_mass()
        if abs(total - 1) > MASS_TOL:
            raise DomainError(f"total mass {total!r} differs from 1")

    @property
    def tail_start(self):
        return max(self.entries, default=0) + 1

    @property
    def support_bound(self):
        """Largest digit with positive mass, or ``None`` for an infinite support."""
        if self.tail is not None:
            return None
        positive = [j for j, p in self.entries.items() if p > 0]
        return max(positive)

    def total_mass(self):
        explicit = math.fsum(self.entries.values())
        if self.tail is None:
            return explicit
        return explicit + self.tail.mass_from(self.tail_start)

    def pmf(self, j):
        """``p_j`` for an int or an integer array."""
        js = np.atleast_1d(np.asarray(j, dtype=np.int64))
        out = np.array([self.entries.get(int(i), 0.0) for i in js])
        if self.tail is not None:
            mask = js >= self.tail_start
            if mask.any():
                out[mask] = self.tail.pmf(js[mask])
        return float(out[0]) if np.ndim(j) == 0 else out

    def head(self, J):
        """``(p_1, ..., p_J)`` as an array."""
        return self.pmf(np.arange(1, J + 1))

    def partial_sum(self, J):
        """``sum_{j <= J} p_j``."""
        return math.fsum(self.head(J)) if J > 0 else 0.0

    def mass_beyond(self, J):
        """``sum_{j > J} p_j`` computed without cancellation where possible."""
        if self.tail is not None and J + 1 >= self.tail_start:
            return self.tail.mass_from(J + 1)
        return max(1.0 - self.partial_sum(J), 0.0)

    def log_moment_class(self):
        """Whether ``sum p_j log j`` is finite: ``'finite'``, ``'infinite'`` or ``'unknown'``."""
        if self.tail is None:
            return "finite"
        if hasattr(self.tail, "log_moment_class"):
            return self.tail.log_moment_class()
        return "unknown"

    def to_json(self):
        return {
            "entries": [[j, p] for j, p in sorted(self.entries.items())],
            "tail": None if self.tail is None else self.tail.to_json(),
            "normalize": False,
        }

    @classmethod
    def from_sequence(cls, probs):
        """Finite law ``(p_1, ..., p_m)``."""
        return cls({j: p for j, p in enumerate(probs, start=1)})

    @classmethod
    def power_log(cls, a, b, entries=None):
        """Explicit ``entries`` followed by a normalized ``power_log`` tail."""
        entries = dict(entries or {})
        start = max(entries, default=0) + 1
        rest = 1.0 - math.fsum(entries.values())
        shape = PowerLogTail(1.0, a, b)
        return cls(entries, PowerLogTail(rest / shape.shape_sum(start), a, b))

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        entries = {int(j): float(p) for j, p in data.get("entries", [])}
        spec = data.get("tail")
        normalize = bool(data.get("normalize", False))
        if spec is None:
            if normalize:
                total = math.fsum(entries.values())
                if total <= 0:
                    raise DomainError("cannot normalize a zero vector")
                entries = {j: p / total for j, p in entries.items()}
            return cls(entries)
        family = spec.get("family")
        if family == "gauss":
            return cls(entries, GaussTail())
        if family == "power_log":
            a, b = float(spec["a"]), float(spec["b"])
            if normalize:
                return cls.power_log(a, b, entries)
            return cls(entries, PowerLogTail(float(spec["c"]), a, b))
        raise DomainError(f"unknown tail family {family!r}")


def gauss_frequencies():
    """Digit frequencies of a Gauss-typical point, ``p_j = log2(1 + 1/(j(j+2)))``."""
    return FrequencyVector({}, GaussTail())


def load_frequency_vector(path):
    with open(path) as fh:
        return FrequencyVector.from_json(json.load(fh))
