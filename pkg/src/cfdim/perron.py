"""Power iteration for nonnegative primitive matrices."""

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import ConvergenceError

__all__ = ["PerronData", "perron", "stationary_distribution"]


@dataclass
class PerronData:
    value: float
    left: np.ndarray
    right: np.ndarray
    residual: float
    iterations: int


def _power(M, tol, max_iter, x0=None):
    n = M.shape[0]
    x = np.full(n, 1.0 / n) if x0 is None else np.asarray(x0, float) / np.sum(x0)
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = M @ x
        lam = y.sum()
        y /= lam
        res = np.abs(y - x).sum()
        x = y
        if res <= tol:
            return lam, x, res, it
    raise ConvergenceError(f"power iteration did not reach {tol:g} in {max_iter} steps", last=(lam, x))


def perron(M, tol=1e-13, max_iter=10_000):
    """Perron value and positive left/right vectors of a primitive nonnegative matrix.

    ``M`` may be dense or a scipy sparse matrix.

    Normalization: ``right`` sums to 1 and ``left @ right == 1``.  The residual
    is ``max(|M r - rho r|, |l M - rho l|)`` relative to ``rho``.
    """
    M = M.tocsr() if sparse.issparse(M) else np.asarray(M, dtype=float)
    if M.shape == (1, 1):
        one = np.ones(1)
        return PerronData(float(M[0, 0]), one, one, 0.0, 0)
    rho, r, _, it_r = _power(M, tol, max_iter)
    _, l, _, it_l = _power(M.T.tocsr() if sparse.issparse(M) else M.T, tol, max_iter)
    l = l / (l @ r)
    residual = max(np.abs(M @ r - rho * r).max(), np.abs(M.T @ l - rho * l).max()) / rho
    return PerronData(float(rho), l, r, float(residual), max(it_r, it_l))


def stationary_distribution(T, tol=1e-14, max_iter=10_000, x0=None):
    """Stationary law of a row-stochastic matrix by power iteration on ``T^t``."""
    T = np.asarray(T, dtype=float)
    if T.shape == (1, 1):
        return np.ones(1)
    _, pi, _, _ = _power(T.T, tol, max_iter, x0)
    return pi
