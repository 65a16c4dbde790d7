"""Finite-depth dimension ratios and the assembled dimension estimate.

For a digit law ``p``, an alphabet bound ``N`` and a depth ``k``, ``alpha_{N,k}``
is the supremum over stationary ``(k-1)``-step Markov measures on ``{1..N}``
whose single-digit marginals are ``(p_1, ..., p_{N-1}, 1 - sum_{j<N} p_j)`` of

    [ -(1/k) sum_w p(w) log p(w) ] / [ -2 sum_w p(w) log(p_k(w)/q_k(w)) ],

``w`` ranging over ``k``-words.  The numerator is concave and the denominator
linear in the ``k``-block law, so a Dinkelbach iteration on the ratio level
``theta`` converges to the global supremum.  Each Dinkelbach step maximizes
``H(p) - k theta <p, c>`` over shift-consistent block laws with the marginal
constraints.  Its Lagrange dual is a smooth convex function of the digit
multipliers ``beta`` and of one gauge potential per ``(k-1)``-word (the
multipliers of shift consistency); the primal maximizer for fixed multipliers
is the Gibbs law ``p(w) ~ exp(-k theta c(w) + beta_{w_1} + x(w_2..w_k) - x(w_1..w_{k-1}))``.
The dual is minimized by damped Newton steps.

``objective="rate"`` replaces the block entropy by the entropy rate ``h_P``.
Then the inner step is a pressure computation: ``sup h_P + int phi dP`` equals
the log of the Perron value of the transfer matrix ``exp(phi)`` on
``(k-1)``-words, and only ``beta`` needs a dual loop.
"""

from dataclasses import dataclass, field, asdict
import math
import time

import numpy as np
from scipy import optimize, sparse
from scipy.sparse import linalg as splinalg
from scipy.special import logsumexp, zeta

from .cf_core import DEFAULT_BUDGET, enumerate_words, word_convergent_logs
from .errors import BudgetExceededError, ConvergenceError, DomainError, InfeasibleError
from .markov import (
    MarkovMeasure,
    bernoulli_measure,
    block_probabilities,
    entropy_rate,
    from_block_probabilities,
    log_qk_moment,
    ratio_terms,
    support_alphabet,
    truncate_frequencies,
)
from .perron import perron

__all__ = [
    "SolverOptions",
    "VariationalProblem",
    "AlphaSolution",
    "DimensionEstimate",
    "DivergenceReport",
    "solve_alpha",
    "bernoulli_ratio",
    "dimension",
    "divergence_diagnostic",
    "grid_oracle",
    "covering_tail_sum",
]


@dataclass
class SolverOptions:
    outer_tol: float = 1e-12
    dual_tol: float = 1e-12
    max_outer: int = 100
    max_dual: int = 500
    max_power: int = 10_000
    damping: float = 0.5
    budget: int = DEFAULT_BUDGET
    objective: str = "block"

    @classmethod
    def from_dict(cls, data):
        known = {k: v for k, v in (data or {}).items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass
class VariationalProblem:
    freq: object
    N: int
    k: int
    options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.N < 1 or self.k < 1:
            raise DomainError(f"need N >= 1 and k >= 1, got N={self.N}, k={self.k}")

    @property
    def marginals(self):
        return truncate_frequencies(self.freq, self.N)

    @property
    def alphabet(self):
        return support_alphabet(self.marginals)

    @property
    def constraint_digits(self):
        """Digits whose marginal is imposed explicitly; the last one follows from the total."""
        return self.alphabet[:-1]


@dataclass
class AlphaSolution:
    alpha: float
    measure: MarkovMeasure
    N: int
    k: int
    objective: str
    numerator: float
    denominator: float
    entropy_rate: float
    theta_history: list
    inner_gap: float
    dual_residual: float
    feasibility_residual: float
    iterations: int
    dual_iterations: int

    @property
    def rate_ratio(self):
        """``h_P / denominator`` at the maximizer."""
        return self.entropy_rate / self.denominator if self.denominator > 0 else 0.0


# above this many multipliers Newton steps use preconditioned CG instead of a dense solve
DENSE_HESSIAN_MAX = 1500


class _Cylinders:
    """Per-word data shared by every Dinkelbach step of one problem."""

    def __init__(self, alphabet, k, budget):
        A = len(alphabet)
        if A**k > budget:
            raise BudgetExceededError(f"{A}^{k} cylinders exceeds budget {budget}")
        self.alphabet, self.k, self.A = alphabet, k, A
        words = enumerate_words(alphabet, k, budget)
        log_p, log_q, _ = word_convergent_logs(words)
        self.cost = -2 * (log_p - log_q)
        idx = enumerate_words(np.arange(A), k, budget)
        self.first = idx[:, 0]
        S = A ** (k - 1)
        self.S = S
        codes = np.zeros(len(idx), dtype=np.int64)
        for i in range(k - 1):
            codes = codes * A + idx[:, i]
        self.prefix = codes
        self.suffix = (codes * A) % S + idx[:, -1] if k > 1 else codes

    def features(self):
        """Sparse map from multipliers ``(beta_0..beta_{A-2}, x_0..x_{S-1})`` to word potentials."""
        W, A, S = len(self.cost), self.A, self.S
        rows, cols, vals = [], [], []
        mask = self.first < A - 1
        rows.append(np.flatnonzero(mask))
        cols.append(self.first[mask])
        vals.append(np.ones(mask.sum()))
        if self.k > 1:
            moving = self.prefix != self.suffix
            r = np.flatnonzero(moving)
            rows += [r, r]
            cols += [A - 1 + self.suffix[moving], A - 1 + self.prefix[moving]]
            vals += [np.ones(len(r)), -np.ones(len(r))]
        n_cols = A - 1 + (S if self.k > 1 else 0)
        return sparse.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(W, n_cols)
        )


def _entropy(p):
    with np.errstate(divide="ignore", invalid="ignore"):
        return -math.fsum(np.where(p > 0, p * np.log(p), 0.0))


class _BlockDual:
    """Dual of ``max H(p) - k theta <p, c>`` under marginal and consistency constraints."""

    def __init__(self, cyl, target):
        self.cyl = cyl
        self.F = cyl.features()
        self.Ft = self.F.T.tocsr()
        self.r = np.concatenate([target[:-1], np.zeros(self.F.shape[1] - (cyl.A - 1))])

    def value(self, lam, base):
        return logsumexp(base + self.F @ lam) - self.r @ lam

    def law(self, lam, base):
        z = base + self.F @ lam
        p = np.exp(z - logsumexp(z))
        return p / p.sum()

    def _newton_step(self, p, m, grad):
        # Hessian F^T diag(p) F - m m^T; the gauge shift x -> x + const is a null direction
        d = len(grad)
        if d <= DENSE_HESSIAN_MAX:
            H = (self.Ft @ self.F.multiply(p[:, None])).toarray() - np.outer(m, m)
            ridge = 1e-14 * max(1.0, np.trace(H) / d)
            return np.linalg.solve(H + ridge * np.eye(d), -grad)
        diag = self.Ft.multiply(self.Ft) @ p - m * m
        ridge = 1e-14 * max(1.0, diag.mean())
        op = splinalg.LinearOperator(
            (d, d), matvec=lambda v: self.Ft @ (p * (self.F @ v)) - m * (m @ v) + ridge * v, dtype=float
        )
        pre = splinalg.LinearOperator((d, d), matvec=lambda v: v / (diag + ridge), dtype=float)
        step, _ = splinalg.cg(op, -grad, rtol=1e-12, atol=0.0, maxiter=10 * d, M=pre)
        return step

    def solve(self, base, lam, opts):
        d = self.F.shape[1]
        for it in range(opts.max_dual + 1):
            p = self.law(lam, base)
            m = self.Ft @ p
            grad = m - self.r
            res = np.abs(grad).max() if d else 0.0
            if res <= opts.dual_tol:
                return lam, p, res, it
            step = self._newton_step(p, m, grad)
            g0 = self.value(lam, base)
            slope = grad @ step
            t = 1.0
            # once the decrement is below rounding of G, pure Newton steps are safe
            if -slope > 1e-13 * (1 + abs(g0)):
                while self.value(lam + t * step, base) > g0 + 1e-4 * t * slope and t > 1e-12:
                    t *= opts.damping
            lam = lam + t * step
        raise ConvergenceError(f"dual Newton stalled at residual {res:.3g}", last=(lam, p))


class _RateDual:
    """Pressure dual for ``max h_P - theta <p, c>`` under marginal constraints."""

    def __init__(self, cyl, target):
        self.cyl = cyl
        self.target = target

    def gibbs(self, beta, base, opts):
        cyl = self.cyl
        A, S = cyl.A, cyl.S
        phi = base + np.append(beta, 0.0)[cyl.first]
        if cyl.k == 1:
            z = logsumexp(phi)
            p = np.exp(phi - z)
            return z, p / p.sum(), p[None, :] / p.sum(), np.ones(1)
        shift = phi.max()
        M = sparse.csr_matrix((np.exp(phi - shift), (cyl.prefix, cyl.suffix)), shape=(S, S))
        eig = perron(M, tol=1e-14, max_iter=opts.max_power)
        l, r, rho = eig.left, eig.right, eig.value
        p = l[cyl.prefix] * np.exp(phi - shift) * r[cyl.suffix] / rho
        p /= p.sum()
        kernel = (np.exp(phi - shift) * r[cyl.suffix] / (rho * r[cyl.prefix])).reshape(S, A)
        kernel /= kernel.sum(axis=1, keepdims=True)
        pi = l * r
        return math.log(rho) + shift, p, kernel, pi / pi.sum()

    def marginals(self, beta, base, opts):
        _, p, _, _ = self.gibbs(beta, base, opts)
        return np.bincount(self.cyl.first, weights=p, minlength=self.cyl.A)

    def solve(self, base, beta, opts):
        target = self.target
        its = 0
        res = 0.0
        if len(beta):
            # damped marginal matching, then a root-finder polish
            for its in range(1, opts.max_dual + 1):
                marg = self.marginals(beta, base, opts)
                res = float(np.abs(marg - target).max())
                if res <= 1e-6:
                    break
                beta = beta + opts.damping * (np.log(target[:-1] / marg[:-1]) - math.log(target[-1] / marg[-1]))
            sol = optimize.root(
                lambda b: self.marginals(b, base, opts)[:-1] - target[:-1],
                beta, method="hybr", options={"xtol": 1e-15},
            )
            beta = sol.x
            res = float(np.abs(self.marginals(beta, base, opts) - target).max())
            if res > max(opts.dual_tol, 1e-11):
                raise ConvergenceError(f"pressure dual stalled at residual {res:.3g}", last=beta)
        z, p, kernel, pi = self.gibbs(beta, base, opts)
        return beta, (p, kernel, pi), res, its


def bernoulli_ratio(freq, N, k, budget=DEFAULT_BUDGET):
    """The depth-``k`` ratio at the Bernoulli measure with the truncated marginals."""
    P = bernoulli_measure(freq, N)
    num, den = ratio_terms(P, k, budget)
    return num / den + 0.0 if den > 0 and num > 0 else 0.0


def _dirac_solution(problem, alphabet):
    P = MarkovMeasure(alphabet, 0, np.ones((1, 1)), np.ones(1))
    _, den = ratio_terms(P, problem.k)
    return AlphaSolution(
        alpha=0.0, measure=P, N=problem.N, k=problem.k, objective=problem.options.objective,
        numerator=0.0, denominator=den, entropy_rate=0.0, theta_history=[0.0], inner_gap=0.0,
        dual_residual=0.0, feasibility_residual=0.0, iterations=0, dual_iterations=0,
    )


def solve_alpha(problem):
    """Maximize the depth-``k`` dimension ratio over the constrained Markov family.

    Returns an :class:`AlphaSolution`; ``alpha`` is the supremum, ``measure``
    the maximizing ``(k-1)``-step measure.
    """
    opts = problem.options
    if opts.objective not in ("block", "rate"):
        raise DomainError(f"unknown objective {opts.objective!r}")
    marg = problem.marginals
    alphabet = problem.alphabet
    if not alphabet:
        raise InfeasibleError("no digit carries positive mass after truncation")
    if len(alphabet) == 1:
        # only the constant sequence is feasible; its entropy is 0
        return _dirac_solution(problem, alphabet)
    k = problem.k
    target = marg[np.asarray(alphabet) - 1]
    target = target / math.fsum(target)
    cyl = _Cylinders(alphabet, k, opts.budget)
    rate = opts.objective == "rate"
    dual = _RateDual(cyl, target) if rate else _BlockDual(cyl, target)

    def evaluate(p):
        # (numerator, denominator) of the ratio for a block law p
        den = math.fsum(p * cyl.cost)
        return _entropy(p) / k, den

    bern = np.prod(target[enumerate_words(np.arange(cyl.A), k)], axis=1)
    num0, den0 = evaluate(bern)
    if rate:
        num0 = _entropy(target)
    theta = num0 / den0
    history = [theta]
    if rate:
        lam = np.log(target[:-1] / target[-1])
    else:
        lam = np.zeros(dual.F.shape[1])
        lam[: cyl.A - 1] = np.log(target[:-1] / target[-1])
    dual_its = 0
    gap = math.inf
    for outer in range(1, opts.max_outer + 1):
        scale = 1.0 if rate else k
        base = -scale * theta * cyl.cost
        lam, sol, dual_res, its = dual.solve(base, lam, opts)
        dual_its += its
        if rate:
            p, kernel, pi = sol
            P = MarkovMeasure(alphabet, k - 1, kernel, pi)
            num = entropy_rate(P)
            den = math.fsum(p * cyl.cost)
        else:
            p = sol
            num, den = evaluate(p)
        gap = num - theta * den
        new_theta = num / den
        if gap <= opts.outer_tol:
            break
        theta = max(theta, new_theta)
        history.append(theta)
    else:
        raise ConvergenceError(f"Dinkelbach did not converge in {opts.max_outer} steps", last=theta)

    P = MarkovMeasure(alphabet, k - 1, kernel, pi) if rate else from_block_probabilities(alphabet, p)
    achieved = num / den
    if achieved > theta:
        history.append(achieved)
    alpha = max(theta, achieved)
    feas = float(np.abs(P.digit_marginals() - target).max())
    return AlphaSolution(
        alpha=alpha, measure=P, N=problem.N, k=k, objective=opts.objective,
        numerator=num, denominator=den, entropy_rate=entropy_rate(P), theta_history=history,
        inner_gap=gap, dual_residual=float(dual_res), feasibility_residual=feas,
        iterations=outer, dual_iterations=dual_its,
    )


# ---------------------------------------------------------------------------
# dimension assembly

TABLE_COLUMNS = (
    "N", "k", "alpha", "rate_ratio", "bernoulli_ratio", "theta_iterations",
    "dual_residual", "feasibility_residual", "divergence_flag", "wall_time", "status",
)

DIAGNOSTIC_N = (10, 100, 1000)


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return "" if v is None else str(v)


@dataclass
class DimensionEstimate:
    """Finite-grid evaluation of ``max{1/2, sup ratio}`` with diagnostics.

    ``sup_term`` is the largest ``alpha_{N,k}`` at the deepest solved ``k`` of
    each ``N``; ``value`` is ``max(1/2, min(1, sup_term))``, or ``1/2`` when
    the log-moment diverges.
    """

    value: float
    sup_term: float
    table: list
    divergence_flag: bool
    divergence: object = None
    max_dual_residual: float = 0.0
    iterations: int = 0
    solutions: dict = field(default_factory=dict, repr=False)

    def rows(self, timing=False):
        out = []
        for row in self.table:
            row = dict(row)
            if not timing:
                row["wall_time"] = None
            out.append(row)
        return out

    def to_csv(self, timing=False):
        lines = [",".join(TABLE_COLUMNS)]
        for row in self.rows(timing):
            lines.append(",".join(_fmt(row.get(c)) for c in TABLE_COLUMNS))
        lines.append(f"# value,{_fmt(self.value)}")
        lines.append(f"# sup_term,{_fmt(self.sup_term)}")
        lines.append(f"# divergence_flag,{_fmt(self.divergence_flag)}")
        return "\n".join(lines) + "\n"

    def to_dict(self, timing=False):
        return {
            "value": self.value,
            "sup_term": self.sup_term,
            "divergence_flag": self.divergence_flag,
            "max_dual_residual": self.max_dual_residual,
            "iterations": self.iterations,
            "table": self.rows(timing),
            "divergence": None if self.divergence is None else self.divergence.to_dict(),
        }


def _solve_cell(freq, N, k, options):
    start = time.perf_counter()
    row = {c: None for c in TABLE_COLUMNS}
    row.update(N=N, k=k)
    sol = None
    try:
        sol = solve_alpha(VariationalProblem(freq, N, k, options))
        row.update(
            alpha=sol.alpha, rate_ratio=sol.rate_ratio,
            bernoulli_ratio=bernoulli_ratio(freq, N, k, options.budget),
            theta_iterations=sol.iterations, dual_residual=sol.dual_residual,
            feasibility_residual=sol.feasibility_residual, status="ok",
        )
    except InfeasibleError as exc:
        row["status"] = f"infeasible: {exc}"
    except BudgetExceededError as exc:
        row["status"] = f"budget: {exc}"
    except ConvergenceError as exc:
        row["status"] = f"nonconvergence: {exc}"
    except DomainError as exc:
        row["status"] = f"domain: {exc}"
    row["wall_time"] = time.perf_counter() - start
    return row, sol


def dimension(freq, N_list, k_list, options=None, jobs=1, diagnostic_N=DIAGNOSTIC_N):
    """Tabulate ``alpha_{N,k}`` over the grid and assemble the dimension estimate.

    Failed cells keep their row with a ``status`` message and no ``alpha``.
    """
    N_list = sorted(set(int(n) for n in N_list))
    k_list = sorted(set(int(k) for k in k_list))
    if not N_list or not k_list:
        raise DomainError("N_list and k_list must be nonempty")
    options = options or SolverOptions()
    cells = [(N, k) for N in N_list for k in k_list]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve_cell, *zip(*[(freq, N, k, options) for N, k in cells])))
    else:
        results = [_solve_cell(freq, N, k, options) for N, k in cells]

    diag = divergence_diagnostic(freq, diagnostic_N, k=1, budget=options.budget)
    table, solutions = [], {}
    deepest = {}
    for (N, k), (row, sol) in zip(cells, results):
        row["divergence_flag"] = diag.flag
        table.append(row)
        if sol is not None:
            solutions[(N, k)] = sol
            deepest[N] = row
    if not deepest:
        raise ConvergenceError("no grid cell could be solved", last=table)
    sup_term = max(row["alpha"] for row in deepest.values())
    value = 0.5 if diag.flag else max(0.5, min(1.0, sup_term))
    return DimensionEstimate(
        value=value, sup_term=sup_term, table=table, divergence_flag=diag.flag, divergence=diag,
        max_dual_residual=max((s.dual_residual for s in solutions.values()), default=0.0),
        iterations=sum(s.iterations for s in solutions.values()),
        solutions=solutions,
    )


# ---------------------------------------------------------------------------
# log-moment divergence

@dataclass
class DivergenceReport:
    N_list: list
    k: int
    moments: list
    increments: list
    lemma_ratios: list
    declared_class: str
    trend_unbounded: bool
    flag: bool
    threshold: float

    def to_dict(self):
        return asdict(self)


def _untruncated_ratio(freq, N, k, budget):
    # -sum p log p / (2 sum p log q_k) over Sigma_N^k with the product law of freq itself
    words = enumerate_words(np.arange(1, N + 1), k, budget)
    probs = np.prod(freq.head(N)[words - 1], axis=1)
    _, log_q, _ = word_convergent_logs(words)
    keep = probs > 0
    num = -math.fsum(probs[keep] * np.log(probs[keep]))
    den = 2 * math.fsum(probs * log_q)
    return num / den if den > 0 else 0.0


def divergence_diagnostic(freq, N_list=DIAGNOSTIC_N, k=1, threshold=0.5, budget=DEFAULT_BUDGET):
    """Trend of ``2 sum p log q_k`` at the Bernoulli feasible point along ``N_list``.

    The trend counts as unbounded when every increment is positive and the last
    increment is at least ``threshold`` times the one before (no geometric
    flattening on the log-``N`` scale).  The declared log-moment class of
    ``freq`` decides the flag when it is known; the trend decides otherwise.
    Slowly converging tails (``p_j ~ j^{-1.1}``, say) look unbounded at desk
    scale, which is why the declared class wins.
    """
    N_list = sorted(set(int(n) for n in N_list))
    moments = [2 * log_qk_moment(bernoulli_measure(freq, N), k, budget) for N in N_list]
    increments = [b - a for a, b in zip(moments, moments[1:])]
    ratios = [_untruncated_ratio(freq, N, k, budget) for N in N_list]
    tol = 1e-12 * max(1.0, abs(moments[-1]))
    rising = len(increments) >= 2 and all(d > tol for d in increments)
    trend = rising and increments[-1] >= threshold * increments[-2]
    declared = freq.log_moment_class()
    flag = declared == "infinite" if declared != "unknown" else trend
    return DivergenceReport(
        N_list=N_list, k=k, moments=moments, increments=increments, lemma_ratios=ratios,
        declared_class=declared, trend_unbounded=trend, flag=flag, threshold=threshold,
    )


def covering_tail_sum(N, gamma):
    """``sum_{j > N} 8/(j+1)^{2 gamma}``; the covering argument needs this below 1."""
    if gamma <= 0.5:
        raise DomainError("gamma must exceed 1/2 for the tail to converge")
    return 8 * float(zeta(2 * gamma, N + 2))


# ---------------------------------------------------------------------------
# brute-force oracle for tiny instances

def _cf_value(digits):
    x = 0.0
    for a in reversed(digits):
        x = 1.0 / (a + x)
    return x


def grid_oracle(freq, N, k, resolution=1e-3, refine=True):
    """Maximize the depth-``k`` ratio over a grid of feasible block laws.

    Independent of :func:`solve_alpha`: ratios are evaluated in floating point
    from the continued-fraction values of the words.  For ``k = 2`` the
    feasible laws are the ``N x N`` tables with both margins equal to the
    truncated frequencies, parametrized by their leading ``(N-1) x (N-1)`` block.
    """
    if N > 3 or k > 2 or N < 1 or k < 1:
        raise BudgetExceededError("grid_oracle only handles N <= 3 and k <= 2")
    m = truncate_frequencies(freq, N)
    words = [tuple(int(a) for a in w) for w in np.ndindex(*(N,) * k)]
    words = [tuple(a + 1 for a in w) for w in words]
    cost = np.array([-2 * math.log(_cf_value(w)) for w in words])

    def ratio(p):
        p = np.clip(p, 0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            h = -np.sum(np.where(p > 0, p * np.log(p), 0.0), axis=-1)
        den = p @ cost
        # zero entropy means ratio 0, even for the all-ones word where den = 0 at k = 1
        return np.where(h > 0, (h / k) / np.where(den > 0, den, 1.0), 0.0) + 0.0

    if k == 1 or N == 1:
        law = m if k == 1 else np.outer(m, m).ravel()
        return float(ratio(law))

    d = N - 1

    def complete(x):
        # x: (..., d*d) leading block -> (..., N*N) table with margins m
        x = x.reshape(x.shape[:-1] + (d, d))
        last_col = m[:d] - x.sum(axis=-1)
        top = np.concatenate([x, last_col[..., None]], axis=-1)
        last_row = m - top.sum(axis=-2)
        return np.concatenate([top, last_row[..., None, :]], axis=-2).reshape(x.shape[:-2] + (N * N,))

    axes = [np.arange(0, m[i // d] + resolution / 2, resolution) for i in range(d * d)]
    if math.prod(len(a) for a in axes) > 5 * 10**7:
        raise BudgetExceededError(f"grid at resolution {resolution:g} is too large; coarsen it")
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d * d)
    best, best_x = -np.inf, None
    for chunk in np.array_split(grid, max(1, len(grid) // 200_000)):
        tables = complete(chunk)
        ok = (tables >= -1e-15).all(axis=1)
        if not ok.any():
            continue
        vals = ratio(tables[ok])
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_x = float(vals[i]), chunk[ok][i]
    if refine and best_x is not None:
        cons = [{"type": "ineq", "fun": lambda x: complete(x)}]
        res = optimize.minimize(
            lambda x: -ratio(complete(x)), best_x, method="SLSQP",
            bounds=[(0, m[i // d]) for i in range(d * d)], constraints=cons,
            options={"ftol": 1e-14, "maxiter": 500},
        )
        if res.success and (complete(res.x) >= -1e-12).all():
            best = max(best, float(-res.fun))
    return best
