"""Hausdorff dimension of continued-fraction digit-frequency sets.

The dimension of the set of ``x`` in ``[0, 1)`` whose partial quotient ``j``
occurs with frequency ``p_j`` is ``max{1/2, sup h_mu / (2 int |log x| dmu)}``,
the supremum running over invariant ergodic measures with digit law ``p`` and
finite log-moment.  This package evaluates finite-alphabet, finite-depth
approximations of the supremum, and checks the supporting inequalities.
"""

__version__ = "0.1.0"

from .cf_core import (
    BasicInterval,
    Convergent,
    adjacent_interval_lengths,
    basic_interval,
    cf_expand,
    continuant,
    convergents,
    deletion_length_bound,
    fold,
    insertion_ratio,
    interval_length,
)
from .constructions import (
    FzParameters,
    GrowthSequence,
    fz_measure_mass,
    fz_point,
    local_dimension_profile,
    seed_point,
)
from .ergodic import GAUSS_LYAPUNOV, OrbitEstimate, bernoulli_lyapunov, gauss_orbit_ratio
from .errors import BudgetExceededError, ConvergenceError, DomainError, InfeasibleError
from .frequencies import FrequencyVector, gauss_frequencies, load_frequency_vector
from .markov import (
    MarkovMeasure,
    bernoulli_measure,
    cylinder_probability,
    entropy_rate,
    jensen_gap,
    log_qk_moment,
    lyapunov_functional,
    markov_measure,
    perturb,
    truncate_frequencies,
)
from .optimizer import (
    AlphaSolution,
    DimensionEstimate,
    SolverOptions,
    VariationalProblem,
    bernoulli_ratio,
    covering_tail_sum,
    dimension,
    divergence_diagnostic,
    grid_oracle,
    solve_alpha,
)
from .verify import SuiteReport, run_all, run_suite
from .word_stats import (
    BlockFrequencyTable,
    block_counts,
    block_entropy,
    count_low_entropy_words,
    digit_frequency,
    interval_log_bound_sides,
)
