"""The finite-depth ratio alpha_{N,k} for a three-digit law.

At k = 1 only the Bernoulli law is feasible.  Deeper k lets the solver pick a
Markov law with the same digit frequencies but a better entropy/Lyapunov
trade-off: mostly by placing large digits next to small ones.  The entropy
rate version of the ratio sits below the block version, as it must.
"""

from cfdim import FrequencyVector, SolverOptions, VariationalProblem, bernoulli_ratio, solve_alpha

freq = FrequencyVector.from_sequence([0.5, 0.3, 0.2])

print(" k   alpha(block)   alpha(rate)   Bernoulli   theta steps")
for k in (1, 2, 3, 4):
    block = solve_alpha(VariationalProblem(freq, 3, k))
    rate = solve_alpha(VariationalProblem(freq, 3, k, SolverOptions(objective="rate")))
    print(f"{k:2d}   {block.alpha:.9f}   {rate.alpha:.9f}   {bernoulli_ratio(freq, 3, k):.7f}   {block.iterations}")

sol = solve_alpha(VariationalProblem(freq, 3, 2))
print("\nmaximizing transition kernel at k = 2 (rows: previous digit)")
for a, row in zip(sol.measure.alphabet, sol.measure.kernel):
    print(f"  {a}: " + "  ".join(f"{v:.4f}" for v in row))
print("digit marginals:", ", ".join(f"{v:.10f}" for v in sol.measure.digit_marginals()))
