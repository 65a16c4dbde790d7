"""The Gauss measure: where entropy equals the Lyapunov exponent.

The Birkhoff oracle confirms h / (2 int |log x|) = 1 for the Gauss measure.
The truncated Gauss frequencies give alpha_{N,k} values that climb toward 1
as N grows, slowly, because the truncation lumps the heavy tail into digit N.
At k = 1 the ratio overshoots 1: the depth-one Lyapunov term 2 log a charges
nothing for the digit 1, so short cylinders look cheaper than they are.
"""

import math

from cfdim import GAUSS_LYAPUNOV, VariationalProblem, bernoulli_ratio, gauss_frequencies, gauss_orbit_ratio, solve_alpha

est = gauss_orbit_ratio(orbits=40, length=50_000, seed=7)
print(f"Birkhoff ratio h/lambda over 40 orbits: {est.ratio:.6f} +- {est.stderr:.1e}")
print(f"mean Lyapunov estimate {est.lyapunov.mean():.4f} vs pi^2/(6 log 2) = {GAUSS_LYAPUNOV:.4f}")

g = gauss_frequencies()
print("\n  N   alpha_{N,1}   alpha_{N,2}   Bernoulli k=2")
for N in (3, 5, 10, 20, 40):
    a1 = solve_alpha(VariationalProblem(g, N, 1)).alpha
    a2 = solve_alpha(VariationalProblem(g, N, 2)).alpha
    print(f"{N:3d}   {a1:.6f}      {a2:.6f}      {bernoulli_ratio(g, N, 2):.6f}")
print(f"\ntail mass lumped into digit N = 40: {g.mass_beyond(39):.4f}, about 1/(N log 2) = {1 / (40 * math.log(2)):.4f}")
