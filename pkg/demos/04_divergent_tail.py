"""A frequency vector with sum p_j log j = infinity.

For p_j ~ 1 / (j log^2(j+1)) the log-moment diverges.  No invariant measure
with these frequencies has finite Lyapunov exponent, so the dimension is 1/2.
The diagnostic shows the Bernoulli Lyapunov term growing without flattening.
"""

from cfdim import FrequencyVector, dimension, divergence_diagnostic, gauss_frequencies

div = FrequencyVector.power_log(1.0, 2.0)
gauss = gauss_frequencies()
for name, freq in (("p_j ~ 1/(j log^2 j)", div), ("Gauss", gauss)):
    rep = divergence_diagnostic(freq, (10, 100, 1000, 3000))
    print(f"{name}: declared {rep.declared_class}, flag {rep.flag}")
    for N, m, r in zip(rep.N_list, rep.moments, rep.lemma_ratios):
        print(f"  N = {N:5d}   2 sum p log q = {m:.4f}   entropy/lyapunov on Sigma_N = {r:.4f}")

est = dimension(div, [5, 10], [1, 2])
print(f"\ndimension estimate: value {est.value}, sup_term {est.sup_term:.4f} (reported but not used)")
