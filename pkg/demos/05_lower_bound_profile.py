"""Local-dimension profiles on the Cantor-like set F_z(b).

Square positions k^2 carry a digit in (b^{k^2}, 2 b^{k^2}].  Between squares the
ratio log mu / log |I| sits near 1/2; just before each square the next huge
digit already shrinks |I| while mu has not yet dropped, and the ratio dips to
at most S_n / (2 S_{n+1}) with S_n = 1 + 4 + ... + n^2.  The dip shrinks as n
grows, so the liminf approaches 1/2, but at desk depths it stays visible.
"""

from cfdim import FrequencyVector, FzParameters, GrowthSequence, fz_point, local_dimension_profile, seed_point


def S(n):
    return n * (n + 1) * (2 * n + 1) // 6


z = seed_point(FrequencyVector.from_sequence([0.5, 0.5]), GrowthSequence(), 122, seed=0)
for log_b in (10.0, 100.0):
    x = fz_point(FzParameters(z, log_b=log_b), 122, seed=0)
    rows = local_dimension_profile(x, log_b=log_b, depths=range(1, 121))
    print(f"b = e^{log_b:g}")
    print("   n   ratio at m = n^2   ratio at m = (n+1)^2 - 1   bound S_n/(2 S_(n+1))")
    for n in range(1, 11):
        a = rows[n * n - 1]["ratio"]
        b = rows[(n + 1) ** 2 - 2]["ratio"]
        print(f"  {n:2d}   {a:.4f}             {b:.4f}                     {S(n) / (2 * S(n + 1)):.4f}")
    print(f"  every row verified: {all(r['verified'] for r in rows)}, "
          f"length bound holds: {all(r['bound_ok'] for r in rows)}\n")
