"""Convergents, basic intervals and the exact inequalities behind them.

Everything here is exact rational arithmetic; floats only appear when a log
is printed.
"""

from fractions import Fraction

from cfdim import (
    adjacent_interval_lengths,
    basic_interval,
    cf_expand,
    convergents,
    deletion_length_bound,
    insertion_ratio,
    interval_length,
)

x = Fraction(355, 113) - 3
word = cf_expand(x)
print(f"355/113 - 3 = {x} has digits {word}")
for c in convergents(word):
    print(f"  rank {c.index}: p/q = {c.p}/{c.q}")

iv = basic_interval(word[:2])
print(f"\nI{word[:2]} = [{iv.left}, {iv.right}], length {iv.length}")
print(f"the sandwich 1/(2q^2) <= |I| <= 1/q^2 holds with q = {convergents(word[:2])[-1].q}")

# inserting a digit b multiplies q by something in [(b+1)/2, b+1]
r = insertion_ratio((1, 2, 3), 2, 9)
print(f"\ninsert 9 after position 2 of (1,2,3): q grows by {r} = {float(r):.3f}, inside [5, 10]")

# deleting digit a_j shrinks |I| by at most 8/(a_j+1)^2
full, short = deletion_length_bound((3, 2, 4), 2)
print(f"drop the 2 from (3,2,4): {full} <= (8/9) * {short}: {full <= Fraction(8, 9) * short}")

lo, mid, hi = adjacent_interval_lengths((3, 2))
print(f"neighbours of I(3,2): {lo}, {mid}, {hi}; each within a factor 3 of the middle")

print(f"\nlengths of I(2, j) for j = 1..5 sum to {sum(interval_length((2, j)) for j in range(1, 6))}, "
      f"below |I(2)| = {interval_length((2,))}")
