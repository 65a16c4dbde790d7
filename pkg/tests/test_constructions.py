from collections import Counter
import math

import numpy as np
import pytest

from cfdim.cf_core import interval_length, log_fraction
from cfdim.constructions import (
    PROFILE_COLUMNS,
    FzParameters,
    GrowthSequence,
    fz_digit_range,
    fz_measure_mass,
    fz_point,
    length_bound_sides,
    local_dimension_profile,
    seed_point,
)
from cfdim.errors import DomainError
from cfdim.frequencies import FrequencyVector, gauss_frequencies

HALF = FrequencyVector.from_sequence([0.5, 0.5])


def S(n):
    return n * (n + 1) * (2 * n + 1) // 6


def test_growth_sequence():
    assert GrowthSequence().values(5).tolist() == [1, 2, 3, 4, 5]
    g = GrowthSequence(lambda n: math.sqrt(n), name="sqrt")
    assert g.values(10).tolist() == [1, 2, 2, 2, 3, 3, 3, 3, 3, 4]
    assert g(16) == 4 and repr(g) == "GrowthSequence(sqrt)"
    with pytest.raises(DomainError):
        GrowthSequence(lambda n: 10 - n).values(5)


def test_seed_point_examples():
    assert seed_point(FrequencyVector.from_sequence([1.0]), GrowthSequence(), 50, seed=3) == (1,) * 50
    w = seed_point(HALF, GrowthSequence(), 10**5, seed=1)
    assert abs(Counter(w)[1] / len(w) - 0.5) <= 0.01
    assert seed_point(HALF, None, 100, seed=4) == seed_point(HALF, GrowthSequence(), 100, seed=4)


def test_seed_point_respects_growth():
    g = gauss_frequencies()
    for growth in (GrowthSequence(), GrowthSequence(lambda n: math.log(n + 1) + 1)):
        w = np.array(seed_point(g, growth, 5000, seed=8))
        assert (w <= growth.values(5000)).all() and (w >= 1).all()


def test_seed_point_zero_mass_fallback():
    # no mass on digit 1, so the first step (c_1 = 1) falls back to uniform on {1}
    w = seed_point(FrequencyVector.from_sequence([0.0, 1.0]), GrowthSequence(), 20, seed=0)
    assert w == (1,) + (2,) * 19


def test_seed_point_gauss_bands():
    g = gauss_frequencies()
    n = 10**5
    counts = Counter(seed_point(g, GrowthSequence(), n, seed=2024))
    for j in range(1, 6):
        p = float(g.pmf(j))
        assert abs(counts[j] / n - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_seed_point_frequencies_converge():
    medians = []
    for n in (10**3, 10**4, 10**5):
        errs = [abs(Counter(seed_point(HALF, GrowthSequence(), n, seed=s))[1] / n - 0.5) for s in range(20)]
        medians.append(float(np.median(errs)))
    assert medians[0] > medians[1] > medians[2]


def test_fz_parameters():
    with pytest.raises(DomainError):
        FzParameters(z=(1, 3), b=2.0)
    with pytest.raises(DomainError):
        FzParameters(z=(1,), b=1.0)
    with pytest.raises(DomainError):
        FzParameters(z=(1,), b=2.0, log_b=1.0)
    p = FzParameters(z=(1, 1, 3), b=2.0, check_growth=False)
    assert p.depth == 3 and p.log_b == pytest.approx(math.log(2))


def test_fz_digit_range_exact():
    assert fz_digit_range(1.0, 1) == (3, 5)  # (e, 2e]
    lo, hi = fz_digit_range(1.0, 2)
    assert (lo, hi) == (math.floor(math.exp(4)) + 1, math.floor(2 * math.exp(4)))
    lo, hi = fz_digit_range(10.0, 10)
    # e^1000 has 435 decimal digits
    assert len(str(lo)) == 435 and hi // lo == 1 and 2 * lo - hi <= 3
    # even b barely above 1 leaves the digit 2 available at position 1
    assert fz_digit_range(math.log(1.01), 1) == (2, 2)


def test_fz_point_examples():
    params = FzParameters(z=(1,) * 20, log_b=1.0)
    w = fz_point(params, 4, seed=0)
    assert 3 <= w[0] <= 5 and w[1:3] == (1, 1)
    # position 4 = 2^2 carries a digit in (b^4, 2 b^4]
    assert math.exp(4) < w[3] <= 2 * math.exp(4)
    assert fz_point(params, 20, seed=7) == fz_point(params, 20, seed=7)
    assert fz_point(params, 20, seed=7) != fz_point(params, 20, seed=8)
    with pytest.raises(DomainError):
        fz_point(params, 21)


def test_fz_point_keeps_seed_frequencies():
    z = seed_point(HALF, GrowthSequence(), 2500, seed=1)
    w = fz_point(FzParameters(z=z, log_b=0.01), 2500, seed=1)
    squares = {k * k - 1 for k in range(1, 51)}
    assert all(a == b for i, (a, b) in enumerate(zip(w, z)) if i not in squares)
    assert abs(Counter(w)[1] - Counter(z)[1]) <= 50


def test_fz_measure_mass_examples():
    for m in (1, 2, 3):
        assert fz_measure_mass(m, b=math.e) == pytest.approx(-1)
    assert fz_measure_mass(4, b=math.e) == pytest.approx(-5)
    assert fz_measure_mass(9, b=2.0) == pytest.approx(-14 * math.log(2))
    with pytest.raises(DomainError):
        fz_measure_mass(0, b=2.0)


def test_fz_measure_mass_telescopes():
    for n in range(1, 12):
        block = {fz_measure_mass(m, log_b=1.0) for m in range(n * n, (n + 1) ** 2)}
        assert len(block) == 1
        step = fz_measure_mass((n + 1) ** 2, log_b=1.0) - fz_measure_mass((n + 1) ** 2 - 1, log_b=1.0)
        assert step == pytest.approx(-((n + 1) ** 2))


@pytest.mark.parametrize("log_b", [0.5, 10.0, 50.0])
def test_length_bound_holds(log_b):
    for seed in range(5):
        w = fz_point(FzParameters(z=(1,) * 101, log_b=log_b), 101, seed=seed)
        for m in range(1, 100):
            lhs, rhs = length_bound_sides(w, m, log_b)
            assert lhs <= rhs


def test_profile_columns_and_exact_lengths():
    w = fz_point(FzParameters(z=(1,) * 40, log_b=10.0), 40, seed=3)
    rows = local_dimension_profile(w, log_b=10.0, depths=[4, 20, 39])
    assert tuple(rows[0]) == PROFILE_COLUMNS
    for r in rows:
        assert r["log_length"] == log_fraction(interval_length(w[: r["m"] + 1]))
        assert r["ratio"] == pytest.approx(r["log_mass"] / r["log_length"])
        assert r["verified"] and r["bound_ok"]
    with pytest.raises(DomainError):
        local_dimension_profile(w, log_b=10.0, depths=[40])


def test_profile_flags_mismatched_b():
    w = fz_point(FzParameters(z=(1,) * 20, log_b=10.0), 20, seed=3)
    rows = local_dimension_profile(w, log_b=3.0, depths=[5])
    assert not rows[0]["verified"]


def test_profile_upper_bound_before_each_square():
    # the (n+1)^2 digit exceeds b^{(n+1)^2}, so at m = (n+1)^2 - 1 the ratio is below S_n / (2 S_{n+1})
    for log_b in (1.0, 10.0, 100.0):
        w = fz_point(FzParameters(z=(1,) * 121, log_b=log_b), 121, seed=0)
        rows = local_dimension_profile(w, log_b=log_b, depths=[(n + 1) ** 2 - 1 for n in range(1, 10)])
        for r in rows:
            assert r["ratio"] < S(r["n"]) / (2 * S(r["n"] + 1))


def test_profile_large_b_limits():
    log_b = 500.0
    w = fz_point(FzParameters(z=(1,) * 36, log_b=log_b), 36, seed=5)
    for r in local_dimension_profile(w, log_b=log_b, depths=range(1, 36)):
        n = r["n"]
        limit = S(n) / (2 * S(n + 1)) if r["m"] == (n + 1) ** 2 - 1 else 0.5
        assert r["ratio"] == pytest.approx(limit, abs=2e-3)


def test_profile_all_ones_smoke():
    rows = local_dimension_profile((1,) * 12, b=2.0, depths=range(1, 12))
    assert all(math.isfinite(r["ratio"]) and r["ratio"] > 0 for r in rows)
    assert not any(r["verified"] for r in rows)
    with pytest.raises(DomainError):
        local_dimension_profile((1,) * 12)
