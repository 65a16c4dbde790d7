import pytest

from cfdim.errors import DomainError
from cfdim.verify import DEFAULT_TRIALS, SUITES, run_all, run_suite


@pytest.mark.parametrize("name", list(SUITES))
def test_suite_passes_small(name):
    rep = run_suite(name, trials=None if name == "2.7" else 50, seed=1)
    assert rep.passed, rep.failures[:3]
    assert rep.checks > 0
    assert rep.summary().startswith(f"suite {name}: PASS")


def test_suites_reproducible():
    a = run_suite("2.1", trials=30, seed=5)
    b = run_suite("2.1", trials=30, seed=5)
    assert a == b


def test_unknown_suite():
    with pytest.raises(DomainError):
        run_suite("9.9")


def test_run_all_defaults():
    reports = run_all()
    assert [r.suite for r in reports] == list(SUITES)
    assert all(r.passed for r in reports)
    assert DEFAULT_TRIALS["2.1"] >= 10_000
