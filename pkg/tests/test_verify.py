import pytest

from liehamilton.verify import FAULTS, SUITES, run_suite


@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes(suite):
    rep = run_suite(suite)
    assert rep.passed, [c.id for c in rep.failures]


def test_fault_is_caught():
    rep = run_suite("algebra", fault=FAULTS[0])
    assert {c.id for c in rep.failures} == {"algebra.so3.antisymmetry", "algebra.so3.jacobi"}


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("everything")


def test_seed_changes_values_not_outcome():
    a, b = run_suite("integrate", seed=1), run_suite("integrate", seed=2)
    assert a.passed and b.passed
    assert [c.value for c in a.checks] != [c.value for c in b.checks]
