from fractions import Fraction

import math
import pytest
from hypothesis import given

from conftest import R2E, R3, polys
from liehamilton.poly import DegreeCapExceeded, Ring, RingMismatch


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert (p - p).is_zero()


@given(polys(), polys())
def test_product_rule(p, q):
    for i in range(3):
        assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


@given(polys())
def test_str_round_trip(p):
    assert R3.parse(str(p)) == p


def test_parse_and_evaluate():
    p = R3.parse("x^2*y - 3/2*z + 1")
    assert p.evaluate([2.0, 3.0, 4.0]) == pytest.approx(12 - 6 + 1)
    assert p.subs({0: Fraction(1)}) == R3.parse("y - 3/2*z + 1")


def test_exponential_extension():
    e = R2E.parse("exp(2*x)*y")
    assert e.diff(0) == R2E.parse("2*exp(2*x)*y")
    assert e.evaluate([0.5, 3.0]) == pytest.approx(3 * math.e)
    assert (R2E.parse("exp(x)") * R2E.parse("exp(-x)")) == R2E.const(1)


def test_trig_extension_pythagoras():
    R = Ring(("t",)).with_trig("t")
    s = R.parse("cos(t)^2 + sin(t)^2")
    assert s == R.const(1)
    assert R.parse("sin(t)").diff(0) == R.parse("cos(t)")


def test_ring_mismatch_and_degree_cap():
    with pytest.raises(RingMismatch):
        R3.parse("x") + Ring(("a", "b")).parse("a")
    with pytest.raises(DegreeCapExceeded):
        R3.parse("x")**40


def test_numeric_matches_evaluate():
    p = R3.parse("x*y^2 - z + 7")
    f = p.numeric()
    assert f([1.5, -2.0, 0.25]) == pytest.approx(p.evaluate([1.5, -2.0, 0.25]))
