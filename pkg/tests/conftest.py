from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from liehamilton.poly import Poly, Ring
from liehamilton.polyfield import Bivector, VectorField

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

R3 = Ring(("x", "y", "z"))
R2E = Ring(("x", "y")).with_exp("x")

small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def polys(draw, ring=R3, max_terms=3, max_deg=2):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        key = tuple(draw(st.integers(0, max_deg)) for _ in range(ring.nvars))
        terms[key] = draw(small_fractions)
    return Poly(ring, terms)


@st.composite
def vector_fields(draw, ring=R3):
    return VectorField(ring, [draw(polys(ring, max_terms=2, max_deg=1)) for _ in range(ring.ncoords)])


@st.composite
def bivectors(draw, ring=R3):
    n = ring.ncoords
    return Bivector(ring, {(i, j): draw(polys(ring, max_terms=2, max_deg=1))
                           for i in range(n) for j in range(i + 1, n)})


@pytest.fixture
def rng():
    return np.random.default_rng(42)


HALF = Fraction(1, 2)
