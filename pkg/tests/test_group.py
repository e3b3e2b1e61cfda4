from fractions import Fraction

import numpy as np
import pytest

from liehamilton import group as grp
from liehamilton.integrate import random_trig
from liehamilton.polyfield import lie_derivative
from liehamilton.verify import GROUP_CASES, I14A_INSTANCE, I14B_INSTANCE

IDS = [f"{n}-{'-'.join(map(str, kw.values()))}" for n, kw in GROUP_CASES]


@pytest.fixture(params=GROUP_CASES, ids=IDS)
def model(request):
    name, kw = request.param
    return grp.group_model(name, **kw)


def test_left_and_right_fields_commute(model):
    assert grp.left_right_commutators(model) == []


def test_structure_constant_signs(model):
    assert grp.field_constants(model, "right") == model.expected_constants
    assert grp.field_constants(model, "left") == model.expected_constants.negated()


def test_product_associative_and_inverse(model, rng):
    a, b, c = (model.near_identity(rng) for _ in range(3))
    assert np.allclose(model.multiply(model.multiply(a, b), c), model.multiply(a, model.multiply(b, c)), atol=1e-10)
    e = np.array([float(v) for v in model.identity])
    assert np.allclose(model.multiply(model.inverse(a), a), e, atol=1e-10)


def test_left_wedge_is_right_invariant(model):
    B = grp.left_wedge(model, 1, 2)
    assert all(lie_derivative(X, B).is_zero() for X in model.right_fields)


@pytest.mark.parametrize("name", ["SL2", "SL2_semi_R2"])
def test_superposition(name, rng):
    m = grp.group_model(name)
    sys_ = grp.automorphic_system(m, [random_trig(rng) for _ in m.right_fields])
    res = grp.superposition_residual(m, sys_, m.near_identity(rng), m.near_identity(rng), np.linspace(0, 3, 16))
    assert res < 1e-6


@pytest.mark.parametrize("name,kw,pair", [("SL2_semi_R2", {}, (4, 5)), ("H2_semi_Rr", {"r": 1}, (1, 2)),
                                          ("H2_semi_Rr", {"r": 2}, (1, 2)), ("R_semi_R2", {}, (1, 2))])
def test_projectable_bivectors(name, kw, pair, rng):
    m = grp.group_model(name, **kw)
    q = grp.quotient(m)
    pts = m.sample(rng, 10)
    assert grp.projectability_residual(m, grp.left_wedge(m, *pair), q, pts) < 1e-10
    assert grp.intertwining_residual(q, pts) < 1e-8


def test_mixed_wedge_not_projectable(rng):
    m = grp.group_model("SL2_semi_R2")
    res = grp.projectability_residual(m, grp.right_wedge_left(m, 4, 5), grp.quotient(m), m.sample(rng, 10))
    assert res > 0.1


@pytest.mark.parametrize("eta,zero", [(I14A_INSTANCE, False), (I14B_INSTANCE, True)])
def test_i14_projection_is_poisson(eta, zero, rng):
    m = grp.group_model("Gr_I14", eta=eta)
    pc = grp.projected_poisson_check(m, grp.left_wedge(m, 1, 2), grp.quotient(m), m.sample(rng, 10))
    assert pc.upstairs_zero is zero
    assert pc.pushforward_schouten < 1e-9


def test_projection_of_identity_is_origin():
    m = grp.group_model("SL2_semi_R2")
    q = grp.quotient(m)
    assert np.allclose(q(np.array([float(v) for v in m.identity])), 0.0)


def test_unknown_group():
    with pytest.raises((KeyError, ValueError)):
        grp.group_model("E8")


def test_identity_fields_agree(model):
    e = {i: Fraction(v) for i, v in enumerate(model.identity)}
    for L, R in zip(model.left_fields, model.right_fields):
        assert [c.subs(e) for c in L.comps] == [c.subs(e) for c in R.comps]
