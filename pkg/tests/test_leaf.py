import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liehamilton import leaf
from liehamilton.kks import basis_fields, kks_bivector
from liehamilton.lie_algebra import catalog
from liehamilton.polyfield import lie_derivative
from liehamilton.verify import CHART_CASES

SL2, SO3 = catalog("sl2"), catalog("so3")


@pytest.mark.parametrize("name,k", CHART_CASES)
def test_chart_round_trip_and_casimir(name, k):
    r = leaf.chart_report(leaf.builtin_chart(name, k), n=50)
    assert r["residuals"]["round_trip"] < 1e-10
    assert r["residuals"]["casimir"] < 1e-10


@given(st.floats(0.2, 3.0), st.floats(-2.0, 2.0), st.floats(0.1, 2.0))
def test_sl2_chart_lands_on_leaf(k, x, y):
    ch = leaf.builtin_chart("sl2_pos", k)
    e = ch.forward(np.array([x, y]))
    assert leaf.casimir_value("sl2", e) == pytest.approx(k, rel=1e-9, abs=1e-9)


@given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_so3_inverse_jacobian_matches_finite_differences(x, y):
    ch = leaf.builtin_chart("so3", 1.5)
    p = np.array([x, y])
    if not ch.domain(p):
        return
    e = ch.forward(p)
    J = ch.jacobian(e)
    # J maps ambient velocities to chart velocities; check on the tangent image of forward
    for i in range(2):
        dp = np.zeros(2)
        dp[i] = 1e-6
        de = (ch.forward(p + dp) - ch.forward(p - dp)) / 2e-6
        assert np.allclose(J @ de, dp / 1e-6, atol=1e-5)


@pytest.mark.parametrize("alg,k", [("sl2", 1.0), ("sl2", -1.0), ("sl2", 0.0), ("so3", 1.0)])
def test_canonical_transitions(alg, k, rng):
    t = leaf.canonical_transition(alg, k)
    spec = leaf.restrict(catalog(alg), t.chart)
    assert leaf.chart_equivalence_residual(spec, t.target, t.map, t.chart.sample(rng, 50)) < 1e-6


def test_transition_detects_wrong_target(rng):
    t = leaf.canonical_transition("sl2", 1.0)
    spec = leaf.restrict(SL2, t.chart)
    wrong = leaf.canonical_transition("sl2", -1.0).target
    assert leaf.chart_equivalence_residual(spec, wrong, t.map, t.chart.sample(rng, 20)) > 1e-3


def test_det_identity_and_labels():
    det = leaf.tensor_determinant(leaf.casimir_tensor(SL2))
    assert det == SL2.ring.parse("e1^2*(e1*e3 - e2^2)")
    assert [str(leaf.classify_leaf(SL2, k)) for k in (2, -3, 0)] == ["P2", "I4", "I5"]
    assert str(leaf.classify_leaf(SO3, 1)) == "P3"
    assert str(leaf.classify_leaf(catalog("iso2"), 1)) == "I14A(r=2)"


@pytest.mark.parametrize("entry", [SL2, SO3], ids=["sl2", "so3"])
def test_casimir_tensor_invariant(entry):
    T = leaf.casimir_tensor(entry)
    assert all(lie_derivative(X, T).is_zero() for X in basis_fields(kks_bivector(entry.sc)))


@pytest.mark.parametrize("alg,chart,k,sig", [("sl2", "sl2_pos", 1.0, "riemannian"),
                                             ("sl2", "sl2_neg", -1.0, "lorentzian"),
                                             ("so3", "so3", 2.0, "riemannian")])
def test_metric_signature(alg, chart, k, sig, rng):
    ch = leaf.builtin_chart(chart, k)
    for p in ch.sample(rng, 20):
        assert leaf.metric_at(catalog(alg), k, ch.forward(p))["signature"] == sig


def test_invalid_leaf_parameters():
    with pytest.raises(leaf.LeafError):
        leaf.builtin_chart("sl2_pos", -1.0)
    with pytest.raises(leaf.LeafError):
        leaf.builtin_chart("so3", 0.0)
    with pytest.raises(leaf.LeafError):
        leaf.classify_leaf(SO3, -1.0)


def test_restricted_bracket_closure(rng):
    ch = leaf.builtin_chart("sl2_e12", 1.0)
    spec = leaf.restrict(SL2, ch)
    assert leaf.restricted_bracket_residual(spec, ch.sample(rng, 10)) < 1e-4
    assert math.isfinite(leaf.fd_jacobian(lambda p: p ** 2, np.array([1.0, 2.0]))[0, 0])
