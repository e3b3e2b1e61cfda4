import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from liehamilton.integrate import (Constant, IntegrationError, NonFiniteState, PolyT, TDSystem, TrigSum,
                                   coefficient_from_dict, drift, integrate, random_trig, vg_closure_report)
from liehamilton.kks import basis_fields, kks_bivector
from liehamilton.lie_algebra import CATALOG_NAMES, catalog
from liehamilton.verify import order_ratios


def _system(name, coeffs):
    F = basis_fields(kks_bivector(catalog(name).sc))
    return TDSystem(len(F), tuple(F), tuple(coeffs))


def test_constant_sl2_closed_form():
    sys_ = _system("sl2", [Constant(1.0), Constant(0.0), Constant(0.0)])
    tr = integrate(sys_, [1, 0, 0], (0, 2), 1e-10)
    assert np.allclose(tr.final, [1, 2, 4], atol=1e-8)


@given(st.integers(0, 2 ** 31 - 1))
def test_matches_scipy_oracle(seed):
    rng = np.random.default_rng(seed)
    sys_ = _system("so3", [random_trig(rng) for _ in range(3)])
    x0 = rng.uniform(-1, 1, 3)
    ours = integrate(sys_, x0, (0, 3), 1e-10)
    ref = solve_ivp(sys_, (0, 3), x0, method="DOP853", rtol=1e-12, atol=1e-12)
    assert np.allclose(ours.final, ref.y[:, -1], atol=1e-7)


@pytest.mark.parametrize("name", [n for n in CATALOG_NAMES if catalog(n).casimirs])
def test_casimir_drift(name, rng):
    e = catalog(name)
    sys_ = _system(name, [random_trig(rng) for _ in range(e.sc.dim)])
    tr = integrate(sys_, rng.uniform(-1, 1, e.sc.dim), (0, 5), 1e-10)
    for C in e.casimirs:
        assert drift(tr, C.numeric()) <= 1e-8


def test_order_ratio_near_32():
    assert all(16 <= q <= 64 for q in order_ratios()[1:])


def test_backward_and_dense_output():
    sys_ = _system("sl2", [TrigSum(((1.0, 0.0, 1.0),)), Constant(0.0), Constant(0.0)])
    ts = np.linspace(0, 2, 9)
    tr = integrate(sys_, [1, 0, 0], (0, 2), 1e-10, t_eval=ts)
    exact = np.array([[1, math.sin(t), math.sin(t) ** 2] for t in ts])
    assert np.allclose(tr.states, exact, atol=1e-8)
    back = integrate(sys_, tr.final, (2, 0), 1e-10)
    assert np.allclose(back.final, [1, 0, 0], atol=1e-8)


def test_blow_up_reported():
    sys_ = _system("sl2", [Constant(0.0), Constant(200.0), Constant(0.0)])
    with pytest.raises(IntegrationError) as exc:
        integrate(sys_, [1, 0, 1], (0, 10), 1e-10)
    assert isinstance(exc.value, (NonFiniteState, IntegrationError)) and 0 < exc.value.t < 10


def test_argument_validation():
    sys_ = _system("sl2", [Constant(1.0)] * 3)
    with pytest.raises(ValueError):
        integrate(sys_, [1, 0, 0], (0, 1), 0.0)
    with pytest.raises(ValueError):
        integrate(sys_, [1, 0, 0], (1, 1))
    with pytest.raises(ValueError):
        TDSystem(3, sys_.fields, (Constant(1.0),))


def test_coefficient_descriptors():
    assert coefficient_from_dict(2) == Constant(2.0)
    assert coefficient_from_dict({"type": "poly", "coeffs": [1, 2]})(3.0) == 7.0
    t = coefficient_from_dict({"type": "trig", "terms": [[1, 0, 2]]})
    assert t(0.5) == pytest.approx(math.cos(1.0))
    with pytest.raises(ValueError):
        coefficient_from_dict({"type": "spline"})
    with pytest.raises(ValueError):
        coefficient_from_dict({"type": "constant", "value": float("nan")})
    assert PolyT((1.0,)).to_dict() == {"type": "poly", "coeffs": [1.0]}


@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 5), st.floats(0.1, 3.0))
def test_random_trig_respects_bound(seed, n, bound):
    c = random_trig(np.random.default_rng(seed), nterms=n, bound=bound)
    assert c.bound() <= bound * (1 + 1e-12)


def test_csv_has_full_precision(tmp_path):
    sys_ = _system("so3", [Constant(1.0), Constant(0.0), Constant(0.0)])
    tr = integrate(sys_, [0.1, 0.2, 0.3], (0, 1), 1e-10)
    text = tr.to_csv(tmp_path / "t.csv")
    last = [float(v) for v in text.strip().splitlines()[-1].split(",")]
    assert np.array_equal(np.array(last[1:]), tr.final)


def test_vg_closure_report():
    F = basis_fields(kks_bivector(catalog("iso2").sc))
    assert vg_closure_report(F) == catalog("iso2").sc
