"""Acceptance criteria 1-9.  Each test prints one ``PASS``/``FAIL`` line."""
from __future__ import annotations

import sys

import numpy as np
import pytest

from liehamilton import group as grp
from liehamilton import leaf
from liehamilton.integrate import TDSystem, drift, integrate, random_trig, vg_closure_report
from liehamilton.kks import basis_fields, is_casimir, kks_bivector
from liehamilton.lie_algebra import CATALOG_NAMES, all_entries, catalog, closure_constants, validate
from liehamilton.polyfield import lie_derivative, schouten_self
from liehamilton.table1 import canonical_fields
from liehamilton.verify import I14A_INSTANCE, I14B_INSTANCE, SAME_CONSTANTS, order_ratios

SEED = 42
TOL = 1e-10


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, text: str):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def test_criterion_1_exact_algebra(report):
    bad = [e.name for e in all_entries() if not validate(e.sc).ok]
    closes = []
    for name, labels in SAME_CONSTANTS.items():
        e = catalog(name)
        for label in labels:
            kw = {"eta": e.params["eta"]} if "eta" in e.params else ({"r": e.params["r"]} if "r" in e.params else {})
            closes.append((label, vg_closure_report(canonical_fields(label, **kw).fields) == e.sc))
    failed = [lab for lab, ok in closes if not ok]
    report(1, len(CATALOG_NAMES) == 8 and not bad and not failed,
           f"{len(CATALOG_NAMES)} algebras valid (bad: {bad}); {len(closes)} table bases close (bad: {failed})")


def test_criterion_2_kks(report):
    schouten_bad, closure_bad, casimirs = [], [], []
    for e in all_entries():
        L = kks_bivector(e.sc)
        if not schouten_self(L.bivector).is_zero():
            schouten_bad.append(e.name)
        if closure_constants(basis_fields(L)) != e.sc:
            closure_bad.append(e.name)
        casimirs += [(e.name, is_casimir(L, C)) for C in e.casimirs]
    cas_bad = [n for n, ok in casimirs if not ok]
    report(2, not schouten_bad and not closure_bad and len(casimirs) == 4 and not cas_bad,
           f"[L,L]=0 and X_h closure for all; {len(casimirs)} Casimirs exact (bad: {schouten_bad + closure_bad + cas_bad})")


def test_criterion_3_classification(report):
    sl2 = catalog("sl2")
    R = sl2.ring
    det = leaf.tensor_determinant(leaf.casimir_tensor(sl2))
    det_ok = det == R.parse("e1^2*(e1*e3 - e2^2)")
    labels = {k: str(leaf.classify_leaf(sl2, k)) for k in (1, -1, 0)}
    so3 = str(leaf.classify_leaf(catalog("so3"), 1))
    ok = det_ok and labels == {1: "P2", -1: "I4", 0: "I5"} and so3 == "P3"
    report(3, ok, f"det = {det}; sl2 k=+1/-1/0 -> {labels[1]}/{labels[-1]}/{labels[0]}; so3 -> {so3}")


def test_criterion_4_chart_equivalence(report):
    rng = np.random.default_rng(SEED)
    res = {}
    for alg, k in (("sl2", 1.0), ("sl2", -1.0), ("sl2", 0.0), ("so3", 1.0)):
        t = leaf.canonical_transition(alg, k)
        spec = leaf.restrict(catalog(alg), t.chart)
        res[f"{alg}->{t.label}"] = leaf.chart_equivalence_residual(spec, t.target, t.map, t.chart.sample(rng, 50))
    worst = max(res.values())
    report(4, worst <= 1e-6, "max residual " + ", ".join(f"{k}: {v:.2e}" for k, v in res.items()))


def test_criterion_5_conservation_and_order(report):
    rng = np.random.default_rng(SEED)
    worst, count = 0.0, 0
    for e in all_entries():
        if not e.casimirs:
            continue
        F = basis_fields(kks_bivector(e.sc))
        coeffs = tuple(random_trig(rng, bound=1.0) for _ in F)
        assert all(c.bound() <= 1.0 + 1e-12 for c in coeffs)
        tr = integrate(TDSystem(e.sc.dim, tuple(F), coeffs), rng.uniform(-1, 1, e.sc.dim), (0, 5), TOL)
        for C in e.casimirs:
            worst = max(worst, drift(tr, C.numeric()))
            count += 1
    ratios = order_ratios()
    order_ok = all(16 <= q <= 64 for q in ratios[1:])
    report(5, worst <= 100 * TOL and order_ok,
           f"max drift {worst:.2e} over {count} Casimirs (limit {100 * TOL:.0e}); "
           f"order ratios {', '.join(f'{q:.1f}' for q in ratios)}")


def test_criterion_6_superposition(report):
    rng = np.random.default_rng(SEED)
    t = np.linspace(0, 3, 31)
    worst = {}
    for name in ("SL2", "SL2_semi_R2"):
        m = grp.group_model(name)
        w = 0.0
        for _ in range(5):
            sys_ = grp.automorphic_system(m, [random_trig(rng) for _ in m.right_fields])
            for _ in range(3):
                w = max(w, grp.superposition_residual(m, sys_, m.near_identity(rng), m.near_identity(rng), t, TOL))
        worst[name] = w
    report(6, max(worst.values()) <= 1e-6,
           "max |h(t)-h(0)| " + ", ".join(f"{k}: {v:.2e}" for k, v in worst.items()))


def test_criterion_7_projectability(report):
    rng = np.random.default_rng(SEED)
    res = {}
    cases = (("SL2_semi_R2", {}, (4, 5)), ("H2_semi_Rr", {"r": 1}, (1, 2)), ("H2_semi_Rr", {"r": 2}, (1, 2)),
             ("R_semi_R2", {}, (1, 2)))
    for name, kw, (i, j) in cases:
        m = grp.group_model(name, **kw)
        q = grp.quotient(m)
        res[f"{name}{kw.get('r', '')} X{i}L^X{j}L"] = grp.projectability_residual(
            m, grp.left_wedge(m, i, j), q, m.sample(rng, 20))
    m = grp.group_model("SL2_semi_R2")
    q = grp.quotient(m)
    pts = m.sample(rng, 20)
    counter = grp.projectability_residual(m, grp.left_wedge(m, 1, 4), q, pts)
    ok = max(res.values()) <= 1e-10 and counter >= 0.1
    report(7, ok, "projectable " + ", ".join(f"{k}: {v:.1e}" for k, v in res.items())
           + f"; counterexample X1L^X4L residual {counter:.3e} (needs >= 0.1)")


def test_criterion_8_i14_poisson_after_projection(report):
    rng = np.random.default_rng(SEED)
    out = {}
    for eta in (I14A_INSTANCE, I14B_INSTANCE):
        m = grp.group_model("Gr_I14", eta=eta)
        pc = grp.projected_poisson_check(m, grp.left_wedge(m, 1, 2), grp.quotient(m), m.sample(rng, 20))
        out[m.params["label"]] = pc
    a, b = out["I14A"], out["I14B"]
    ok = (not a.upstairs_zero) and a.pushforward_schouten <= 1e-9 and b.upstairs_zero
    report(8, ok, f"I14A [J,J] nonzero={not a.upstairs_zero}, pushforward residual {a.pushforward_schouten:.1e}; "
                  f"I14B [J,J]=0 exactly: {b.upstairs_zero}")


def test_criterion_9_invariance_and_signature(report):
    rng = np.random.default_rng(SEED)
    inv = {}
    for name in ("sl2", "so3"):
        e = catalog(name)
        T = leaf.casimir_tensor(e)
        inv[name] = all(lie_derivative(X, T).is_zero() for X in basis_fields(kks_bivector(e.sc)))
    sigs = {}
    for alg, chart, k in (("sl2", "sl2_pos", 1.0), ("sl2", "sl2_neg", -1.0), ("so3", "so3", 1.0)):
        ch = leaf.builtin_chart(chart, k)
        sigs[f"{alg}[k={k:g}]"] = {leaf.metric_at(catalog(alg), k, ch.forward(p))["signature"]
                                   for p in ch.sample(rng, 20)}
    want = {"sl2[k=1]": {"riemannian"}, "sl2[k=-1]": {"lorentzian"}, "so3[k=1]": {"riemannian"}}
    ok = all(inv.values()) and sigs == want
    report(9, ok, f"L_X T = 0: {inv}; signatures " + ", ".join(f"{k}: {'/'.join(sorted(v))}"
                                                            for k, v in sigs.items()))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
