"""Seeded invariant suites shared by the ``verify`` subcommand and the tests."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import group as grp
from . import leaf
from .integrate import Constant, TDSystem, TrigSum, drift, integrate, random_trig, vg_closure_report
from .kks import basis_fields, is_casimir, kks_bivector
from .lie_algebra import CATALOG_NAMES, StructureConstants, all_entries, catalog, closure_constants, validate
from .polyfield import lie_derivative, schouten_self
from .table1 import canonical_fields

SUITES = ("algebra", "kks", "leaf", "integrate", "group")
FAULTS = ("so3-sign",)

# normal forms whose basis carries exactly the catalog constants
SAME_CONSTANTS = {"sl2": ("P2", "I4"), "iso2": ("P1",), "iso11": ("I8",), "sl2_semi_R2": ("P5",),
                  "h2_semi_Rr": ("I16",), "I14A": ("I14A",), "I14B": ("I14B",)}
I14A_INSTANCE = ("exp(x) + exp(2*x)", "exp(2*x)")
I14B_INSTANCE = ("1", "exp(x)")


@dataclass
class Check:
    id: str
    passed: bool
    value: float | None = None
    threshold: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"id": self.id, "pass": self.passed, "value": self.value, "threshold": self.threshold,
                "detail": self.detail}


@dataclass
class Report:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def add(self, id, passed, value=None, threshold=None, detail=""):
        self.checks.append(Check(id, bool(passed), None if value is None else float(value), threshold, detail))

    def below(self, id, value, threshold, detail=""):
        self.add(id, value <= threshold, value, threshold, detail)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "pass": self.passed,
                "checks": [c.to_dict() for c in self.checks]}


def _faulty_so3() -> StructureConstants:
    sc = catalog("so3").sc
    c = [[list(v) for v in row] for row in sc.c]
    c[0][1][2] = -c[0][1][2]  # one entry flipped, partner left alone
    return StructureConstants.from_array(c)


# ---------------------------------------------------------------- suites

def suite_algebra(rep: Report, rng, tol, fault=None):
    for e in all_entries():
        sc = _faulty_so3() if (fault == "so3-sign" and e.name == "so3") else e.sc
        v = validate(sc)
        kinds = {x.kind for x in v.violations}
        rep.add(f"algebra.{e.name}.antisymmetry", "antisymmetry" not in kinds)
        rep.add(f"algebra.{e.name}.jacobi", "jacobi" not in kinds)
        params = {"r": 1} if e.name == "h2_semi_Rr" else {}
        for label in SAME_CONSTANTS.get(e.name, ()):
            kw = dict(params)
            if label.startswith("I14"):
                kw = {"eta": e.params["eta"]}
            got = vg_closure_report(canonical_fields(label, **kw).fields)
            rep.add(f"algebra.{e.name}.table_{label}", got == sc)
    for label in ("P3", "I5", "I12"):
        got = vg_closure_report(canonical_fields(label).fields)
        rep.add(f"algebra.table_{label}.closes", bool(got) and not validate(got).violations)
    for r in (2, 3):
        got = closure_constants(canonical_fields("I16", r=r).fields)
        rep.add(f"algebra.h2_semi_Rr_{r}.jacobi", bool(got) and validate(got).ok)


def suite_kks(rep: Report, rng, tol, fault=None):
    for e in all_entries():
        L = kks_bivector(e.sc)
        rep.add(f"kks.{e.name}.schouten", schouten_self(L.bivector).is_zero())
        rep.add(f"kks.{e.name}.hamiltonian_closure", closure_constants(basis_fields(L)) == e.sc)
        for i, C in enumerate(e.casimirs):
            rep.add(f"kks.{e.name}.casimir{i + 1}", is_casimir(L, C), detail=str(C))


def _closed_forms(name, k):
    """Printed closed forms of the restricted fields in the shipped charts."""
    if name == "sl2_e12":
        return lambda p: [np.array([0, p[0]]), np.array([-p[0], 0]),
                          np.array([-2 * p[1], -(k + p[1] ** 2) / p[0]])]
    if name == "so3_rphi":
        def f(p):
            r, ph = p
            a, b = math.sqrt(k * k - r * r), math.sqrt(k * k / r / r - 1)
            return [np.array([a * math.sin(ph), b * math.cos(ph)]),
                    np.array([-a * math.cos(ph), b * math.sin(ph)]), np.array([0.0, -1.0])]
        return f
    if name == "iso2":
        rr = math.sqrt(k)
        return lambda p: [np.array([0, -rr * math.sin(p[0])]), np.array([0, rr * math.cos(p[0])]),
                          np.array([-1.0, 0])]
    if name == "iso11":
        return lambda p: [np.array([0, math.exp(p[0])]), np.array([0, -k * math.exp(-p[0])]),
                          np.array([-1.0, 0])]
    return None


CHART_CASES = (("sl2_e12", 1.0), ("sl2_e12", -1.0), ("sl2_pos", 1.0), ("sl2_neg", -1.0), ("sl2_zero", 0.0),
               ("so3", 1.0), ("so3_rphi", 2.0), ("iso2", 2.0), ("iso11", 2.0), ("iso11", -1.0))


def suite_leaf(rep: Report, rng, tol, fault=None):
    for name, k in CHART_CASES:
        ch = leaf.builtin_chart(name, k)
        r = leaf.chart_report(ch, 100, int(rng.integers(2 ** 31)))
        tag = f"leaf.{name}[k={k:g}]"
        rep.below(f"{tag}.round_trip", r["residuals"]["round_trip"], 1e-10)
        rep.below(f"{tag}.casimir", r["residuals"]["casimir"], 1e-10)
        spec = leaf.restrict(catalog(ch.algebra), ch)
        pts = ch.sample(rng, 20)
        cf = _closed_forms(name, k)
        if cf is not None:
            worst = max(float(np.max(np.abs(f(p) - g))) for p in pts
                        for f, g in zip(spec.restricted_fields, cf(p)))
            rep.below(f"{tag}.closed_form", worst, 1e-8)
        if ch.algebra in ("sl2", "so3"):
            rep.below(f"{tag}.bracket_closure", leaf.restricted_bracket_residual(spec, pts[:10]), 1e-4)
    for alg, k in (("sl2", 1.0), ("sl2", -1.0), ("sl2", 0.0), ("so3", 1.0)):
        t = leaf.canonical_transition(alg, k)
        spec = leaf.restrict(catalog(alg), t.chart)
        res = leaf.chart_equivalence_residual(spec, t.target, t.map, t.chart.sample(rng, 50))
        rep.below(f"leaf.transition.{alg}[k={k:g}]->{t.label}", res, 1e-6)
    sl2, so3 = catalog("sl2"), catalog("so3")
    R = sl2.ring
    det = leaf.tensor_determinant(leaf.casimir_tensor(sl2))
    rep.add("leaf.sl2.det_identity", det == R.parse("e1^2*(e1*e3 - e2^2)"), detail=str(det))
    for e in (sl2, so3):
        T = leaf.casimir_tensor(e)
        ok = all(lie_derivative(X, T).is_zero() for X in basis_fields(kks_bivector(e.sc)))
        rep.add(f"leaf.{e.name}.tensor_invariance", ok)
    for alg, k, want in (("sl2", 1, "P2"), ("sl2", -1, "I4"), ("sl2", 0, "I5"), ("so3", 2, "P3"),
                         ("iso2", 1, "I14A(r=2)"), ("iso11", 1, "I14A(r=2)"), ("iso11", 0, "I14A(r=1)")):
        got = str(leaf.classify_leaf(catalog(alg), k))
        rep.add(f"leaf.classify.{alg}[k={k}]", got == want, detail=got)
    for alg, chart, k, want in (("sl2", "sl2_pos", 1.0, "riemannian"), ("sl2", "sl2_neg", -1.0, "lorentzian"),
                                ("so3", "so3", 1.0, "riemannian")):
        ch = leaf.builtin_chart(chart, k)
        sigs = {leaf.metric_at(catalog(alg), k, ch.forward(p))["signature"] for p in ch.sample(rng, 20)}
        rep.add(f"leaf.metric.{alg}[k={k:g}]", sigs == {want}, detail=",".join(sorted(sigs)))


def order_ratios(steps=(0.2, 0.1, 0.05, 0.025)) -> list[float]:
    """Fixed-step error ratios on the sl2 system with ``b = (cos t, 0, 0)``;
    exact solution ``(1, sin t, sin^2 t)``."""
    F = basis_fields(kks_bivector(catalog("sl2").sc))
    sys = TDSystem(3, tuple(F), (TrigSum(((1.0, 0.0, 1.0),)), Constant(0.0), Constant(0.0)))
    T = 5.0
    exact = np.array([1.0, math.sin(T), math.sin(T) ** 2])
    errs = [float(np.max(np.abs(integrate(sys, [1, 0, 0], (0, T), fixed_step=h).final - exact))) for h in steps]
    return [a / b for a, b in zip(errs, errs[1:])]


def suite_integrate(rep: Report, rng, tol, fault=None):
    sl2 = catalog("sl2")
    F = basis_fields(kks_bivector(sl2.sc))
    sys = TDSystem(3, tuple(F), (Constant(1.0), Constant(0.0), Constant(0.0)))
    tr = integrate(sys, [1, 0, 0], (0, 2), 1e-10)
    rep.below("integrate.sl2.closed_form", float(np.max(np.abs(tr.final - [1, 2, 4]))), 1e-8)
    Fo = basis_fields(kks_bivector(catalog("so3").sc))
    tr = integrate(TDSystem(3, tuple(Fo), (Constant(0.0), Constant(0.0), Constant(1.0))), [1, 0, 0],
                   (0, math.pi / 2), 1e-10)
    rep.below("integrate.so3.rotation", float(np.max(np.abs(tr.final - [0, -1, 0]))), 1e-8)
    for e in all_entries():
        Fe = basis_fields(kks_bivector(e.sc))
        s = TDSystem(e.sc.dim, tuple(Fe), tuple(random_trig(rng) for _ in Fe))
        x0 = rng.uniform(-1, 1, e.sc.dim)
        tr = integrate(s, x0, (0, 5), tol)
        for i, C in enumerate(e.casimirs):
            rep.below(f"integrate.{e.name}.casimir{i + 1}_drift", drift(tr, C.numeric()), 100 * tol)
        back = integrate(s, tr.final, (5, 0), tol)
        rep.below(f"integrate.{e.name}.time_reversal", float(np.max(np.abs(back.final - x0))), 10 * max(tol, 1e-9))
    ratios = order_ratios()
    rep.add("integrate.order_ratio", all(16 <= q <= 64 for q in ratios[1:]), min(ratios[1:]),
            detail=", ".join(f"{q:.1f}" for q in ratios))


GROUP_CASES = (("SL2", {}), ("SL2_semi_R2", {}), ("R_semi_R2", {}), ("H2_semi_Rr", {"r": 0}),
               ("H2_semi_Rr", {"r": 1}), ("H2_semi_Rr", {"r": 2}), ("Gr_I14", {"eta": I14A_INSTANCE}),
               ("Gr_I14", {"eta": I14B_INSTANCE}))


def _tag(name, kw):
    if "r" in kw:
        return f"{name}[r={kw['r']}]"
    if "eta" in kw:
        return f"{name}[{'I14B' if kw['eta'][0] == '1' else 'I14A'}]"
    return name


def suite_group(rep: Report, rng, tol, fault=None):
    for name, kw in GROUP_CASES:
        m = grp.group_model(name, **kw)
        tag = f"group.{_tag(name, kw)}"
        rep.add(f"{tag}.left_right_commute", not grp.left_right_commutators(m))
        rep.add(f"{tag}.right_constants", grp.field_constants(m, "right") == m.expected_constants)
        rep.add(f"{tag}.left_constants", grp.field_constants(m, "left") == m.expected_constants.negated())
        e = {i: Fraction(v) for i, v in enumerate(m.identity)}
        rep.add(f"{tag}.identity_match", all(L.comps[j].subs(e) == Rf.comps[j].subs(e)
                                             for L, Rf in zip(m.left_fields, m.right_fields)
                                             for j in range(m.dim)))
        pairs = list(combinations(range(1, m.dim + 1), 2))[:6]
        rep.add(f"{tag}.wedge_right_invariance",
                all(lie_derivative(Xr, grp.left_wedge(m, i, j)).is_zero()
                    for i, j in pairs for Xr in m.right_fields))
        if name == "SL2":
            continue
        q = grp.quotient(m)
        pts = m.sample(rng, 20)
        rep.below(f"{tag}.intertwining", grp.intertwining_residual(q, pts), 1e-8)
        rep.below(f"{tag}.coset_invariance", grp.translation_invariance_residual(q, pts[:5], rng), 1e-9)
        V = grp.left_wedge(m, 4, 5) if name == "SL2_semi_R2" else grp.left_wedge(m, 1, 2)
        rep.below(f"{tag}.projectable", grp.projectability_residual(m, V, q, pts), 1e-10)
    m = grp.group_model("SL2_semi_R2")
    q = grp.quotient(m)
    pts = m.sample(rng, 20)
    res = grp.projectability_residual(m, grp.right_wedge_left(m, 4, 5), q, pts)
    rep.add("group.SL2_semi_R2.non_projectable_X4L^X5R", res >= 0.1, res, 0.1)
    for eta, upstairs_zero in ((I14A_INSTANCE, False), (I14B_INSTANCE, True)):
        m = grp.group_model("Gr_I14", eta=eta)
        q = grp.quotient(m)
        pc = grp.projected_poisson_check(m, grp.left_wedge(m, 1, 2), q, m.sample(rng, 20))
        lab = m.params["label"]
        rep.add(f"group.Gr_I14[{lab}].schouten_upstairs", pc.upstairs_zero == upstairs_zero)
        rep.below(f"group.Gr_I14[{lab}].pushforward_schouten", pc.pushforward_schouten, 1e-9)
    for name in ("SL2", "SL2_semi_R2"):
        m = grp.group_model(name)
        worst = 0.0
        for _ in range(2):
            sys = grp.automorphic_system(m, [random_trig(rng) for _ in m.right_fields])
            worst = max(worst, grp.superposition_residual(m, sys, m.near_identity(rng), m.near_identity(rng),
                                                          np.linspace(0, 3, 31), tol))
        rep.below(f"group.{name}.superposition", worst, 1e-6)


_SUITES = {"algebra": suite_algebra, "kks": suite_kks, "leaf": suite_leaf, "integrate": suite_integrate,
           "group": suite_group}


def run_suite(name: str, seed: int = 42, tol: float = 1e-10, fault: str | None = None) -> Report:
    if name != "all" and name not in _SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES + ('all',))}")
    if fault is not None and fault not in FAULTS:
        raise KeyError(f"unknown fault {fault!r}")
    rep = Report(name, seed)
    for s in (SUITES if name == "all" else (name,)):
        _SUITES[s](rep, np.random.default_rng(seed), tol, fault)
    return rep


__all__ = ["run_suite", "Report", "Check", "SUITES", "FAULTS", "order_ratios", "CATALOG_NAMES",
           "I14A_INSTANCE", "I14B_INSTANCE"]
