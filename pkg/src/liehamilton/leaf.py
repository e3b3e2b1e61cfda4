"""Symplectic leaves of linear Poisson structures: explicit charts, restricted
systems, Casimir tensors and the determinant-sign classification of the
induced planar Lie algebras."""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .lie_algebra import CatalogEntry, catalog
from .kks import basis_fields, kks_bivector
from .polyfield import SymTensor, VectorField, sym_product
from .table1 import LABELS, canonical_fields  # noqa: F401  (re-exported)

FD_STEP = 1e-6
HALF = Fraction(1, 2)


class LeafError(ValueError):
    """Invalid leaf parameter, chart/algebra mismatch or degenerate point."""


@dataclass(frozen=True)
class LeafChart:
    """Diffeomorphism from a planar domain onto (part of) a leaf.

    ``jacobian`` is the 2 x n derivative of ``inverse`` evaluated at an
    ambient point; it pushes ambient vectors down to leaf coordinates.
    """

    name: str
    algebra: str
    ambient_dim: int
    leaf_params: dict
    forward: Callable
    inverse: Callable
    jacobian: Callable
    domain: Callable
    sampler: Callable
    coords: tuple = ("x", "y")

    @property
    def k(self) -> float:
        return self.leaf_params["k"]

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.array([self.sampler(rng) for _ in range(n)])


def _box(lo0, hi0, lo1, hi1, signs0=(1,)):
    def s(rng):
        return np.array([rng.choice(signs0) * rng.uniform(lo0, hi0), rng.uniform(lo1, hi1)])
    return s


def _sl2_e12(k, branch):
    def fwd(p):
        e1, e2 = p
        return np.array([e1, e2, (k + e2 * e2) / e1])
    return dict(algebra="sl2", coords=("e1", "e2"), forward=fwd,
                inverse=lambda a: np.array([a[0], a[1]]),
                jacobian=lambda a: np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
                domain=lambda p: abs(p[0]) > 1e-12,
                sampler=_box(0.3, 2.0, -2.0, 2.0, (1, -1)))


def _sl2_pos(k, branch):
    if k <= 0:
        raise LeafError("sl2_pos needs k > 0")
    sk = math.sqrt(k)

    def fwd(p):
        x, y = p
        e1 = sk / y
        e2 = x * e1
        return np.array([e1, e2, (k + e2 * e2) / e1])

    def inv(a):
        return np.array([a[1] / a[0], sk / a[0]])

    def jac(a):
        e1, e2 = a[0], a[1]
        return np.array([[-e2 / e1 ** 2, 1 / e1, 0.0], [-sk / e1 ** 2, 0.0, 0.0]])
    return dict(algebra="sl2", forward=fwd, inverse=inv, jacobian=jac,
                domain=lambda p: abs(p[1]) > 1e-12,
                sampler=lambda rng: np.array([rng.uniform(-2, 2), rng.choice((1, -1)) * rng.uniform(0.3, 2)]))


def _sl2_neg(k, branch):
    if k >= 0:
        raise LeafError("sl2_neg needs k < 0")
    s = math.sqrt(-k)

    def fwd(p):
        x, y = p
        e1 = 2 * s / (y - x)
        e2 = 0.5 * (x + y) * e1
        return np.array([e1, e2, (k + e2 * e2) / e1])

    def inv(a):
        return np.array([(a[1] - s) / a[0], (a[1] + s) / a[0]])

    def jac(a):
        e1, e2 = a[0], a[1]
        return np.array([[-(e2 - s) / e1 ** 2, 1 / e1, 0.0], [-(e2 + s) / e1 ** 2, 1 / e1, 0.0]])

    def sampler(rng):
        x = rng.uniform(-2, 2)
        return np.array([x, x + rng.choice((1, -1)) * rng.uniform(0.3, 2)])
    return dict(algebra="sl2", forward=fwd, inverse=inv, jacobian=jac,
                domain=lambda p: abs(p[1] - p[0]) > 1e-12, sampler=sampler)


def _sl2_zero(k, branch):
    if k != 0:
        raise LeafError("sl2_zero needs k = 0")
    if branch not in (1, -1):
        raise LeafError("sl2_zero branch must be +1 or -1")

    def fwd(p):
        x, y = p
        e1 = branch / (y * y)
        e2 = x * e1
        return np.array([e1, e2, e2 * e2 / e1])

    def inv(a):
        return np.array([a[1] / a[0], abs(a[0]) ** -0.5])

    def jac(a):
        e1, e2 = a[0], a[1]
        return np.array([[-e2 / e1 ** 2, 1 / e1, 0.0],
                         [-0.5 * math.copysign(1.0, e1) * abs(e1) ** -1.5, 0.0, 0.0]])
    return dict(algebra="sl2", forward=fwd, inverse=inv, jacobian=jac,
                domain=lambda p: p[1] > 1e-12, sampler=_box(-2.0, 2.0, 0.3, 2.0))


def _so3(k, branch):
    # northern branch e3 > 0, i.e. x^2 + y^2 > 1
    if k <= 0:
        raise LeafError("so3 needs k > 0")

    def fwd(p):
        x, y = p
        rho2 = x * x + y * y
        d = 1 + rho2
        return np.array([2 * k * y / d, -2 * k * x / d, k * (rho2 - 1) / d])

    def inv(a):
        w = k - a[2]
        return np.array([-a[1] / w, a[0] / w])

    def jac(a):
        w = k - a[2]
        return np.array([[0.0, -1 / w, -a[1] / w ** 2], [1 / w, 0.0, a[0] / w ** 2]])

    def sampler(rng):
        rad, th = rng.uniform(1.2, 4.0), rng.uniform(0, 2 * math.pi)
        return np.array([rad * math.cos(th), rad * math.sin(th)])
    return dict(algebra="so3", forward=fwd, inverse=inv, jacobian=jac,
                domain=lambda p: p[0] ** 2 + p[1] ** 2 > 1 + 1e-12, sampler=sampler)


def _so3_rphi(k, branch):
    if k <= 0:
        raise LeafError("so3_rphi needs k > 0")

    def fwd(p):
        r, phi = p
        return np.array([r * math.cos(phi), r * math.sin(phi), math.sqrt(k * k - r * r)])

    def inv(a):
        return np.array([math.hypot(a[0], a[1]), math.atan2(a[1], a[0])])

    def jac(a):
        r2 = a[0] ** 2 + a[1] ** 2
        r = math.sqrt(r2)
        return np.array([[a[0] / r, a[1] / r, 0.0], [-a[1] / r2, a[0] / r2, 0.0]])
    return dict(algebra="so3", coords=("r", "phi"), forward=fwd, inverse=inv, jacobian=jac,
                domain=lambda p: 0 < p[0] < k and -math.pi < p[1] < math.pi,
                sampler=_box(0.1 * k, 0.9 * k, -3.0, 3.0))


def _iso2(k, branch):
    if k <= 0:
        raise LeafError("iso2 needs k > 0")
    r = math.sqrt(k)

    def fwd(p):
        phi, e3 = p
        return np.array([r * math.cos(phi), r * math.sin(phi), e3])

    def jac(a):
        r2 = a[0] ** 2 + a[1] ** 2
        return np.array([[-a[1] / r2, a[0] / r2, 0.0], [0.0, 0.0, 1.0]])
    return dict(algebra="iso2", coords=("phi", "e3"), forward=fwd,
                inverse=lambda a: np.array([math.atan2(a[1], a[0]), a[2]]), jacobian=jac,
                domain=lambda p: -math.pi < p[0] < math.pi, sampler=_box(-3.0, 3.0, -2.0, 2.0))


def _iso11(k, branch):
    # k = 0 gives the half-line e2 = 0, e1 > 0 of the degenerate leaf set
    def fwd(p):
        h, e3 = p
        return np.array([math.exp(h), k * math.exp(-h), e3])
    return dict(algebra="iso11", coords=("h", "e3"), forward=fwd,
                inverse=lambda a: np.array([math.log(a[0]), a[2]]),
                jacobian=lambda a: np.array([[1 / a[0], 0.0, 0.0], [0.0, 0.0, 1.0]]),
                domain=lambda p: True, sampler=_box(-1.5, 1.5, -2.0, 2.0))


_CHARTS = {
    "sl2_e12": _sl2_e12, "sl2_pos": _sl2_pos, "sl2_neg": _sl2_neg, "sl2_zero": _sl2_zero,
    "so3": _so3, "so3_rphi": _so3_rphi, "iso2": _iso2, "iso11": _iso11,
}
CHART_NAMES = tuple(_CHARTS)


def builtin_chart(name: str, k: float, branch: int = 1) -> LeafChart:
    """Shipped chart ``name`` on the leaf with parameter ``k``.  ``branch``
    picks the sign of ``e1`` for ``sl2_zero``."""
    if name not in _CHARTS:
        raise KeyError(f"unknown chart {name!r}; known: {', '.join(CHART_NAMES)}")
    k = float(k)
    if not math.isfinite(k):
        raise LeafError("k must be finite")
    spec = _CHARTS[name](k, branch)
    params = {"k": k}
    if name == "sl2_zero":
        params["branch"] = branch
    return LeafChart(name=name, ambient_dim=3, leaf_params=params, **spec)


def casimir_value(algebra: str, point) -> float:
    e = point
    if algebra == "sl2":
        return e[0] * e[2] - e[1] ** 2
    if algebra == "so3":
        return e[0] ** 2 + e[1] ** 2 + e[2] ** 2
    if algebra == "iso2":
        return e[0] ** 2 + e[1] ** 2
    if algebra == "iso11":
        return e[0] * e[1]
    raise LeafError(f"no Casimir for {algebra!r}")


def expected_casimir(chart: LeafChart) -> float:
    """Value of the catalog Casimir on the chart's leaf (``k^2`` for so3)."""
    return chart.k ** 2 if chart.algebra == "so3" else chart.k


# ------------------------------------------------------------ restriction

@dataclass(frozen=True)
class RestrictedSystemSpec:
    algebra: CatalogEntry
    chart: LeafChart
    restricted_fields: tuple
    ambient_fields: tuple = field(default=(), repr=False)

    def __call__(self, b: Sequence[float], p) -> np.ndarray:
        """``sum b_a X_a^k(p)``."""
        return sum(bi * f(p) for bi, f in zip(b, self.restricted_fields))


def _restricted(chart: LeafChart, X: VectorField):
    Xn = X.numeric()

    def f(p):
        a = chart.forward(np.asarray(p, dtype=float))
        return chart.jacobian(a) @ Xn(a)
    return f


def restrict(algebra: CatalogEntry, chart: LeafChart) -> RestrictedSystemSpec:
    if chart.algebra != algebra.name:
        raise LeafError(f"chart {chart.name!r} lives on {chart.algebra}*, not {algebra.name}*")
    fields = tuple(basis_fields(kks_bivector(algebra.sc)))
    return RestrictedSystemSpec(algebra, chart, tuple(_restricted(chart, X) for X in fields), fields)


def fd_jacobian(f: Callable, p, step: float = FD_STEP) -> np.ndarray:
    """Central-difference Jacobian of ``f`` at ``p``."""
    p = np.asarray(p, dtype=float)
    cols = []
    for i in range(p.size):
        dp = np.zeros_like(p)
        dp[i] = step
        cols.append((np.asarray(f(p + dp)) - np.asarray(f(p - dp))) / (2 * step))
    return np.array(cols).T


def restricted_bracket_residual(spec: RestrictedSystemSpec, points, step: float = FD_STEP) -> float:
    """Max over points and pairs of ``|[X_a^k, X_b^k] - sum c_ab^g X_g^k|``
    with brackets from finite-difference Jacobians."""
    c = spec.algebra.sc.c
    fs = spec.restricted_fields
    r = len(fs)
    worst = 0.0
    for p in points:
        vals = [f(p) for f in fs]
        jacs = [fd_jacobian(f, p, step) for f in fs]
        for a in range(r):
            for b in range(a + 1, r):
                br = jacs[b] @ vals[a] - jacs[a] @ vals[b]
                rhs = sum(float(c[a][b][g]) * vals[g] for g in range(r))
                worst = max(worst, float(np.max(np.abs(br - rhs))))
    return worst


def chart_equivalence_residual(spec: RestrictedSystemSpec, target: Sequence, transition: Callable,
                               points, transition_jacobian: Callable | None = None,
                               step: float = FD_STEP) -> float:
    """Max of ``|D(transition)(p) X_a^k(p) - target_a(transition(p))|``.

    ``target`` entries are either :class:`VectorField` on the plane or
    callables ``(x, y) -> 2-vector``.
    """
    tfs = [t.numeric() if isinstance(t, VectorField) else t for t in target]
    if len(tfs) != len(spec.restricted_fields):
        raise LeafError("target list and restricted system differ in length")
    worst = 0.0
    for p in points:
        p = np.asarray(p, dtype=float)
        if not spec.chart.domain(p):
            raise LeafError(f"point {p.tolist()} outside the domain of chart {spec.chart.name}")
        D = transition_jacobian(p) if transition_jacobian else fd_jacobian(transition, p, step)
        q = np.asarray(transition(p), dtype=float)
        for f, t in zip(spec.restricted_fields, tfs):
            worst = max(worst, float(np.max(np.abs(D @ f(p) - np.asarray(t(q))))))
    return worst


# ------------------------------------------------- canonical transitions

@dataclass(frozen=True)
class Transition:
    """Change of variables from a leaf chart onto a normal-form system, with the
    images of the restricted basis fields."""

    chart: LeafChart
    map: Callable
    target: tuple
    label: str


def _plane_fields(*pairs):
    from .table1 import PLANE
    return tuple(VectorField.parse(PLANE, p) for p in pairs)


def canonical_transition(algebra: str, k: float, branch: int = 1) -> Transition:
    """Explicit map from the ``(e1, e2)`` chart (``(r, phi)`` for so3) onto
    the planar normal form of the restricted system."""
    if algebra == "sl2":
        chart = builtin_chart("sl2_e12", k)
        if k > 0:
            sk = math.sqrt(k)
            return Transition(chart, lambda p: np.array([p[1] / p[0], sk / p[0]]),
                              canonical_fields("P2").fields, "P2")
        if k < 0:
            s = math.sqrt(-k)
            return Transition(chart, lambda p: np.array([(p[1] - s) / p[0], (p[1] + s) / p[0]]),
                              canonical_fields("I4").fields, "I4")
        return Transition(chart, lambda p: np.array([p[1] / p[0], abs(p[0]) ** -0.5]),
                          _plane_fields(("1", "0"), ("x", "y/2"), ("x^2", "x*y")), "I5")
    if algebra == "so3":
        chart = builtin_chart("so3_rphi", k)

        def m(p):
            r, phi = p
            w = (math.sqrt(k * k - r * r) + k) / r
            return np.array([-w * math.sin(phi), w * math.cos(phi)])
        return Transition(chart, m, _plane_fields(("(1 + x^2 - y^2)/2", "x*y"),
                                                   ("x*y", "(1 + y^2 - x^2)/2"), ("y", "-x")), "P3")
    raise LeafError(f"no canonical transition for {algebra!r}")


# ---------------------------------------------------------- Casimir tensor

def casimir_tensor(algebra: CatalogEntry) -> SymTensor:
    X = basis_fields(kks_bivector(algebra.sc))
    if algebra.name == "sl2":
        return sym_product(X[0], X[2]) * HALF - sym_product(X[1], X[1]) * HALF
    if algebra.name == "so3":
        return (sym_product(X[0], X[0]) + sym_product(X[1], X[1]) + sym_product(X[2], X[2])) * HALF
    raise LeafError(f"no Casimir tensor shipped for {algebra.name!r}")


def tensor_block(T: SymTensor):
    """Exact 2x2 coefficient matrix ``T(de_a, de_b)``, ``a, b in {1, 2}``."""
    return [[T[0, 0], T[0, 1]], [T[1, 0], T[1, 1]]]


def tensor_determinant(T: SymTensor):
    m = tensor_block(T)
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


@dataclass(frozen=True)
class ClassLabel:
    label: str
    params: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.label not in LABELS:
            raise LeafError(f"{self.label!r} is not a normal-form class")

    def __str__(self):
        if not self.params:
            return self.label
        return self.label + "(" + ", ".join(f"{k}={v}" for k, v in self.params.items()) + ")"


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def _function_rank(spec: RestrictedSystemSpec, n: int = 12, seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    pts = spec.chart.sample(rng, n)
    M = np.array([np.concatenate([f(p) for p in pts]) for f in spec.restricted_fields])
    return int(np.linalg.matrix_rank(M, tol=1e-9 * max(1.0, np.abs(M).max())))


def classify_leaf(algebra: CatalogEntry, k: float) -> ClassLabel:
    """Normal-form class of the Lie algebra induced on the leaf ``k``."""
    name = algebra.name
    k = float(k)
    if name == "sl2":
        det = tensor_determinant(casimir_tensor(algebra))
        s = _sign(k)
        ev = {"det": str(det), "det_on_leaf": "e1^2*k", "sign": s}
        return ClassLabel({1: "P2", -1: "I4", 0: "I5"}[s], {}, ev)
    if name == "so3":
        if k <= 0:
            raise LeafError("so3 leaves need k > 0")
        det = tensor_determinant(casimir_tensor(algebra))
        return ClassLabel("P3", {}, {"det": str(det), "sign": 1})
    if name == "iso2":
        if k <= 0:
            raise LeafError("iso2 leaves need k > 0")
        dim = _function_rank(restrict(algebra, builtin_chart("iso2", k)))
        return ClassLabel("I14A", {"r": dim - 1}, {"dim_Vk": dim})
    if name == "iso11":
        dim = _function_rank(restrict(algebra, builtin_chart("iso11", k)))
        return ClassLabel("I14A", {"r": dim - 1}, {"dim_Vk": dim})
    raise LeafError(f"classification is not available for {name!r}")


def metric_at(algebra: CatalogEntry, k: float, point, tol: float = 1e-8) -> dict:
    """Casimir tensor block in ``{e1, e2}`` at ``point``, its inverse (the
    metric) and the signature."""
    point = np.asarray(point, dtype=float)
    if algebra.name not in ("sl2", "so3"):
        raise LeafError(f"no metric for {algebra.name!r}")
    if algebra.name == "so3" and k <= 0:
        raise LeafError("so3 leaves need k > 0")
    expect = k * k if algebra.name == "so3" else k
    if abs(casimir_value(algebra.name, point) - expect) > tol * max(1.0, abs(expect)):
        raise LeafError(f"point {point.tolist()} is not on the leaf k={k}")
    T = np.array([[float(c.evaluate(point)) for c in row] for row in tensor_block(casimir_tensor(algebra))])
    det = float(np.linalg.det(T))
    if abs(det) <= tol:
        raise LeafError("Casimir tensor is degenerate at this point")
    eig = np.linalg.eigvalsh(T)
    if det > 0:
        signature = "riemannian"
        definite = "positive" if eig[0] > 0 else "negative"
    else:
        signature, definite = "lorentzian", "indefinite"
    return {"tensor": T, "metric": np.linalg.inv(T), "det": det, "signature": signature,
            "definiteness": definite}


# ------------------------------------------------------------ reports

def chart_report(chart: LeafChart, n: int = 100, seed: int = 42) -> dict:
    """Round-trip and Casimir residuals at ``n`` seeded domain points."""
    rng = np.random.default_rng(seed)
    pts = chart.sample(rng, n)
    rt = max(float(np.max(np.abs(chart.inverse(chart.forward(p)) - p))) for p in pts)
    expect = expected_casimir(chart)
    cas = max(abs(casimir_value(chart.algebra, chart.forward(p)) - expect) for p in pts)
    return {"chart": chart.name, "k": chart.k, "points": pts.tolist(),
            "residuals": {"round_trip": rt, "casimir": float(cas)}}

__all__ = [
    "LeafChart", "LeafError", "RestrictedSystemSpec", "ClassLabel", "Transition", "CHART_NAMES",
    "builtin_chart", "restrict", "casimir_tensor", "classify_leaf", "canonical_fields",
    "chart_equivalence_residual", "restricted_bracket_residual", "metric_at", "chart_report",
    "canonical_transition", "casimir_value", "fd_jacobian", "tensor_block", "tensor_determinant",
    "catalog",
]
