"""Lie groups acting on the plane, in explicit coordinates.

Every model is a transformation group ``g -> phi_g`` of R^2 whose product is
composition, ``phi_{gh} = phi_g o phi_h``, written as polynomials (with
exponential or trigonometric extension variables) in the coordinates of
both factors.  Invariant fields come from differentiating the product:

    left  X^L_v(g) = d/ds  g . exp(s v)
    right X^R_v(g) = d/ds  exp(s v) . g

The generators are chosen so that the fundamental fields of the action are
the normal-form basis, hence right fields close with the catalog constants and
left fields with their negatives.  The quotient map is ``pi(g) = phi_g(0)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

import numpy as np

from .integrate import TDSystem, integrate
from .lie_algebra import CatalogEntry, StructureConstants, catalog, closure_constants
from .poly import Poly, Ring
from .polyfield import Bivector, Trivector, VectorField, lie_bracket, lie_derivative, schouten_self, wedge
from .table1 import PLANE_EXP, canonical_fields

GROUP_NAMES = ("SL2", "SL2_semi_R2", "R_semi_R2", "H2_semi_Rr", "Gr_I14")


class GroupError(ValueError):
    pass


class ChartExit(GroupError):
    def __init__(self, t: float):
        super().__init__(f"solution left the coordinate chart at t = {t!r}")
        self.t = t


def _derivative_fields(ring: Ring, product: Sequence[Poly], identity, gens, side: str) -> list[VectorField]:
    n = ring.ncoords
    D = product[0].ring
    if side == "left":
        at, free, shift = {n + i: v for i, v in enumerate(identity)}, 0, n
    else:
        at, free, shift = {i: v for i, v in enumerate(identity)}, n, 0
    back = {free + i: i for i in range(n)}
    fields = []
    for v in gens:
        comps = []
        for P in product:
            d = D.zero()
            for j, vj in enumerate(v):
                if vj:
                    d = d + P.diff(shift + j) * vj
            comps.append(d.subs(at).to_ring(ring, back))
        fields.append(VectorField(ring, comps))
    return fields


@dataclass(frozen=True)
class GroupModel:
    name: str
    params: dict
    ring: Ring
    product: tuple
    identity: tuple
    generators: tuple
    algebra: CatalogEntry
    perm: tuple
    inverse: Callable
    domain: Callable
    sampler: Callable
    projection: tuple = ()
    isotropy: tuple = ()
    plane_fields: tuple = ()
    left_fields: tuple = field(default=(), repr=False)
    right_fields: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not self.left_fields:
            object.__setattr__(self, "left_fields", tuple(
                _derivative_fields(self.ring, self.product, self.identity, self.generators, "left")))
            object.__setattr__(self, "right_fields", tuple(
                _derivative_fields(self.ring, self.product, self.identity, self.generators, "right")))
        object.__setattr__(self, "_prod_num", [P.numeric() for P in self.product])

    @property
    def dim(self) -> int:
        return self.ring.ncoords

    @property
    def expected_constants(self) -> StructureConstants:
        """Catalog constants in the group's generator order."""
        return self.algebra.sc.permuted(self.perm)

    def multiply(self, g, h) -> np.ndarray:
        x = np.concatenate([np.asarray(g, dtype=float), np.asarray(h, dtype=float)])
        return np.array([f(x) for f in self._prod_num])

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.array([self.sampler(rng) for _ in range(n)])

    def near_identity(self, rng: np.random.Generator, radius: float = 0.3) -> np.ndarray:
        return np.array(self.identity, dtype=float) + rng.uniform(-radius, radius, self.dim)


# ---------------------------------------------------------------- models

def _sl2_parts(D: Ring, names1, names2):
    a1, b1, c1 = (D.var(x) for x in names1)
    a2, b2, c2 = (D.var(x) for x in names2)
    d1 = (1 + b1 * c1) * a1 ** -1
    d2 = (1 + b2 * c2) * a2 ** -1
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2), (a1, b1, c1, d1)


def _sl2_matrix(g) -> np.ndarray:
    a, b, c = g[0], g[1], g[2]
    return np.array([[a, b], [c, (1 + b * c) / a]])


def _sl2_sample(rng):
    return np.array([rng.choice((1, -1)) * rng.uniform(0.5, 2.0), rng.uniform(-1, 1), rng.uniform(-1, 1)])


def _model_sl2() -> GroupModel:
    R = Ring(("alpha", "beta", "gamma"))
    D = R.doubled()
    prod, _ = _sl2_parts(D, ("alpha_1", "beta_1", "gamma_1"), ("alpha_2", "beta_2", "gamma_2"))
    h = Fraction(1, 2)
    # E12, H/2, -E21 as tangent vectors in (alpha, beta, gamma)
    gens = ((0, 1, 0), (h, 0, 0), (0, 0, -1))

    def inverse(g):
        m = np.linalg.inv(_sl2_matrix(g))
        return np.array([m[0, 0], m[0, 1], m[1, 0]])
    return GroupModel("SL2", {}, R, tuple(prod), (1, 0, 0), gens, catalog("sl2"), (0, 1, 2), inverse,
                      lambda g: abs(g[0]) > 1e-9, _sl2_sample)


def _model_sl2_semi() -> GroupModel:
    R = Ring(("alpha", "beta", "gamma", "sigma", "epsilon"))
    D = R.doubled()
    (pa, pb, pc), (a1, b1, c1, d1) = _sl2_parts(D, ("alpha_1", "beta_1", "gamma_1"),
                                                ("alpha_2", "beta_2", "gamma_2"))
    s1, e1, s2, e2 = (D.var(x) for x in ("sigma_1", "epsilon_1", "sigma_2", "epsilon_2"))
    prod = (pa, pb, pc, a1 * s2 + b1 * e2 + s1, c1 * s2 + d1 * e2 + e1)
    # diag(1,-1), E12, E21, translations; normal-form order is (3, 4, 5, 1, 2)
    gens = ((1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1))

    def inverse(g):
        m = np.linalg.inv(_sl2_matrix(g))
        t = -m @ np.asarray(g[3:5], dtype=float)
        return np.array([m[0, 0], m[0, 1], m[1, 0], t[0], t[1]])

    def sampler(rng):
        return np.concatenate([_sl2_sample(rng), rng.uniform(-2, 2, 2)])
    perm = (2, 3, 4, 0, 1)
    table = canonical_fields("P5").fields
    Q = Ring(("sigma", "epsilon"))
    plane = tuple(VectorField(Q, [c.to_ring(Q, {0: 0, 1: 1}) for c in table[p].comps]) for p in perm)
    return GroupModel("SL2_semi_R2", {}, R, prod, (1, 0, 0, 0, 0), gens, catalog("sl2_semi_R2"), perm,
                      inverse, lambda g: abs(g[0]) > 1e-9, sampler,
                      projection=(R.var("sigma"), R.var("epsilon")),
                      isotropy=((0, 1, 2),), plane_fields=plane)


def _model_r_semi() -> GroupModel:
    R = Ring(("a", "b", "theta")).with_trig("theta")
    D = R.doubled()
    a1, b1, t1, a2, b2, t2 = D.gens()
    c1, s1 = D.ext_var("cos", "theta_1"), D.ext_var("sin", "theta_1")
    prod = (c1 * a2 - s1 * b2 + a1, s1 * a2 + c1 * b2 + b1, t1 + t2)
    gens = ((1, 0, 0), (0, 1, 0), (0, 0, -1))

    def inverse(g):
        a, b, t = g
        c, s = np.cos(t), np.sin(t)
        return np.array([-(c * a + s * b), -(-s * a + c * b), -t])

    def sampler(rng):
        return np.array([rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-np.pi, np.pi)])
    return GroupModel("R_semi_R2", {}, R, prod, (0, 0, 0), gens, catalog("iso2"), (0, 1, 2), inverse,
                      lambda g: True, sampler, projection=(R.var("a"), R.var("b")), isotropy=((2,),),
                      plane_fields=canonical_fields("P1").fields)


def _model_h2(r: int) -> GroupModel:
    if not isinstance(r, int) or r < 0:
        raise GroupError("H2_semi_Rr needs an integer r >= 0")
    names = ("s", "a") + tuple(f"q{j}" for j in range(r + 1))
    R = Ring(names).with_exp("s")
    D = R.doubled()
    n = R.ncoords
    s1, a1, s2, a2 = D.var("s_1"), D.var("a_1"), D.var("s_2"), D.var("a_2")
    q1 = [D.var(f"q{j}_1") for j in range(r + 1)]
    q2 = [D.var(f"q{j}_2") for j in range(r + 1)]
    E1, E2 = (lambda p: D.ext_var("exp", "s_1", p)), (lambda p: D.ext_var("exp", "s_2", p))
    prod = [s1 + s2, E1(1) * a2 + a1]
    for j in range(r + 1):
        v = E1(-1) * q2[j]
        for i in range(j, r + 1):
            v = v + q1[i] * comb(i, j) * E2(j) * a2 ** (i - j)
        prod.append(v)
    # normal-form order: d_a, d_q0, d_s, d_q1 .. d_qr
    unit = lambda k: tuple(1 if m == k else 0 for m in range(n))  # noqa: E731
    gens = (unit(1), unit(2), unit(0)) + tuple(unit(3 + i) for i in range(r))

    def inverse(g):
        s, a, q = g[0], g[1], np.asarray(g[2:], dtype=float)
        out = np.zeros(r + 1)
        for j in range(r + 1):
            out[j] = -np.exp(s) * sum(q[i] * np.exp(-i * s) * comb(i, j) * (-a) ** (i - j)
                                      for i in range(j, r + 1))
        return np.concatenate([[-s, -np.exp(-s) * a], out])

    def sampler(rng):
        return np.concatenate([[rng.uniform(-1, 1)], rng.uniform(-1.5, 1.5, r + 2)])
    entry = catalog("iso11") if r == 0 else catalog("h2_semi_Rr", r=r)
    return GroupModel("H2_semi_Rr", {"r": r}, R, tuple(prod), (0,) * n, gens, entry, tuple(range(r + 3)),
                      inverse, lambda g: True, sampler, projection=(R.var("a"), R.var("q0")),
                      isotropy=(tuple(range(2, r + 3)),),
                      plane_fields=canonical_fields("I16", r=r).fields)


def _exp_table(etas: Sequence[Poly]) -> tuple[list[list[Fraction]], list[int]]:
    """Coefficients of ``eta_i = sum_m A[i][m] exp(m x)``."""
    R = etas[0].ring
    jx = R.ext_index("exp", 0)
    ms = set()
    rows = []
    for e in etas:
        row = {}
        for key, c in e.terms.items():
            if any(v for i, v in enumerate(key) if i != jx):
                raise GroupError(f"eta {e} is not a combination of exponentials exp(m*x)")
            row[key[jx]] = c
            ms.add(key[jx])
        rows.append(row)
    ms = sorted(ms)
    return [[row.get(m, Fraction(0)) for m in ms] for row in rows], ms


def _solve_square(M, B):
    """Exact ``X`` with ``X M = B`` for square invertible ``M`` (rows of B are
    lists of Poly or Fraction)."""
    n = len(M)
    # Gauss-Jordan on M^T
    A = [[Fraction(M[j][i]) for j in range(n)] for i in range(n)]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    # inv = (M^T)^{-1}; X = B M^{-1}, i.e. X_i = sum_m B_im (M^{-1})_{m j}
    return [[sum((B[i][m] * inv[j][m] for m in range(n)), 0) for j in range(n)] for i in range(len(B))]


def _independent_columns(A) -> list[int]:
    rows = len(A)
    cols, basis = [], []
    for j in range(len(A[0])):
        v = [A[i][j] for i in range(rows)]
        w = list(v)
        for b, piv in basis:
            if w[piv]:
                f = w[piv] / b[piv]
                w = [x - f * y for x, y in zip(w, b)]
        nz = next((i for i, x in enumerate(w) if x), None)
        if nz is not None:
            basis.append((w, nz))
            cols.append(j)
        if len(cols) == rows:
            break
    if len(cols) < rows:
        raise GroupError("eta functions are linearly dependent")
    return cols


def _model_gr_i14(r: int | None, eta) -> GroupModel:
    if eta is None:
        eta = ("exp(x)", "exp(2*x)") if r in (None, 2) else tuple(f"exp({i + 1}*x)" for i in range(r))
    eta = tuple(eta)
    if r is not None and r != len(eta):
        raise GroupError(f"r = {r} but {len(eta)} eta functions were given")
    r = len(eta)
    label = "I14B" if PLANE_EXP.parse(eta[0]) == PLANE_EXP.const(1) else "I14A"
    etas = [PLANE_EXP.parse(e) for e in eta]
    A, ms = _exp_table(etas)
    cols = _independent_columns(A)
    names = ("t",) + tuple(f"v{i + 1}" for i in range(r))
    R = Ring(names).with_exp("t")
    D = R.doubled()

    def E_of(ring, tname):
        At = [[ring.ext_var("exp", tname, m) * A[i][k] if m else ring.const(A[i][k])
               for k, m in enumerate(ms)] for i in range(r)]
        E = _solve_square([[A[i][c] for c in cols] for i in range(r)],
                          [[At[i][c] for c in cols] for i in range(r)])
        E = [[ring.const(0) + e for e in row] for row in E]
        for i in range(r):
            for k in range(len(ms)):
                if sum((E[i][j] * A[j][k] for j in range(r)), ring.zero()) != At[i][k]:
                    raise GroupError("span of eta is not invariant under translations")
        return E
    E2 = E_of(D, "t_2")
    t1, t2 = D.var("t_1"), D.var("t_2")
    v1 = [D.var(f"v{i + 1}_1") for i in range(r)]
    v2 = [D.var(f"v{i + 1}_2") for i in range(r)]
    prod = [t1 + t2] + [v2[j] + sum((v1[i] * E2[i][j] for i in range(r)), D.zero()) for j in range(r)]
    E1 = E_of(R, "t")
    E1n = [[e.numeric() for e in row] for row in E1]
    gens = tuple(tuple(1 if m == k else 0 for m in range(r + 1)) for k in range(r + 1))

    def inverse(g):
        t, v = g[0], np.asarray(g[1:], dtype=float)
        pt = np.zeros(r + 1)
        pt[0] = -t
        return np.concatenate([[-t], [-sum(v[i] * E1n[i][j](pt) for i in range(r)) for j in range(r)]])

    def sampler(rng):
        return np.concatenate([[rng.uniform(-1, 1)], rng.uniform(-1, 1, r)])
    eta0 = [sum(row, Fraction(0)) for row in A]
    lead = next((i for i, v in enumerate(eta0) if v), None)
    if lead is None:
        raise GroupError("some eta must be nonzero at 0")
    proj = (R.var("t"), sum((R.var(f"v{i + 1}") * eta0[i] for i in range(r)), R.zero()))
    # isotropy: sum_k c_k d_{v_k} with sum_k c_k eta_k(0) = 0
    iso = []
    for k in range(r):
        if k == lead:
            continue
        c = [Fraction(0)] * (r + 1)
        c[1 + k] = Fraction(1)
        c[1 + lead] = -eta0[k] / eta0[lead]
        iso.append(tuple(c))
    entry = catalog(label, eta=eta)
    plane = canonical_fields(label, eta=eta).fields
    return GroupModel("Gr_I14", {"r": r, "eta": eta, "label": label, "lead": lead}, R, tuple(prod),
                      (0,) * (r + 1), gens, entry, tuple(range(r + 1)), inverse, lambda g: True, sampler,
                      projection=proj, isotropy=(tuple(iso),), plane_fields=plane)


def group_model(name: str, r: int | None = None, eta: Sequence[str] | None = None) -> GroupModel:
    """Build a group model.  ``H2_semi_Rr`` takes ``r`` (``r = 0`` is the I8
    group); ``Gr_I14`` takes ``eta`` (``r`` defaults to ``len(eta)``)."""
    if name == "SL2":
        return _model_sl2()
    if name == "SL2_semi_R2":
        return _model_sl2_semi()
    if name == "R_semi_R2":
        return _model_r_semi()
    if name == "H2_semi_Rr":
        return _model_h2(1 if r is None else r)
    if name == "Gr_I14":
        return _model_gr_i14(r, eta)
    raise GroupError(f"unknown group {name!r}; known: {', '.join(GROUP_NAMES)}")


# ------------------------------------------------------------ invariants

def left_right_commutators(model: GroupModel) -> list[tuple[int, int]]:
    """Index pairs (1-based) with ``[X^L_i, X^R_j] != 0``; empty when the
    model is consistent."""
    return [(i + 1, j + 1) for i, L in enumerate(model.left_fields) for j, Rf in enumerate(model.right_fields)
            if not lie_bracket(L, Rf).is_zero()]


def field_constants(model: GroupModel, side: str):
    fields = model.left_fields if side == "left" else model.right_fields
    return closure_constants(list(fields))


# ---------------------------------------------------------- automorphic

def automorphic_system(model: GroupModel, coeffs: Sequence) -> TDSystem:
    """``dg/dt = -sum_a b_a(t) X^R_a(g)``."""
    if len(coeffs) != len(model.right_fields):
        raise GroupError(f"{model.name} needs {len(model.right_fields)} coefficients, got {len(coeffs)}")
    return TDSystem(model.dim, tuple(-X for X in model.right_fields), tuple(coeffs))


def _check_chart(model, times, states):
    for t, g in zip(times, states):
        if not model.domain(g):
            raise ChartExit(float(t))


def superposition_residual(model: GroupModel, sys: TDSystem, g0_init, g_init, t_samples,
                           tol: float = 1e-10) -> float:
    """``max_t |h(t) - h(t0)|`` for ``h(t) = g0(t)^{-1} g(t)``."""
    t_samples = np.asarray(t_samples, dtype=float)
    span = (t_samples[0], t_samples[-1])
    a = integrate(sys, g0_init, span, tol, t_eval=t_samples)
    b = integrate(sys, g_init, span, tol, t_eval=t_samples)
    _check_chart(model, a.times, a.states)
    _check_chart(model, b.times, b.states)
    hs = [model.multiply(model.inverse(x), y) for x, y in zip(a.states, b.states)]
    return float(max(np.max(np.abs(h - hs[0])) for h in hs))


# ------------------------------------------------------------- quotients

@dataclass(frozen=True)
class QuotientProjection:
    group: GroupModel
    name: str
    subgroup_generators: tuple
    projection: tuple
    projected_fields: tuple

    def __post_init__(self):
        grads = [[g.numeric() for g in P.grad()] for P in self.projection]
        object.__setattr__(self, "_dpi", grads)
        object.__setattr__(self, "_pi", [P.numeric() for P in self.projection])

    def __call__(self, g) -> np.ndarray:
        return np.array([f(g) for f in self._pi])

    def jacobian(self, g) -> np.ndarray:
        return np.array([[f(g) for f in row] for row in self._dpi])


QUOTIENT_NAMES = {
    "SL2_semi_R2": "SL2_semi_R2/SL2",
    "R_semi_R2": "R_semi_R2/SO2",
    "H2_semi_Rr": "H2_semi_Rr/R_semi_Rr",
    "Gr_I14": "Gr_I14/H",
}


def quotient(model: GroupModel, spec_name: str = "default") -> QuotientProjection:
    expected = QUOTIENT_NAMES.get(model.name)
    if expected is None:
        raise GroupError(f"no quotient is shipped for {model.name}")
    if spec_name not in ("default", expected):
        raise GroupError(f"unknown quotient {spec_name!r} for {model.name}; use {expected!r}")
    subs = []
    for combo in model.isotropy[0]:
        if isinstance(combo, int):
            subs.append(model.left_fields[combo])
        else:
            subs.append(sum((model.left_fields[i] * c for i, c in enumerate(combo) if c),
                            VectorField.zero(model.ring)))
    return QuotientProjection(model, expected, tuple(subs), model.projection, model.plane_fields)


def intertwining_residual(q: QuotientProjection, points) -> float:
    """``max |D pi(g) X^R_a(g) - X^pi_a(pi(g))|``."""
    worst = 0.0
    rights = [X.numeric() for X in q.group.right_fields]
    downs = [X.numeric() for X in q.projected_fields]
    for g in points:
        J, p = q.jacobian(g), q(g)
        for Xr, Xp in zip(rights, downs):
            worst = max(worst, float(np.max(np.abs(J @ Xr(g) - Xp(p)))))
    return worst


def subgroup_element(q: QuotientProjection, coeffs, t: float = 1.0) -> np.ndarray:
    """Time-``t`` flow from the identity of ``sum c_k Y_k`` (isotropy left
    fields), i.e. ``exp(t sum c_k v_k)``."""
    Y = sum((Yk * Fraction(c).limit_denominator(10 ** 9) for Yk, c in zip(q.subgroup_generators, coeffs)),
            VectorField.zero(q.group.ring))
    tr = integrate(TDSystem(q.group.dim, (Y,), (lambda _t: 1.0,)), q.group.identity, (0.0, t), 1e-12)
    return tr.final


def translation_invariance_residual(q: QuotientProjection, points, rng: np.random.Generator) -> float:
    """``max |pi(g h) - pi(g)|`` over isotropy elements ``h``."""
    worst = 0.0
    for g in points:
        h = subgroup_element(q, rng.uniform(-0.5, 0.5, len(q.subgroup_generators)))
        worst = max(worst, float(np.max(np.abs(q(q.group.multiply(g, h)) - q(g)))))
    return worst


def push_bivector(B: Bivector, J: np.ndarray, g) -> np.ndarray:
    A = B.array_at(g)
    return J @ A @ J.T


def push_trivector(T: Trivector, J: np.ndarray, g) -> np.ndarray:
    return np.einsum("ai,bj,ck,ijk->abc", J, J, J, T.array_at(g))


def projectability_residual(model: GroupModel, V: Bivector, q: QuotientProjection, points) -> float:
    """Projectability test: ``max |pi_* L_Y V|`` over isotropy generators ``Y`` and
    sample points."""
    if V.ring != model.ring:
        raise GroupError("bivector must be written in the group coordinates")
    Ls = [lie_derivative(Y, V) for Y in q.subgroup_generators]
    worst = 0.0
    for g in points:
        if not model.domain(g):
            raise GroupError(f"point {list(g)} is outside the chart")
        J = q.jacobian(g)
        for L in Ls:
            worst = max(worst, float(np.max(np.abs(push_bivector(L, J, g)))))
    return worst


def projected_bivector(V: Bivector, q: QuotientProjection, g) -> np.ndarray:
    return push_bivector(V, q.jacobian(g), g)


@dataclass(frozen=True)
class PoissonCheck:
    projectability: float
    pushforward_schouten: float
    schouten_upstairs: Trivector

    @property
    def upstairs_zero(self) -> bool:
        return self.schouten_upstairs.is_zero()


def projected_poisson_check(model: GroupModel, J: Bivector, q: QuotientProjection, points) -> PoissonCheck:
    S = schouten_self(J)
    proj = projectability_residual(model, J, q, points)
    push = 0.0
    for g in points:
        push = max(push, float(np.max(np.abs(push_trivector(S, q.jacobian(g), g)))))
    return PoissonCheck(proj, push, S)


def left_wedge(model: GroupModel, i: int, j: int) -> Bivector:
    """``X^L_i ^ X^L_j`` (1-based)."""
    return wedge(model.left_fields[i - 1], model.left_fields[j - 1])


def right_wedge_left(model: GroupModel, i: int, j: int) -> Bivector:
    """``X^L_i ^ X^R_j`` (1-based); generally not projectable."""
    return wedge(model.left_fields[i - 1], model.right_fields[j - 1])


def check_report(model: GroupModel, check: str, points, residual: float, threshold: float,
                 above: bool = False) -> dict:
    ok = residual >= threshold if above else residual <= threshold
    return {"model": model.name, "check": check, "points": int(len(points)), "max_residual": residual,
            "pass": bool(ok)}


