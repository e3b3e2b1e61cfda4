"""Polynomial-coefficient vector, bivector, trivector and symmetric 2-tensor
fields, with exact Lie brackets, wedges, Lie derivatives and the
Schouten-Nijenhuis bracket.

Sign convention for the Schouten bracket: for vector fields ``X, Y``

    [X ^ Y, X ^ Y] = -2 [X, Y] ^ X ^ Y.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from .poly import Poly, Ring, RingMismatch


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _check_same(*rings):
    if any(r != rings[0] for r in rings):
        raise RingMismatch("fields live on different spaces")


class VectorField:
    """``sum_i comps[i] * d/dx_i``."""

    __slots__ = ("ring", "comps", "_numeric")

    def __init__(self, ring: Ring, comps: Sequence[Poly]):
        comps = tuple(ring.const(c) if not isinstance(c, Poly) else c for c in comps)
        if len(comps) != ring.ncoords:
            raise ValueError(f"expected {ring.ncoords} components, got {len(comps)}")
        _check_same(ring, *(c.ring for c in comps))
        self.ring = ring
        self.comps = comps
        self._numeric = None

    @classmethod
    def parse(cls, ring: Ring, texts: Sequence[str]) -> "VectorField":
        return cls(ring, [ring.parse(t) for t in texts])

    @classmethod
    def zero(cls, ring: Ring) -> "VectorField":
        return cls(ring, [ring.zero()] * ring.ncoords)

    @classmethod
    def coordinate(cls, ring: Ring, i: int) -> "VectorField":
        return cls(ring, [ring.const(1 if j == i else 0) for j in range(ring.ncoords)])

    @property
    def nvars(self) -> int:
        return self.ring.ncoords

    def __call__(self, f: Poly) -> Poly:
        """Directional derivative ``X(f)``."""
        _check_same(self.ring, f.ring)
        out = self.ring.zero()
        for i, c in enumerate(self.comps):
            if c:
                out = out + c * f.diff(i)
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        _check_same(self.ring, other.ring)
        return VectorField(self.ring, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __neg__(self) -> "VectorField":
        return VectorField(self.ring, [-a for a in self.comps])

    def __mul__(self, f) -> "VectorField":
        return VectorField(self.ring, [a * f for a in self.comps])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.ring == other.ring and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def numeric(self):
        """Fast evaluator ``point -> ndarray``."""
        if self._numeric is None:
            # shared monomial table: each monomial is evaluated once per call
            keys = sorted({k for c in self.comps for k in c.terms}) or [(0,) * self.ring.nvars]
            pos = {k: j for j, k in enumerate(keys)}
            C = np.zeros((len(self.comps), len(keys)))
            for i, c in enumerate(self.comps):
                for k, q in c.terms.items():
                    C[i, pos[k]] = float(q)
            K = np.array(keys, dtype=float)
            ext = [(e.kind, e.var) for e in self.ring.ext]
            funcs = {"exp": np.exp, "cos": np.cos, "sin": np.sin}

            def f(x):
                x = np.asarray(x, dtype=float)
                vals = np.concatenate([x, [funcs[k](x[i]) for k, i in ext]]) if ext else x
                return C @ np.prod(np.power(vals, K), axis=1)

            self._numeric = f
        return self._numeric

    def __str__(self):
        parts = []
        for name, c in zip(self.ring.names, self.comps):
            if c:
                s = str(c)
                if len(c.terms) > 1:
                    parts.append(f"({s})*d_{name}")
                else:
                    parts.append(f"d_{name}" if s == "1" else f"-d_{name}" if s == "-1" else f"{s}*d_{name}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    __repr__ = __str__


class _IndexedTensor:
    """Components keyed by index tuples in canonical (sorted) order."""

    rank: int = 2
    antisymmetric: bool = True

    __slots__ = ("ring", "comps")

    def __init__(self, ring: Ring, comps: dict):
        self.ring = ring
        clean = {}
        for idx, c in comps.items():
            key, sign = self._canon(idx)
            if sign == 0:
                continue
            if not isinstance(c, Poly):
                c = ring.const(c)
            _check_same(ring, c.ring)
            v = clean.get(key, ring.zero()) + (c if sign > 0 else -c)
            clean[key] = v
        self.comps = {k: v for k, v in clean.items() if v}

    def _canon(self, idx):
        if len(idx) != self.rank or any(not 0 <= i < self.ring.ncoords for i in idx):
            raise IndexError(f"bad index {idx}")
        key = tuple(sorted(idx))
        if self.antisymmetric:
            if len(set(idx)) < len(idx):
                return key, 0
            return key, _perm_sign(idx)
        return key, 1

    @property
    def nvars(self) -> int:
        return self.ring.ncoords

    def __getitem__(self, idx) -> Poly:
        key, sign = self._canon(tuple(idx))
        if sign == 0:
            return self.ring.zero()
        c = self.comps.get(key, self.ring.zero())
        return c if sign > 0 else -c

    def _new(self, comps):
        return type(self)(self.ring, comps)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _check_same(self.ring, other.ring)
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out.get(k, self.ring.zero()) + v
        return self._new(out)

    def __neg__(self):
        return self._new({k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        return self._new({k: v * f for k, v in self.comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return type(other) is type(self) and self.ring == other.ring and self.comps == other.comps

    def __hash__(self):
        return hash(frozenset(self.comps.items()))

    def is_zero(self) -> bool:
        return not self.comps

    def array_at(self, point) -> np.ndarray:
        """Full component array (all index orders) at a numeric point."""
        n = self.ring.ncoords
        out = np.zeros((n,) * self.rank)
        x = np.asarray(point, dtype=float)
        for key, c in self.comps.items():
            v = c.numeric()(x)
            for perm in set(permutations(key)):
                out[perm] = v * (_perm_sign(perm) if self.antisymmetric else 1)
        return out

    def __str__(self):
        if not self.comps:
            return "0"
        sep = "^" if self.antisymmetric else "(x)"
        parts = []
        for key in sorted(self.comps):
            basis = sep.join(f"d_{self.ring.names[i]}" for i in key)
            parts.append(f"({self.comps[key]})*{basis}")
        return " + ".join(parts)

    __repr__ = __str__


class Bivector(_IndexedTensor):
    rank = 2
    antisymmetric = True

    @classmethod
    def parse(cls, ring: Ring, comps: dict) -> "Bivector":
        return cls(ring, {k: ring.parse(v) for k, v in comps.items()})


class Trivector(_IndexedTensor):
    rank = 3
    antisymmetric = True


class SymTensor(_IndexedTensor):
    rank = 2
    antisymmetric = False


# PolyVectorField etc. are the names used in the design notes.
PolyVectorField = VectorField
PolyBivectorField = Bivector
PolyTrivectorField = Trivector
PolySymTensorField = SymTensor


# ------------------------------------------------------------------ operations

def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """``[X, Y]^i = sum_j X^j d_j Y^i - Y^j d_j X^i``."""
    _check_same(X.ring, Y.ring)
    return VectorField(X.ring, [X(b) - Y(a) for a, b in zip(X.comps, Y.comps)])


def wedge(X: VectorField, Y: VectorField) -> Bivector:
    _check_same(X.ring, Y.ring)
    n = X.ring.ncoords
    return Bivector(X.ring, {(i, j): X.comps[i] * Y.comps[j] - X.comps[j] * Y.comps[i]
                             for i, j in combinations(range(n), 2)})


def wedge3(X: VectorField, Y: VectorField, Z: VectorField) -> Trivector:
    _check_same(X.ring, Y.ring, Z.ring)
    n = X.ring.ncoords
    comps = {}
    for idx in combinations(range(n), 3):
        total = X.ring.zero()
        for perm in permutations(range(3)):
            term = X.comps[idx[perm[0]]] * Y.comps[idx[perm[1]]] * Z.comps[idx[perm[2]]]
            total = total + (term if _perm_sign(perm) > 0 else -term)
        comps[idx] = total
    return Trivector(X.ring, comps)


def wedge_vector_bivector(X: VectorField, B: Bivector) -> Trivector:
    """``X ^ B`` with ``(X ^ Y ^ Z)`` normalization matching :func:`wedge3`."""
    _check_same(X.ring, B.ring)
    n = X.ring.ncoords
    comps = {}
    for i, j, k in combinations(range(n), 3):
        comps[(i, j, k)] = X.comps[i] * B[j, k] - X.comps[j] * B[i, k] + X.comps[k] * B[i, j]
    return Trivector(X.ring, comps)


def lie_derivative(X: VectorField, T):
    """Lie derivative of a 2-contravariant tensor (bivector or symmetric):
    ``(L_X T)^{ij} = X(T^{ij}) - sum_k (T^{kj} d_k X^i + T^{ik} d_k X^j)``.
    Vector fields are handled as ``[X, T]``."""
    if isinstance(T, VectorField):
        return lie_bracket(X, T)
    if not isinstance(T, (Bivector, SymTensor)):
        raise TypeError("lie_derivative expects a vector field, bivector or symmetric tensor")
    _check_same(X.ring, T.ring)
    n = X.ring.ncoords
    dX = [[X.comps[i].diff(k) for k in range(n)] for i in range(n)]
    full = [[T[i, j] for j in range(n)] for i in range(n)]
    comps = {}
    pairs = combinations(range(n), 2) if isinstance(T, Bivector) else \
        ((i, j) for i in range(n) for j in range(i, n))
    for i, j in pairs:
        v = X(full[i][j])
        for k in range(n):
            if dX[i][k] and full[k][j]:
                v = v - full[k][j] * dX[i][k]
            if dX[j][k] and full[i][k]:
                v = v - full[i][k] * dX[j][k]
        comps[(i, j)] = v
    return type(T)(X.ring, comps)


def _decompose(B: Bivector):
    """``B = sum (B^{ij} d_i) ^ d_j`` over ``i < j``."""
    ring = B.ring
    for (i, j), c in B.comps.items():
        a = VectorField(ring, [c if k == i else ring.zero() for k in range(ring.ncoords)])
        yield a, VectorField.coordinate(ring, j)


def schouten(P: Bivector, Q: Bivector) -> Trivector:
    """Schouten-Nijenhuis bracket of two bivectors, bilinear extension of
    ``[X1^X2, Y1^Y2] = -sum_{a,b} (-1)^{a+b} [Xa, Yb] ^ X_rest ^ Y_rest``
    (overall sign chosen for the stated convention)."""
    _check_same(P.ring, Q.ring)
    out = Trivector(P.ring, {})
    for X1, X2 in _decompose(P):
        Xs = (X1, X2)
        for Y1, Y2 in _decompose(Q):
            Ys = (Y1, Y2)
            for a in range(2):
                for b in range(2):
                    br = lie_bracket(Xs[a], Ys[b])
                    if br.is_zero():
                        continue
                    term = wedge3(br, Xs[1 - a], Ys[1 - b])
                    out = out + (term if (a + b) % 2 else -term)
    return out


def schouten_self(L: Bivector) -> Trivector:
    return schouten(L, L)


def sym_product(X: VectorField, Y: VectorField) -> SymTensor:
    """``X (x) Y + Y (x) X``."""
    _check_same(X.ring, Y.ring)
    n = X.ring.ncoords
    return SymTensor(X.ring, {(i, j): X.comps[i] * Y.comps[j] + X.comps[j] * Y.comps[i]
                              for i in range(n) for j in range(i, n)})


def evaluate(field, point) -> np.ndarray:
    """Numeric components of any field kind at ``point`` (vector fields give a
    length-n array, tensors the full n x n (x n) array)."""
    if isinstance(field, Poly):
        return np.array(field.evaluate(point))
    n = field.ring.ncoords
    if len(point) != n:
        raise ValueError(f"point has {len(point)} entries, field lives on R^{n}")
    if isinstance(field, VectorField):
        return np.array([c.evaluate(point) for c in field.comps])
    out = np.zeros((n,) * field.rank)
    for key, c in field.comps.items():
        v = c.evaluate(point)
        for perm in set(permutations(key)):
            out[perm] = v * (_perm_sign(perm) if field.antisymmetric else 1)
    return out


# ------------------------------------------------------------- linear algebra

@dataclass(frozen=True)
class NotInSpan:
    """Certificate: the candidate's component ``coord`` carries a monomial
    that no combination of the fields can match."""

    coord: int
    monomial: tuple
    residual: VectorField

    def __bool__(self):
        return False


def _rref_solve(columns: list[dict], target: dict):
    """Exact solve of ``sum_a x_a columns[a] = target`` over sparse rational
    vectors.  Returns the solution list or the first unmatched key."""
    keys = sorted(set().union(*columns, target), key=repr) if columns else sorted(target, key=repr)
    m = len(columns)
    rows = [[Fraction(col.get(k, 0)) for col in columns] + [Fraction(target.get(k, 0))] for k in keys]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [v / p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][m]:
            return None, keys[i]
    sol = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        sol[c] = rows[i][m]
    return sol, None


def _flatten(X: VectorField) -> dict:
    return {(i, key): c for i, comp in enumerate(X.comps) for key, c in comp.terms.items()}


def span_membership(fields: Sequence[VectorField], candidate: VectorField):
    """Constants ``lam`` with ``candidate = sum lam_a fields[a]`` (a list of
    Fractions), or a :class:`NotInSpan` certificate."""
    if not fields:
        raise ValueError("need at least one field")
    _check_same(*(f.ring for f in fields), candidate.ring)
    sol, bad = _rref_solve([_flatten(f) for f in fields], _flatten(candidate))
    if sol is not None:
        return sol
    ring = candidate.ring
    coord, mono = bad
    residual = VectorField(ring, [Poly(ring, {mono: candidate.comps[coord].terms.get(mono, 1)})
                                  if k == coord else ring.zero() for k in range(ring.ncoords)])
    return NotInSpan(coord, mono, residual)


def linearly_independent(fields: Sequence[VectorField]) -> bool:
    cols = [_flatten(f) for f in fields]
    for a in range(len(cols)):
        sol, _ = _rref_solve(cols[:a], cols[a]) if a else (None, True)
        if a and sol is not None:
            return False
        if not a and not cols[0]:
            return False
    return True
