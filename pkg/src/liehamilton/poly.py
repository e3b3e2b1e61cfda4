"""Exact multivariate (Laurent) polynomials over Q with exponential and
trigonometric extension variables.

A :class:`Ring` has ``n`` coordinate variables and optional extension
variables, each tied to one coordinate:

* ``exp`` -- stands for ``exp(x_i)``; ``d/dx_i u = u``; integer powers of
  either sign are allowed, so ``exp(-x)`` is ``u**-1``.
* ``cos`` / ``sin`` -- come in pairs for one coordinate; terms are kept in a
  normal form with ``sin`` exponent in ``{0, 1}`` (``sin^2 = 1 - cos^2``).

Coordinate exponents may be negative as well (Laurent terms), which is what
the SL2 chart ``delta = (1 + beta*gamma)/alpha`` needs.  In the normal form the
monomials are linearly independent functions, so zero tests and linear
solves over the monomial basis are exact.
"""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

DEFAULT_DEGREE_CAP = 16


class DegreeCapExceeded(ValueError):
    pass


class RingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Ext:
    """Extension variable ``kind(x_var)``."""

    kind: str
    var: int

    def __post_init__(self):
        if self.kind not in ("exp", "cos", "sin"):
            raise ValueError(f"unknown extension kind {self.kind!r}")


@dataclass(frozen=True)
class Ring:
    names: tuple[str, ...]
    ext: tuple[Ext, ...] = ()
    degree_cap: int = field(default=DEFAULT_DEGREE_CAP, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "ext", tuple(self.ext))
        for e in self.ext:
            if not 0 <= e.var < len(self.names):
                raise ValueError("extension tied to a missing coordinate")
        for i, _ in enumerate(self.names):
            kinds = [e.kind for e in self.ext if e.var == i]
            if len(kinds) != len(set(kinds)):
                raise ValueError("duplicate extension variable")
            if ("cos" in kinds) != ("sin" in kinds):
                raise ValueError("cos and sin extensions must come in pairs")

    @property
    def ncoords(self) -> int:
        return len(self.names)

    @property
    def nvars(self) -> int:
        return len(self.names) + len(self.ext)

    @cached_property
    def _ext_index(self) -> dict[tuple[str, int], int]:
        return {(e.kind, e.var): self.ncoords + j for j, e in enumerate(self.ext)}

    @cached_property
    def trig_pairs(self) -> tuple[tuple[int, int], ...]:
        idx = self._ext_index
        return tuple((idx[("cos", i)], idx[("sin", i)])
                     for i in range(self.ncoords) if ("cos", i) in idx)

    def ext_index(self, kind: str, var: int) -> int:
        try:
            return self._ext_index[(kind, var)]
        except KeyError:
            raise ValueError(f"ring has no {kind}({self.names[var]})") from None

    def index(self, name: str) -> int:
        return self.names.index(name)

    def with_exp(self, *names: str) -> "Ring":
        ext = list(self.ext) + [Ext("exp", self.index(n)) for n in names]
        return Ring(self.names, tuple(ext), self.degree_cap)

    def with_trig(self, *names: str) -> "Ring":
        ext = list(self.ext)
        for n in names:
            ext += [Ext("cos", self.index(n)), Ext("sin", self.index(n))]
        return Ring(self.names, tuple(ext), self.degree_cap)

    def doubled(self, suffixes=("_1", "_2")) -> "Ring":
        """Two copies of the ring (variables of ``g`` then of ``h``)."""
        n = self.ncoords
        names = tuple(a + suffixes[0] for a in self.names) + tuple(a + suffixes[1] for a in self.names)
        ext = tuple(Ext(e.kind, e.var) for e in self.ext) + tuple(Ext(e.kind, e.var + n) for e in self.ext)
        return Ring(names, ext, self.degree_cap)

    # constructors ---------------------------------------------------------
    def zero(self) -> "Poly":
        return Poly(self, {})

    def const(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name_or_index) -> "Poly":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        key = [0] * self.nvars
        key[i] = 1
        return Poly(self, {tuple(key): Fraction(1)})

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.ncoords)]

    def ext_var(self, kind: str, name: str, power: int = 1) -> "Poly":
        key = [0] * self.nvars
        key[self.ext_index(kind, self.index(name))] = power
        return Poly(self, _normalize(self, [(tuple(key), Fraction(1))]))

    def parse(self, text: str) -> "Poly":
        return parse(text, self)


def _normalize(ring: Ring, terms: Iterable[tuple[tuple[int, ...], Fraction]]) -> dict:
    pairs = ring.trig_pairs
    out: dict[tuple[int, ...], Fraction] = {}
    stack = list(terms)
    while stack:
        key, c = stack.pop()
        if not c:
            continue
        for ci, si in pairs:
            if key[si] >= 2:
                k1 = list(key)
                k1[si] -= 2
                k2 = list(k1)
                k2[ci] += 2
                stack.append((tuple(k1), c))
                stack.append((tuple(k2), -c))
                break
        else:
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


class Poly:
    """Immutable element of a :class:`Ring`; ``terms`` maps exponent tuples to
    nonzero :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("ring", "terms", "_compiled", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], Fraction]):
        self.ring = ring
        self.terms = {k: Fraction(v) for k, v in terms.items() if v}
        for k in self.terms:
            if sum(abs(e) for e in k) > ring.degree_cap:
                raise DegreeCapExceeded(f"term degree {sum(abs(e) for e in k)} exceeds cap {ring.degree_cap}")
        self._compiled = None
        self._hash = None

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Poly(self.ring, {k: v * c for k, v in self.terms.items()} if c else {})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prods = []
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                prods.append((tuple(a + b for a, b in zip(k1, k2)), c1 * c2))
        return Poly(self.ring, _normalize(self.ring, prods))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have negative powers")
            (k, c), = self.terms.items()
            if any(k[i] for i in range(self.ring.ncoords, self.ring.nvars)
                   if self.ring.ext[i - self.ring.ncoords].kind != "exp"):
                raise ValueError("trigonometric factors have no inverse here")
            return Poly(self.ring, {tuple(e * n for e in k): Fraction(1) / c ** -n})
        out = self.ring.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # calculus -------------------------------------------------------------
    def diff(self, i: int) -> "Poly":
        """Partial derivative along coordinate ``i`` (chain rule through the
        extension variables tied to it)."""
        ring = self.ring
        n = ring.ncoords
        linked = [(n + j, e.kind) for j, e in enumerate(ring.ext) if e.var == i]
        out = []
        for key, c in self.terms.items():
            e = key[i]
            if e:
                k = list(key)
                k[i] -= 1
                out.append((tuple(k), c * e))
            for J, kind in linked:
                e = key[J]
                if not e:
                    continue
                if kind == "exp":
                    out.append((key, c * e))
                else:
                    k = list(key)
                    k[J] -= 1
                    other = ring.ext_index("sin" if kind == "cos" else "cos", i)
                    k[other] += 1
                    out.append((tuple(k), -c * e if kind == "cos" else c * e))
        return Poly(ring, _normalize(ring, out))

    def grad(self) -> list["Poly"]:
        return [self.diff(i) for i in range(self.ring.ncoords)]

    def degree(self) -> int:
        return max((sum(abs(e) for e in k) for k in self.terms), default=0)

    # substitution ---------------------------------------------------------
    def subs(self, values: Mapping[int, Fraction]) -> "Poly":
        """Substitute exact values for some coordinates.  Extension variables
        tied to a substituted coordinate must be rational there (only the
        value 0 qualifies)."""
        ring = self.ring
        n = ring.ncoords
        ext_vals = {}
        for j, e in enumerate(ring.ext):
            if e.var in values:
                v = Fraction(values[e.var])
                if v != 0:
                    raise ValueError("extension variable is irrational at this value")
                ext_vals[n + j] = {"exp": Fraction(1), "cos": Fraction(1), "sin": Fraction(0)}[e.kind]
        vals = {i: Fraction(v) for i, v in values.items()}
        vals.update(ext_vals)
        out = []
        for key, c in self.terms.items():
            k = list(key)
            for i, v in vals.items():
                e = k[i]
                if e:
                    if v == 0 and e < 0:
                        raise ZeroDivisionError("Laurent term evaluated at zero")
                    c = c * v ** e
                    k[i] = 0
            out.append((tuple(k), c))
        return Poly(ring, _normalize(ring, out))

    def to_ring(self, ring: Ring, coord_map: Mapping[int, int]) -> "Poly":
        """Rename coordinates into ``ring``; every variable with a nonzero
        exponent must be mapped."""
        src = self.ring
        n = src.ncoords
        var_map = dict(coord_map)
        for j, e in enumerate(src.ext):
            if e.var in coord_map:
                var_map[n + j] = ring.ext_index(e.kind, coord_map[e.var])
        out = {}
        for key, c in self.terms.items():
            k = [0] * ring.nvars
            for i, e in enumerate(key):
                if e:
                    if i not in var_map:
                        raise ValueError(f"variable {i} has no image")
                    k[var_map[i]] += e
            out[tuple(k)] = out.get(tuple(k), 0) + c
        return Poly(ring, out)

    def compose(self, images: list["Poly"]) -> "Poly":
        """Substitute polynomials for the coordinates.  Only valid for rings
        without extension variables."""
        if self.ring.ext:
            raise ValueError("composition through extension variables is not supported")
        target = images[0].ring
        out = target.zero()
        for key, c in self.terms.items():
            term = target.const(c)
            for img, e in zip(images, key):
                if e:
                    term = term * img ** e
            out = out + term
        return out

    # evaluation -----------------------------------------------------------
    def _ext_values(self, point) -> list:
        vals = []
        for e in self.ring.ext:
            x = point[e.var]
            vals.append(math.exp(x) if e.kind == "exp" else math.cos(x) if e.kind == "cos" else math.sin(x))
        return vals

    def evaluate(self, point) -> float:
        """Exact evaluation for rational points in rings without extensions
        (then converted to float); float evaluation otherwise."""
        if len(point) != self.ring.ncoords:
            raise ValueError(f"point has {len(point)} entries, ring has {self.ring.ncoords} coordinates")
        if not self.ring.ext:
            try:
                q = [Fraction(x) for x in point]
            except (TypeError, ValueError):
                return float(self.numeric()(np.asarray(point, dtype=float)))
            total = Fraction(0)
            for key, c in self.terms.items():
                t = c
                for v, e in zip(q, key):
                    if e:
                        t *= v ** e
                total += t
            return float(total)
        return float(self.numeric()(np.asarray(point, dtype=float)))

    def numeric(self):
        """Fast float evaluator ``point -> float``."""
        if self._compiled is None:
            keys = np.array(list(self.terms) or [(0,) * self.ring.nvars], dtype=float)
            coefs = np.array([float(c) for c in self.terms.values()] or [0.0])
            ring = self.ring
            ext = [(e.kind, e.var) for e in ring.ext]
            funcs = {"exp": np.exp, "cos": np.cos, "sin": np.sin}

            def f(x):
                x = np.asarray(x, dtype=float)
                vals = np.concatenate([x, [funcs[k](x[i]) for k, i in ext]]) if ext else x
                return float(coefs @ np.prod(np.power(vals, keys), axis=1))

            self._compiled = f
        return self._compiled

    # printing -------------------------------------------------------------
    def _monomial_str(self, key) -> str:
        ring = self.ring
        parts = []
        for i, e in enumerate(key):
            if not e:
                continue
            if i < ring.ncoords:
                name = ring.names[i]
                parts.append(name if e == 1 else f"{name}^{e}")
            else:
                ext = ring.ext[i - ring.ncoords]
                x = ring.names[ext.var]
                if ext.kind == "exp":
                    parts.append(f"exp({x})" if e == 1 else f"exp(-{x})" if e == -1 else f"exp({e}*{x})")
                else:
                    parts.append(f"{ext.kind}({x})" if e == 1 else f"{ext.kind}({x})^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for key in sorted(self.terms, reverse=True):
            c = self.terms[key]
            mono = self._monomial_str(key)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


# parsing -----------------------------------------------------------------

def parse(text: str, ring: Ring) -> Poly:
    """Parse ``"x^2*y - 3/2*z"``, ``"exp(2*x)*y"``, ``"cos(t)"`` into ``ring``."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc
    return _walk(tree.body, ring, text)


def _linear_multiple(node, ring, text) -> tuple[int, int]:
    """``k*x`` / ``x`` / ``-x`` inside exp(...): returns (coordinate, k)."""
    p = _walk(node, ring, text)
    if ring.ext and any(k[ring.ncoords:] != (0,) * len(ring.ext) for k in p.terms):
        raise ValueError(f"bad exponent argument in {text!r}")
    if len(p.terms) != 1:
        raise ValueError(f"exponent argument must be an integer multiple of one coordinate in {text!r}")
    (key, c), = p.terms.items()
    idx = [i for i, e in enumerate(key) if e]
    if len(idx) != 1 or key[idx[0]] != 1 or c.denominator != 1:
        raise ValueError(f"exponent argument must be an integer multiple of one coordinate in {text!r}")
    return idx[0], int(c)


def _walk(node, ring: Ring, text: str) -> Poly:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return ring.const(Fraction(str(node.value)))
    if isinstance(node, ast.Name):
        if node.id not in ring.names:
            raise ValueError(f"unknown variable {node.id!r} in {text!r}")
        return ring.var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        p = _walk(node.operand, ring, text)
        return -p if isinstance(node.op, ast.USub) else p
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _walk(node.left, ring, text)
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ValueError(f"exponents must be integer literals in {text!r}")
            return base ** (sign * exp.value)
        a = _walk(node.left, ring, text)
        b = _walk(node.right, ring, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if len(b.terms) == 1 and next(iter(b.terms)) == (0,) * ring.nvars:
                return a / next(iter(b.terms.values()))
            if len(b.terms) == 1:
                return a * b ** -1
            raise ValueError(f"division by a non-monomial in {text!r}")
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
        fn = node.func.id
        if fn == "exp":
            i, k = _linear_multiple(node.args[0], ring, text)
            key = [0] * ring.nvars
            key[ring.ext_index("exp", i)] = k
            return Poly(ring, {tuple(key): Fraction(1)})
        if fn in ("cos", "sin"):
            i, k = _linear_multiple(node.args[0], ring, text)
            if k != 1:
                raise ValueError(f"only {fn}(x) is supported in {text!r}")
            key = [0] * ring.nvars
            key[ring.ext_index(fn, i)] = 1
            return Poly(ring, {tuple(key): Fraction(1)})
    raise ValueError(f"unsupported expression in {text!r}")
