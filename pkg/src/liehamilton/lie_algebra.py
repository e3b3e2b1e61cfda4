"""Finite-dimensional Lie algebras given by exact structure constants, and
the catalog of algebras used throughout the package."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .poly import Ring
from .polyfield import NotInSpan, VectorField, lie_bracket, span_membership
from . import table1


class StructureError(ValueError):
    """Inconsistent dimensions or indices in structure-constant data."""


@dataclass(frozen=True)
class StructureConstants:
    """``c[a][b][g]`` with ``[e_a, e_b] = sum_g c[a][b][g] e_g``.  Indices are
    0-based internally; the JSON format and the ``from_brackets`` helper are
    1-based."""

    dim: int
    c: tuple

    def __post_init__(self):
        r = self.dim
        if r < 1:
            raise StructureError("dimension must be positive")
        c = self.c
        if len(c) != r or any(len(row) != r for row in c) or any(len(v) != r for row in c for v in row):
            raise StructureError(f"structure constants must be {r}x{r}x{r}")
        object.__setattr__(self, "c", tuple(tuple(tuple(Fraction(x) for x in v) for v in row) for row in c))

    @classmethod
    def from_array(cls, arr) -> "StructureConstants":
        arr = list(arr)
        return cls(len(arr), tuple(tuple(tuple(v) for v in row) for row in arr))

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict) -> "StructureConstants":
        """``{(i, j): {k: q}}`` (1-based) for ``[e_i, e_j] = sum q e_k``;
        the antisymmetric partner is filled in."""
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise StructureError(f"bracket index ({i}, {j}) out of range")
            for k, q in coeffs.items():
                if not 1 <= k <= dim:
                    raise StructureError(f"coefficient index {k} out of range")
                c[i - 1][j - 1][k - 1] = Fraction(q)
                c[j - 1][i - 1][k - 1] = -Fraction(q)
        return cls.from_array(c)

    @classmethod
    def abelian(cls, dim: int) -> "StructureConstants":
        return cls.from_brackets(dim, {})

    def bracket(self, a: int, b: int) -> tuple:
        """Coefficients of ``[e_a, e_b]`` (0-based)."""
        return self.c[a][b]

    def negated(self) -> "StructureConstants":
        return StructureConstants.from_array([[[-x for x in v] for v in row] for row in self.c])

    def permuted(self, perm: Sequence[int]) -> "StructureConstants":
        """Constants in the basis ``f_i = e_{perm[i]}`` (0-based)."""
        r = self.dim
        inv = {p: i for i, p in enumerate(perm)}
        c = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
        for a in range(r):
            for b in range(r):
                for g in range(r):
                    c[a][b][inv[g]] = self.c[perm[a]][perm[b]][g]
        return StructureConstants.from_array(c)

    def to_json(self) -> dict:
        brackets = []
        for i, j in combinations(range(self.dim), 2):
            if any(self.c[i][j]):
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": [str(q) for q in self.c[i][j]]})
        return {"dim": self.dim, "brackets": brackets}

    @classmethod
    def from_json(cls, data) -> "StructureConstants":
        if isinstance(data, str):
            data = json.loads(data)
        dim = int(data["dim"])
        brackets = {}
        for entry in data.get("brackets", []):
            coeffs = entry["coeffs"]
            if len(coeffs) != dim:
                raise StructureError(f"bracket ({entry['i']}, {entry['j']}) has {len(coeffs)} coefficients, expected {dim}")
            brackets[(int(entry["i"]), int(entry["j"]))] = {k + 1: Fraction(q) for k, q in enumerate(coeffs)}
        return cls.from_brackets(dim, brackets)

    def relations(self) -> list[str]:
        out = []
        for i, j in combinations(range(self.dim), 2):
            terms = [(q, g) for g, q in enumerate(self.c[i][j]) if q]
            if not terms:
                continue
            rhs = " + ".join(f"e{g + 1}" if q == 1 else f"-e{g + 1}" if q == -1 else f"{q}*e{g + 1}"
                             for q, g in terms).replace("+ -", "- ")
            out.append(f"[e{i + 1},e{j + 1}] = {rhs}")
        return out


@dataclass(frozen=True)
class Violation:
    kind: str  # "antisymmetry" or "jacobi"
    indices: tuple  # 1-based

    def __str__(self):
        return f"{self.kind} violated at {self.indices}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(sc: StructureConstants) -> ValidationReport:
    """Exact check of antisymmetry and the Jacobi identity."""
    r = sc.dim
    c = sc.c
    bad = []
    for a in range(r):
        for b in range(r):
            for g in range(r):
                if c[a][b][g] != -c[b][a][g]:
                    bad.append(Violation("antisymmetry", (a + 1, b + 1, g + 1)))
    for a in range(r):
        for b in range(r):
            for g in range(r):
                for n in range(r):
                    s = sum(c[a][b][m] * c[m][g][n] + c[b][g][m] * c[m][a][n] + c[g][a][m] * c[m][b][n]
                            for m in range(r))
                    if s:
                        bad.append(Violation("jacobi", (a + 1, b + 1, g + 1, n + 1)))
    return ValidationReport(tuple(bad))


def adjoint_matrix(sc: StructureConstants, a: int) -> list[list[Fraction]]:
    """``(ad_{e_a})_{g b} = c_{a b}^g`` for the 1-based index ``a``."""
    if not 1 <= a <= sc.dim:
        raise IndexError(f"index {a} outside 1..{sc.dim}")
    r = sc.dim
    return [[sc.c[a - 1][b][g] for b in range(r)] for g in range(r)]


def matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


# ---------------------------------------------------------------- closure

@dataclass(frozen=True)
class ClosureFailure:
    pair: tuple  # 1-based indices of the offending bracket
    bracket: VectorField
    certificate: NotInSpan

    def __bool__(self):
        return False


def closure_constants(fields: Sequence[VectorField]):
    """Structure constants of the span of ``fields`` (exact), or the first
    :class:`ClosureFailure` if some bracket leaves the span."""
    r = len(fields)
    c = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
    for a, b in combinations(range(r), 2):
        br = lie_bracket(fields[a], fields[b])
        sol = span_membership(fields, br)
        if isinstance(sol, NotInSpan):
            return ClosureFailure((a + 1, b + 1), br, sol)
        for g, q in enumerate(sol):
            c[a][b][g] = q
            c[b][a][g] = -q
    return StructureConstants.from_array(c)


# ---------------------------------------------------------------- catalog

def coadjoint_ring(dim: int) -> Ring:
    return Ring(tuple(f"e{i + 1}" for i in range(dim)))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    sc: StructureConstants
    casimirs: tuple = ()
    notes: str = ""
    table_row: str | None = None
    params: dict = field(default_factory=dict)

    @property
    def ring(self) -> Ring:
        return coadjoint_ring(self.sc.dim)


CATALOG_NAMES = ("sl2", "so3", "iso2", "iso11", "sl2_semi_R2", "h2_semi_Rr", "I14A", "I14B")


def _from_table(label, **kw) -> StructureConstants:
    sc = closure_constants(table1.canonical_fields(label, **kw).fields)
    assert not isinstance(sc, ClosureFailure)
    return sc


def catalog(name: str, r: int | None = None, eta: Sequence[str] | None = None) -> CatalogEntry:
    """Catalog algebra by name.  ``h2_semi_Rr`` takes ``r`` (default 1);
    ``R_semi_Rr`` / ``I14A`` / ``I14B`` take ``eta`` (normal-form functions)."""
    if name == "sl2":
        sc = StructureConstants.from_brackets(3, {(1, 2): {1: 1}, (1, 3): {2: 2}, (2, 3): {3: 1}})
        R = coadjoint_ring(3)
        return CatalogEntry(name, sc, (R.parse("e1*e3 - e2^2"),),
                            "same constants as the P2 and I4 bases", "P2")
    if name == "so3":
        sc = StructureConstants.from_brackets(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (3, 1): {2: 1}})
        R = coadjoint_ring(3)
        return CatalogEntry(name, sc, (R.parse("e1^2 + e2^2 + e3^2"),),
                            "not the constants of the P3 basis", "P3")
    if name == "iso2":
        sc = StructureConstants.from_brackets(3, {(1, 3): {2: -1}, (2, 3): {1: 1}})
        R = coadjoint_ring(3)
        return CatalogEntry(name, sc, (R.parse("e1^2 + e2^2"),), "same constants as the P1 basis", "P1")
    if name == "iso11":
        sc = StructureConstants.from_brackets(3, {(1, 3): {1: 1}, (2, 3): {2: -1}})
        R = coadjoint_ring(3)
        return CatalogEntry(name, sc, (R.parse("e1*e2"),), "same constants as the I8 basis", "I8")
    if name == "sl2_semi_R2":
        return CatalogEntry(name, _from_table("P5"), (), "constants of the P5 basis", "P5")
    if name == "h2_semi_Rr":
        r = 1 if r is None else r
        if not isinstance(r, int) or r < 1:
            raise ValueError("h2_semi_Rr needs an integer r >= 1")
        note = "no Casimir function" if r == 1 else "no Casimir shipped"
        return CatalogEntry(name, _from_table("I16", r=r), (), f"constants of the I16 basis; {note}", "I16",
                            {"r": r})
    if name in ("R_semi_Rr", "I14A", "I14B"):
        label = name if name != "R_semi_Rr" else ("I14B" if eta is not None and eta[0].strip() == "1" else "I14A")
        cls = table1.canonical_fields(label, eta=eta)
        return CatalogEntry(name, _from_table(label, eta=cls.params["eta"]), (),
                            f"constants of the {label} basis", label, dict(cls.params))
    raise KeyError(f"unknown algebra {name!r}")


def all_entries() -> list[CatalogEntry]:
    return [catalog(n) for n in CATALOG_NAMES]
