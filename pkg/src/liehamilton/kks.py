"""Linear (Kirillov-Kostant-Souriau) Poisson structure on the dual of a Lie
algebra, its Hamiltonian vector fields and Casimir checks.

The coordinates ``e_1..e_r`` on the dual satisfy ``{e_a, e_b} = [e_a, e_b]``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .lie_algebra import StructureConstants, StructureError, coadjoint_ring, validate
from .poly import Poly, Ring
from .polyfield import Bivector, VectorField


@dataclass(frozen=True)
class KKSBivector:
    sc: StructureConstants
    bivector: Bivector

    @property
    def ring(self) -> Ring:
        return self.bivector.ring

    @property
    def dim(self) -> int:
        return self.sc.dim

    def bracket(self, f: Poly, g: Poly) -> Poly:
        """``{f, g} = sum Lambda^{ab} d_a f d_b g``."""
        out = self.ring.zero()
        df, dg = f.grad(), g.grad()
        for (a, b), lam in self.bivector.comps.items():
            out = out + lam * (df[a] * dg[b] - df[b] * dg[a])
        return out


def kks_bivector(sc: StructureConstants) -> KKSBivector:
    report = validate(sc)
    if not report.ok:
        raise StructureError(f"not a Lie algebra: {report.violations[0]}")
    R = coadjoint_ring(sc.dim)
    e = R.gens()
    comps = {}
    for a in range(sc.dim):
        for b in range(a + 1, sc.dim):
            comps[(a, b)] = sum((e[g] * q for g, q in enumerate(sc.c[a][b]) if q), R.zero())
    return KKSBivector(sc, Bivector(R, comps))


def hamiltonian_field(L: KKSBivector, h: Poly) -> VectorField:
    """``X_h = {h, .}``: ``X_h^b = sum_a (dh/de_a) Lambda^{ab}``."""
    if h.ring != L.ring:
        raise ValueError(f"Hamiltonian must be a function of e1..e{L.dim}")
    R = L.ring
    dh = h.grad()
    comps = []
    for b in range(L.dim):
        v = R.zero()
        for a in range(L.dim):
            if dh[a]:
                lam = L.bivector[a, b]
                if lam:
                    v = v + dh[a] * lam
        comps.append(v)
    return VectorField(R, comps)


def basis_fields(L: KKSBivector) -> list[VectorField]:
    return [hamiltonian_field(L, e) for e in L.ring.gens()]


def casimir_residual(L: KKSBivector, C: Poly) -> list[Poly]:
    """``[{C, e_b} for b]``; all zero iff ``C`` is a Casimir."""
    return list(hamiltonian_field(L, C).comps)


def is_casimir(L: KKSBivector, C: Poly) -> bool:
    return all(p.is_zero() for p in casimir_residual(L, C))
