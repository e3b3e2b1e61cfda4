"""Bases of the twelve classes of Hamiltonian Vessiot-Guldberg Lie algebras
on the plane, with the density of their invariant symplectic form."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .poly import Ring
from .polyfield import VectorField

PLANE = Ring(("x", "y"))
PLANE_EXP = PLANE.with_exp("x")

I14A_DEFAULT_ETA = ("exp(x)", "exp(2*x)")
I14B_DEFAULT_ETA = ("1", "exp(x)")

LABELS = ("P1", "P2", "P3", "P5", "I1", "I4", "I5", "I8", "I12", "I14A", "I14B", "I16")


@dataclass(frozen=True)
class CanonicalClass:
    label: str
    fields: tuple[VectorField, ...]
    omega: str
    algebra: str
    params: dict = field(default_factory=dict)

    @property
    def ring(self) -> Ring:
        return self.fields[0].ring


def _vf(ring, *comps):
    return VectorField.parse(ring, comps)


def canonical_fields(label: str, r: int | None = None, eta: Sequence[str] | None = None) -> CanonicalClass:
    """Basis of class ``label``; ``r`` sizes I12/I16, ``eta`` picks the
    I14 functions (strings in ``x``, e.g. ``"exp(2*x)"``)."""
    R = PLANE
    if label == "P1":
        return CanonicalClass(label, (_vf(R, "1", "0"), _vf(R, "0", "1"), _vf(R, "y", "-x")),
                              "dx^dy", "iso2")
    if label == "P2":
        return CanonicalClass(label, (_vf(R, "1", "0"), _vf(R, "x", "y"), _vf(R, "x^2 - y^2", "2*x*y")),
                              "dx^dy/y^2", "sl2")
    if label == "P3":
        return CanonicalClass(label, (_vf(R, "y", "-x"), _vf(R, "1 + x^2 - y^2", "2*x*y"),
                                      _vf(R, "2*x*y", "1 + y^2 - x^2")),
                              "dx^dy/(1+x^2+y^2)", "so3")
    if label == "P5":
        return CanonicalClass(label, (_vf(R, "1", "0"), _vf(R, "0", "1"), _vf(R, "x", "-y"),
                                      _vf(R, "y", "0"), _vf(R, "0", "x")),
                              "dx^dy", "sl2_semi_R2")
    if label == "I1":
        return CanonicalClass(label, (_vf(R, "1", "0"),), "f(y)dx^dy", "R")
    if label == "I4":
        return CanonicalClass(label, (_vf(R, "1", "1"), _vf(R, "x", "y"), _vf(R, "x^2", "y^2")),
                              "dx^dy/(x-y)^2", "sl2")
    if label == "I5":
        return CanonicalClass(label, (_vf(R, "1", "0"), _vf(R, "2*x", "y"), _vf(R, "x^2", "x*y")),
                              "dx^dy/y^3", "sl2")
    if label == "I8":
        return CanonicalClass(label, (_vf(R, "1", "0"), _vf(R, "0", "1"), _vf(R, "x", "-y")),
                              "dx^dy", "iso11")
    if label == "I12":
        r = 1 if r is None else r
        if r < 1:
            raise ValueError("I12 needs r >= 1")
        fields = [_vf(R, "0", "1")] + [_vf(R, "0", f"x^{i}") for i in range(1, r + 1)]
        return CanonicalClass(label, tuple(fields), "f(x)dx^dy", f"R^{r + 1}", {"r": r})
    if label in ("I14A", "I14B"):
        if eta is None:
            eta = I14A_DEFAULT_ETA if label == "I14A" else I14B_DEFAULT_ETA
        eta = tuple(eta)
        R = PLANE_EXP
        etas = [R.parse(e) for e in eta]
        one = R.const(1)
        if label == "I14A" and any(e == one for e in etas):
            raise ValueError("I14A requires every eta_i != 1")
        if label == "I14B" and etas[0] != one:
            raise ValueError("I14B requires eta_1 = 1")
        fields = [VectorField(R, [one, R.zero()])] + [VectorField(R, [R.zero(), e]) for e in etas]
        return CanonicalClass(label, tuple(fields), "dx^dy", f"R_semi_R{len(eta)}",
                              {"r": len(eta), "eta": eta})
    if label == "I16":
        r = 1 if r is None else r
        if r < 0:
            raise ValueError("I16 needs r >= 0")
        fields = [_vf(R, "1", "0"), _vf(R, "0", "1"), _vf(R, "x", "-y")]
        fields += [_vf(R, "0", f"x^{i}") for i in range(1, r + 1)]
        return CanonicalClass(label, tuple(fields), "dx^dy", f"h2_semi_R{r + 1}", {"r": r})
    raise KeyError(f"unknown normal-form class {label!r}")
