import pytest
from hypothesis import given
from hypothesis import strategies as st

from liehamilton.kks import basis_fields, hamiltonian_field, is_casimir, kks_bivector
from liehamilton.lie_algebra import CATALOG_NAMES, StructureConstants, StructureError, catalog, closure_constants
from liehamilton.poly import Poly
from liehamilton.polyfield import lie_bracket, schouten_self

from conftest import small_fractions

SO3 = kks_bivector(catalog("so3").sc)


@st.composite
def coadjoint_polys(draw):
    R = SO3.ring
    terms = {tuple(draw(st.integers(0, 2)) for _ in range(3)): draw(small_fractions) for _ in range(draw(st.integers(0, 3)))}
    return Poly(R, terms)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_kks_is_poisson(name):
    assert schouten_self(kks_bivector(catalog(name).sc).bivector).is_zero()


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_hamiltonian_map_closes_with_catalog_constants(name):
    e = catalog(name)
    assert closure_constants(basis_fields(kks_bivector(e.sc))) == e.sc


@pytest.mark.parametrize("name", ["sl2", "so3", "iso2", "iso11"])
def test_casimirs(name):
    e = catalog(name)
    L = kks_bivector(e.sc)
    assert e.casimirs and all(is_casimir(L, C) for C in e.casimirs)
    assert not is_casimir(L, L.ring.gens()[0])


@given(coadjoint_polys(), coadjoint_polys())
def test_bracket_antisymmetric(f, g):
    assert SO3.bracket(f, g) == -SO3.bracket(g, f)


@given(coadjoint_polys(), coadjoint_polys(), coadjoint_polys())
def test_bracket_leibniz(f, g, h):
    assert SO3.bracket(f, g * h) == SO3.bracket(f, g) * h + g * SO3.bracket(f, h)


@given(coadjoint_polys(), coadjoint_polys())
def test_hamiltonian_map_is_homomorphism(f, g):
    lhs = hamiltonian_field(SO3, SO3.bracket(f, g))
    assert lhs == lie_bracket(hamiltonian_field(SO3, f), hamiltonian_field(SO3, g))


def test_invalid_constants_rejected():
    bad = StructureConstants.from_brackets(3, {(1, 2): {1: 1}, (2, 3): {2: 1}, (1, 3): {1: 1}})
    with pytest.raises(StructureError):
        kks_bivector(bad)


def test_foreign_hamiltonian_rejected():
    with pytest.raises(ValueError):
        hamiltonian_field(SO3, kks_bivector(catalog("sl2_semi_R2").sc).ring.gens()[0])


def test_central_elements_have_zero_fields():
    heis = StructureConstants.from_brackets(3, {(1, 2): {3: 1}})
    F = basis_fields(kks_bivector(heis))
    assert F[2].is_zero() and not F[0].is_zero() and not F[1].is_zero()
