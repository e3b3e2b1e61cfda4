from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import small_fractions
from liehamilton.lie_algebra import (CATALOG_NAMES, StructureConstants, StructureError, adjoint_matrix,
                                     all_entries, catalog, closure_constants, matmul, validate)
from liehamilton.polyfield import VectorField
from liehamilton.table1 import LABELS, canonical_fields


def _ad_is_homomorphism(sc):
    r = sc.dim
    for a in range(1, r + 1):
        for b in range(1, r + 1):
            A, B = adjoint_matrix(sc, a), adjoint_matrix(sc, b)
            AB, BA = matmul(A, B), matmul(B, A)
            comm = [[AB[i][j] - BA[i][j] for j in range(r)] for i in range(r)]
            rhs = [[sum(q * adjoint_matrix(sc, g + 1)[i][j] for g, q in enumerate(sc.c[a - 1][b - 1]))
                    for j in range(r)] for i in range(r)]
            if comm != rhs:
                return False
    return True


three_dim = st.builds(lambda p, q, s: StructureConstants.from_brackets(
    3, {(1, 2): {3: p}, (1, 3): {2: q}, (2, 3): {1: s}}), small_fractions, small_fractions, small_fractions)
upper = st.builds(lambda a, b, c, d: StructureConstants.from_brackets(
    3, {(1, 2): {1: a, 2: b}, (1, 3): {1: c, 3: d}}), small_fractions, small_fractions, small_fractions,
    small_fractions)


@given(st.one_of(three_dim, upper))
def test_jacobi_matches_adjoint_oracle(sc):
    assert validate(sc).ok == _ad_is_homomorphism(sc)


@given(three_dim, st.permutations([0, 1, 2]))
def test_permutation_preserves_validity(sc, perm):
    assert validate(sc.permuted(perm)).ok == validate(sc).ok
    assert sc.permuted(perm).permuted([perm.index(i) for i in range(3)]) == sc


@given(st.one_of(three_dim, upper))
def test_json_round_trip(sc):
    assert StructureConstants.from_json(sc.to_json()) == sc


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_is_lie_algebra(name):
    e = catalog(name)
    assert validate(e.sc).ok
    assert _ad_is_homomorphism(e.sc)


def test_catalog_has_eight_entries():
    assert len(all_entries()) == 8


def test_sl2_relations():
    assert catalog("sl2").sc.relations() == ["[e1,e2] = e1", "[e1,e3] = 2*e2", "[e2,e3] = e3"]


def test_broken_antisymmetry_reported():
    c = [[list(v) for v in row] for row in catalog("so3").sc.c]
    c[0][1][2] = -c[0][1][2]
    kinds = {v.kind for v in validate(StructureConstants.from_array(c)).violations}
    assert kinds == {"antisymmetry", "jacobi"}


def test_heisenberg_jacobi_failure_detected():
    bad = StructureConstants.from_brackets(3, {(1, 2): {1: 1}, (2, 3): {2: 1}, (1, 3): {1: 1}})
    assert _ad_is_homomorphism(bad) is False
    assert any(v.kind == "jacobi" for v in validate(bad).violations)


def test_bad_shapes_rejected():
    with pytest.raises(StructureError):
        StructureConstants.from_brackets(2, {(1, 3): {1: 1}})
    with pytest.raises(StructureError):
        StructureConstants.from_json({"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": ["1"]}]})


@pytest.mark.parametrize("label", LABELS)
def test_table_bases_close(label):
    sc = closure_constants(canonical_fields(label).fields)
    assert sc and validate(sc).ok


def test_non_closing_span_gives_certificate():
    from liehamilton.table1 import PLANE
    fields = [VectorField.parse(PLANE, ["1", "0"]), VectorField.parse(PLANE, ["x^2", "0"])]
    out = closure_constants(fields)
    assert not out and out.pair == (1, 2)


def test_closure_is_exact_rational():
    sc = catalog("sl2").sc
    assert all(isinstance(q, Fraction) for row in sc.c for v in row for q in v)
