import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from iwasawa import exact as ex
from iwasawa.algebra import (
    FormatError,
    Subspace,
    UnsupportedInput,
    abelian,
    bracket,
    center,
    centralizer,
    derived_series,
    dumps,
    from_raw_table,
    from_structure,
    is_completely_solvable,
    is_nilpotent,
    is_solvable,
    killing_form,
    loads,
    lower_central_series,
    nilradical,
    normalizer,
    semidirect_product,
    validate,
)
from strategies import diagonal_extensions, frac_vectors, rebased, strictly_upper


def test_sl2_killing_form_matches_matrix_oracle(sl2):
    H = [[1, 0], [0, -1]]
    E = [[0, 1], [0, 0]]
    F = [[0, 0], [1, 0]]
    expected = oracles.killing_from_structure(oracles.matrix_span_structure([H, E, F]))
    B = killing_form(sl2).matrix
    assert np.allclose(ex.to_float(B), expected)
    # frozen from the oracle: B(H,H) = 8, B(E,F) = 4
    assert B[0, 0] == 8 and B[1, 2] == 4 and B[0, 1] == 0
    assert killing_form(sl2).signature() == (2, 1, 0)


def test_heisenberg_series(h3):
    assert [s.dim for s in derived_series(h3)] == [3, 1, 0]
    assert [s.dim for s in lower_central_series(h3)] == [3, 1, 0]
    assert is_nilpotent(h3) and is_solvable(h3)
    assert center(h3).dim == 1
    assert nilradical(h3).dim == 3
    assert killing_form(h3).is_zero()


def test_sl2_is_not_solvable(sl2):
    assert not is_solvable(sl2)
    with pytest.raises(UnsupportedInput):
        nilradical(sl2)


def test_completely_solvable_detection():
    r = from_structure(["A", "X"], {("A", "X"): {"X": 1}})
    assert is_completely_solvable(r)
    # e(2): rotations acting on the plane are solvable but not completely solvable
    e2 = from_structure(["T", "X", "Y"], {("T", "X"): {"Y": 1}, ("T", "Y"): {"X": -1}})
    assert is_solvable(e2) and not is_completely_solvable(e2)


def test_nilradical_certificate():
    r = from_structure(["A", "X", "Y"], {("A", "X"): {"X": 1}, ("A", "Y"): {"Y": 2}})
    N, cert = nilradical(r, with_certificate=True)
    assert N.dim == 2 and cert.is_ideal and cert.nilpotent and cert.quotient_dim == 1
    assert not N.contains(r.unit(0))


def test_centralizer_and_normalizer(h3):
    Z = Subspace(h3, h3.unit(2).reshape(-1, 1))
    assert centralizer(h3, Z).dim == 3
    X = Subspace(h3, h3.unit(0).reshape(-1, 1))
    assert centralizer(h3, X) == Subspace(h3, np.array([h3.unit(0), h3.unit(2)], dtype=object).T)
    assert normalizer(h3, X).dim == 2


def test_validate_reports_violations():
    bad = from_raw_table(["a", "b"], [[[0, 0], [0, 1]], [[0, 0], [0, 0]]])
    rep = validate(bad)
    assert not rep.ok and rep.antisymmetry == [(0, 1, 1)]
    # antisymmetric but not Jacobi: [a,b]=c, [b,c]=a, [c,a]=a
    jac = from_structure(["a", "b", "c"], {("a", "b"): {"c": 1}, ("b", "c"): {"a": 1}, ("c", "a"): {"a": 1}})
    rep = validate(jac)
    assert not rep.ok and rep.jacobi and not rep.antisymmetry


def test_json_format_errors():
    with pytest.raises(FormatError):
        loads('{"dim": 2, "basis": ["a"]}')
    with pytest.raises(FormatError):
        loads('{"dim": 2, "basis": ["a", "b"], "brackets": [{"left": "a", "right": "b", "result": {"a": 1.5}}]}')
    dup = {"dim": 2, "basis": ["a", "b"], "brackets": [{"left": "a", "right": "b", "result": {"a": 1}}] * 2}
    with pytest.raises(FormatError):
        loads(json.dumps(dup))
    with pytest.raises(FormatError):
        loads('{"dim": 2, "basis": ["a", "b"], "structure": [[[0, 0]]]}')
    with pytest.raises(FormatError):
        loads("not json")


def test_rational_strings_are_accepted():
    L = loads('{"dim": 2, "basis": ["a", "b"], "brackets": [{"left": "a", "right": "b", "result": {"b": "3/2"}}]}')
    assert L.structure[0, 1, 1] == Fraction(3, 2)


@given(rebased())
def test_rebased_algebras_satisfy_jacobi(case):
    _, _, L = case
    assert validate(L).ok


@given(diagonal_extensions())
def test_generated_extensions_are_completely_solvable(L):
    assert validate(L).ok
    assert is_completely_solvable(L)


@given(rebased())
def test_json_round_trip(case):
    _, _, L = case
    M = loads(dumps(L))
    assert M.basis_names == L.basis_names
    assert (M.structure == L.structure).all()
    assert M.hash() == L.hash()


@given(rebased(), st.data())
def test_killing_form_is_ad_invariant(case, data):
    _, _, L = case
    B = killing_form(L)
    x, y, z = (data.draw(frac_vectors(L.dim)) for _ in range(3))
    assert B(bracket(L, x, y), z) == B(x, bracket(L, y, z))


@given(rebased())
def test_killing_signature_is_basis_invariant(case):
    L0, _, L = case
    assert killing_form(L0).signature() == killing_form(L).signature()


@given(rebased())
def test_series_dimensions_are_basis_invariant(case):
    L0, _, L = case
    assert [s.dim for s in derived_series(L0)] == [s.dim for s in derived_series(L)]
    assert [s.dim for s in lower_central_series(L0)] == [s.dim for s in lower_central_series(L)]


def test_semidirect_product_rebuilds_split_iwasawa(sl2):
    # R ⋉ R with the action of H/2 on E: the Iwasawa subalgebra of sl(2,R)
    L = abelian(1, "E")
    D = ex.matrix([[2]])
    S = semidirect_product([D], L, names=["H"])
    assert validate(S).ok
    assert S.structure[0, 1, 1] == 2
    with pytest.raises(ValueError):
        semidirect_product([ex.matrix([[1, 0], [0, 1]])], from_structure(["x", "y"], {("x", "y"): {"x": 1}}))


def test_strictly_upper_triangular_is_nilpotent():
    n = strictly_upper(4)
    assert validate(n).ok
    assert [s.dim for s in lower_central_series(n)] == [6, 3, 1, 0]
    assert [s.dim for s in derived_series(n)] == [6, 3, 0]


def test_subspace_canonical_equality(h3):
    A = Subspace(h3, ex.matrix([[1, 1], [0, 1], [0, 0]]))
    B = Subspace(h3, ex.matrix([[2, 0], [1, 3], [0, 0]]))
    assert A == B
    assert (A.basis == B.basis).all()
    assert not A.is_subalgebra()
    XZ = Subspace(h3, ex.matrix([[1, 0], [0, 0], [0, 1]]))
    assert XZ.is_subalgebra() and XZ.is_ideal()
