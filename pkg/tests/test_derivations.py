from fractions import Fraction

import pytest
from hypothesis import given

import oracles
from conftest import catalog_entry
from iwasawa import catalog
from iwasawa import exact as ex
from iwasawa.algebra import UnsupportedInput, abelian, from_structure, is_nilpotent
from iwasawa.derivations import (
    centralizer_in,
    derivation_algebra,
    diagonal_derivations,
    inner_derivations,
    is_derivation,
    maximal_split_torus_in_der,
    pre_einstein_derivation,
)
from strategies import diagonal_extensions, rebased, strictly_upper


def test_heisenberg_derivations(h3):
    D = derivation_algebra(h3)
    assert D.dim == oracles.derivation_dim(oracles.float_structure(h3)) == 6
    assert D.is_closed()
    assert inner_derivations(h3).dim == 2
    assert all(is_derivation(h3, M) for M in D.basis)
    assert not is_derivation(h3, ex.matrix([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))


def test_abelian_derivations_are_gl():
    assert derivation_algebra(abelian(3)).dim == 9


@pytest.mark.parametrize("label", catalog.CATALOG_LABELS)
def test_iwasawa_derivation_dims_match_oracle(label):
    S = catalog.iwasawa_of(catalog_entry(label))
    assert derivation_algebra(S).dim == oracles.derivation_dim(oracles.float_structure(S))


@given(rebased())
def test_derivation_dim_matches_oracle_in_any_basis(case):
    L0, _, L = case
    D = derivation_algebra(L)
    assert D.dim == derivation_algebra(L0).dim
    assert D.dim == oracles.derivation_dim(oracles.float_structure(L))


@given(diagonal_extensions())
def test_inner_derivations_are_derivations(L):
    for M in inner_derivations(L).basis:
        assert is_derivation(L, M)


def test_heisenberg_torus(h3):
    T = maximal_split_torus_in_der(h3)
    assert T.certified_maximal and T.torus.dim == 2 and T.torus.is_abelian()
    assert diagonal_derivations(h3).dim == 2


def test_pre_einstein_heisenberg(h3):
    phi = pre_einstein_derivation(h3)
    third = Fraction(1, 3)
    expected = ex.zeros((3, 3))
    expected[0, 0], expected[1, 1], expected[2, 2] = 2 * third, 2 * third, 4 * third
    assert (phi == expected).all()
    for psi in derivation_algebra(h3).basis:
        assert ex.trace(phi.dot(psi)) == ex.trace(psi)


def test_pre_einstein_abelian_is_identity():
    phi = pre_einstein_derivation(abelian(3))
    assert (phi == ex.identity(3)).all()


@given(rebased())
def test_pre_einstein_trace_identity_in_any_basis(case):
    L0, _, L = case
    if not is_nilpotent(L):
        with pytest.raises(UnsupportedInput):
            pre_einstein_derivation(L)
        return
    phi = pre_einstein_derivation(L)
    assert is_derivation(L, phi)
    for psi in derivation_algebra(L).basis:
        assert ex.trace(phi.dot(psi)) == ex.trace(psi)
    # the spectrum is a basis-free invariant
    assert ex.eigenvalues(phi) == ex.eigenvalues(pre_einstein_derivation(L0))


def test_pre_einstein_filiform_spectrum():
    n = strictly_upper(4)
    phi = pre_einstein_derivation(n)
    assert ex.real_semisimple(phi)
    assert sum(ex.eigenvalues(phi).values()) == 6


def test_centralizer_in_der(h3):
    D = derivation_algebra(h3)
    T = list(diagonal_derivations(h3).basis)
    Z = centralizer_in(D, T)
    assert Z.dim == 2


def test_pre_einstein_rejects_non_nilpotent():
    r = from_structure(["A", "X"], {("A", "X"): {"X": 1}})
    with pytest.raises(UnsupportedInput):
        pre_einstein_derivation(r)
