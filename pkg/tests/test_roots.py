import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import catalog_entry
from iwasawa import catalog
from iwasawa import exact as ex
from iwasawa.algebra import InconsistencyError, Subspace, bracket
from iwasawa.roots import (
    borel_killing_relation_check,
    borel_of,
    classify,
    complex_root_decomposition,
    complexify,
    restricted_root_decomposition,
    split_torus_of_iwasawa,
    standard_cartan,
)
from strategies import diagonal_extensions


def _matrices(e, V):
    zero = ex.zeros(e.matrices[0].shape)
    return [sum((v[i] * e.matrices[i] for i in range(e.g.dim)), zero) for v in V.vectors()]


def _assert_grading(L, datum):
    spaces = dict(datum.spaces)
    spaces[tuple(Fraction(0) for _ in range(datum.torus.dim))] = datum.centralizer
    for (lam, U), (mu, V) in itertools.product(spaces.items(), repeat=2):
        target = tuple(x + y for x, y in zip(lam, mu))
        W = spaces.get(target)
        for u in U.vectors():
            for v in V.vectors():
                w = bracket(L, u, v)
                if W is None:
                    assert not w.any()
                else:
                    assert W.contains(w)


@pytest.mark.parametrize("label", catalog.CATALOG_LABELS)
def test_grading_on_catalog(label):
    e = catalog_entry(label)
    datum = restricted_root_decomposition(e.g, e.a)
    _assert_grading(e.g, datum)
    assert sum(V.dim for V in datum.spaces.values()) + datum.centralizer.dim == e.g.dim


@pytest.mark.parametrize("label", catalog.CATALOG_LABELS)
def test_restricted_roots_match_numeric_oracle(label):
    e = catalog_entry(label)
    datum = restricted_root_decomposition(e.g, e.a)
    numeric = oracles.restricted_roots_numeric([ex.to_float(M) for M in e.matrices], [ex.to_float(M) for M in _matrices(e, e.a)])
    exact = []
    for r in datum.roots:
        exact += [tuple(float(x) for x in r)] * datum.spaces[r].dim
    # the oracle's spanning set lists a twice, adding rank-many zero weights
    exact += [tuple(0.0 for _ in range(e.a.dim))] * (datum.centralizer.dim + e.a.dim)
    assert sorted(exact) == sorted(tuple(round(x, 6) + 0.0 for x in r) for r in numeric)


@given(diagonal_extensions())
def test_grading_on_generated_algebras(L):
    k = sum(1 for name in L.basis_names if name.startswith("A"))
    a = Subspace(L, np.array([L.unit(i) for i in range(k)], dtype=object).T)
    _assert_grading(L, restricted_root_decomposition(L, a))


@pytest.mark.parametrize("label", catalog.CATALOG_LABELS)
def test_split_torus_of_iwasawa_has_real_rank(label):
    e = catalog_entry(label)
    S = catalog.iwasawa_of(e)
    assert split_torus_of_iwasawa(S).dim == e.a.dim


def _split_borel(label):
    e = catalog_entry(label)
    gC = complexify(e.g)
    cartan = list(e.a.vectors())
    datum = complex_root_decomposition(gC, cartan, tuple(ex.Gaussian(1) for _ in cartan))
    return e, gC, cartan, datum


@pytest.mark.parametrize("label,oracle", [("sl(2,R)", "sl"), ("sl(3,R)", "sl"), ("sp(4,R)", "sp")])
def test_killing_relation_on_split_borels(label, oracle):
    e, gC, cartan, datum = _split_borel(label)
    rep = borel_killing_relation_check(gC, borel_of(datum), cartan)
    assert rep.holds
    r = len(cartan)
    assert all(rep.killing_b[i, j] * 2 == rep.killing_g[i, j] for i in range(r) for j in range(r))
    hs = [ex.to_float(M) for M in _matrices(e, e.a)]
    N = hs[0].shape[0]
    ref = oracles.complex_killing_sl(hs, N) if oracle == "sl" else oracles.complex_killing_sp(hs, N // 2)
    got = np.array([[complex(v).real for v in row] for row in rep.killing_g])
    assert np.allclose(got, ref)


@pytest.mark.parametrize("letter,n", [("A", 1), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)])
def test_standard_cartan_determinants(letter, n):
    det = {"A": n + 1, "B": 2, "C": 2, "D": 4, "E": 9 - n, "F": 1, "G": 1}[letter]
    A = standard_cartan(letter, n)
    assert round(np.linalg.det(np.array(A, dtype=float))) == det
    assert classify(A).type == f"{letter}{n}"


@given(st.sampled_from([("A", 3), ("B", 3), ("C", 3), ("D", 4), ("F", 4), ("G", 2), ("E", 6)]), st.randoms(use_true_random=False))
def test_classify_is_permutation_invariant(case, rnd):
    letter, n = case
    A = standard_cartan(letter, n)
    perm = list(range(n))
    rnd.shuffle(perm)
    P = [[A[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    data = classify(P)
    assert data.type == f"{letter}{n}"
    _, _, order = data.components[0]
    assert [[P[order[i]][order[j]] for j in range(n)] for i in range(n)] == A


def test_classify_products_and_rejections():
    A = [[2, -1, 0], [-1, 2, 0], [0, 0, 2]]
    assert classify(A).type == "A1xA2"
    with pytest.raises(InconsistencyError):
        classify([[2, -1], [0, 2]])
    with pytest.raises(InconsistencyError):
        classify([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
