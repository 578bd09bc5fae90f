import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import catalog_entry, reconstruction
from iwasawa import catalog
from iwasawa import exact as ex
from iwasawa.algebra import InconsistencyError, from_structure, is_nilpotent
from iwasawa.reconstruct import (
    StageError,
    compare_iwasawa,
    extend_isomorphism_to_g0,
    find_isomorphism,
    is_homomorphism,
    iwasawa_invariants,
    reconstruct_from_iwasawa,
)
from iwasawa.satake import expected_satake
from strategies import change_basis, h3, sl2


def _signed_permutation(n, seed):
    p = list(range(n))
    random.Random(seed).shuffle(p)
    T = ex.zeros((n, n))
    for i, j in enumerate(p):
        T[j, i] = ex.frac((-1) ** (i + seed))
    return T


def _random_basis(n, seed):
    r = random.Random(seed)
    while True:
        T = ex.matrix([[r.randint(-1, 1) + (3 if i == j else 0) for j in range(n)] for i in range(n)])
        if ex.rank(T) == n:
            return T


@pytest.mark.parametrize("label", catalog.CATALOG_LABELS)
def test_catalog_reconstruction(label):
    rep = reconstruction(label)
    assert rep.label == label
    assert rep.satake == expected_satake(label)
    e = catalog_entry(label)
    assert rep.diagnostics["rank_a"] == e.a.dim
    assert rep.diagnostics["m_dim"] == e.m.dim
    assert rep.g_geq0.dim == e.a.dim + e.n.dim + e.m.dim
    # every root on the nilradical is positive in the chosen ordering
    assert set(rep.restricted.positives) == set(rep.restricted.roots)


@pytest.mark.parametrize("label", catalog.CATALOG_LABELS)
def test_killing_relation_inside_the_pipeline(label):
    rep = reconstruction(label)
    r = rep.cartan.rank
    assert rep.borel_form.shape == (r, r)
    # the Cartan matrix is built from B = 2 B_b and must come out integral
    assert all(rep.cartan.matrix[i][i] == 2 for i in range(r))


@pytest.mark.parametrize("label", catalog.CATALOG_LABELS)
def test_signed_permutations_of_the_basis(label):
    S = catalog.iwasawa_of(catalog_entry(label))
    assert reconstruct_from_iwasawa(change_basis(S, _signed_permutation(S.dim, 1))).label == label


@pytest.mark.parametrize("label", ["sl(2,R)", "sl(3,R)", "sp(4,R)"])
@pytest.mark.parametrize("seed", [0, 1])
def test_split_forms_in_random_bases(label, seed):
    S = catalog.iwasawa_of(catalog_entry(label))
    assert reconstruct_from_iwasawa(change_basis(S, _random_basis(S.dim, seed))).label == label


@pytest.mark.parametrize("n,label", [(2, "so(3,1)"), (3, "so(4,1)")])
def test_hyperbolic_inputs(n, label):
    assert reconstruct_from_iwasawa(catalog.hyperbolic_iwasawa(n)).label == label


def test_report_json_is_serializable():
    out = reconstruction("su(2,1)").to_json()
    text = json.dumps(out)
    assert out["label"] == "su(2,1)" and "timings" not in out
    assert json.loads(text)["satake"]["arrows"] == [[1, 2]]


def test_heisenberg_nilradicals_are_isomorphic_but_forms_differ():
    N1 = catalog_entry("sl(3,R)").n.as_algebra()
    N2 = catalog_entry("su(2,1)").n.as_algebra()
    w = find_isomorphism(N1, N2)
    assert w is not None and w.verified and is_homomorphism(N1, N2, w.matrix)
    assert find_isomorphism(N1, h3()).verified
    assert reconstruction("sl(3,R)").label != reconstruction("su(2,1)").label


def test_isomorphism_search_rejects_non_isomorphic():
    assert find_isomorphism(h3(), from_structure(["a", "b", "c"], {})) is None
    assert find_isomorphism(catalog.hyperbolic_iwasawa(2), catalog.hyperbolic_iwasawa(3)) is None


def test_extension_to_g_geq0():
    S = catalog.iwasawa_of(catalog_entry("so(3,1)"))
    m = reconstruction("so(3,1)").m.space
    w = extend_isomorphism_to_g0(ex.identity(S.dim), S, m, S, m)
    assert w.verified and ex.is_zero(w.matrix - ex.identity(S.dim + m.dim))


def _grading_scale(S, t):
    # scale each basis vector by t^(weight under the first basis vector)
    ad = S.ad(S.unit(0))
    assert ex.is_zero(ad - np.diag(np.diag(ad)))
    phi = ex.identity(S.dim)
    for i in range(S.dim):
        phi[i, i] = ex.frac(t) ** int(ad[i, i])
    return phi


@pytest.mark.parametrize("label", ["su(2,1)", "so(4,1)"])
def test_extension_of_a_grading_automorphism(label):
    S = catalog.iwasawa_of(catalog_entry(label))
    m = reconstruction(label).m.space
    phi = _grading_scale(S, 2)
    assert is_homomorphism(S, S, phi)
    w = extend_isomorphism_to_g0(phi, S, m, S, m)
    k = m.dim
    assert w.verified and ex.is_zero(w.matrix[k:, k:] - phi)


def test_extension_rejects_a_map_that_moves_m():
    S = catalog.iwasawa_of(catalog_entry("su(2,1)"))
    m = reconstruction("su(2,1)").m.space
    # the inner automorphism exp(ad X2) does not normalize m
    N = S.ad(S.unit(2))
    phi = ex.identity(S.dim) + N + N.dot(N) * Fraction(1, 2) + N.dot(N).dot(N) * Fraction(1, 6)
    assert is_homomorphism(S, S, phi)
    with pytest.raises(InconsistencyError):
        extend_isomorphism_to_g0(phi, S, m, S, m)


def test_compare():
    S1 = catalog.iwasawa_of(catalog_entry("su(2,1)"))
    S2 = catalog.iwasawa_of(catalog_entry("so(4,1)"))
    c = compare_iwasawa(S1, S2)
    assert c.verdict == "distinguished" and c.first_difference == "derived_series"
    same = compare_iwasawa(S1, change_basis(S1, _signed_permutation(S1.dim, 2)))
    assert same.verdict == "isomorphic-candidates"


def test_restricted_root_invariant_separates_rank_one_forms():
    inv = {lab: iwasawa_invariants(catalog.iwasawa_of(catalog_entry(lab)), with_satake=False) for lab in ("su(2,1)", "so(4,1)")}
    assert inv["su(2,1)"]["restricted_roots"] == (1, ((1, 0), (2, 1)))
    assert inv["so(4,1)"]["restricted_roots"] == (1, ((3, 0),))


def test_stage_errors():
    with pytest.raises(StageError) as err:
        reconstruct_from_iwasawa(h3())
    assert err.value.stage == "compact"
    e2 = from_structure(["T", "X", "Y"], {("T", "X"): {"Y": 1}, ("T", "Y"): {"X": -1}})
    with pytest.raises(StageError) as err:
        reconstruct_from_iwasawa(e2)
    assert err.value.stage == "validate"
    assert is_nilpotent(h3())


@given(st.sampled_from(["sl2", "h3", "r31", "hyp3"]), st.integers(0, 10**6))
def test_isomorphism_witness_under_signed_permutations(name, seed):
    L = {
        "sl2": sl2,
        "h3": h3,
        "r31": lambda: from_structure(["A", "X", "Y", "Z"], {("A", "X"): {"X": 1}, ("A", "Y"): {"Y": 1}, ("A", "Z"): {"Z": 2}, ("X", "Y"): {"Z": 1}}),
        "hyp3": lambda: catalog.hyperbolic_iwasawa(3),
    }[name]()
    M = change_basis(L, _signed_permutation(L.dim, seed))
    w = find_isomorphism(L, M)
    assert w is not None and w.verified
    assert ex.rank(w.matrix) == L.dim


def test_compare_nilradicals_attaches_a_witness():
    N1 = catalog_entry("sl(3,R)").n.as_algebra()
    N2 = catalog_entry("su(2,1)").n.as_algebra()
    c = compare_iwasawa(N1, N2)
    assert c.verdict == "isomorphic-candidates"
    assert c.witness is not None and c.witness.verified
    assert c.to_json()["note"] == "explicit isomorphism found"


def test_candidates_without_witness_say_so():
    S = catalog.iwasawa_of(catalog_entry("su(2,1)"))
    c = compare_iwasawa(S, S, witness_dim=3)
    assert c.witness is None
    assert "not a proof" in c.to_json()["note"]
