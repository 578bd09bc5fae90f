"""Hypothesis strategies producing exact Lie algebras."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from iwasawa import exact as ex
from iwasawa.algebra import LieAlgebra, from_structure


def change_basis(L: LieAlgebra, T: np.ndarray) -> LieAlgebra:
    """Structure constants in the basis f_a = sum_i T[i, a] e_i."""
    n = L.dim
    Tinv = ex.inverse(T)
    c = ex.zeros((n, n, n))
    for a in range(n):
        for b in range(a + 1, n):
            v = L.bracket(T[:, a], T[:, b])
            w = Tinv.dot(v)
            c[a, b] = w
            c[b, a] = -w
    return LieAlgebra(tuple(f"f{i + 1}" for i in range(n)), c)


@st.composite
def invertible(draw, n: int, lo: int = -2, hi: int = 2):
    while True:
        entries = draw(st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n))
        T = ex.matrix(entries)
        if ex.rank(T) == n:
            return T
        # nudge towards invertibility
        for i in range(n):
            T[i, i] += 3
        if ex.rank(T) == n:
            return T


@st.composite
def diagonal_extensions(draw, max_k: int = 2, max_n: int = 3):
    """R^k acting on R^n through commuting diagonal matrices with small integer entries."""
    k = draw(st.integers(1, max_k))
    n = draw(st.integers(1, max_n))
    weights = draw(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=k, max_size=k))
    names = [f"A{i + 1}" for i in range(k)] + [f"X{j + 1}" for j in range(n)]
    brackets = {}
    for i, w in enumerate(weights):
        for j, v in enumerate(w):
            if v:
                brackets[(f"A{i + 1}", f"X{j + 1}")] = {f"X{j + 1}": v}
    return from_structure(names, brackets)


def strictly_upper(N: int) -> LieAlgebra:
    """Strictly upper triangular N x N matrices, basis E_ij (i < j)."""
    idx = [(i, j) for i in range(N) for j in range(i + 1, N)]
    names = [f"E{i + 1}{j + 1}" for i, j in idx]
    br = {}
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            if a < b:
                out = {}
                if j == k:
                    out[f"E{i + 1}{l + 1}"] = 1
                if l == i:
                    out[f"E{k + 1}{j + 1}"] = out.get(f"E{k + 1}{j + 1}", 0) - 1
                if out:
                    br[(names[a], names[b])] = out
    return from_structure(names, br)


def sl2() -> LieAlgebra:
    return from_structure(["H", "E", "F"], {("H", "E"): {"E": 2}, ("H", "F"): {"F": -2}, ("E", "F"): {"H": 1}})


def h3() -> LieAlgebra:
    return from_structure(["X", "Y", "Z"], {("X", "Y"): {"Z": 1}})


base_algebras = st.sampled_from(["sl2", "h3", "n4", "r31"]).map(
    lambda k: {
        "sl2": sl2,
        "h3": h3,
        "n4": lambda: strictly_upper(4),
        "r31": lambda: from_structure(["A", "X", "Y", "Z"], {("A", "X"): {"X": 1}, ("A", "Y"): {"Y": 1}, ("A", "Z"): {"Z": 2}, ("X", "Y"): {"Z": 1}}),
    }[k]()
)


@st.composite
def rebased(draw, algebras=base_algebras):
    L = draw(algebras)
    T = draw(invertible(L.dim))
    return L, T, change_basis(L, T)


def frac_vectors(n: int):
    return st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=n, max_size=n).map(
        lambda xs: np.array([Fraction(x) for x in xs], dtype=object)
    )
