"""Ground-truth matrix realizations of classical real simple Lie algebras.

Each algebra is realized by rational real matrices (su(p,q) through the
realification A + iB -> [[A, -B], [B, A]]) in a basis where the Cartan
involution is X -> -X^T and a maximal split torus is diagonal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import exact as ex
from .algebra import LieAlgebra, Subspace, bracket, centralizer, nilradical, validate

MAX_DIM = 50

CATALOG_LABELS = ("sl(2,R)", "sl(3,R)", "su(2,1)", "su(3,1)", "so(3,1)", "so(4,1)", "sp(4,R)")


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    label: str
    g: LieAlgebra
    matrices: tuple
    iwasawa: Subspace
    a: Subspace
    n: Subspace
    m: Subspace
    k: Subspace

    @property
    def expected_satake(self):
        from .satake import expected_satake

        return expected_satake(self.label)


def _unit(N: int, i: int, j: int) -> np.ndarray:
    E = ex.zeros((N, N))
    E[i, j] = Fraction(1)
    return E


def _solve_matrix_algebra(N: int, constraints) -> list[np.ndarray]:
    """Basis of {X in gl(N) : constraints(X) = 0}, constraints linear and returning matrices."""
    cols = []
    for i, j in product(range(N), range(N)):
        cols.append(np.concatenate([c.reshape(-1) for c in constraints(_unit(N, i, j))]))
    M = np.array(cols, dtype=object).T
    K = ex.nullspace(M)
    K = ex.span_basis(K)
    return [np.array(K[:, k].reshape(N, N), dtype=object) for k in range(K.shape[1])]


def _antidiag_form(p: int, q: int) -> np.ndarray:
    """Symmetric form of signature (p, q), q <= p, pairing index i with N-1-i for i < q."""
    N = p + q
    J = ex.zeros((N, N))
    for i in range(q):
        J[i, N - 1 - i] = J[N - 1 - i, i] = Fraction(1)
    for i in range(q, N - q):
        J[i, i] = Fraction(1)
    return J


def _sl(n: int) -> list[np.ndarray]:
    return _solve_matrix_algebra(n, lambda X: [np.array([[ex.trace(X)]], dtype=object)])


def _so(p: int, q: int) -> list[np.ndarray]:
    J = _antidiag_form(p, q)
    return _solve_matrix_algebra(p + q, lambda X: [X.T.dot(J) + J.dot(X)])


def _sp(n: int) -> list[np.ndarray]:
    Om = ex.zeros((2 * n, 2 * n))
    for i in range(n):
        Om[i, n + i] = Fraction(1)
        Om[n + i, i] = Fraction(-1)
    return _solve_matrix_algebra(2 * n, lambda X: [X.T.dot(Om) + Om.dot(X)])


def _su(p: int, q: int) -> list[np.ndarray]:
    N = p + q
    J = _antidiag_form(p, q)

    def constraints(X):
        A, B = X[:N, :N], X[N:, :N]
        # the realified image is determined by (A, B); force the block shape
        shape = [X[:N, N:] + B, X[N:, N:] - A]
        herm = [A.T.dot(J) + J.dot(A), J.dot(B) - B.T.dot(J)]
        tr = [np.array([[ex.trace(A), ex.trace(B)]], dtype=object)]
        return shape + herm + tr

    return _solve_matrix_algebra(2 * N, constraints)


def _matrix_algebra(mats: list[np.ndarray], names: list[str]) -> LieAlgebra:
    d = len(mats)
    flat = ex.flatten_matrices(mats)
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    rhs = np.array([ex.commutator(mats[i], mats[j]).reshape(-1) for i, j in pairs], dtype=object).T
    coords = ex.solve(flat, rhs)
    if coords is None:
        raise RuntimeError("matrix span is not closed under commutator")
    c = ex.zeros((d, d, d))
    for col, (i, j) in enumerate(pairs):
        c[i, j, :] = coords[:, col]
        c[j, i, :] = -coords[:, col]
    return LieAlgebra(tuple(names), c)


def _nice_basis(mats: list[np.ndarray]) -> list[np.ndarray]:
    if not mats:
        return []
    N = mats[0].shape[0]
    K = ex.span_basis(ex.flatten_matrices(mats))
    return [np.array(K[:, k].reshape(N, N), dtype=object) for k in range(K.shape[1])]


def _restricted_spaces(g_mats: list[np.ndarray], a_mats: list[np.ndarray]):
    """Joint ad(a)-eigenspaces of the matrix span, as lists of matrices keyed by root."""
    from .roots import joint_eigenspaces

    d = len(g_mats)
    flat = ex.flatten_matrices(g_mats)
    ops = []
    for H in a_mats:
        cols = [ex.commutator(H, X).reshape(-1) for X in g_mats]
        ops.append(ex.solve(flat, np.array(cols, dtype=object).T))
    spaces = joint_eigenspaces(ops, d)
    out = {}
    for root, V in spaces.items():
        out[root] = [sum((V[i, k] * g_mats[i] for i in range(d)), ex.zeros(g_mats[0].shape)) for k in range(V.shape[1])]
    return out


def _lex_positive(root) -> bool:
    for v in root:
        if v:
            return v > 0
    return False


def build_from_matrices(label: str, raw: list[np.ndarray]) -> CatalogEntry:
    """Assemble a catalog entry from a rational matrix basis of a real form."""
    N = raw[0].shape[0]
    flat = ex.flatten_matrices(raw)
    D = [_unit(N, i, i) for i in range(N)]
    both = ex.intersect(flat, ex.flatten_matrices(D))
    a_mats = _nice_basis([np.array(both[:, k].reshape(N, N), dtype=object) for k in range(both.shape[1])])
    spaces = _restricted_spaces(raw, a_mats)
    zero_root = tuple(Fraction(0) for _ in a_mats)
    positive = sorted((r for r in spaces if _lex_positive(r)), reverse=True)
    negative = sorted((r for r in spaces if r != zero_root and not _lex_positive(r)), reverse=True)
    g0 = spaces.get(zero_root, [])
    # g0 = a + m; m is the skew part
    m_mats = _nice_basis([(X - X.T) * Fraction(1, 2) for X in g0 if not ex.is_zero(X - X.T)])
    n_mats, neg_mats, names_n, names_neg = [], [], [], []
    for r in positive:
        for X in _nice_basis(spaces[r]):
            n_mats.append(X)
            names_n.append(f"X{len(n_mats)}")
    for r in negative:
        for X in _nice_basis(spaces[r]):
            neg_mats.append(X)
            names_neg.append(f"Y{len(neg_mats)}")
    names_a = [f"H{i + 1}" for i in range(len(a_mats))]
    names_m = [f"M{i + 1}" for i in range(len(m_mats))]
    mats = a_mats + n_mats + m_mats + neg_mats
    if ex.rank(ex.flatten_matrices(mats)) != len(raw) or len(mats) != len(raw):
        raise RuntimeError(f"{label}: restricted root decomposition does not span g")
    if len(mats) > MAX_DIM:
        raise ValueError(f"{label}: dimension {len(mats)} exceeds the catalog bound {MAX_DIM}")
    g = _matrix_algebra(mats, names_a + names_n + names_m + names_neg)
    r, nn = len(a_mats), len(n_mats)
    cols = lambda idx: np.array([g.unit(i) for i in idx], dtype=object).T if idx else ex.zeros((g.dim, 0))
    a = Subspace(g, cols(range(r)))
    n = Subspace(g, cols(range(r, r + nn)))
    s = Subspace(g, cols(range(r + nn)))
    kvecs = []
    for X in mats:
        # k is the image of X -> X + theta(X) = X - X^T
        Y = X - X.T
        kvecs.append(ex.solve(ex.flatten_matrices(mats), Y.reshape(-1)))
    k = Subspace(g, np.array(kvecs, dtype=object).T)
    m = k.intersect(centralizer(g, a))
    return CatalogEntry(label, g, tuple(mats), s, a, n, m, k)


_LABEL = re.compile(r"^(sl|su|so|sp)\((\d+),(R|\d+)\)$")


def build_classical(family: str, *params: int) -> CatalogEntry:
    """sl(n,R) [n], su(p,q) [p, q], so(p,q) [p, q], sp(2n,R) [2n]."""
    if family == "sl":
        (n,) = params
        if n < 2 or n * n - 1 > MAX_DIM:
            raise ValueError(f"sl({n},R) out of range")
        return build_from_matrices(f"sl({n},R)", _sl(n))
    if family == "su":
        p, q = params
        if q < 1 or p < q or (p + q) ** 2 - 1 > MAX_DIM:
            raise ValueError(f"su({p},{q}) out of range")
        return build_from_matrices(f"su({p},{q})", _su(p, q))
    if family == "so":
        p, q = params
        N = p + q
        if q < 1 or p < q or N * (N - 1) // 2 > MAX_DIM or (p, q) == (1, 1):
            raise ValueError(f"so({p},{q}) out of range")
        return build_from_matrices(f"so({p},{q})", _so(p, q))
    if family == "sp":
        (n2,) = params
        if n2 % 2 or n2 < 2 or (n2 // 2) * (n2 + 1) > MAX_DIM:
            raise ValueError(f"sp({n2},R) out of range")
        return build_from_matrices(f"sp({n2},R)", _sp(n2 // 2))
    raise ValueError(f"unknown family {family!r}")


def entry(label: str) -> CatalogEntry:
    m = _LABEL.match(label.replace(" ", "").replace("ℝ", "R"))
    if not m:
        raise KeyError(f"unknown catalog label {label!r}")
    fam, a, b = m.groups()
    if b == "R":
        return build_classical(fam, int(a))
    return build_classical(fam, int(a), int(b))


def iwasawa_of(e: CatalogEntry) -> LieAlgebra:
    """The Iwasawa subalgebra as a standalone algebra in the catalog basis."""
    return e.iwasawa.as_algebra()


def hyperbolic_iwasawa(n: int) -> LieAlgebra:
    """R ⋉ R^n with R acting by the identity: the Iwasawa subalgebra of so(n+1,1)."""
    from .algebra import from_structure

    names = ["A"] + [f"X{i + 1}" for i in range(n)]
    return from_structure(names, {("A", f"X{i + 1}"): {f"X{i + 1}": 1} for i in range(n)})


# The rank-one real hyperbolic family indexed both ways: so(n+1,1) acting on
# R^{n+1,1} has Iwasawa subalgebra R ⋉ R^n; with so(n,1) it is R ⋉ R^{n-1}.
HYPERBOLIC_CONVENTIONS = {
    "standard": lambda n: f"so({n + 1},1)",
    "shifted": lambda n: f"so({n},1)",
}


@dataclass
class EntryCheck:
    ok: bool
    failures: list


def check_entry(e: CatalogEntry) -> EntryCheck:
    fails = []
    g = e.g
    if not validate(g).ok:
        fails.append("jacobi")
    if e.k.dim + e.a.dim + e.n.dim != g.dim or (e.k + e.a + e.n).dim != g.dim:
        fails.append("g = k + a + n")
    if any(bracket(g, x, y).any() for x in e.a.vectors() for y in e.a.vectors()):
        fails.append("[a,a] = 0")
    if not e.iwasawa.is_subalgebra():
        fails.append("iwasawa subalgebra")
    s = e.iwasawa.as_algebra()
    nil = nilradical(s)
    n_in_s = Subspace(s, np.array([e.iwasawa.coordinates(v) for v in e.n.vectors()], dtype=object).T)
    if not nil == n_in_s:
        fails.append("n = nilradical(s)")
    if not e.m == e.k.intersect(centralizer(g, e.a)):
        fails.append("m = Z_k(a)")
    return EntryCheck(not fails, fails)


def emit(label: str, part: str) -> LieAlgebra:
    e = entry(label)
    if part == "g":
        return e.g
    if part == "iwasawa":
        return iwasawa_of(e)
    if part == "nilradical":
        return e.n.as_algebra()
    raise ValueError(f"unknown part {part!r}")
