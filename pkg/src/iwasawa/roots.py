"""Restricted and complex root data, Cartan matrices and Dynkin types."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import exact as ex
from .algebra import (
    InconsistencyError,
    LieAlgebra,
    Subspace,
    UnsupportedInput,
    bracket,
    centralizer,
    nilradical,
)
from .exact import Gaussian


class NotSemisimple(UnsupportedInput):
    pass


class UnsupportedBasis(UnsupportedInput):
    def __init__(self, message: str, polynomial: str | None = None):
        super().__init__(message)
        self.polynomial = polynomial


def joint_eigenspaces(ops: list[np.ndarray], d: int, gaussian: bool = False) -> dict:
    """Simultaneous eigenspaces of commuting operators on a d-dimensional space.

    Keys are tuples of eigenvalues (one per operator); values are basis
    matrices (columns). Raises NotSemisimple when some operator is not
    diagonalizable over the field.
    """
    one = Gaussian(1) if gaussian else Fraction(1)
    start = ex.identity(d)
    if gaussian:
        start = ex.to_gaussian(start)
    spaces = {(): start}
    for op in ops:
        if gaussian:
            op = ex.to_gaussian(op)
        nxt = {}
        for key, V in spaces.items():
            W = ex.solve(V, op.dot(V))
            if W is None:
                raise InconsistencyError("eigenspace is not invariant; operators do not commute")
            try:
                vals = ex.eigenvalues(W, gaussian=gaussian)
            except ex.IrrationalSpectrum as e:
                raise UnsupportedBasis(str(e), e.polynomial) from None
            total = 0
            for lam in sorted(vals, key=_sort_key):
                K = ex.nullspace(W - lam * _eye_like(W.shape[0], one))
                total += K.shape[1]
                nxt[key + (lam,)] = V.dot(K)
            if total != V.shape[1]:
                raise NotSemisimple("operator is not diagonalizable")
        spaces = nxt
    return spaces


def _eye_like(n, one):
    E = ex.zeros((n, n), one - one)
    for i in range(n):
        E[i, i] = one
    return E


def _sort_key(v):
    if isinstance(v, Gaussian):
        return (v.re, v.im)
    return (v, Fraction(0))


def lex_positive(values) -> bool:
    for v in values:
        if v:
            return v > 0
    return False


# restricted roots


@dataclass(frozen=True, eq=False)
class RestrictedRootDatum:
    torus: Subspace
    roots: list
    spaces: dict
    positives: list
    centralizer: Subspace

    def multiplicities(self) -> dict:
        return {r: self.spaces[r].dim for r in self.roots}

    def root_multiset(self) -> list:
        return sorted((tuple(r), self.spaces[r].dim) for r in self.roots)

    def to_json(self) -> dict:
        enc = lambda q: str(q)
        return {
            "torus": [[enc(v) for v in col] for col in self.torus.basis.T],
            "roots": [
                {
                    "functional": [enc(v) for v in r],
                    "positive": r in self.positives,
                    "space": [[enc(v) for v in col] for col in self.spaces[r].basis.T],
                }
                for r in self.roots
            ],
            "centralizer_dim": self.centralizer.dim,
        }


def restricted_root_decomposition(L: LieAlgebra, a: Subspace, basis: list | None = None) -> RestrictedRootDatum:
    """Joint eigenspaces of ad(a); roots are coordinates on ``basis`` (default: the canonical basis of a)."""
    basis = list(a.vectors()) if basis is None else list(basis)
    for x in basis:
        for y in basis:
            if bracket(L, x, y).any():
                raise UnsupportedInput("torus is not abelian")
    ops = [L.ad(H) for H in basis]
    spaces = joint_eigenspaces(ops, L.dim)
    zero = tuple(Fraction(0) for _ in ops)
    sub = {k: Subspace(L, V) for k, V in spaces.items()}
    cent = sub.pop(zero, L.zero())
    roots = sorted(sub, reverse=True)
    positives = [r for r in roots if lex_positive(r)]
    return RestrictedRootDatum(a, roots, sub, positives, cent)


def split_torus_of_iwasawa(S: LieAlgebra, within: Subspace | None = None, seed: int = 0, attempts: int = 20) -> Subspace:
    """Abelian complement to the nilradical acting by rational real semisimple derivations.

    Taken as the Fitting null component of ad x for a generic x; picking x
    inside ``within`` keeps the result inside that subalgebra.
    """
    N = nilradical(S)
    rank = S.dim - N.dim
    pool = within.vectors() if within is not None else [S.unit(i) for i in range(S.dim)]
    rng = random.Random(seed)
    last_error: Exception | None = None
    for _ in range(attempts):
        x = sum((Fraction(rng.randint(1, 9)) * v for v in pool), ex.zeros(S.dim))
        P = L_pow(S.ad(x), S.dim)
        T = Subspace(S, ex.nullspace(P))
        if T.dim != rank or T.intersect(N).dim != 0:
            continue
        if any(bracket(S, u, v).any() for u in T.vectors() for v in T.vectors()):
            continue
        try:
            joint_eigenspaces([S.ad(h) for h in T.vectors()], S.dim)
        except UnsupportedBasis as e:
            last_error = e
            continue
        except NotSemisimple:
            continue
        return T
    if last_error is not None:
        raise last_error
    raise UnsupportedInput("no split torus found: input is not of Iwasawa type")


def positive_torus_basis(S: LieAlgebra, a: Subspace) -> list:
    """Basis of a led by H0 with B_S(H0, h) = tr(ad h).

    B_S(h, h') = sum of m_alpha alpha(h) alpha(h') over the roots on the
    nilradical, so H0 is dual to their sum and every one of them is positive
    on it; the lexicographic order on this basis then makes them all positive.
    """
    vs = list(a.vectors())
    r = len(vs)
    ads = [S.ad(v) for v in vs]
    B = ex.zeros((r, r))
    rhs = ex.zeros(r)
    for i in range(r):
        rhs[i] = ex.trace(ads[i])
        for j in range(r):
            B[i, j] = ex.trace(ads[i].dot(ads[j]))
    x = ex.solve(B, rhs) if ex.rank(B) == r else None
    if x is None:
        raise InconsistencyError("trace form of S is degenerate on the split torus")
    H0 = sum((x[i] * vs[i] for i in range(r)), ex.zeros(S.dim))
    ev = ex.eigenvalues(S.ad(H0))
    if any(v < 0 for v in ev):
        raise InconsistencyError("some root on the nilradical is negative on H0")
    out = [H0]
    for v in vs:
        if len(out) == r:
            break
        if ex.rank(np.array(out + [v], dtype=object).T) > len(out):
            out.append(v)
    return out


def L_pow(A: np.ndarray, k: int) -> np.ndarray:
    out = ex.identity(A.shape[0])
    for _ in range(k):
        out = out.dot(A)
    return out


# complexification


@dataclass(frozen=True, eq=False)
class ComplexAlgebra:
    """Structure constants over the Gaussian rationals; ``real_form`` records the conjugation."""

    basis_names: tuple
    structure: np.ndarray
    real_form: LieAlgebra | None = None

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def ad(self, x: np.ndarray) -> np.ndarray:
        return np.tensordot(x, self.structure, axes=(0, 0)).T

    def bracket(self, x, y) -> np.ndarray:
        return np.tensordot(np.tensordot(x, self.structure, axes=(0, 0)), y, axes=(0, 0))

    def sigma(self, x: np.ndarray) -> np.ndarray:
        """Conjugation fixing the real form (entrywise in the real basis)."""
        return np.array([Gaussian.lift(v).conjugate() for v in x], dtype=object)

    def is_valid(self) -> bool:
        n = self.dim
        c = self.structure
        if any(c[i, j, k] != -c[j, i, k] for i in range(n) for j in range(n) for k in range(n)):
            return False
        ads = [np.array(c[i].T, dtype=object) for i in range(n)]
        return all(ex.is_zero(self.ad(c[i, j]) - ex.commutator(ads[i], ads[j])) for i in range(n) for j in range(i + 1, n))


def complexify(L: LieAlgebra) -> ComplexAlgebra:
    return ComplexAlgebra(L.basis_names, ex.to_gaussian(L.structure), L)


# Cartan subalgebra t + a


def maximal_abelian(L: LieAlgebra, m: Subspace) -> Subspace:
    """Maximal abelian subalgebra of m, grown from its basis one centralizer step at a time."""
    if m.dim == 0:
        return m
    t = Subspace(L, m.basis[:, :1])
    while True:
        z = centralizer(L, t).intersect(m)
        if z.dim == t.dim:
            return t
        extra = next(v for v in z.vectors() if not t.contains(v))
        t = t + Subspace(L, extra.reshape(-1, 1))


def cartan_subalgebra(g_geq0: LieAlgebra, m: Subspace, a: Subspace) -> tuple[Subspace, Subspace]:
    """Return (t, t + a) where t is a maximal torus of m."""
    t = maximal_abelian(g_geq0, m)
    h = t + a
    if any(bracket(g_geq0, x, y).any() for x in h.vectors() for y in h.vectors()):
        raise InconsistencyError("t + a is not abelian")
    return t, h


# complex roots


@dataclass(frozen=True, eq=False)
class ComplexRootDatum:
    """Roots of a Cartan subalgebra acting on a complex algebra.

    Roots are tuples of Gaussian values on the Cartan basis; ``realify``
    holds the unit u_k with u_k * alpha(h_k) real, used by the ordering.
    """

    cartan: list
    realify: tuple
    roots: list
    vectors: dict
    positives: list
    simple: list
    zero_space: np.ndarray

    def real_coords(self, root) -> tuple:
        return tuple((u * v).re for u, v in zip(self.realify, root))


class DegenerateOrdering(InconsistencyError):
    def __init__(self, root):
        super().__init__(f"ordering vanishes on root {root}")
        self.root = root


def complex_root_decomposition(gC: ComplexAlgebra, cartan: list, realify: tuple) -> ComplexRootDatum:
    """Root decomposition of ``gC`` under the span of ``cartan``.

    ``realify`` gives, per Cartan basis vector, the unit turning its
    eigenvalues real (1 on the split part, -i on the compact part). The
    ordering is lexicographic in these real coordinates, Cartan basis order.
    """
    ops = [gC.ad(h) for h in cartan]
    spaces = joint_eigenspaces(ops, gC.dim, gaussian=True)
    zero = tuple(Gaussian(0) for _ in cartan)
    zero_space = spaces.pop(zero, ex.zeros((gC.dim, 0), Gaussian(0)))
    roots, vectors, positives = [], {}, []
    for r, V in spaces.items():
        if V.shape[1] != 1:
            raise InconsistencyError(f"root space for {r} has dimension {V.shape[1]}")
        real = tuple(u * v for u, v in zip(realify, r))
        if any(not x.is_real() for x in real):
            raise UnsupportedInput(f"root {r} is not real on the ordering basis")
        coords = tuple(x.re for x in real)
        if not any(coords):
            raise DegenerateOrdering(r)
        roots.append(r)
        vectors[r] = V[:, 0]
        if lex_positive(coords):
            positives.append(r)
    key = lambda r: tuple((u * v).re for u, v in zip(realify, r))
    roots.sort(key=key, reverse=True)
    positives.sort(key=key, reverse=True)
    sums = {tuple(x + y for x, y in zip(p, q)) for p, q in combinations(positives, 2)}
    simple = [r for r in positives if r not in sums]
    return ComplexRootDatum(list(cartan), tuple(realify), roots, vectors, positives, simple, zero_space)


# Killing forms on the Cartan


def restricted_trace_form(gC: ComplexAlgebra, space: np.ndarray, cartan: list) -> np.ndarray:
    """tr(ad h ad h') over an ad(h)-invariant subspace given by basis columns."""
    mats = []
    for h in cartan:
        W = ex.solve(space, gC.ad(h).dot(space))
        if W is None:
            raise InconsistencyError("subspace is not invariant under the Cartan")
        mats.append(W)
    k = len(cartan)
    B = ex.zeros((k, k), Gaussian(0))
    for i in range(k):
        for j in range(k):
            B[i, j] = ex.trace(mats[i].dot(mats[j])) + Gaussian(0)
    return B


def borel_of(datum: ComplexRootDatum) -> np.ndarray:
    cols = [ex.to_gaussian(np.asarray(h, dtype=object)) for h in datum.cartan]
    cols += [datum.vectors[r] for r in datum.positives]
    return np.array(cols, dtype=object).T


@dataclass
class KillingRelationReport:
    holds: bool
    killing_g: np.ndarray
    killing_b: np.ndarray
    offending: list = field(default_factory=list)


def borel_killing_relation_check(gC: ComplexAlgebra, b: np.ndarray, cartan: list) -> KillingRelationReport:
    """Check B_b = (1/2) B_g on the Cartan, exactly."""
    Bg = restricted_trace_form(gC, ex.to_gaussian(ex.identity(gC.dim)), cartan)
    Bb = restricted_trace_form(gC, b, cartan)
    bad = [(i, j) for i in range(len(cartan)) for j in range(len(cartan)) if Bb[i, j] * 2 != Bg[i, j]]
    return KillingRelationReport(not bad, Bg, Bb, bad)


# Cartan matrices and Dynkin types


def _root_pairing(B: np.ndarray):
    Binv = ex.inverse(B)

    def pair(x, y):
        xv = np.array([Gaussian.lift(v) for v in x], dtype=object)
        yv = np.array([Gaussian.lift(v) for v in y], dtype=object)
        return xv.dot(Binv).dot(yv)

    return pair


@dataclass(frozen=True, eq=False)
class CartanMatrixData:
    matrix: tuple
    type: str
    components: tuple  # (type_letter, rank, node indices in Bourbaki order)

    @property
    def rank(self) -> int:
        return len(self.matrix)


def cartan_matrix(simple: list, B: np.ndarray) -> CartanMatrixData:
    pair = _root_pairing(B)
    r = len(simple)
    A = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            q = pair(simple[i], simple[j]) * 2 / pair(simple[j], simple[j])
            if not q.is_real() or q.re.denominator != 1:
                raise InconsistencyError(f"non-integer Cartan entry {q} at ({i},{j})")
            A[i][j] = int(q.re)
    return classify(A)


def _std_roots(letter: str, n: int) -> list[list[Fraction]]:
    F = Fraction
    e = lambda dim, i: [F(int(k == i)) for k in range(dim)]
    sub = lambda x, y: [a - b for a, b in zip(x, y)]
    add = lambda x, y: [a + b for a, b in zip(x, y)]
    if letter == "A":
        return [sub(e(n + 1, i), e(n + 1, i + 1)) for i in range(n)]
    if letter in "BCD":
        base = [sub(e(n, i), e(n, i + 1)) for i in range(n - 1)]
        last = {"B": e(n, n - 1), "C": [2 * v for v in e(n, n - 1)], "D": add(e(n, n - 2), e(n, n - 1))}[letter]
        return base + [last]
    if letter == "E":
        half = F(1, 2)
        a1 = [half, -half, -half, -half, -half, -half, -half, half]
        rest = [add(e(8, 0), e(8, 1)), sub(e(8, 1), e(8, 0))] + [sub(e(8, i + 1), e(8, i)) for i in range(1, 6)]
        return ([a1] + rest)[:n]
    if letter == "F":
        half = F(1, 2)
        return [sub(e(4, 1), e(4, 2)), sub(e(4, 2), e(4, 3)), e(4, 3), [half, -half, -half, -half]]
    if letter == "G":
        return [[F(1), F(-1), F(0)], [F(-2), F(1), F(1)]]
    raise ValueError(letter)


def standard_cartan(letter: str, n: int) -> list[list[int]]:
    roots = _std_roots(letter, n)
    dot = lambda x, y: sum(a * b for a, b in zip(x, y))
    return [[int(2 * dot(x, y) / dot(y, y)) for y in roots] for x in roots]


def _candidates(r: int) -> list[tuple[str, int]]:
    out = [("A", r)]
    if r >= 2:
        out.append(("B", r))
    if r >= 3:
        out.append(("C", r))
    if r >= 4:
        out.append(("D", r))
    if r in (6, 7, 8):
        out.append(("E", r))
    if r == 4:
        out.append(("F", 4))
    if r == 2:
        out.append(("G", 2))
    return out


def _match(A, nodes, std) -> list[int] | None:
    """Ordering of ``nodes`` so that A restricted to it equals std, by backtracking."""
    r = len(nodes)
    order: list[int] = []

    def ok(pos, node):
        for q, other in enumerate(order):
            if A[node][other] != std[pos][q] or A[other][node] != std[q][pos]:
                return False
        return True

    def rec(pos):
        if pos == r:
            return True
        for node in nodes:
            if node in order:
                continue
            if ok(pos, node):
                order.append(node)
                if rec(pos + 1):
                    return True
                order.pop()
        return False

    return list(order) if rec(0) else None


def _components(A) -> list[list[int]]:
    r = len(A)
    seen, comps = set(), []
    for s in range(r):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in range(r):
                if v not in seen and A[u][v] != 0 and u != v:
                    seen.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def classify(A) -> CartanMatrixData:
    r = len(A)
    for i in range(r):
        if A[i][i] != 2:
            raise InconsistencyError("Cartan diagonal must be 2")
        for j in range(r):
            if i != j and (A[i][j] > 0 or (A[i][j] == 0) != (A[j][i] == 0)):
                raise InconsistencyError("invalid Cartan matrix off-diagonal pattern")
    comps = []
    for comp in _components(A):
        for letter, rank in _candidates(len(comp)):
            order = _match(A, comp, standard_cartan(letter, rank))
            if order is not None:
                comps.append((letter, rank, tuple(order)))
                break
        else:
            raise InconsistencyError(f"unclassifiable Dynkin component on nodes {comp}")
    comps.sort(key=lambda c: (c[0], c[1], c[2]))
    label = "x".join(f"{l}{n}" for l, n, _ in comps)
    return CartanMatrixData(tuple(tuple(row) for row in A), label, tuple(comps))
