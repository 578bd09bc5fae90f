"""Derivation algebras and the distinguished derivations of nilpotent algebras."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact as ex
from .algebra import InconsistencyError, LieAlgebra, UnsupportedInput, is_derivation_matrix, is_nilpotent


@dataclass(frozen=True, eq=False)
class DerivationSpace:
    """A matrix Lie algebra of derivations of ``ambient``.

    ``exact`` is False when the basis carries floating entries (numeric
    results that could not be rationalized).
    """

    ambient: LieAlgebra
    basis: tuple
    exact: bool = True
    notes: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def flat(self) -> np.ndarray:
        n = self.ambient.dim
        if not self.basis:
            return ex.zeros((n * n, 0))
        return ex.flatten_matrices(list(self.basis))

    def contains(self, D: np.ndarray) -> bool:
        if not self.exact:
            raise ValueError("membership is only decided for exact spaces")
        return ex.contains(self.flat(), D.reshape(-1))

    def is_closed(self) -> bool:
        return all(self.contains(ex.commutator(A, B)) for A in self.basis for B in self.basis)

    def is_abelian(self) -> bool:
        return all(ex.is_zero(ex.commutator(A, B)) for A in self.basis for B in self.basis)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            return repr(float(v))

        return {
            "ambient_hash": self.ambient.hash(),
            "exact": self.exact,
            "basis": [[[enc(v) for v in row] for row in D] for D in self.basis],
        }


def _canonical(ambient: LieAlgebra, mats: list[np.ndarray]) -> DerivationSpace:
    n = ambient.dim
    if not mats:
        return DerivationSpace(ambient, ())
    cols = ex.span_basis(ex.flatten_matrices(mats))
    return DerivationSpace(ambient, tuple(np.array(cols[:, k].reshape(n, n), dtype=object) for k in range(cols.shape[1])))


def leibniz_system(L: LieAlgebra) -> np.ndarray:
    """Coefficient matrix of the Leibniz conditions in the unknowns D[a, b] (row-major)."""
    n = L.dim
    c = L.structure
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = ex.zeros(n * n)
                # sum_l c[i,j,l] D[k,l]
                for l in range(n):
                    if c[i, j, l]:
                        row[k * n + l] += c[i, j, l]
                # - sum_l D[l,i] c[l,j,k] - sum_l D[l,j] c[i,l,k]
                for l in range(n):
                    if c[l, j, k]:
                        row[l * n + i] -= c[l, j, k]
                    if c[i, l, k]:
                        row[l * n + j] -= c[i, l, k]
                if any(row):
                    rows.append(row)
    if not rows:
        return ex.zeros((0, n * n))
    return np.array(rows, dtype=object)


def derivation_algebra(L: LieAlgebra) -> DerivationSpace:
    n = L.dim
    K = ex.nullspace(leibniz_system(L))
    D = _canonical(L, [np.array(K[:, k].reshape(n, n), dtype=object) for k in range(K.shape[1])])
    if not D.is_closed():
        raise InconsistencyError("derivation algebra is not closed under commutator")
    return D


def is_derivation(L: LieAlgebra, D) -> bool:
    D = np.asarray(D, dtype=object)
    if D.shape != (L.dim, L.dim):
        raise ValueError(f"derivation must be {L.dim}x{L.dim}")
    return is_derivation_matrix(L, D)


def inner_derivations(L: LieAlgebra) -> DerivationSpace:
    return _canonical(L, [A for A in L.ad_basis() if not ex.is_zero(A)])


def centralizer_in(space: DerivationSpace, mats: list[np.ndarray]) -> DerivationSpace:
    """Elements of ``space`` commuting with every matrix in ``mats``."""
    if not mats or space.dim == 0:
        return space
    eqs = np.concatenate(
        [ex.flatten_matrices([ex.commutator(B, T) for B in space.basis]) for T in mats], axis=0
    )
    K = ex.nullspace(eqs)
    return _canonical(space.ambient, [sum((K[k, j] * space.basis[k] for k in range(space.dim)), ex.zeros(space.basis[0].shape)) for j in range(K.shape[1])])


def diagonal_derivations(L: LieAlgebra) -> DerivationSpace:
    n = L.dim
    sys = leibniz_system(L)
    diag_cols = [k * n + k for k in range(n)]
    sub = sys[:, diag_cols] if sys.shape[0] else ex.zeros((0, n))
    K = ex.nullspace(sub)
    mats = []
    for j in range(K.shape[1]):
        D = ex.zeros((n, n))
        for k in range(n):
            D[k, k] = K[k, j]
        mats.append(D)
    return _canonical(L, mats)


@dataclass(frozen=True, eq=False)
class SplitTorus:
    torus: DerivationSpace
    certified_maximal: bool
    rounds: int


def _ad_on(space: DerivationSpace, X: np.ndarray) -> np.ndarray:
    flat = space.flat()
    cols = [ex.commutator(X, D).reshape(-1) for D in space.basis]
    out = ex.solve(flat, np.array(cols, dtype=object).T)
    if out is None:
        raise InconsistencyError("space is not closed under commutator")
    return out


def _is_nilpotent_algebra(mats: list[np.ndarray]) -> bool:
    """Lower central series of the span of ``mats`` reaches zero."""
    if not mats:
        return True
    n = mats[0].shape[0]
    current = ex.span_basis(ex.flatten_matrices(mats))
    for _ in range(len(mats) + 1):
        if current.shape[1] == 0:
            return True
        layer = [current[:, k].reshape(n, n) for k in range(current.shape[1])]
        nxt = [ex.commutator(A, B) for A in mats for B in layer]
        nxt = [M for M in nxt if not ex.is_zero(M)]
        if not nxt:
            return True
        current = ex.span_basis(ex.flatten_matrices(nxt))
    return False


def _combine(space: DerivationSpace, coeffs) -> np.ndarray:
    n = space.ambient.dim
    return sum((q * D for q, D in zip(coeffs, space.basis)), ex.zeros((n, n)))


def is_maximal_torus(der: DerivationSpace, T: DerivationSpace) -> bool:
    """T is abelian of semisimple elements, Z_Der(T) is nilpotent and its semisimple parts lie in T."""
    if not T.is_abelian():
        return False
    if any(not ex.is_zero(S - ex.semisimple_part(S)) for S in T.basis):
        return False
    Z = centralizer_in(der, list(T.basis))
    if not _is_nilpotent_algebra(list(Z.basis)):
        return False
    return all(ex.is_zero(S) or T.contains(S) for S in (ex.semisimple_part(C) for C in Z.basis))


def maximal_torus_in_der(N: LieAlgebra, seed: int = 0, attempts: int = 10) -> SplitTorus:
    """Maximal torus of Der(N): semisimple parts of a Cartan subalgebra.

    The Cartan subalgebra is the Fitting null component of ad X for a random
    integer combination X of the Der basis. The result is certified when the
    torus T satisfies Z_Der(T) = H with H nilpotent and H_s = T.
    """
    der = derivation_algebra(N)
    d = der.dim
    rng = random.Random(seed)
    best = None
    for attempt in range(1, attempts + 1):
        X = _combine(der, [Fraction(rng.randint(-9, 9)) for _ in range(d)])
        P = ex.identity(d)
        A = _ad_on(der, X)
        for _ in range(d):
            P = P.dot(A)
        K = ex.nullspace(P)
        H = [_combine(der, K[:, j]) for j in range(K.shape[1])]
        semis = [ex.semisimple_part(h) for h in H]
        T = _canonical(N, [S for S in semis if not ex.is_zero(S)])
        if best is None or T.dim > best.torus.dim:
            best = SplitTorus(T, False, attempt)
        if is_maximal_torus(der, T):
            return SplitTorus(T, True, attempt)
    return best


def maximal_split_torus_in_der(N: LieAlgebra, max_rounds: int = 10) -> SplitTorus:
    """Abelian, real-diagonalizable derivations, maximal among such.

    The diagonal derivations are grown greedily through centralizers; when
    that does not certify maximality, a maximal torus from a Cartan
    subalgebra is used if it is split.
    """
    if not is_nilpotent(N):
        raise UnsupportedInput("maximal_split_torus_in_der expects a nilpotent algebra")
    der = derivation_algebra(N)
    T = list(diagonal_derivations(N).basis)
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        Z = centralizer_in(der, T)
        if Z.dim == len(T):
            return SplitTorus(_canonical(N, T), True, rounds)
        centre = centralizer_in(Z, list(Z.basis))
        tspace = _canonical(N, T) if T else None
        added = False
        for C in centre.basis:
            if tspace is not None and tspace.contains(C):
                continue
            if ex.real_semisimple(C):
                T.append(C)
                tspace = _canonical(N, T)
                added = True
        if not added:
            break
    cartan = maximal_torus_in_der(N)
    if cartan.certified_maximal and all(ex.real_semisimple(S) for S in cartan.torus.basis):
        return cartan
    return SplitTorus(_canonical(N, T), False, rounds)


def pre_einstein_derivation(N: LieAlgebra) -> np.ndarray:
    """The derivation phi in a maximal torus with tr(phi psi) = tr(psi) for every derivation psi."""
    if not is_nilpotent(N):
        raise UnsupportedInput("pre-Einstein derivation is defined for nilpotent algebras")
    der = derivation_algebra(N)
    diag = diagonal_derivations(N)
    # the diagonal torus keeps phi diagonal in the input basis when it is maximal
    found = SplitTorus(diag, True, 0) if is_maximal_torus(der, diag) else maximal_torus_in_der(N)
    if not found.certified_maximal:
        raise InconsistencyError("could not certify a maximal torus in Der(N)")
    basis = list(found.torus.basis)
    k = len(basis)
    G = ex.zeros((k, k))
    rhs = ex.zeros(k)
    for i in range(k):
        rhs[i] = ex.trace(basis[i])
        for j in range(k):
            G[i, j] = ex.trace(basis[i].dot(basis[j]))
    if ex.rank(G) < k:
        raise InconsistencyError("singular trace-form system for the pre-Einstein derivation")
    x = ex.solve(G, rhs)
    n = N.dim
    phi = sum((x[i] * basis[i] for i in range(k)), ex.zeros((n, n)))
    for psi in der.basis:
        if ex.trace(phi.dot(psi)) != ex.trace(psi):
            raise InconsistencyError("trace identity fails on Der(N); torus was not maximal")
    if not ex.real_semisimple(phi):
        raise InconsistencyError("pre-Einstein derivation is not real semisimple")
    ex.eigenvalues(phi)  # raises unless the spectrum is rational
    return phi
