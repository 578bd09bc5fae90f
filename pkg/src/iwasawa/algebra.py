"""Finite-dimensional real Lie algebras given by exact structure constants."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from . import exact as ex


class FormatError(ValueError):
    """Malformed structure-constant data."""


class UnsupportedInput(ValueError):
    """Input lies outside what an algorithm is guaranteed to handle."""


class InconsistencyError(RuntimeError):
    """An internal consistency check failed."""


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure constants ``c[i, j, k]`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``."""

    basis_names: tuple[str, ...]
    structure: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad x acting on column vectors."""
        # (ad x)[k, j] = sum_i x_i c[i, j, k]
        return np.tensordot(x, self.structure, axes=(0, 0)).T

    def ad_basis(self) -> list[np.ndarray]:
        return [np.array(self.structure[i].T, dtype=object) for i in range(self.dim)]

    def bracket(self, x, y) -> np.ndarray:
        return bracket(self, x, y)

    def unit(self, i: int) -> np.ndarray:
        v = ex.zeros(self.dim)
        v[i] = Fraction(1)
        return v

    def index(self, name: str) -> int:
        return self.basis_names.index(name)

    def vector(self, coeffs: dict) -> np.ndarray:
        v = ex.zeros(self.dim)
        for k, c in coeffs.items():
            v[self.index(k)] += ex.frac(c)
        return v

    def whole(self) -> "Subspace":
        return Subspace(self, ex.identity(self.dim))

    def zero(self) -> "Subspace":
        return Subspace(self, ex.zeros((self.dim, 0)))

    def hash(self) -> str:
        return hashlib.sha256(dumps(self).encode()).hexdigest()[:16]

    def scaled(self, t) -> "LieAlgebra":
        return LieAlgebra(self.basis_names, self.structure * ex.frac(t))

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, basis={list(self.basis_names)})"


@dataclass(frozen=True, eq=False)
class Subspace:
    """Column span of ``basis`` inside ``ambient``, stored in canonical echelon form."""

    ambient: LieAlgebra
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "basis", ex.span_basis(np.asarray(self.basis, dtype=object)))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def vectors(self) -> list[np.ndarray]:
        return [self.basis[:, k] for k in range(self.dim)]

    def contains(self, v) -> bool:
        return ex.contains(self.basis, np.asarray(v, dtype=object))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.contains_space(other)

    __hash__ = None

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, np.concatenate([self.basis, other.basis], axis=1))

    def intersect(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, ex.intersect(self.basis, other.basis))

    def is_subalgebra(self) -> bool:
        vs = self.vectors()
        return all(self.contains(bracket(self.ambient, x, y)) for x, y in product(vs, vs))

    def is_ideal(self) -> bool:
        vs = self.vectors()
        return all(
            self.contains(bracket(self.ambient, self.ambient.unit(i), y))
            for i in range(self.ambient.dim)
            for y in vs
        )

    def coordinates(self, v) -> np.ndarray:
        c = ex.solve(self.basis, np.asarray(v, dtype=object))
        if c is None:
            raise ValueError("vector not in subspace")
        return c

    def complement_basis(self) -> np.ndarray:
        """Standard unit vectors completing this subspace to the ambient space."""
        n = self.ambient.dim
        cols = []
        current = self.basis
        for i in range(n):
            e = self.ambient.unit(i)
            if not ex.contains(current, e):
                cols.append(e)
                current = np.concatenate([current, e.reshape(-1, 1)], axis=1)
        return np.array(cols, dtype=object).T if cols else ex.zeros((n, 0))

    def as_algebra(self, prefix: str | None = None) -> LieAlgebra:
        """The subalgebra as a standalone LieAlgebra in this basis."""
        if not self.is_subalgebra():
            raise ValueError("subspace is not a subalgebra")
        vs = self.vectors()
        d = len(vs)
        c = ex.zeros((d, d, d))
        for i in range(d):
            for j in range(i + 1, d):
                coords = self.coordinates(bracket(self.ambient, vs[i], vs[j]))
                c[i, j, :] = coords
                c[j, i, :] = -coords
        names = tuple(f"{prefix}{k}" for k in range(d)) if prefix else _names_for(self)
        return LieAlgebra(names, c)


def _names_for(S: Subspace) -> tuple[str, ...]:
    out = []
    for v in S.vectors():
        nz = [i for i, x in enumerate(v) if x]
        if len(nz) == 1 and v[nz[0]] == 1:
            out.append(S.ambient.basis_names[nz[0]])
        else:
            out.append(f"v{len(out)}")
    if len(set(out)) != len(out):
        out = [f"v{k}" for k in range(len(out))]
    return tuple(out)


@dataclass(frozen=True, eq=False)
class SymmetricForm:
    matrix: np.ndarray

    def __call__(self, x, y):
        return np.asarray(x, dtype=object).dot(self.matrix).dot(np.asarray(y, dtype=object))

    def is_zero(self) -> bool:
        return ex.is_zero(self.matrix)

    def signature(self) -> tuple[int, int, int]:
        return ex.inertia(self.matrix)


@dataclass
class ValidationReport:
    ok: bool
    antisymmetry: list[tuple[int, int, int]] = field(default_factory=list)
    jacobi: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def violations(self) -> list[tuple[int, int, int]]:
        return self.antisymmetry + self.jacobi


def from_structure(names: Sequence[str], brackets: dict) -> LieAlgebra:
    """Build from ``{(a, b): {c: coeff}}`` using names; antisymmetric completion implied."""
    names = tuple(names)
    n = len(names)
    c = ex.zeros((n, n, n))
    idx = {s: i for i, s in enumerate(names)}
    for (a, b), res in brackets.items():
        i, j = idx[a], idx[b]
        for k, v in res.items():
            val = ex.frac(v)
            c[i, j, idx[k]] += val
            c[j, i, idx[k]] -= val
    return LieAlgebra(names, c)


def abelian(n: int, prefix: str = "e") -> LieAlgebra:
    return LieAlgebra(tuple(f"{prefix}{i + 1}" for i in range(n)), ex.zeros((n, n, n)))


def validate(L: LieAlgebra) -> ValidationReport:
    c = L.structure
    n = L.dim
    if not isinstance(c, np.ndarray) or c.shape != (n, n, n):
        raise FormatError(f"structure table must have shape {(n, n, n)}")
    for v in c.flat:
        if not isinstance(v, (int, Fraction)) or isinstance(v, bool):
            raise FormatError(f"non-rational structure constant {v!r}")
    anti = [(i, j, k) for i in range(n) for j in range(i, n) for k in range(n) if c[i, j, k] != -c[j, i, k]]
    jac = []
    ads = L.ad_basis()
    for i in range(n):
        for j in range(i + 1, n):
            # ad [e_i, e_j] = [ad e_i, ad e_j] is the Jacobi identity
            lhs = L.ad(c[i, j])
            rhs = ex.commutator(ads[i], ads[j])
            if not ex.is_zero(lhs - rhs):
                diff = lhs - rhs
                for k in range(n):
                    if not ex.is_zero(diff[:, k]):
                        jac.append((i, j, k))
    return ValidationReport(ok=not anti and not jac, antisymmetry=anti, jacobi=jac)


def bracket(L: LieAlgebra, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=object)
    y = np.asarray(y, dtype=object)
    if x.shape != (L.dim,) or y.shape != (L.dim,):
        raise ValueError(f"vectors must have length {L.dim}")
    return np.tensordot(np.tensordot(x, L.structure, axes=(0, 0)), y, axes=(0, 0))


def killing_form(L: LieAlgebra) -> SymmetricForm:
    ads = L.ad_basis()
    n = L.dim
    B = ex.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            B[i, j] = B[j, i] = ex.trace(ads[i].dot(ads[j]))
    return SymmetricForm(B)


def trace_form(L: LieAlgebra, S: Subspace) -> np.ndarray:
    """Gram matrix of tr(ad x ad y) over the basis of S."""
    ads = [L.ad(v) for v in S.vectors()]
    d = len(ads)
    B = ex.zeros((d, d))
    for i in range(d):
        for j in range(i, d):
            B[i, j] = B[j, i] = ex.trace(ads[i].dot(ads[j]))
    return B


def bracket_spaces(L: LieAlgebra, A: Subspace, B: Subspace) -> Subspace:
    vecs = [bracket(L, x, y) for x in A.vectors() for y in B.vectors()]
    if not vecs:
        return L.zero()
    return Subspace(L, np.array(vecs, dtype=object).T)


def derived_series(L: LieAlgebra) -> list[Subspace]:
    series = [L.whole()]
    while True:
        nxt = bracket_spaces(L, series[-1], series[-1])
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)


def lower_central_series(L: LieAlgebra) -> list[Subspace]:
    series = [L.whole()]
    while True:
        nxt = bracket_spaces(L, L.whole(), series[-1])
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)


def is_solvable(L: LieAlgebra) -> bool:
    return derived_series(L)[-1].dim == 0


def is_nilpotent(L: LieAlgebra) -> bool:
    return lower_central_series(L)[-1].dim == 0


def is_completely_solvable(L: LieAlgebra) -> bool:
    """Solvable with real ad-spectrum on every basis element and on their sum."""
    if not is_solvable(L):
        return False
    probes = L.ad_basis() + [L.ad(np.array([Fraction(k + 1) for k in range(L.dim)], dtype=object))]
    return all(ex.real_roots_only(ex.charpoly(A)) for A in probes)


def center(L: LieAlgebra) -> Subspace:
    return centralizer(L, L.whole())


def centralizer(L: LieAlgebra, S: Subspace) -> Subspace:
    """{x : [x, s] = 0 for all s in S}."""
    if S.dim == 0:
        return L.whole()
    # [x, s] = -ad(s) x
    M = np.concatenate([L.ad(s) for s in S.vectors()], axis=0)
    return Subspace(L, ex.nullspace(M))


def normalizer(L: LieAlgebra, S: Subspace) -> Subspace:
    """{x : [x, S] in S}."""
    if S.dim == 0 or S.dim == L.dim:
        return L.whole()
    # annihilator of S: rows W with W S = 0; need W ad(s) x = 0 for all s
    W = ex.nullspace(S.basis.T).T
    M = np.concatenate([W.dot(L.ad(s)) for s in S.vectors()], axis=0)
    return Subspace(L, ex.nullspace(M))


@dataclass
class NilradicalCertificate:
    contains_derived: bool
    is_ideal: bool
    nilpotent: bool
    quotient_dim: int


def nilradical(L: LieAlgebra, with_certificate: bool = False):
    """Maximal nilpotent ideal of a solvable algebra.

    Starts from [L, L] and adjoins the remaining elements whose adjoint
    action is nilpotent, found as the radical of the Killing form. For
    completely solvable inputs this radical is exactly the nilradical; any
    other outcome is reported through UnsupportedInput.
    """
    if not is_solvable(L):
        raise UnsupportedInput("nilradical requires a solvable algebra")
    derived = bracket_spaces(L, L.whole(), L.whole())
    B = killing_form(L).matrix
    radical = Subspace(L, ex.nullspace(B))
    candidate = derived + radical
    cert = NilradicalCertificate(
        contains_derived=candidate.contains_space(derived),
        is_ideal=candidate.is_ideal(),
        nilpotent=all(ex.is_nilpotent(L.ad(v)) for v in candidate.vectors()),
        quotient_dim=L.dim - candidate.dim,
    )
    if not cert.is_ideal:
        raise UnsupportedInput("nilradical candidate is not an ideal")
    if not cert.nilpotent:
        raise UnsupportedInput("nilradical candidate has a non-nilpotent adjoint element")
    # maximality: no complement direction may act nilpotently
    for v in candidate.complement_basis().T:
        if ex.is_nilpotent(L.ad(v)):
            raise UnsupportedInput("nilradical candidate is not maximal")
    return (candidate, cert) if with_certificate else candidate


def is_derivation_matrix(L: LieAlgebra, D: np.ndarray) -> bool:
    n = L.dim
    for i in range(n):
        for j in range(i + 1, n):
            lhs = D.dot(L.structure[i, j])
            rhs = bracket(L, D[:, i], L.unit(j)) + bracket(L, L.unit(i), D[:, j])
            if not ex.is_zero(lhs - rhs):
                return False
    return True


def semidirect_product(M: Sequence[np.ndarray], L: LieAlgebra, names: Sequence[str] | None = None) -> LieAlgebra:
    """(span M) ⋉ L with [(D,x),(D',x')] = ([D,D'], Dx' - D'x + [x,x'])."""
    M = list(M)
    if not M:
        return L
    for D in M:
        if D.shape != (L.dim, L.dim):
            raise ValueError("derivation has the wrong shape")
        if not is_derivation_matrix(L, D):
            raise ValueError("generator is not a derivation")
    flat = ex.flatten_matrices(M)
    if ex.rank(flat) != len(M):
        raise ValueError("derivation generators are linearly dependent")
    m, n = len(M), L.dim
    N = m + n
    c = ex.zeros((N, N, N))
    for i in range(m):
        for j in range(i + 1, m):
            coords = ex.solve(flat, ex.commutator(M[i], M[j]).reshape(-1))
            if coords is None:
                raise ValueError("derivation span is not closed under commutator")
            c[i, j, :m] = coords
            c[j, i, :m] = -coords
        for j in range(n):
            col = M[i][:, j]
            c[i, m + j, m:] = col
            c[m + j, i, m:] = -col
    c[m:, m:, m:] = L.structure
    if names is None:
        names = [f"m{i}" for i in range(m)]
    out = LieAlgebra(tuple(names) + L.basis_names, c)
    if not validate(out).ok:
        raise InconsistencyError("semidirect product fails Jacobi")
    return out


# JSON structure-constant format


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_json(L: LieAlgebra) -> dict:
    brackets = []
    n = L.dim
    for i in range(n):
        for j in range(i + 1, n):
            res = {L.basis_names[k]: _fmt(L.structure[i, j, k]) for k in range(n) if L.structure[i, j, k]}
            if res:
                brackets.append({"left": L.basis_names[i], "right": L.basis_names[j], "result": res})
    return {"dim": n, "basis": list(L.basis_names), "brackets": brackets}


def dumps(L: LieAlgebra) -> str:
    return json.dumps(to_json(L), sort_keys=True)


def from_json(data: dict) -> LieAlgebra:
    try:
        n = data["dim"]
        names = data["basis"]
        brackets = data.get("brackets", [])
    except (KeyError, TypeError) as e:
        raise FormatError(f"missing field: {e}") from None
    if not isinstance(n, int) or n <= 0 or len(names) != n or len(set(names)) != n:
        raise FormatError("dim must be positive and match a list of distinct basis names")
    if "structure" in data:
        if brackets:
            raise FormatError("give either 'structure' or 'brackets', not both")
        return from_raw_table(names, data["structure"])
    idx = {s: i for i, s in enumerate(names)}
    c = ex.zeros((n, n, n))
    seen = set()
    for br in brackets:
        try:
            a, b, res = br["left"], br["right"], br["result"]
        except (KeyError, TypeError):
            raise FormatError(f"bad bracket entry {br!r}") from None
        if a not in idx or b not in idx:
            raise FormatError(f"unknown basis name in {br!r}")
        i, j = idx[a], idx[b]
        key = frozenset((i, j))
        if key in seen:
            raise FormatError(f"bracket [{a},{b}] specified twice")
        seen.add(key)
        if i == j:
            raise FormatError(f"bracket [{a},{a}] must be zero and may not be specified")
        for k, v in res.items():
            if k not in idx:
                raise FormatError(f"unknown basis name {k!r}")
            try:
                val = ex.frac(v)
            except (TypeError, ValueError, ZeroDivisionError):
                raise FormatError(f"non-rational coefficient {v!r}") from None
            c[i, j, idx[k]] += val
            c[j, i, idx[k]] -= val
    return LieAlgebra(tuple(names), c)


def loads(text: str) -> LieAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(str(e)) from None
    return from_json(data)


def from_raw_table(names: Sequence[str], table) -> LieAlgebra:
    """Build from a nested list c[i][j][k] without antisymmetric completion (for validation)."""
    n = len(names)
    arr = np.empty((n, n, n), dtype=object)
    try:
        if len(table) != n or any(len(row) != n or any(len(col) != n for col in row) for row in table):
            raise FormatError(f"structure table must have shape {(n, n, n)}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    arr[i, j, k] = ex.frac(table[i][j][k])
    except (IndexError, TypeError, ValueError) as e:
        raise FormatError(f"malformed table: {e}") from None
    return LieAlgebra(tuple(names), arr)
