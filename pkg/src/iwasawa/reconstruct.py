"""From an Iwasawa subalgebra s to the Satake diagram and real form of g."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import exact as ex
from .algebra import (
    InconsistencyError,
    LieAlgebra,
    Subspace,
    UnsupportedInput,
    center,
    derived_series,
    is_completely_solvable,
    is_nilpotent,
    killing_form,
    lower_central_series,
    nilradical,
    validate,
)
from .compact import CompactRecovery, PipelineError, build_g_geq0, maximal_compact_derivations
from .derivations import DerivationSpace, derivation_algebra
from .einstein import SolverParams
from .exact import Gaussian
from .roots import (
    CartanMatrixData,
    ComplexRootDatum,
    RestrictedRootDatum,
    borel_of,
    cartan_matrix,
    cartan_subalgebra,
    complex_root_decomposition,
    complexify,
    positive_torus_basis,
    restricted_root_decomposition,
    restricted_trace_form,
    split_torus_of_iwasawa,
)
from .satake import SatakeDiagram, assemble_satake, color_nodes, detect_arrows, project_rho, to_dict

log = logging.getLogger(__name__)


class StageError(PipelineError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class ReconstructionReport:
    input_hash: str
    m: CompactRecovery
    g_geq0: LieAlgebra
    restricted: RestrictedRootDatum
    complex_roots: ComplexRootDatum
    cartan: CartanMatrixData
    satake: SatakeDiagram
    borel_form: np.ndarray  # B_b on the Cartan basis (a first, then t)
    diagnostics: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def label(self) -> str | None:
        return self.satake.real_form_label

    def to_json(self) -> dict:
        return {
            "input_hash": self.input_hash,
            "label": self.label,
            "satake": to_dict(self.satake),
            "cartan_matrix": [list(r) for r in self.cartan.matrix],
            "m": self.m.to_json(),
            "g_geq0": {"dim": self.g_geq0.dim, "hash": self.g_geq0.hash()},
            "restricted_roots": self.restricted.to_json(),
            "borel_form": [[str(v) for v in row] for row in self.borel_form],
            "diagnostics": self.diagnostics,
        }


def _embed_vector(G: LieAlgebra, offset: int, v: np.ndarray) -> np.ndarray:
    """Push a vector of s into g>=0 = m ⋉ s (s occupies the trailing coordinates)."""
    w = ex.zeros(G.dim)
    w[offset:] = v
    return w


def fixed_points(S: LieAlgebra, m: DerivationSpace) -> Subspace:
    if m.dim == 0:
        return S.whole()
    return Subspace(S, ex.nullspace(np.concatenate(list(m.basis), axis=0)))


def reconstruct_from_iwasawa(
    S: LieAlgebra,
    seeds=(0, 1),
    params: SolverParams | None = None,
) -> ReconstructionReport:
    """Satake diagram and real-form label of the semisimple g whose Iwasawa subalgebra is S."""
    timings: dict = {}
    diag: dict = {}

    def stage(name, fn, *args, **kw):
        t0 = time.perf_counter()
        try:
            out = fn(*args, **kw)
        except StageError:
            raise
        except (UnsupportedInput, InconsistencyError, PipelineError, ZeroDivisionError) as e:
            raise StageError(name, e) from e
        timings[name] = time.perf_counter() - t0
        return out

    def check_input():
        if not validate(S).ok:
            raise UnsupportedInput("input violates antisymmetry or Jacobi")
        if not is_completely_solvable(S):
            raise UnsupportedInput("input is not completely solvable")

    stage("validate", check_input)
    rec = stage("compact", maximal_compact_derivations, S, seeds, params)
    if not rec.space.exact:
        raise StageError("compact", PipelineError("recovered m could not be rationalized"))
    if not rec.certificate.valid:
        raise StageError("compact", PipelineError("recovered m fails the compactness certificate"))
    diag["m_dim"] = rec.space.dim
    diag["m_method"] = rec.method
    G = stage("g_geq0", build_g_geq0, S, rec.space)
    k = rec.space.dim

    a_s = stage("split_torus", split_torus_of_iwasawa, S, fixed_points(S, rec.space))
    a_basis = stage("ordering", positive_torus_basis, S, a_s)
    restricted = stage("restricted_roots", restricted_root_decomposition, S, a_s, a_basis)
    m_sub = Subspace(G, np.array([G.unit(i) for i in range(k)], dtype=object).T) if k else G.zero()
    a_G = [_embed_vector(G, k, v) for v in a_basis]
    a = Subspace(G, np.array(a_G, dtype=object).T)
    t, h = stage("cartan", cartan_subalgebra, G, m_sub, a)
    diag["rank_a"], diag["rank_t"] = a.dim, t.dim

    gC = complexify(G)
    cartan = a_G + list(t.vectors())
    realify = tuple([Gaussian(1)] * a.dim + [Gaussian(0, -1)] * t.dim)
    datum = stage("complex_roots", complex_root_decomposition, gC, cartan, realify)
    if datum.zero_space.shape[1] != len(cartan):
        raise StageError("complex_roots", InconsistencyError("t + a is not self-centralizing in g>=0(C)"))
    b = borel_of(datum)
    Bb = stage("killing", restricted_trace_form, gC, b, cartan)
    B = Bb * 2
    cm = stage("cartan_matrix", cartan_matrix, datum.simple, B)

    rhos = [project_rho(alpha, a.dim) for alpha in datum.simple]
    colors = color_nodes(rhos)
    arrows = stage("arrows", detect_arrows, rhos, colors)
    sat = stage("satake", assemble_satake, cm, colors, arrows)
    diag["dynkin_type"] = cm.type
    if sat.real_form_label is None:
        log.warning("Satake diagram of type %s is not in the real-form table", cm.type)
    return ReconstructionReport(S.hash(), rec, G, restricted, datum, cm, sat, Bb, diag, timings)


# comparison


def _series_dims(L: LieAlgebra):
    return tuple(s.dim for s in derived_series(L)), tuple(s.dim for s in lower_central_series(L))


def restricted_invariant(datum: RestrictedRootDatum) -> tuple:
    """Basis-free summary: rank and the sorted pairs (mult(alpha), mult(2 alpha))."""
    mult = datum.multiplicities()
    pairs = []
    for r in datum.roots:
        double = tuple(2 * v for v in r)
        pairs.append((mult[r], mult.get(double, 0)))
    return (datum.torus.dim, tuple(sorted(pairs)))


def iwasawa_invariants(S: LieAlgebra, seeds=(0, 1), params: SolverParams | None = None, with_satake: bool = True) -> dict:
    """Isomorphism invariants; nilpotent inputs have rank 0 and no Satake diagram."""
    inv: dict = {"dim": S.dim}
    inv["derived_series"], inv["lower_central_series"] = _series_dims(S)
    N = nilradical(S).as_algebra()
    inv["nilradical"] = (N.dim, _series_dims(N), derivation_algebra(N).dim)
    if is_nilpotent(S):
        inv["restricted_roots"] = (0, ())
    else:
        a = split_torus_of_iwasawa(S)
        inv["restricted_roots"] = restricted_invariant(restricted_root_decomposition(S, a))
        if with_satake:
            inv["satake"] = reconstruct_from_iwasawa(S, seeds, params).satake.key()
    return inv


CANDIDATE_NOTE = "all computed invariants agree; this is not a proof of isomorphism"


@dataclass
class Comparison:
    verdict: str
    first_difference: str | None
    invariants: tuple
    witness: IsoWitness | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "first_difference": self.first_difference}
        if self.verdict == "isomorphic-candidates":
            out["note"] = CANDIDATE_NOTE if self.witness is None else "explicit isomorphism found"
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def compare_iwasawa(S1: LieAlgebra, S2: LieAlgebra, seeds=(0, 1), params: SolverParams | None = None, witness_dim: int = 4) -> Comparison:
    """'distinguished' names the first differing invariant; 'isomorphic-candidates' is not a proof.

    When all invariants agree and the dimension is at most ``witness_dim``,
    a small isomorphism search is attempted and its witness attached.
    """
    cheap = [iwasawa_invariants(S, with_satake=False) for S in (S1, S2)]
    for key in cheap[0]:
        if cheap[0][key] != cheap[1][key]:
            return Comparison("distinguished", key, tuple(cheap))
    if not is_nilpotent(S1):
        sat = [reconstruct_from_iwasawa(S, seeds, params).satake for S in (S1, S2)]
        if sat[0] != sat[1]:
            return Comparison("distinguished", "satake", tuple(cheap))
    w = find_isomorphism(S1, S2, max_dim=witness_dim) if S1.dim <= witness_dim else None
    return Comparison("isomorphic-candidates", None, tuple(cheap), w)


# explicit isomorphisms


@dataclass
class IsoWitness:
    matrix: np.ndarray  # columns: images of the source basis in the target basis
    verified: bool

    def to_json(self) -> dict:
        return {"matrix": [[str(v) for v in row] for row in self.matrix], "verified": self.verified}


def is_homomorphism(L1: LieAlgebra, L2: LieAlgebra, T: np.ndarray) -> bool:
    for i in range(L1.dim):
        for j in range(i + 1, L1.dim):
            lhs = T.dot(L1.structure[i, j])
            rhs = L2.bracket(T[:, i], T[:, j])
            if not ex.is_zero(lhs - rhs):
                return False
    return True


DEFAULT_VALUES = tuple(Fraction(v) for v in (0, 1, -1, 2, -2)) + (Fraction(1, 2), Fraction(-1, 2))


def _structural_invariants(L: LieAlgebra) -> tuple:
    return _series_dims(L), center(L).dim, derivation_algebra(L).dim, killing_form(L).signature()


def _characteristic_subspaces(L: LieAlgebra) -> list[Subspace]:
    out = list(derived_series(L)[1:]) + list(lower_central_series(L)[1:]) + [center(L)]
    return [V for V in out if 0 < V.dim < L.dim]


def _depth_order(L: LieAlgebra) -> list[int]:
    """Basis indices sorted so that deeper terms of the lower central series come last."""
    series = lower_central_series(L)

    def depth(i):
        v = L.unit(i)
        return max(k for k, V in enumerate(series) if V.contains(v))

    return sorted(range(L.dim), key=depth)


def find_isomorphism(L1: LieAlgebra, L2: LieAlgebra, values=DEFAULT_VALUES, max_dim: int = 4) -> IsoWitness | None:
    """Search for an isomorphism whose free coordinates are drawn from ``values``.

    Basis vectors of L1 are taken in an order with deeper lower-central terms
    last. The image of each one is constrained linearly by its brackets with
    earlier ones, and must lie in a characteristic subspace of L2 exactly when
    the source vector lies in the matching one of L1; only the free
    coordinates of the remaining affine space are enumerated. None means no
    witness was found: a proof of non-isomorphism only when the cheap
    invariants already differ.
    """
    n = L1.dim
    if L2.dim != n or _structural_invariants(L1) != _structural_invariants(L2):
        return None
    if n > max_dim:
        raise UnsupportedInput(f"isomorphism search is limited to dimension {max_dim}")
    order = _depth_order(L1)
    P = ex.zeros((n, n))
    for new, old in enumerate(order):
        P[old, new] = Fraction(1)
    M1 = _rebase(L1, P)
    chars = list(zip(_characteristic_subspaces(M1), _characteristic_subspaces(L2)))
    c = M1.structure
    eye = ex.identity(n)

    def candidates(cols):
        k = len(cols)
        rows, rhs = [], []
        for i in range(k):
            coef = c[i, k]
            if any(coef[k + 1 :]):
                continue
            A = L2.ad(cols[i]) - coef[k] * eye
            b = sum((coef[l] * cols[l] for l in range(k)), ex.zeros(n))
            rows.append(A)
            rhs.append(b)
        for i in range(k):
            for j in range(i + 1, k):
                coef = c[i, j]
                if coef[k] and not any(coef[k + 1 :]):
                    # e_k is pinned by an earlier bracket
                    v = L2.bracket(cols[i], cols[j]) - sum((coef[l] * cols[l] for l in range(k)), ex.zeros(n))
                    rows.append(coef[k] * eye)
                    rhs.append(v)
        if rows:
            A = np.concatenate(rows, axis=0)
            b = np.concatenate(rhs)
            v0 = ex.solve(A, b)
            if v0 is None:
                return
            N = ex.nullspace(A)
        else:
            v0, N = ex.zeros(n), eye
        r = N.shape[1]
        for t in product(values, repeat=r):
            yield v0 + (N.dot(np.array(t, dtype=object)) if r else ex.zeros(n))

    def admissible(k, v):
        if ex.is_zero(v):
            return False
        e = M1.unit(k)
        return all(V1.contains(e) == V2.contains(v) for V1, V2 in chars)

    def rec(cols):
        k = len(cols)
        if k == n:
            T = np.array(cols, dtype=object).T
            return T if is_homomorphism(M1, L2, T) else None
        for v in candidates(cols):
            if not admissible(k, v):
                continue
            trial = cols + [v]
            if ex.rank(np.array(trial, dtype=object).T) < len(trial):
                continue
            if not _partial_ok(M1, L2, trial):
                continue
            out = rec(trial)
            if out is not None:
                return out
        return None

    T = rec([])
    if T is None:
        return None
    # T maps the reordered basis; undo the reordering on the source side
    T = T.dot(ex.inverse(P))
    return IsoWitness(T, is_homomorphism(L1, L2, T))


def _rebase(L: LieAlgebra, P: np.ndarray) -> LieAlgebra:
    """Structure constants in the basis f_a = sum_i P[i, a] e_i."""
    n = L.dim
    Pinv = ex.inverse(P)
    c = ex.zeros((n, n, n))
    for a in range(n):
        for b in range(a + 1, n):
            w = Pinv.dot(L.bracket(P[:, a], P[:, b]))
            c[a, b] = w
            c[b, a] = -w
    return LieAlgebra(tuple(L.basis_names[int(np.flatnonzero(P[:, a])[0])] for a in range(n)), c)


def _partial_ok(L1: LieAlgebra, L2: LieAlgebra, cols: list) -> bool:
    """Bracket relations among the chosen images whose right-hand side is fully determined."""
    k = len(cols)
    for i in range(k):
        for j in range(i + 1, k):
            c = L1.structure[i, j]
            if any(c[k:]):
                continue
            lhs = sum((c[l] * cols[l] for l in range(k)), ex.zeros(L2.dim))
            if not ex.is_zero(lhs - L2.bracket(cols[i], cols[j])):
                return False
    return True


def extend_isomorphism_to_g0(
    phi: np.ndarray, S1: LieAlgebra, m1: DerivationSpace, S2: LieAlgebra, m2: DerivationSpace
) -> IsoWitness:
    """Extend phi: S1 -> S2 to m1 ⋉ S1 -> m2 ⋉ S2 by D -> phi D phi^-1; m2 must be the image of m1."""
    if m1.dim != m2.dim:
        raise InconsistencyError(f"m dimensions differ: {m1.dim} vs {m2.dim}")
    inv = ex.inverse(phi)
    k, n = m1.dim, S1.dim
    C = ex.zeros((k, k))
    flat2 = m2.flat()
    for col, D in enumerate(m1.basis):
        x = ex.solve(flat2, phi.dot(D).dot(inv).reshape(-1))
        if x is None:
            raise InconsistencyError("phi does not carry m1 onto m2")
        C[:, col] = x
    T = ex.zeros((k + n, k + n))
    T[:k, :k] = C
    T[k:, k:] = phi
    G1, G2 = build_g_geq0(S1, m1), build_g_geq0(S2, m2)
    return IsoWitness(T, is_homomorphism(G1, G2, T))
