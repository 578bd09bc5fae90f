"""Maximal compact subalgebras of Der(s) via Einstein metrics, and g>=0 = m ⋉ s."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact as ex
from .algebra import InconsistencyError, LieAlgebra, UnsupportedInput, is_completely_solvable, semidirect_product
from .derivations import DerivationSpace, _canonical, derivation_algebra
from .einstein import InnerProduct, MetricResult, SolverParams, einstein_solve

log = logging.getLogger(__name__)

MAX_DENOMINATOR = 10**6


class PipelineError(RuntimeError):
    pass


@dataclass
class CompactCertificate:
    subalgebra: DerivationSpace
    killing_negdef_on_derived: bool
    spectra_imaginary: bool
    rationalized: bool
    closed: bool = True

    @property
    def valid(self) -> bool:
        return self.closed and self.killing_negdef_on_derived and self.spectra_imaginary

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "closed": self.closed,
            "killing_negdef_on_derived": self.killing_negdef_on_derived,
            "spectra_imaginary": self.spectra_imaginary,
            "rationalized": self.rationalized,
        }


def _structure_of(H: DerivationSpace) -> np.ndarray | None:
    """Structure constants of H in its own basis, or None if not closed."""
    d = H.dim
    flat = H.flat()
    c = ex.zeros((d, d, d))
    for i in range(d):
        for j in range(i + 1, d):
            x = ex.solve(flat, ex.commutator(H.basis[i], H.basis[j]).reshape(-1))
            if x is None:
                return None
            c[i, j] = x
            c[j, i] = -x
    return c


def compactness_certificate(H: DerivationSpace, tol: float = 1e-8) -> CompactCertificate:
    """Killing form of H negative semidefinite with radical = centre; basis spectra imaginary."""
    if H.dim == 0:
        return CompactCertificate(H, True, True, H.exact)
    if not H.exact:
        return _numeric_certificate(H, tol)
    c = _structure_of(H)
    if c is None:
        return CompactCertificate(H, False, False, True, closed=False)
    d = H.dim
    ads = [np.array(c[i].T, dtype=object) for i in range(d)]
    K = ex.zeros((d, d))
    for i in range(d):
        for j in range(d):
            K[i, j] = ex.trace(ads[i].dot(ads[j]))
    pos, neg, zero = ex.inertia(K)
    radical = ex.nullspace(K)
    centre = ex.nullspace(np.concatenate(ads, axis=0)) if d else ex.zeros((0, 0))
    same_radical = radical.shape[1] == centre.shape[1] and (
        centre.shape[1] == 0 or ex.rank(np.concatenate([radical, centre], axis=1)) == centre.shape[1]
    )
    negdef = pos == 0 and same_radical
    spectra = all(ex.imaginary_semisimple(D) for D in H.basis)
    return CompactCertificate(H, negdef, spectra, True)


def _numeric_certificate(H: DerivationSpace, tol: float) -> CompactCertificate:
    mats = [np.asarray(D, dtype=float) for D in H.basis]
    flat = np.array([M.ravel() for M in mats]).T
    d = len(mats)
    c = np.zeros((d, d, d))
    closed = True
    for i in range(d):
        for j in range(d):
            comm = (mats[i] @ mats[j] - mats[j] @ mats[i]).ravel()
            x, *_ = np.linalg.lstsq(flat, comm, rcond=None)
            closed &= np.linalg.norm(flat @ x - comm) <= tol * max(1.0, np.linalg.norm(comm))
            c[i, j] = x
    K = np.einsum("iab,jba->ij", c, c)
    ev = np.linalg.eigvalsh((K + K.T) / 2)
    negdef = bool(np.all(ev <= tol * max(1.0, np.abs(ev).max(initial=0))))
    spectra = True
    for M in mats:
        w, V = np.linalg.eig(M)
        scale = max(1.0, np.abs(w).max(initial=0))
        spectra &= bool(np.all(np.abs(w.real) <= tol * scale)) and np.linalg.matrix_rank(V, tol=1e-6) == M.shape[0]
    return CompactCertificate(H, negdef, spectra, False, closed=closed)


def _numeric_skew_kernel(der: DerivationSpace, g: np.ndarray, rel_tol: float = 1e-7) -> np.ndarray:
    """Coefficient vectors (columns) of g-skew combinations of the Der basis."""
    if der.dim == 0:
        return np.zeros((0, 0))
    cols = []
    for D in der.basis:
        Df = ex.to_float(D)
        cols.append((g @ Df + Df.T @ g).ravel())
    M = np.array(cols).T
    _, s, Vt = np.linalg.svd(M)
    scale = max(s.max(initial=0.0), 1.0)
    rank = int(np.sum(s > rel_tol * scale))
    return Vt[rank:].T


def _snap_continued_fraction(der: DerivationSpace, K: np.ndarray) -> DerivationSpace | None:
    """Rationalize a numeric kernel by row-reducing and rounding with bounded denominators."""
    if K.shape[1] == 0:
        return DerivationSpace(der.ambient, ())
    # numeric RREF of the row form
    R = K.T.copy()
    rows, cols = R.shape
    piv_row = 0
    for col in range(cols):
        if piv_row >= rows:
            break
        p = piv_row + int(np.argmax(np.abs(R[piv_row:, col])))
        if abs(R[p, col]) < 1e-9:
            continue
        R[[piv_row, p]] = R[[p, piv_row]]
        R[piv_row] /= R[piv_row, col]
        for r in range(rows):
            if r != piv_row:
                R[r] -= R[r, col] * R[piv_row]
        piv_row += 1
    coeffs = []
    for row in R[:piv_row]:
        fr = [ex.rationalize(float(v), MAX_DENOMINATOR) for v in row]
        if any(f is None for f in fr):
            return None
        coeffs.append(fr)
    n = der.ambient.dim
    mats = [sum((q * D for q, D in zip(row, der.basis)), ex.zeros((n, n))) for row in coeffs]
    return _canonical(der.ambient, mats)


def _reference_skew(der: DerivationSpace, ref: np.ndarray) -> DerivationSpace:
    """Exact derivations skew for a rational reference metric."""
    if der.dim == 0:
        return der
    eqs = ex.flatten_matrices([ref.dot(D) + D.T.dot(ref) for D in der.basis])
    K = ex.nullspace(eqs)
    n = der.ambient.dim
    mats = [sum((K[i, j] * der.basis[i] for i in range(der.dim)), ex.zeros((n, n))) for j in range(K.shape[1])]
    return _canonical(der.ambient, mats)


def _numerically_contained(space: DerivationSpace, kernel_mats: list[np.ndarray], tol: float = 1e-7) -> bool:
    if space.dim == 0:
        return True
    if not kernel_mats:
        return False
    A = np.array([M.ravel() for M in kernel_mats]).T
    for D in space.basis:
        v = ex.to_float(D).ravel()
        x, *_ = np.linalg.lstsq(A, v, rcond=None)
        if np.linalg.norm(A @ x - v) > tol * max(1.0, np.linalg.norm(v)):
            return False
    return True


@dataclass
class SkewResult:
    space: DerivationSpace
    numeric_dim: int
    method: str


def skew_derivations(
    S: LieAlgebra,
    g: InnerProduct,
    der: DerivationSpace | None = None,
    reference: np.ndarray | None = None,
) -> SkewResult:
    """Derivations of S skew-adjoint for g, rationalized when possible.

    The numeric kernel is snapped either onto the exact space of derivations
    skew for a rational ``reference`` metric (used when g was reached by a
    descent started at that reference, which preserves its isometries) or,
    failing that, onto continued-fraction roundings; the exact candidate is
    accepted only when its dimension matches and it is numerically contained.
    """
    der = der if der is not None else derivation_algebra(S)
    K = _numeric_skew_kernel(der, g.matrix)
    k = K.shape[1]
    n = S.dim
    kernel_mats = [sum(K[i, j] * ex.to_float(der.basis[i]) for i in range(der.dim)) for j in range(k)] if der.dim else []
    kernel_mats = [np.asarray(M, dtype=float).reshape(n, n) for M in kernel_mats]
    if reference is not None:
        cand = _reference_skew(der, reference)
        if cand.dim == k and _numerically_contained(cand, kernel_mats):
            return SkewResult(cand, k, "reference-isometry")
    cand = _snap_continued_fraction(der, K)
    if cand is not None and cand.dim == k and _numerically_contained(cand, kernel_mats, tol=1e-6):
        return SkewResult(cand, k, "continued-fraction")
    return SkewResult(DerivationSpace(S, tuple(kernel_mats), exact=False), k, "numeric")


@dataclass
class CompactRecovery:
    space: DerivationSpace
    certificate: CompactCertificate
    seed_dims: dict
    method: str
    metrics: list = field(default_factory=list)

    @property
    def maximality_evidence(self) -> bool:
        return len(set(self.seed_dims.values())) == 1

    def to_json(self) -> dict:
        out = self.space.to_json()
        out.update(
            {
                "dim": self.space.dim,
                "certificate": self.certificate.to_json(),
                "seed_dims": {str(k): v for k, v in self.seed_dims.items()},
                "maximality_evidence": self.maximality_evidence,
                "method": self.method,
            }
        )
        return out


def maximal_compact_derivations(
    S: LieAlgebra,
    seeds=(0, 1),
    params: SolverParams | None = None,
    der: DerivationSpace | None = None,
) -> CompactRecovery:
    """Maximal compact subalgebra of Der(S) as the skew derivations of an Einstein metric.

    One Einstein metric per seed gives the dimension evidence; a descent from
    the identity metric supplies the metric whose isometries are snapped to
    an exact basis.
    """
    if not is_completely_solvable(S):
        raise UnsupportedInput("maximal_compact_derivations requires a completely solvable algebra")
    params = params or SolverParams()
    der = der if der is not None else derivation_algebra(S)
    seed_dims: dict = {}
    metrics: list[MetricResult] = []
    for seed in seeds:
        res = einstein_solve(S, seed, params)
        if not res.converged:
            raise PipelineError(f"Einstein solver did not converge for seed {seed}: residual {res.residual:.3e}")
        metrics.append(res)
        seed_dims[seed] = _numeric_skew_kernel(der, res.metric.matrix).shape[1]
    ref = ex.identity(S.dim)
    res = einstein_solve(S, None, params, start=np.eye(S.dim))
    if not res.converged:
        raise PipelineError(f"Einstein solver did not converge from the reference metric: residual {res.residual:.3e}")
    metrics.append(res)
    seed_dims["reference"] = _numeric_skew_kernel(der, res.metric.matrix).shape[1]
    skew = skew_derivations(S, res.metric, der, reference=ref)
    if skew.method == "numeric":
        # fall back to a seeded metric; its skew space may still round cleanly
        alt = skew_derivations(S, metrics[0].metric, der)
        if alt.method != "numeric":
            skew = alt
    cert = compactness_certificate(skew.space)
    if not cert.valid:
        log.warning("compactness certificate failed for recovered m (method %s)", skew.method)
    return CompactRecovery(skew.space, cert, seed_dims, skew.method, metrics)


def build_g_geq0(S: LieAlgebra, m: DerivationSpace) -> LieAlgebra:
    if not m.exact:
        raise UnsupportedInput("m must be exact to build g>=0")
    return semidirect_product(list(m.basis), S, names=[f"M{i + 1}" for i in range(m.dim)])
