"""Left-invariant Einstein and nilsoliton metrics on solvable Lie algebras.

A metric is carried as a factor P with Gram matrix g = P^T P. Curvature is
evaluated in the orthonormal frame u_a = sum_i (P^-1)_{ia} e_i, where the
algebra has structure constants ``P . mu(P^-1 ., P^-1 .)``. Descent moves P
by P <- expm(t A) P with A symmetric and traceless, so det g stays fixed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import least_squares

from . import exact as ex
from .algebra import LieAlgebra, UnsupportedInput, is_completely_solvable, is_nilpotent, nilradical

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class InnerProduct:
    matrix: np.ndarray
    precision: int = 64

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("inner product must be a square matrix")
        if not np.allclose(m, m.T, rtol=0, atol=1e-12 * max(1.0, np.abs(m).max())):
            raise ValueError("inner product must be symmetric")
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError:
            raise ValueError("inner product is not positive definite") from None
        object.__setattr__(self, "matrix", (m + m.T) / 2)

    def factor(self) -> np.ndarray:
        """Upper-triangular P with matrix = P^T P."""
        return np.linalg.cholesky(self.matrix).T

    @classmethod
    def from_factor(cls, P: np.ndarray) -> "InnerProduct":
        return cls(P.T @ P)


@dataclass
class SolverParams:
    tol: float = 1e-10
    max_iters: int = 4000
    init_spread: float = 0.5
    polish: bool = True


@dataclass
class MetricResult:
    metric: InnerProduct
    einstein_constant: float
    residual: float
    iterations: int
    converged: bool
    metadata: dict = field(default_factory=dict)

    def to_json(self, full_precision: bool = False) -> dict:
        out = {
            "einstein_constant": self.einstein_constant,
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "metadata": self.metadata,
        }
        if full_precision:
            out["metric"] = [[repr(float(v)) for v in row] for row in self.metric.matrix]
        return out


def structure_float(L: LieAlgebra) -> np.ndarray:
    return ex.to_float(L.structure)


def frame_constants(c: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Structure constants of P . mu(P^-1 ., P^-1 .)."""
    Pinv = np.linalg.inv(P)
    return np.einsum("ia,jb,ijk,ck->abc", Pinv, Pinv, c, P, optimize=True)


def ricci_frame(c: np.ndarray) -> np.ndarray:
    """Ricci matrix in an orthonormal frame with structure constants c."""
    h = np.einsum("kjj->k", c)
    t1 = -0.5 * np.einsum("aik,bik->ab", c, c)
    t2 = -0.5 * np.einsum("aij,bji->ab", c, c)
    t3 = 0.25 * np.einsum("ija,ijb->ab", c, c)
    s = np.einsum("k,kab->ab", h, c)
    return t1 + t2 + t3 - 0.5 * (s + s.T)


def _ricci_pullback(c: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Gradient G[i,j,k] of <W, Ric(c)> with respect to c, for symmetric W."""
    h = np.einsum("kjj->k", c)
    G = -np.einsum("ab,bik->aik", W, c)
    G -= np.einsum("ab,bji->aij", W, c)
    G += 0.5 * np.einsum("ab,ijb->ija", W, c)
    G -= np.einsum("k,ab->kab", h, W)
    u = np.einsum("ab,kab->k", W, c)
    n = c.shape[0]
    for j in range(n):
        G[:, j, j] -= u
    return G


def _pull_to_A(c: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Gradient in the direction A of c -> expm(A) . c, from dF/dc = G."""
    gA = np.einsum("ijk,ijl->kl", G, c)
    gA -= np.einsum("ijk,ljk->li", G, c)
    gA -= np.einsum("ijk,ilk->lj", G, c)
    return gA


def einstein_functional(c: np.ndarray) -> tuple[float, np.ndarray]:
    """F = |Ric - (scal/n) I|^2 / scal^2 and its gradient in the A direction."""
    n = c.shape[0]
    R = ricci_frame(c)
    s = np.trace(R)
    E = R - (s / n) * np.eye(n)
    e2 = float(np.sum(E * E))
    F = e2 / s**2
    W = 2 * E / s**2 - 2 * e2 / s**3 * np.eye(n)
    return F, _pull_to_A(c, _ricci_pullback(c, W))


def soliton_functional(c: np.ndarray) -> tuple[float, np.ndarray]:
    """F = tr(Ric^2) / scal^2, whose critical points on nilpotent orbits are nilsolitons."""
    n = c.shape[0]
    R = ricci_frame(c)
    s = np.trace(R)
    r2 = float(np.sum(R * R))
    F = r2 / s**2
    W = 2 * R / s**2 - 2 * r2 / s**3 * np.eye(n)
    return F, _pull_to_A(c, _ricci_pullback(c, W))


def _sym_traceless(A: np.ndarray) -> np.ndarray:
    S = (A + A.T) / 2
    return S - np.trace(S) / S.shape[0] * np.eye(S.shape[0])


def transform(c: np.ndarray, Q: np.ndarray) -> np.ndarray:
    return frame_constants(c, Q)


def ricci(L: LieAlgebra, g: InnerProduct) -> np.ndarray:
    """Ricci tensor as a bilinear form in the basis of L."""
    P = g.factor()
    R = ricci_frame(frame_constants(structure_float(L), P))
    return P.T @ R @ P


def ricci_operator(L: LieAlgebra, g: InnerProduct) -> np.ndarray:
    return np.linalg.solve(g.matrix, ricci(L, g))


def scalar_curvature(L: LieAlgebra, g: InnerProduct) -> float:
    return float(np.trace(ricci_operator(L, g)))


def einstein_residual(L: LieAlgebra, g: InnerProduct) -> float:
    P = g.factor()
    R = ricci_frame(frame_constants(structure_float(L), P))
    n = L.dim
    return float(np.linalg.norm(R - np.trace(R) / n * np.eye(n)))


def verify_einstein(L: LieAlgebra, g: InnerProduct, tol: float) -> tuple[bool, float]:
    r = einstein_residual(L, g)
    return r <= tol, r


def random_factor(n: int, rng: np.random.Generator, spread: float) -> np.ndarray:
    X = rng.standard_normal((n, n)) * spread
    return expm(_sym_traceless(X)) @ expm((X - X.T) / 2)


def _descend(c0: np.ndarray, P0: np.ndarray, functional, params: SolverParams, target: float):
    c, P = c0, P0
    F, gA = functional(c)
    step = 0.1
    it = 0
    for it in range(1, params.max_iters + 1):
        A = -_sym_traceless(gA)
        gnorm2 = float(np.sum(A * A))
        if F <= target or gnorm2 < 1e-30:
            break
        while True:
            Q = expm(step * A)
            c_new = transform(c, Q)
            F_new, g_new = functional(c_new)
            if np.isfinite(F_new) and F_new <= F - 1e-4 * step * gnorm2:
                break
            step *= 0.5
            if step < 1e-16:
                return c, P, F, it
        c, P, F, gA = c_new, Q @ P, F_new, g_new
        step = min(step * 2.0, 10.0)
    return c, P, F, it


def _polish(c: np.ndarray, P: np.ndarray, residual_fn):
    n = c.shape[0]
    iu = np.triu_indices(n)

    def unpack(x):
        S = np.zeros((n, n))
        S[iu] = np.concatenate([x, [0.0]])
        S = S + S.T - np.diag(np.diag(S))
        return _sym_traceless(S)

    x0 = np.zeros(len(iu[0]) - 1)
    sol = least_squares(lambda x: residual_fn(transform(c, expm(unpack(x)))), x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    Q = expm(unpack(sol.x))
    return transform(c, Q), Q @ P, int(sol.nfev)


def _einstein_residual_vec(c: np.ndarray) -> np.ndarray:
    n = c.shape[0]
    R = ricci_frame(c)
    s = np.trace(R)
    E = (R - s / n * np.eye(n)) / abs(s)
    return E[np.triu_indices(n)]


def quotient_gauge(S: LieAlgebra, g: np.ndarray) -> float:
    """Scale factor making the metric induced on S / nilradical(S) unimodular in the input basis."""
    N = nilradical(S)
    Nb = ex.to_float(N.basis)
    Cb = ex.to_float(N.complement_basis())
    r = Cb.shape[1]
    if r == 0:
        return 1.0
    if Nb.shape[1]:
        G_nn = Nb.T @ g @ Nb
        G_cn = Cb.T @ g @ Nb
        Q = Cb.T @ g @ Cb - G_cn @ np.linalg.solve(G_nn, G_cn.T)
    else:
        Q = Cb.T @ g @ Cb
    return float(np.linalg.det(Q)) ** (-1.0 / r)


def einstein_solve(S: LieAlgebra, seed: int | None = 0, params: SolverParams | None = None, start: np.ndarray | None = None) -> MetricResult:
    """Descend to a left-invariant Einstein metric from a seeded random start.

    ``start`` overrides the random start with a given factor P (g = P^T P).
    The returned metric is rescaled so the metric induced on the quotient by
    the nilradical has unit determinant in the input basis; the Einstein
    constant is reported in that gauge.
    """
    params = params or SolverParams()
    if not is_completely_solvable(S):
        raise UnsupportedInput("einstein_solve requires a completely solvable algebra")
    n = S.dim
    c0 = structure_float(S)
    meta = {"seed": seed, "tol": params.tol, "gauge": "unit determinant on S/nilradical(S), input basis"}
    if not np.any(c0):
        g = InnerProduct(np.eye(n))
        return MetricResult(g, 0.0, 0.0, 0, True, meta)
    if is_nilpotent(S):
        raise UnsupportedInput("a non-abelian nilpotent algebra carries no left-invariant Einstein metric")
    if start is not None:
        P0 = np.asarray(start, dtype=float)
        meta["start"] = "given"
    else:
        rng = np.random.default_rng(seed)
        P0 = random_factor(n, rng, params.init_spread)
    P0 = P0 / abs(np.linalg.det(P0)) ** (1.0 / n)
    c = transform(c0, P0)
    c, P, F, iters = _descend(c, P0, einstein_functional, params, target=1e-14)
    if params.polish:
        c, P, nfev = _polish(c, P, _einstein_residual_vec)
        iters += nfev
    g = P.T @ P
    lam = quotient_gauge(S, g)
    metric = InnerProduct(lam * g)
    R = ricci_frame(frame_constants(c0, metric.factor()))
    const = float(np.trace(R) / n)
    residual = float(np.linalg.norm(R - const * np.eye(n)))
    converged = residual <= params.tol and const < 0
    meta["raw_functional"] = F
    if not converged:
        log.warning("einstein_solve did not converge: residual %.3e", residual)
    return MetricResult(metric, const, residual, iters, converged, meta)


def _soliton_residual_vec(c: np.ndarray) -> np.ndarray:
    """Ric - c I must be a derivation; residual of the Leibniz rule, scale-free."""
    n = c.shape[0]
    R = ricci_frame(c)
    s = np.trace(R)
    r2 = np.sum(R * R)
    const = r2 / s
    D = R - const * np.eye(n)
    return leibniz_defect(c, D).ravel() / abs(s)


def leibniz_defect(c: np.ndarray, D: np.ndarray) -> np.ndarray:
    """D[x,y] - [Dx,y] - [x,Dy] on basis pairs, as c-shaped array."""
    lhs = np.einsum("ijl,kl->ijk", c, D)
    rhs = np.einsum("li,ljk->ijk", D, c) + np.einsum("lj,ilk->ijk", D, c)
    return lhs - rhs


def nilsoliton_solve(N: LieAlgebra, seed: int | None = 0, params: SolverParams | None = None) -> tuple[MetricResult, np.ndarray]:
    """Metric with Ric = c I + D, D a derivation; D is returned in the basis of N."""
    params = params or SolverParams()
    if not is_nilpotent(N):
        raise UnsupportedInput("nilsoliton_solve requires a nilpotent algebra")
    n = N.dim
    c0 = structure_float(N)
    meta = {"seed": seed, "tol": params.tol}
    if not np.any(c0):
        return MetricResult(InnerProduct(np.eye(n)), 0.0, 0.0, 0, True, meta), np.zeros((n, n))
    rng = np.random.default_rng(seed)
    P0 = random_factor(n, rng, params.init_spread)
    P0 = P0 / abs(np.linalg.det(P0)) ** (1.0 / n)
    c, P, F, iters = _descend(transform(c0, P0), P0, soliton_functional, params, target=0.0)
    if params.polish:
        c, P, nfev = _polish(c, P, _soliton_residual_vec)
        iters += nfev
    R = ricci_frame(c)
    s = np.trace(R)
    const = float(np.sum(R * R) / s)
    D_frame = R - const * np.eye(n)
    residual = float(np.linalg.norm(leibniz_defect(c, D_frame)))
    D = np.linalg.solve(P, D_frame @ P)
    metric = InnerProduct(P.T @ P)
    converged = residual <= params.tol * max(1.0, abs(s)) and const < 0
    return MetricResult(metric, const, residual, iters, converged, meta), D


def spectral_signature(L: LieAlgebra, g: InnerProduct) -> np.ndarray:
    """Sorted eigenvalues of the Ricci operator, normalized by the trace."""
    ev = np.sort(np.linalg.eigvals(ricci_operator(L, g)).real)
    s = ev.sum()
    return ev / s if s else ev
