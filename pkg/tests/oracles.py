"""Independent reference computations used to freeze expected values.

Nothing here calls the exact-arithmetic kernels under test: everything is
floating point straight from matrices or from textbook formulas.
"""

from __future__ import annotations

import itertools

import numpy as np


def float_structure(L) -> np.ndarray:
    return np.array([[[float(v) for v in row] for row in plane] for plane in L.structure])


def matrix_span_structure(mats) -> np.ndarray:
    """Structure constants of a span of matrices closed under commutator, by least squares."""
    A = np.array([np.asarray(M, dtype=float).ravel() for M in mats]).T
    d = len(mats)
    c = np.zeros((d, d, d))
    for i, j in itertools.product(range(d), repeat=2):
        Mi, Mj = (np.asarray(mats[k], dtype=float) for k in (i, j))
        x, *_ = np.linalg.lstsq(A, (Mi @ Mj - Mj @ Mi).ravel(), rcond=None)
        c[i, j] = x
    return c


def killing_from_structure(c: np.ndarray) -> np.ndarray:
    """B(e_i, e_j) = tr(ad e_i ad e_j) with (ad e_i)[k, j] = c[i, j, k]."""
    ads = [c[i].T for i in range(c.shape[0])]
    return np.array([[np.trace(a @ b) for b in ads] for a in ads])


def derivation_dim(c: np.ndarray) -> int:
    """dim Der by the rank of D -> D[x,y] - [Dx,y] - [x,Dy] over all unit matrices D."""
    n = c.shape[0]
    cols = []
    for a, b in itertools.product(range(n), repeat=2):
        D = np.zeros((n, n))
        D[a, b] = 1.0
        out = []
        for i, j in itertools.product(range(n), repeat=2):
            lhs = D @ c[i, j]
            rhs = D[:, i] @ c[:, j, :] + D[:, j] @ c[i, :, :]
            out.append(lhs - rhs)
        cols.append(np.concatenate(out))
    M = np.array(cols).T
    s = np.linalg.svd(M, compute_uv=False)
    return int(n * n - np.sum(s > 1e-9 * max(1.0, s.max(initial=0))))


def koszul_ricci(c: np.ndarray) -> np.ndarray:
    """Ricci tensor of an orthonormal frame via the Levi-Civita connection and the curvature tensor.

    nabla_X Y = 1/2([X,Y] - ad_X^* Y - ad_Y^* X); Ric(Y,Z) = sum_i <R(e_i,Y)Z, e_i>
    with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
    """
    n = c.shape[0]
    ad = np.array([c[i].T for i in range(n)])  # ad[i] @ y = [e_i, y]
    # Gamma[i] is the matrix of nabla_{e_i}
    Gamma = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            ej = np.eye(n)[j]
            Gamma[i][:, j] = 0.5 * (ad[i] @ ej - ad[i].T @ ej - ad[j].T @ np.eye(n)[i])
    ric = np.zeros((n, n))
    for y in range(n):
        for z in range(n):
            total = 0.0
            for i in range(n):
                br = c[i, y]
                nabla_br = np.einsum("k,kab->ab", br, Gamma)
                Rm = Gamma[i] @ Gamma[y] - Gamma[y] @ Gamma[i] - nabla_br
                total += (Rm @ np.eye(n)[z])[i]
            ric[y, z] = total
    return ric


def transform_structure(c: np.ndarray, P: np.ndarray) -> np.ndarray:
    Pinv = np.linalg.inv(P)
    return np.einsum("ia,jb,ijk,ck->abc", Pinv, Pinv, c, P)


def hyperbolic_einstein_constant(n: int) -> float:
    """Real hyperbolic space of curvature -1 has Ric = -(dim - 1) g = -n g on R ⋉ R^n."""
    return -float(n)


def restricted_roots_numeric(mats, a_mats):
    """Joint eigenvalues of ad(a) on a matrix realization, numerically, with multiplicities."""
    c = matrix_span_structure(list(a_mats) + list(mats))
    r = len(a_mats)
    ops = [c[i].T for i in range(r)]
    rng = np.random.default_rng(7)
    w = rng.normal(size=r)
    generic = sum(wi * op for wi, op in zip(w, ops))
    vals, vecs = np.linalg.eig(generic)
    roots = []
    for k in range(len(vals)):
        v = vecs[:, k]
        roots.append(tuple(round(float(np.real(v.conj() @ (op @ v)) / np.real(v.conj() @ v)), 8) for op in ops))
    return roots


def complex_killing_sl(mats_h, n: int) -> np.ndarray:
    """Killing form of sl(n, C) on diagonal elements: B(X, Y) = 2n tr(XY)."""
    return np.array([[2 * n * np.trace(np.asarray(X, float) @ np.asarray(Y, float)) for Y in mats_h] for X in mats_h])


def complex_killing_sp(mats_h, n: int) -> np.ndarray:
    """Killing form of sp(2n, C): B(X, Y) = (2n + 2) tr(XY)."""
    return np.array([[(2 * n + 2) * np.trace(np.asarray(X, float) @ np.asarray(Y, float)) for Y in mats_h] for X in mats_h])


def compact_centralizer_dim(mats, a_mats) -> int:
    """dim of {X in span(mats) : X skew, [X, a] = 0}, numerically."""
    A = np.array([np.asarray(M, float).ravel() for M in mats]).T
    rows = []
    for k in range(A.shape[1]):
        X = A[:, k].reshape(np.asarray(mats[0]).shape)
        col = [(X + X.T).ravel()]
        for H in a_mats:
            Hf = np.asarray(H, float)
            col.append((X @ Hf - Hf @ X).ravel())
        rows.append(np.concatenate(col))
    M = np.array(rows).T
    s = np.linalg.svd(M, compute_uv=False)
    return int(A.shape[1] - np.sum(s > 1e-9))
