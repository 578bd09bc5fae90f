"""Exact linear algebra over Q and Q(i).

Matrices are numpy object arrays holding ``Fraction`` or ``Gaussian``
entries. Every routine here is exact; nothing is rounded.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
import sympy as sp


class Gaussian:
    """A Gaussian rational ``re + im*i`` with ``Fraction`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def lift(x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        return Gaussian(x, 0)

    def __add__(self, other):
        o = _as_gaussian(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_gaussian(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _as_gaussian(other)
        if o is NotImplemented:
            return o
        return Gaussian(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = _as_gaussian(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_gaussian(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        return Gaussian((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = _as_gaussian(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _as_gaussian(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


def _as_gaussian(x):
    if isinstance(x, Gaussian):
        return x
    if isinstance(x, (int, Fraction)):
        return Gaussian(x, 0)
    return NotImplemented


I = Gaussian(0, 1)


def frac(x) -> Fraction:
    """Parse an exact rational from int, Fraction or a ``"p/q"`` string."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, sp.Rational):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"not an exact rational: {x!r}")


def matrix(rows: Iterable[Iterable], field=Fraction) -> np.ndarray:
    rows = [list(r) for r in rows]
    n = len(rows)
    m = len(rows[0]) if n else 0
    out = np.empty((n, m), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != m:
            raise ValueError("ragged matrix")
        for j, v in enumerate(r):
            out[i, j] = field(v) if field is Fraction else Gaussian.lift(v)
    return out


def zeros(shape, zero=Fraction(0)) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(zero)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def to_gaussian(A: np.ndarray) -> np.ndarray:
    out = np.empty(A.shape, dtype=object)
    for idx, v in np.ndenumerate(A):
        out[idx] = Gaussian.lift(v)
    return out


def to_float(A: np.ndarray) -> np.ndarray:
    if any(isinstance(v, Gaussian) for v in A.flat):
        return np.array([complex(v) for v in A.flat], dtype=complex).reshape(A.shape)
    return np.array([float(v) for v in A.flat], dtype=float).reshape(A.shape)


def is_zero(A: np.ndarray) -> bool:
    return not any(bool(v) for v in A.flat)


def rref(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = np.array(A, dtype=object, copy=True)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if R[i, c]), None)
        if p is None:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        piv = R[r, c]
        R[r] = [v / piv for v in R[r]]
        for i in range(rows):
            if i != r and R[i, c]:
                f = R[i, c]
                R[i] = R[i] - f * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return len(rref(A)[1])


def nullspace(A: np.ndarray) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as the columns of the returned matrix."""
    rows, cols = A.shape
    zero = _zero_like(A)
    one = zero + 1
    if rows == 0:
        out = zeros((cols, cols), zero)
        for i in range(cols):
            out[i, i] = one
        return out
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    out = zeros((cols, len(free)), zero)
    for k, f in enumerate(free):
        out[f, k] = one
        for i, p in enumerate(pivots):
            out[p, k] = -R[i, f]
    return out


def _zero_like(A: np.ndarray):
    for v in A.flat:
        if isinstance(v, Gaussian):
            return Gaussian(0)
    return Fraction(0)


def solve(A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of ``A x = b`` (b may be a matrix), or None if inconsistent."""
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    rows, cols = A.shape
    aug = np.concatenate([A, B], axis=1)
    R, pivots = rref(aug)
    if any(p >= cols for p in pivots):
        return None
    zero = _zero_like(aug)
    x = zeros((cols, B.shape[1]), zero)
    for i, p in enumerate(pivots):
        x[p] = R[i, cols:]
    return x[:, 0] if vec else x


def inverse(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    eye = identity(n)
    if isinstance(_zero_like(A), Gaussian):
        eye = to_gaussian(eye)
    x = solve(A, eye)
    if x is None or rank(A) < n:
        raise ZeroDivisionError("singular matrix")
    return x


def span_basis(vectors: np.ndarray) -> np.ndarray:
    """Canonical basis (columns) of the column span: transposed RREF of the row form."""
    if vectors.shape[1] == 0:
        return vectors
    R, pivots = rref(vectors.T)
    return np.array(R[: len(pivots)].T, dtype=object)


def coordinates(basis: np.ndarray, v: np.ndarray) -> np.ndarray | None:
    return solve(basis, v)


def intersect(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Basis (columns) of the intersection of two column spans."""
    if U.shape[1] == 0 or V.shape[1] == 0:
        return zeros((U.shape[0], 0), _zero_like(U))
    K = nullspace(np.concatenate([U, -V], axis=1))
    return span_basis(U.dot(K[: U.shape[1]]))


def contains(U: np.ndarray, v: np.ndarray) -> bool:
    if U.shape[1] == 0:
        return is_zero(v)
    return solve(U, v) is not None


def sympy_matrix(A: np.ndarray) -> sp.Matrix:
    def conv(v):
        if isinstance(v, Gaussian):
            return sp.Rational(v.re.numerator, v.re.denominator) + sp.I * sp.Rational(
                v.im.numerator, v.im.denominator
            )
        v = Fraction(v)
        return sp.Rational(v.numerator, v.denominator)

    return sp.Matrix(A.shape[0], A.shape[1], [conv(v) for v in A.flat])


_x = sp.Symbol("x")


def charpoly(A: np.ndarray) -> sp.Poly:
    return sympy_matrix(A).charpoly(_x)


def _sympy_to_gaussian(r) -> Gaussian:
    re, im = sp.re(r), sp.im(r)
    if not (re.is_Rational and im.is_Rational):
        raise ValueError(f"root {r} is not a Gaussian rational")
    return Gaussian(frac(re), frac(im))


class IrrationalSpectrum(ValueError):
    """Raised when an eigenvalue lies outside the requested number field."""

    def __init__(self, message: str, polynomial: str):
        super().__init__(message)
        self.polynomial = polynomial


def eigenvalues(A: np.ndarray, gaussian: bool = False) -> dict:
    """Eigenvalues with algebraic multiplicity, requiring them to lie in Q (or Q(i))."""
    p = charpoly(A)
    _, factors = sp.factor_list(p.as_expr(), _x, gaussian=gaussian)
    out: dict = {}
    for f, mult in factors:
        fp = sp.Poly(f, _x)
        if fp.degree() != 1:
            field = "Q(i)" if gaussian else "Q"
            raise IrrationalSpectrum(f"characteristic polynomial does not split over {field}", str(p.as_expr()))
        a, b = fp.all_coeffs()
        root = -b / a
        val = _sympy_to_gaussian(root) if gaussian else frac(root)
        out[val] = out.get(val, 0) + mult
    return out


def real_roots_only(p: sp.Poly) -> bool:
    q = p.sqf_part()
    return q.count_roots() == q.degree()


def imaginary_semisimple(A: np.ndarray) -> bool:
    """True iff A (rational) is diagonalizable over C with purely imaginary spectrum.

    Works exactly: the squarefree part q of the characteristic polynomial must
    annihilate A, and q(x) = x^e u(x^2) with every root of u real and negative.
    """
    p = charpoly(A)
    q = sp.quo(p, sp.gcd(p, p.diff(_x)))
    if not is_zero(_poly_eval(q, A)):
        return False
    coeffs = q.all_coeffs()[::-1]
    e = next(i for i, c in enumerate(coeffs) if c != 0)
    rest = coeffs[e:]
    if any(c != 0 for c in rest[1::2]):
        return False
    if e > 1:
        return False
    t = sp.Symbol("t")
    u = sp.Poly(sum(c * t ** (k // 2) for k, c in enumerate(rest) if k % 2 == 0), t)
    if u.degree() == 0:
        return True
    # u is squarefree here, so count_roots counts each root once
    return u.count_roots(-sp.oo, 0) == u.degree() and u.eval(0) != 0


def real_semisimple(A: np.ndarray) -> bool:
    """True iff A (rational) is diagonalizable over R."""
    p = charpoly(A)
    q = sp.quo(p, sp.gcd(p, p.diff(_x)))
    return is_zero(_poly_eval(q, A)) and real_roots_only(q)


def _poly_eval(q: sp.Poly, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    out = zeros((n, n))
    for c in q.all_coeffs():
        out = out.dot(A) + frac(c) * identity(n)
    return out


def semisimple_part(A: np.ndarray) -> np.ndarray:
    """Semisimple part of the Jordan-Chevalley decomposition of a rational matrix.

    Newton's iteration S <- S - q(S) q'(S)^-1 on the squarefree part q of the
    characteristic polynomial terminates exactly after O(log n) steps.
    """
    p = charpoly(A)
    q = sp.quo(p, sp.gcd(p, p.diff(_x)))
    dq = q.diff(_x)
    S = np.array(A, dtype=object, copy=True)
    for _ in range(A.shape[0] + 1):
        qS = _poly_eval(q, S)
        if is_zero(qS):
            return S
        S = S - qS.dot(inverse(_poly_eval(dq, S)))
    raise ArithmeticError("Newton iteration for the semisimple part did not terminate")


def is_nilpotent(A: np.ndarray) -> bool:
    n = A.shape[0]
    P = identity(n)
    for _ in range(n):
        P = P.dot(A)
        if is_zero(P):
            return True
    return is_zero(P)


def inertia(S: np.ndarray) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of an exact symmetric matrix via congruence."""
    M = np.array(S, dtype=object, copy=True)
    n = M.shape[0]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if M[i, i]), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and M[i, j]), None)
            if pair is None:
                break
            i, j = pair
            # x_i <- x_i + x_j makes the (i,i) entry 2 M[i,j] != 0
            M[i, :] = M[i, :] + M[j, :]
            M[:, i] = M[:, i] + M[:, j]
            piv = i
        d = M[piv, piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for k in active:
            if M[k, piv]:
                f = M[k, piv] / d
                M[k, :] = M[k, :] - f * M[piv, :]
                M[:, k] = M[:, k] - f * M[:, piv]
    return pos, neg, n - pos - neg


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A.dot(B) - B.dot(A)


def trace(A: np.ndarray):
    return reduce(lambda a, b: a + b, (A[i, i] for i in range(A.shape[0])), Fraction(0))


def flatten_matrices(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Stack matrices as columns of vectorised entries."""
    if not mats:
        return zeros((0, 0))
    return np.array([m.reshape(-1) for m in mats], dtype=object).T


def rationalize(x: float, max_denominator: int = 10**6, tol: float = 1e-9) -> Fraction | None:
    f = Fraction(x).limit_denominator(max_denominator)
    if abs(float(f) - x) > tol * max(1.0, abs(x)):
        return None
    return f
