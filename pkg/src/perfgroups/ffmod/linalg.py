"""Dense linear algebra over a prime field F_p on numpy int64 arrays.

Vectors are rows; a matrix ``A`` acts on the right, ``v -> v @ A``. All
functions return reduced arrays with entries in ``0..p-1``.
"""

from __future__ import annotations

import numpy as np


def red(A, p):
    return np.mod(A, p).astype(np.int64)


def inv_mod(a, p):
    return pow(int(a) % p, p - 2, p)


def identity(n):
    return np.eye(n, dtype=np.int64)


def matmul(A, B, p):
    # int64 is safe: entries < p < 2^16 and dimensions below a few thousand
    return (A @ B) % p


def rref(A, p):
    """Reduced row echelon form. Returns ``(R, pivots)``; zero rows dropped."""
    R = red(np.array(A, dtype=np.int64, copy=True), p)
    if R.ndim == 1:
        R = R.reshape(1, -1)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * inv_mod(R[r, c], p)) % p
        col = R[:, c].copy()
        col[r] = 0
        mask = np.nonzero(col)[0]
        if len(mask):
            R[mask] = (R[mask] - np.outer(col[mask], R[r])) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A, p):
    if np.size(A) == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p):
    """Basis (as rows) of ``{v : v @ A = 0}``."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape[1] == 0:
        return identity(n)
    return right_nullspace(A.T, p)


def right_nullspace(A, p):
    """Basis (as rows) of ``{x : A @ x = 0}``."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return identity(cols)
    R, piv = rref(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(piv):
            basis[i, c] = (-R[r, f]) % p
    return basis


def inverse(A, p):
    n = A.shape[0]
    R, piv = rref(np.hstack([A, identity(n)]), p)
    if len(piv) < n or piv[n - 1] >= n:
        raise ValueError("matrix is singular")
    return R[:, n:]


def is_invertible(A, p):
    return A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def solve_left(A, B, p):
    """Some ``X`` with ``X @ A = B`` or ``None`` (rows of B in row space of A)."""
    # X A = B  <=>  A^T X^T = B^T
    m, n = A.shape
    aug = np.hstack([A.T, B.T])
    R, piv = rref(aug, p)
    if any(c >= m for c in piv):
        return None
    X = np.zeros((B.shape[0], m), dtype=np.int64)
    for r, c in enumerate(piv):
        X[:, c] = R[r, m:]
    return X % p


def in_span(basis, v, p):
    if basis.shape[0] == 0:
        return not np.any(v % p)
    return rank(np.vstack([basis, v]), p) == rank(basis, p)


def spin(vectors, mats, p, limit=None):
    """Echelonized basis of the smallest subspace containing ``vectors``
    and invariant under right multiplication by ``mats``.

    Stops early (returning the partial basis) once ``limit`` dimensions are reached.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64)) % p
    n = vectors.shape[1]
    basis = np.zeros((0, n), dtype=np.int64)
    pivots = []
    queue = []

    def add(v):
        nonlocal basis
        v = v.copy()
        for r, c in enumerate(pivots):
            if v[c]:
                v = (v - v[c] * basis[r]) % p
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            return False
        c = nz[0]
        v = (v * inv_mod(v[c], p)) % p
        # keep the basis fully reduced in the new pivot column
        col = basis[:, c] if len(basis) else np.zeros(0, dtype=np.int64)
        if len(basis):
            basis = (basis - np.outer(col, v)) % p
        basis = np.vstack([basis, v])
        pivots.append(c)
        queue.append(v)
        return True

    for v in vectors:
        add(v)
    i = 0
    while i < len(queue):
        if limit is not None and len(pivots) >= limit:
            break
        v = queue[i]
        i += 1
        for A in mats:
            add((v @ A) % p)
    return basis


def char_poly(A, p):
    """Characteristic polynomial coefficients, low degree first, monic."""
    H = hessenberg(A, p)
    n = H.shape[0]
    # polys[k] = char poly of leading k x k block (low-first coefficient lists)
    polys = [[1]]
    for k in range(1, n + 1):
        # p_k(x) = (x - h_kk) p_{k-1}(x) - sum_{i<k} h_ik * prod_{j=i+1}^{k} h_{j,j-1} p_{i-1}(x)
        a = H[k - 1, k - 1]
        prev = polys[k - 1]
        pk = [0] + list(prev)
        for j in range(len(prev)):
            pk[j] = (pk[j] - a * prev[j]) % p
        t = 1
        for i in range(k - 1, 0, -1):
            t = t * H[i, i - 1] % p
            if t == 0:
                break
            c = t * H[i - 1, k - 1] % p
            if c:
                q = polys[i - 1]
                for j in range(len(q)):
                    pk[j] = (pk[j] - c * q[j]) % p
        polys.append([int(x) for x in pk])
    return polys[n]


def hessenberg(A, p):
    """Upper Hessenberg matrix similar to ``A`` over F_p."""
    H = red(np.array(A, dtype=np.int64, copy=True), p)
    n = H.shape[0]
    for c in range(n - 2):
        nz = np.nonzero(H[c + 1:, c])[0]
        if len(nz) == 0:
            continue
        k = c + 1 + nz[0]
        if k != c + 1:
            H[[c + 1, k]] = H[[k, c + 1]]
            H[:, [c + 1, k]] = H[:, [k, c + 1]]
        piv_inv = inv_mod(H[c + 1, c], p)
        for r in range(c + 2, n):
            if H[r, c]:
                m = H[r, c] * piv_inv % p
                H[r] = (H[r] - m * H[c + 1]) % p
                H[:, c + 1] = (H[:, c + 1] + m * H[:, r]) % p
    return H


def poly_eval_matrix(coeffs, A, p):
    """``f(A)`` for ``f`` given by low-first coefficients (Horner)."""
    n = A.shape[0]
    R = np.zeros((n, n), dtype=np.int64)
    for c in reversed(coeffs):
        R = matmul(R, A, p)
        if c:
            R[np.diag_indices(n)] = (R[np.diag_indices(n)] + c) % p
    return R


def factor_poly(coeffs, p):
    """Irreducible monic factors of a polynomial over F_p, as (coeff list, multiplicity)."""
    from sympy import Poly, symbols
    x = symbols("x")
    f = Poly(list(reversed([int(c) for c in coeffs])), x, modulus=p)
    _, facs = f.factor_list()
    out = []
    for g, mult in facs:
        cs = [int(c) % p for c in g.all_coeffs()]
        lc = cs[0]
        li = inv_mod(lc, p)
        cs = [c * li % p for c in cs]
        out.append((list(reversed(cs)), mult))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def change_basis(A, B, Binv, p):
    """Matrix of ``A`` in the basis given by rows of ``B``: ``B A B^-1``."""
    return matmul(matmul(B, A, p), Binv, p)


def complete_basis(S, n, p):
    """Extend echelonized rows ``S`` to a basis of F_p^n by unit vectors."""
    if S.shape[0] == 0:
        return identity(n)
    _, piv = rref(S, p)
    extra = [i for i in range(n) if i not in set(piv)]
    E = np.zeros((len(extra), n), dtype=np.int64)
    for r, i in enumerate(extra):
        E[r, i] = 1
    return np.vstack([S % p, E])


class RowSpace:
    """Incrementally grown row space in reduced echelon form."""

    def __init__(self, n, p):
        self.n = n
        self.p = p
        self.basis = np.zeros((0, n), dtype=np.int64)
        self.pivots = []

    @property
    def dim(self):
        return len(self.pivots)

    def reduce(self, rows):
        """Rows reduced modulo the current space."""
        rows = red(np.atleast_2d(rows), self.p)
        if self.pivots:
            rows = (rows - rows[:, self.pivots] @ self.basis) % self.p
        return rows

    def add(self, rows):
        rows = self.reduce(rows)
        rows = rows[np.any(rows, axis=1)]
        if len(rows) == 0:
            return 0
        before = self.dim
        self.basis, self.pivots = rref(np.vstack([self.basis, rows]), self.p)
        return self.dim - before

    def contains(self, v):
        return not np.any(self.reduce(v))
