"""MeatAxe: splitting, irreducibility certificates, chopping and isomorphism.

Random elements of the group algebra are drawn from a fixed seeded sequence
of words so that the same word can be replayed in a second module, which is
what the standard-basis isomorphism test needs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..errors import InvariantViolation
from . import linalg as la
from .module import ModuleMap

MAX_WORDS = 400


class _Words:
    """Deterministic sequence of group-algebra elements for one module."""

    def __init__(self, mats, p, seed=12345):
        self.p = p
        self.pool = list(mats)
        self.rng = random.Random(seed)
        self.specs = []
        self.ngens = len(mats)

    def _grow(self):
        i = self.rng.randrange(len(self.pool))
        j = self.rng.randrange(len(self.pool))
        self.specs.append(("prod", i, j))
        self.pool.append(la.matmul(self.pool[i], self.pool[j], self.p))

    def word(self, t):
        """The ``t``-th algebra element: a short random combination of the pool."""
        while len(self.specs) <= t:
            self._grow()
        rng = random.Random(1000 + t)
        n = self.ngens + t + 1
        terms = [(rng.randrange(n), rng.randrange(1, self.p)) for _ in range(min(3, n))]
        A = np.zeros_like(self.pool[0])
        for s, c in terms:
            A = (A + c * self.pool[s]) % self.p
        return A, (t, terms)


def evaluate_word(mats, p, spec):
    """Replay word ``spec`` (from ``_Words.word``) on another set of matrices."""
    t, terms = spec
    w = _Words(mats, p)
    while len(w.specs) <= t:
        w._grow()
    A = np.zeros_like(mats[0])
    for s, c in terms:
        A = (A + c * w.pool[s]) % p
    return A


def standard_basis(v, mats, p):
    """Spin ``v`` recording how each basis vector arose: ``(basis, recipe)``.

    ``recipe[k] = (i, g)`` means ``basis[k] = basis[i] @ mats[g]``.
    """
    d = len(v)
    basis = [np.asarray(v, dtype=np.int64) % p]
    recipe = [None]
    ech = la.spin(basis[0], [], p)
    i = 0
    while i < len(basis) and len(basis) < d:
        for g, A in enumerate(mats):
            w = (basis[i] @ A) % p
            if not la.in_span(ech, w, p):
                basis.append(w)
                recipe.append((i, g))
                ech = la.rref(np.vstack([ech, w]), p)[0]
                if len(basis) == d:
                    break
        i += 1
    return np.array(basis), recipe


def replay_basis(v, mats, p, recipe):
    out = [np.asarray(v, dtype=np.int64) % p]
    for step in recipe[1:]:
        i, g = step
        out.append((out[i] @ mats[g]) % p)
    return np.array(out)


@dataclass
class Certificate:
    """Evidence of irreducibility, reusable for isomorphism tests."""

    word: tuple
    factor: list          # irreducible polynomial, low-first coefficients
    null_basis: np.ndarray
    basis: np.ndarray     # standard basis spun from null_basis[0]
    recipe: list


def _nullity_test(M, A, f):
    p = M.p
    fA = la.poly_eval_matrix(f, A, p)
    return fA, la.nullspace(fA, p)


def find_submodule(M):
    """Proper nonzero invariant subspace of ``M`` (echelon rows) or a certificate.

    Returns ``(subspace, None)`` or ``(None, Certificate)``.
    """
    cached = M._cache.get("meataxe")
    if cached is not None:
        return cached
    p, d = M.p, M.dim
    if d == 1:
        cert = Certificate(None, [0, 1], la.identity(1), la.identity(1), [None])
        M._cache["meataxe"] = (None, cert)
        return None, cert
    words = _Words(M.matrices, p)
    best = None
    for t in range(MAX_WORDS):
        A, spec = words.word(t)
        for f, _ in la.factor_poly(la.char_poly(A, p), p):
            if best is not None and len(f) - 1 >= len(best.factor) - 1:
                continue
            fA, N = _nullity_test(M, A, f)
            S = M.spin(N[0])
            if S.shape[0] < d:
                M._cache["meataxe"] = (S, None)
                return S, None
            if N.shape[0] != len(f) - 1:
                continue
            # Norton: the transposed side must spin up as well
            W = la.right_nullspace(fA, p)
            ST = la.spin(W[0], [m.T for m in M.matrices], p)
            if ST.shape[0] < d:
                S = la.rref(la.nullspace(ST.T, p), p)[0]
                M._cache["meataxe"] = (S, None)
                return S, None
            B, recipe = standard_basis(N[0], M.matrices, p)
            best = Certificate(spec, f, N, B, recipe)
            break
        if best is not None and (len(best.factor) == 2 or t > 20):
            M._cache["meataxe"] = (None, best)
            return None, best
    if best is not None:
        M._cache["meataxe"] = (None, best)
        return None, best
    raise InvariantViolation("MeatAxe did not reach a decision")


def is_irreducible(M):
    return find_submodule(M)[0] is None


def composition_factors(M):
    """Irreducible composition factors (with repetition), bottom to top."""
    S, _ = find_submodule(M)
    if S is None:
        return [M]
    sub, quo = M.split(S)
    return composition_factors(sub) + composition_factors(quo)


def chop(M):
    """Composition factors of ``M`` up to isomorphism, as ``[(factor, multiplicity)]``."""
    out = []
    for X in composition_factors(M):
        for i, (Y, k) in enumerate(out):
            if module_isomorphism(X, Y) is not None:
                out[i] = (Y, k + 1)
                break
        else:
            out.append((X, 1))
    return out


def _vectors(N, p):
    """All nonzero vectors in the row space of ``N``."""
    for coeffs in product(range(p), repeat=N.shape[0]):
        if any(coeffs):
            yield (np.array(coeffs, dtype=np.int64) @ N) % p


def _same_action(B1, mats1, B2, mats2, p):
    B1i = la.inverse(B1, p)
    B2i = la.inverse(B2, p)
    return all(np.array_equal(la.change_basis(a, B1, B1i, p), la.change_basis(b, B2, B2i, p))
               for a, b in zip(mats1, mats2))


def module_isomorphism(M1, M2):
    """An explicit isomorphism ``M1 -> M2`` or ``None``."""
    if M1 is M2:
        return ModuleMap(M1, M2, la.identity(M1.dim))
    if M1.p != M2.p or M1.dim != M2.dim or len(M1.matrices) != len(M2.matrices):
        return None
    p = M1.p
    if M1.dim == 1:
        if all(np.array_equal(a, b) for a, b in zip(M1.matrices, M2.matrices)):
            return ModuleMap(M1, M2, la.identity(1))
        return None
    S1, cert = find_submodule(M1)
    if S1 is not None:
        return _general_isomorphism(M1, M2)
    if not is_irreducible(M2):
        return None
    A2 = evaluate_word(M2.matrices, p, cert.word)
    fA2 = la.poly_eval_matrix(cert.factor, A2, p)
    N2 = la.nullspace(fA2, p)
    if N2.shape[0] != cert.null_basis.shape[0]:
        return None
    for w in _vectors(N2, p):
        B2 = replay_basis(w, M2.matrices, p, cert.recipe)
        if not la.is_invertible(B2, p):
            continue
        if _same_action(cert.basis, M1.matrices, B2, M2.matrices, p):
            X = la.matmul(la.inverse(cert.basis, p), B2, p)
            return ModuleMap(M1, M2, X)
    return None


def hom_space(M1, M2):
    """Basis of ``Hom(M1, M2)`` by solving the full intertwiner system (the oracle)."""
    p = M1.p
    a, b = M1.dim, M2.dim
    # unknown X (a x b) flattened row-major; equations A X - X B = 0
    blocks = []
    Ib = la.identity(b)
    Ia = la.identity(a)
    for A, B in zip(M1.matrices, M2.matrices):
        blocks.append((np.kron(A, Ib) - np.kron(Ia, B.T)) % p)
    system = np.vstack(blocks)
    sol = la.right_nullspace(system, p)
    return [s.reshape(a, b) for s in sol]


def _general_isomorphism(M1, M2, tries=200):
    """Isomorphism between possibly reducible modules via the Hom space."""
    p = M1.p
    H = hom_space(M1, M2)
    if not H:
        return None
    if p ** len(H) <= 4096:
        for coeffs in product(range(p), repeat=len(H)):
            X = sum(c * h for c, h in zip(coeffs, H)) % p
            if la.is_invertible(X, p):
                return ModuleMap(M1, M2, X)
        return None
    rng = random.Random(7)
    for _ in range(tries):
        X = sum(rng.randrange(p) * h for h in H) % p
        if la.is_invertible(X, p):
            return ModuleMap(M1, M2, X)
    # composition factors differ => certainly not isomorphic
    return None


def endomorphism_basis(M):
    """Basis of ``End(M)`` for irreducible ``M`` (a field F_{p^e})."""
    cached = M._cache.get("end")
    if cached is not None:
        return cached
    S, cert = find_submodule(M)
    if S is not None:
        raise ValueError("module is reducible")
    p, d = M.p, M.dim
    if d == 1:
        M._cache["end"] = [la.identity(1)]
        return M._cache["end"]
    Bi = la.inverse(cert.basis, p)
    Xs = [la.matmul(Bi, replay_basis(u, M.matrices, p, cert.recipe), p) for u in cert.null_basis]
    cols = []
    for X in Xs:
        cols.append(np.concatenate([((A @ X - X @ A) % p).reshape(-1) for A in M.matrices]))
    C = np.array(cols).T % p
    sol = la.right_nullspace(C, p)
    basis = [sum(int(c) * X for c, X in zip(s, Xs)) % p for s in sol]
    M._cache["end"] = basis
    return basis


def endomorphism_degree(M):
    return len(endomorphism_basis(M))


def is_absolutely_irreducible(M):
    return is_irreducible(M) and endomorphism_degree(M) == 1


def module_automorphisms(M):
    """A single generator of ``Aut(M) = End(M)^*`` for irreducible ``M``."""
    if not is_irreducible(M):
        raise ValueError("module_automorphisms needs an irreducible module")
    p = M.p
    basis = endomorphism_basis(M)
    e = len(basis)
    target = p ** e - 1
    for coeffs in product(range(p), repeat=e):
        if not any(coeffs):
            continue
        X = sum(c * B for c, B in zip(coeffs, basis)) % p
        m = ModuleMap(M, M, X)
        if m.order() == target:
            return [m]
    raise InvariantViolation("endomorphism ring is not a field")
