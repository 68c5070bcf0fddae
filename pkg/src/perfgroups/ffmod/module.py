"""Modules over F_p for permutation groups, given by one matrix per generator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """A dense matrix over F_p (external face of the numpy arrays used inside)."""

    entries: np.ndarray
    p: int

    def __post_init__(self):
        object.__setattr__(self, "entries", la.red(np.atleast_2d(self.entries), self.p))

    @property
    def shape(self):
        return self.entries.shape

    def __matmul__(self, other):
        return FpMatrix(la.matmul(self.entries, other.entries, self.p), self.p)

    def __eq__(self, other):
        return (isinstance(other, FpMatrix) and self.p == other.p
                and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.p, self.entries.tobytes(), self.entries.shape))

    def inverse(self):
        return FpMatrix(la.inverse(self.entries, self.p), self.p)

    def rank(self):
        return la.rank(self.entries, self.p)

    def tolist(self):
        return self.entries.tolist()


class FpModule:
    """A right F_p G-module: ``matrices[i]`` is the action of ``group.generators[i]``."""

    def __init__(self, group, p, matrices, name=None):
        mats = [la.red(np.asarray(m, dtype=np.int64), p) for m in matrices]
        if len(mats) != len(group.generators):
            raise ValueError("need one matrix per group generator")
        if not mats:
            raise ValueError("group must have generators")
        d = mats[0].shape[0]
        if d < 1 or any(m.shape != (d, d) for m in mats):
            raise ValueError("action matrices must be square of equal size")
        self.group = group
        self.p = p
        self.matrices = mats
        self.dim = d
        self.name = name
        self._cache = {}

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<FpModule{tag} dim {self.dim} over F{self.p}>"

    # -- element action ----------------------------------------------------

    def all_matrices(self):
        """Matrix of every element, indexed like ``group.table.elements``."""
        mats = self._cache.get("all")
        if mats is None:
            tab = self.group.table
            p = self.p
            mats = [la.identity(self.dim)]
            for j in range(1, len(tab)):
                mats.append(la.matmul(mats[tab.parent[j]], self.matrices[tab.via[j]], p))
            self._cache["all"] = mats
        return mats

    def matrix_of(self, g):
        tab = self.group.table
        j = tab.index[tuple(g)]
        if "all" in self._cache or self.dim <= 16:
            return self.all_matrices()[j]
        m = la.identity(self.dim)
        for k in tab.word(j):
            m = la.matmul(m, self.matrices[k], self.p)
        return m

    def is_representation(self):
        """True if the matrices satisfy every relation of the group (Cayley-graph check)."""
        tab = self.group.table
        mats = self.all_matrices()
        for k, A in enumerate(self.matrices):
            right = tab.right[k]
            for i in range(len(tab)):
                if not np.array_equal(la.matmul(mats[i], A, self.p), mats[right[i]]):
                    return False
        return True

    # -- constructions -----------------------------------------------------

    def dual(self):
        p = self.p
        return FpModule(self.group, p, [la.inverse(m, p).T.copy() for m in self.matrices])

    def tensor(self, other):
        p = self.p
        return FpModule(self.group, p, [np.kron(a, b) % p for a, b in zip(self.matrices, other.matrices)])

    def twist(self, images):
        """``M_kappa``: generator ``i`` acts as the matrix of ``images[i]``."""
        return FpModule(self.group, self.p, [self.matrix_of(g) for g in images])

    def conjugate(self, T):
        """Same module written in the basis given by the rows of ``T``."""
        p = self.p
        Ti = la.inverse(T, p)
        return FpModule(self.group, p, [la.change_basis(m, T, Ti, p) for m in self.matrices])

    def split(self, S):
        """Submodule and quotient for an invariant echelonized subspace ``S``."""
        p, d = self.p, self.dim
        k = S.shape[0]
        B = la.complete_basis(S, d, p)
        Bi = la.inverse(B, p)
        mats = [la.change_basis(m, B, Bi, p) for m in self.matrices]
        sub = FpModule(self.group, p, [m[:k, :k] for m in mats])
        quo = FpModule(self.group, p, [m[k:, k:] for m in mats])
        return sub, quo

    def spin(self, vectors, limit=None):
        return la.spin(vectors, self.matrices, self.p, limit)

    def fixed_points(self):
        """Basis of the invariants ``{v : v g = v for all g}``."""
        p, d = self.p, self.dim
        eqs = np.hstack([(m - la.identity(d)) % p for m in self.matrices])
        return la.nullspace(eqs, p)

    def is_trivial(self):
        return all(np.array_equal(m, la.identity(self.dim)) for m in self.matrices)

    def kernel(self):
        """Kernel of the action as a normal subgroup of the group."""
        from ..groupcore.permgroup import PermGroup
        G = self.group
        mats = self.all_matrices()
        I = la.identity(self.dim)
        K = PermGroup([], G.degree)
        gens = []
        for g, m in zip(G.table.elements, mats):
            if np.array_equal(m, I) and not K.contains(g):
                gens.append(g)
                K = PermGroup(gens, G.degree)
        return K

    # -- serialization -----------------------------------------------------

    def to_record(self):
        return {"p": self.p, "dim": self.dim,
                "matrices": [m.reshape(-1).tolist() for m in self.matrices]}

    @classmethod
    def from_record(cls, group, rec):
        d = rec["dim"]
        return cls(group, rec["p"], [np.array(m, dtype=np.int64).reshape(d, d)
                                     for m in rec["matrices"]])


def trivial_module(group, p, dim=1):
    return FpModule(group, p, [la.identity(dim) for _ in group.generators], name="trivial")


def permutation_module(group, p, images=None, degree=None):
    """Permutation module of an action given by images of the generators.

    Defaults to the natural action of ``group`` on its points.
    """
    if images is None:
        images, degree = group.generators, group.degree
    degree = degree or len(images[0])
    mats = []
    for g in images:
        m = np.zeros((degree, degree), dtype=np.int64)
        m[np.arange(degree), list(g)] = 1
        mats.append(m)
    return FpModule(group, p, mats, name="permutation")


@dataclass
class ModuleMap:
    """A module homomorphism ``source -> target`` acting on row vectors."""

    source: FpModule
    target: FpModule
    matrix: np.ndarray

    def intertwines(self):
        p = self.source.p
        X = self.matrix
        return all(np.array_equal(la.matmul(a, X, p), la.matmul(X, b, p))
                   for a, b in zip(self.source.matrices, self.target.matrices))

    def intertwines_elements(self, elements):
        p = self.source.p
        X = self.matrix
        return all(np.array_equal(la.matmul(self.source.matrix_of(g), X, p),
                                  la.matmul(X, self.target.matrix_of(g), p)) for g in elements)

    def is_isomorphism(self):
        return la.is_invertible(self.matrix, self.source.p)

    def inverse(self):
        return ModuleMap(self.target, self.source, la.inverse(self.matrix, self.source.p))

    def compose(self, other):
        """``self`` then ``other``."""
        return ModuleMap(self.source, other.target,
                         la.matmul(self.matrix, other.matrix, self.source.p))

    def order(self):
        p = self.source.p
        X = self.matrix
        I = la.identity(X.shape[0])
        Y = X.copy()
        k = 1
        while not np.array_equal(Y, I):
            Y = la.matmul(Y, X, p)
            k += 1
        return k
