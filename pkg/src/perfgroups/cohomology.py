"""Second cohomology through tails on a confluent rewriting system.

A 2-cochain assigns a tail ``t_j`` in ``M`` to every rule ``l_j -> r_j``;
the extension then has rules ``l_j -> r_j t_j`` together with ``m f -> f m^f``.
Tails are stored as one flat vector over F_p, block ``j`` holding ``t_j``.

Reducing a word ``u l_j v`` moves the new tail past ``v``, contributing
``t_j * rho(v)``; so every reduction yields a linear expression in the tails,
and each critical pair must give the same expression on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import InvariantViolation
from .ffmod import linalg as la
from .groupcore.fpgroup import FpPresentation
from .groupcore.permgroup import PermGroup
from .rws import confluent_rws


@dataclass
class Cocycle:
    """Tail vector of length ``len(rules) * dim M``."""

    module: object
    tails: np.ndarray
    nrules: int = 0

    def __post_init__(self):
        self.tails = la.red(np.asarray(self.tails, dtype=np.int64).reshape(-1), self.module.p)
        if not self.nrules:
            self.nrules = len(self.tails) // self.module.dim

    def tail(self, j):
        a = self.module.dim
        return self.tails[j * a:(j + 1) * a]

    def is_zero(self):
        return not np.any(self.tails)

    def to_record(self):
        return {"rules": self.nrules, "dim": self.module.dim, "tails": self.tails.tolist()}


@dataclass
class CohomologyGroup:
    rws: object
    module: object
    z2_basis: list
    b2_basis: list
    h2_complement_basis: list
    _b2_space: object = field(default=None, repr=False)

    @property
    def z(self):
        return len(self.z2_basis)

    @property
    def b(self):
        return len(self.b2_basis)

    @property
    def h(self):
        return len(self.h2_complement_basis)

    @property
    def dimensions(self):
        return self.z, self.b, self.h

    def cocycle(self, coeffs):
        """Combination of the complement basis with the given coefficients."""
        p = self.module.p
        v = np.zeros(len(self.rws.rules) * self.module.dim, dtype=np.int64)
        for c, z in zip(coeffs, self.h2_complement_basis):
            v = (v + int(c) * z.tails) % p
        return Cocycle(self.module, v, len(self.rws.rules))

    def elements(self):
        """All coefficient vectors of H^2, in base-p order."""
        return list(product(range(self.module.p), repeat=self.h))

    def coordinates(self, z):
        """Coefficients of the class of ``z`` in the complement basis."""
        p = self.module.p
        v = self._b2_space.reduce(z.tails)[0]
        if not self.h:
            if np.any(v):
                raise ValueError("not a cocycle")
            return ()
        C = np.array([self._b2_space.reduce(c.tails)[0] for c in self.h2_complement_basis])
        x = la.solve_left(C, v.reshape(1, -1), p)
        if x is None:
            raise ValueError("not a cocycle")
        return tuple(int(c) for c in x[0])


# -- tails ------------------------------------------------------------------

def _module_matrices(R, M):
    if M.group is R.group:
        return M.all_matrices()
    return [M.matrix_of(g) for g in R.group.table.elements]


def reduce_with_tail(R, M, word, tails, mats=None):
    """``(normal form, collected tail)`` of ``word`` in the extension given by ``tails``."""
    mats = mats if mats is not None else _module_matrices(R, M)
    a, p = M.dim, M.p
    trace = []
    nf = R.reduce(tuple(word), trace)
    t = np.zeros(a, dtype=np.int64)
    for j, v in trace:
        t = (t + tails[j * a:(j + 1) * a] @ mats[v]) % p
    return nf, t


def _accumulate(block, trace, sign, mats, a, p):
    for j, v in trace:
        block[:, j * a:(j + 1) * a] = (block[:, j * a:(j + 1) * a] + sign * mats[v].T) % p


def _pair_conditions(R, cp, mats, a, p, nvar):
    """Linear conditions (``a`` rows over the tail variables) from one critical pair."""
    i, j = cp.rules
    l1 = R.rules[i][0]
    suffix = l1[cp.offset:]
    rest = R.rules[j][0][len(suffix):]
    t1 = [(i, R.element_index(rest))]
    t2 = [(j, R.identity_index)]
    nf1 = R.reduce(cp.reducts[0], t1)
    nf2 = R.reduce(cp.reducts[1], t2)
    if nf1 != nf2:
        raise InvariantViolation("critical pair does not resolve")
    block = np.zeros((a, nvar), dtype=np.int64)
    _accumulate(block, t1, 1, mats, a, p)
    _accumulate(block, t2, -1, mats, a, p)
    return block


def _z2_space(R, M, batch=256):
    mats = _module_matrices(R, M)
    a, p = M.dim, M.p
    nvar = len(R.rules) * a
    space = la.RowSpace(nvar, p)
    pending = []
    for cp in R.critical_pairs():
        pending.append(_pair_conditions(R, cp, mats, a, p, nvar))
        if len(pending) >= batch:
            space.add(np.vstack(pending))
            pending = []
    if pending:
        space.add(np.vstack(pending))
    return space


def is_cocycle(R, M, tails):
    mats = _module_matrices(R, M)
    a, p = M.dim, M.p
    nvar = len(R.rules) * a
    t = la.red(np.asarray(tails), p)
    for cp in R.critical_pairs():
        if np.any(_pair_conditions(R, cp, mats, a, p, nvar) @ t % p):
            return False
    return True


def two_cocycle_space(R, M, space=None):
    """Basis of ``Z^2`` as a list of :class:`Cocycle`."""
    space = space or _z2_space(R, M)
    if space.dim == 0:
        basis = la.identity(space.n)
    else:
        basis = la.right_nullspace(space.basis, M.p)
    return [Cocycle(M, v, len(R.rules)) for v in basis]


def _shift(R, word, letter, mats, a):
    """Sum over occurrences of ``letter`` of ``rho(suffix after it)``, an ``a x a`` matrix."""
    out = np.zeros((a, a), dtype=np.int64)
    e = R.identity_index
    for k in reversed(word):
        if k == letter:
            out = out + mats[e]
        e = R.left[k][e]
    return out


def _coboundary_vectors(R, M):
    mats = _module_matrices(R, M)
    a, p = M.dim, M.p
    rows = []
    for x in range(len(R.letters)):
        # rows d of each block: tail of rule j under x -> x e_d
        blocks = [(_shift(R, l, x, mats, a) - _shift(R, r, x, mats, a)) % p for l, r in R.rules]
        vec = np.hstack(blocks) if blocks else np.zeros((a, 0), dtype=np.int64)
        rows.append(vec)
    if not rows:
        return np.zeros((0, len(R.rules) * a), dtype=np.int64)
    return np.vstack(rows) % p


def two_coboundaries(R, M):
    """Basis of ``B^2``: tails induced by replacing a letter ``x`` by ``x m``."""
    space = la.RowSpace(len(R.rules) * M.dim, M.p)
    space.add(_coboundary_vectors(R, M))
    return [Cocycle(M, v, len(R.rules)) for v in space.basis]


def h2(F, M, R=None):
    """``H^2(F, M)`` as Z^2, B^2 and a complement of B^2 in Z^2."""
    if R is None:
        R = confluent_rws(F)
    p = M.p
    nvar = len(R.rules) * M.dim
    cond = _z2_space(R, M)
    z2 = two_cocycle_space(R, M, cond)
    bspace = la.RowSpace(nvar, p)
    bspace.add(_coboundary_vectors(R, M))
    # B^2 inside Z^2, checked on every coboundary basis vector
    if bspace.dim and np.any(la.red(bspace.basis @ cond.basis.T, p) if cond.dim else 0):
        raise InvariantViolation("coboundary violates a critical-pair condition")
    b2 = [Cocycle(M, v, len(R.rules)) for v in bspace.basis]
    ext = la.RowSpace(nvar, p)
    ext.add(bspace.basis)
    comp = []
    for z in z2:
        if ext.add(z.tails):
            comp.append(z)
    if len(comp) != len(z2) - len(b2):
        raise InvariantViolation("B^2 is not contained in Z^2")
    return CohomologyGroup(R, M, z2, b2, comp, bspace)


# -- extensions -------------------------------------------------------------

def _check_cocycle(R, M, z):
    if len(z.tails) != len(R.rules) * M.dim or not is_cocycle(R, M, z.tails):
        raise ValueError("tails do not form a 2-cocycle for this rewriting system")


def extension(R, M, z, check=True):
    """Presentation of the extension of ``M`` by ``R.group`` defined by ``z``.

    Generators are the letters of ``R`` followed by ``m1 .. ma``.
    """
    if check:
        _check_cocycle(R, M, z)
    nl, a, p = len(R.letters), M.dim, M.p
    names = R.alphabet + [f"m{d + 1}" for d in range(a)]

    def word(w):
        return [k + 1 for k in w]

    def mword(v):
        out = []
        for d, c in enumerate(v):
            out += [nl + d + 1] * int(c)
        return out

    def invert(w):
        return [-x for x in reversed(w)]

    rels = []
    for j, (l, r) in enumerate(R.rules):
        rels.append(word(l) + invert(word(r) + mword(z.tail(j))))
    for d in range(a):
        rels.append([nl + d + 1] * p)
        for e in range(d + 1, a):
            rels.append([nl + d + 1, nl + e + 1, -(nl + d + 1), -(nl + e + 1)])
    for k, letter in enumerate(R.letters):
        rho = M.matrix_of(letter.element)
        for d in range(a):
            rels.append([-(k + 1), nl + d + 1, k + 1] + invert(mword(rho[d])))
    return FpPresentation(names, rels)


def extension_permutations(R, M, z, check=True):
    """Regular permutation images of every letter of ``R`` and of the basis of ``M``.

    Points are pairs ``(g, v)`` encoded as ``g * p^a + v``; the normal form
    multiplication ``(g, v) x = (g x, gamma(g, x) + v rho(x))`` comes from
    reducing ``nf(g) x`` with tails. The order matches the generators of
    :func:`extension`.
    """
    if check:
        _check_cocycle(R, M, z)
    mats = _module_matrices(R, M)
    a, p = M.dim, M.p
    q = p ** a
    n = len(R.normal_form_of)
    vecs = np.array(list(product(range(p), repeat=a)), dtype=np.int64).reshape(q, a)
    weights = p ** np.arange(a - 1, -1, -1)
    perms = []
    for k, letter in enumerate(R.letters):
        rho = M.matrix_of(letter.element)
        moved = (vecs @ rho) % p
        img = np.empty(n * q, dtype=np.int64)
        for g, w in enumerate(R.normal_form_of):
            nf, t = reduce_with_tail(R, M, w + (k,), z.tails, mats)
            h = R.word_index[nf]
            img[g * q:(g + 1) * q] = h * q + ((moved + t) % p) @ weights
        perms.append(tuple(int(x) for x in img))
    for d in range(a):
        e = np.zeros(a, dtype=np.int64)
        e[d] = 1
        shifted = ((vecs + e) % p) @ weights
        img = (np.arange(n)[:, None] * q + shifted[None, :]).reshape(-1)
        perms.append(tuple(int(x) for x in img))
    return perms


def extension_group(R, M, z, check=True):
    """The extension as a permutation group in its regular action.

    Generators: the non-inverse letters, then the basis of ``M``.
    """
    perms = extension_permutations(R, M, z, check)
    keep = [k for k, letter in enumerate(R.letters) if letter.inverse_of is None]
    keep += list(range(len(R.letters), len(perms)))
    return PermGroup([perms[k] for k in keep], len(perms[0]))
