"""Isomorphism and automorphism computation by backtrack over generator images.

A fixed generating tuple ``X`` of ``G`` is chosen from small conjugacy
classes. Candidate images in ``H`` are filtered by class invariants of the
generators and of their pairwise products and commutators; surviving tuples
are checked against the whole Cayley graph of ``G``.
"""

from __future__ import annotations

from collections import Counter

from .. import budget
from ..errors import BudgetExceeded
from .homomorphism import GroupHomomorphism, images_define_homomorphism, table_for
from .perm import comm, conj, mul
from .permgroup import PermGroup
from .structure import class_data


def _class_key(cd, cls):
    c = cd.classes[cls]
    return (c.element_order, c.size)


def _inv_of(G, g):
    cd = class_data(G)
    return _class_key(cd, cd.class_index(g))


def class_signature(G):
    cd = class_data(G)
    return tuple(sorted(Counter(_class_key(cd, i) for i in range(len(cd.classes))).items()))


def generating_tuple(G):
    """Deterministic short generating tuple, built from small classes."""
    cache = G.__dict__.get("_gen_tuple")
    if cache is not None:
        return cache
    cd = class_data(G)
    N = G.order()
    if N == 1:
        G.__dict__["_gen_tuple"] = []
        return []
    mult = Counter(_class_key(cd, i) for i in range(len(cd.classes)))
    order = sorted(range(1, len(cd.classes)),
                   key=lambda i: (mult[_class_key(cd, i)], cd.classes[i].size, i))
    elems = G.table.elements
    for i in order:
        x = cd.classes[i].representative
        if PermGroup([x], G.degree).order() == N:
            G.__dict__["_gen_tuple"] = [x]
            return [x]
    pairs = sorted(((mult[_class_key(cd, a)] * cd.classes[b].size, a, b)
                    for a in order for b in order))
    for _, a, b in pairs[:60]:
        x = cd.classes[a].representative
        for tries, j in enumerate(cd.members[b]):
            if tries >= 40:
                break
            y = elems[j]
            if PermGroup([x, y], G.degree).order() == N:
                G.__dict__["_gen_tuple"] = [x, y]
                return [x, y]
    # greedy fallback for groups needing more generators
    X = [cd.classes[order[0]].representative]
    S = PermGroup(X, G.degree)
    while S.order() < N:
        for i in sorted(order, key=lambda i: (cd.classes[i].size, i)):
            added = False
            for j in cd.members[i]:
                y = elems[j]
                if not S.contains(y):
                    X.append(y)
                    S = PermGroup(X, G.degree)
                    added = True
                    break
            if added:
                break
    G.__dict__["_gen_tuple"] = X
    return X


class _Search:
    """Enumerate homomorphic bijective image tuples ``Y`` of ``X`` in ``H``."""

    def __init__(self, G, H):
        self.G, self.H = G, H
        self.X = generating_tuple(G)
        self.table = table_for(G, self.X)
        cdG = class_data(G)
        cdH = class_data(H)
        self.cdH = cdH
        X = self.X
        self.gen_inv = [_inv_of(G, x) for x in X]
        self.pair_inv = {}
        for i in range(len(X)):
            for j in range(i):
                self.pair_inv[i, j] = (_inv_of(G, mul(X[j], X[i])), _inv_of(G, comm(X[j], X[i])),
                                       _inv_of(G, mul(mul(X[j], X[j]), X[i])))
        by_key = {}
        for c in range(len(cdH.classes)):
            by_key.setdefault(_class_key(cdH, c), []).append(c)
        self.first_candidates = [cdH.classes[c].representative
                                 for c in by_key.get(self.gen_inv[0], [])] if X else []
        elemsH = H.table.elements
        self.other_candidates = []
        for k in range(1, len(X)):
            cands = []
            for c in by_key.get(self.gen_inv[k], []):
                cands.extend(elemsH[j] for j in cdH.members[c])
            self.other_candidates.append(cands)
        del cdG

    def _ok_pair(self, Y, k, y):
        H = self.H
        for j in range(k):
            want = self.pair_inv[k, j]
            yj = Y[j]
            if _inv_of(H, mul(yj, y)) != want[0]:
                return False
            if _inv_of(H, comm(yj, y)) != want[1]:
                return False
            if _inv_of(H, mul(mul(yj, yj), y)) != want[2]:
                return False
        return True

    def tuples(self, first=None):
        """Yield candidate tuples passing the cheap filters."""
        X = self.X
        if not X:
            yield []
            return
        firsts = self.first_candidates if first is None else [first]
        k = len(X)
        Y = [None] * k

        def rec(i):
            if i == k:
                yield list(Y)
                return
            for y in self.other_candidates[i - 1]:
                if self._ok_pair(Y, i, y):
                    Y[i] = y
                    yield from rec(i + 1)

        for y0 in firsts:
            Y[0] = y0
            yield from rec(1)

    def check(self, Y):
        """Element images if ``X -> Y`` is an isomorphism, else ``None``."""
        phi = images_define_homomorphism(self.table, Y, collect=True)
        if phi is None:
            return None
        if len(set(phi)) != len(phi):
            return None
        return phi

    def homomorphism(self, phi):
        """Package element images (indexed by our X-table) as a hom on G.generators."""
        idx = self.table.index
        return GroupHomomorphism(self.G, self.H, [phi[idx[g]] for g in self.G.generators])


def _check_cap(G):
    cap = budget.get("group_order")
    if G.order() > cap:
        raise BudgetExceeded("group_order", cap, G.order())


def isomorphic(G, H):
    """An isomorphism ``G -> H`` or ``None``."""
    _check_cap(G)
    _check_cap(H)
    if G.order() != H.order():
        return None
    if G.order() == 1:
        return GroupHomomorphism(G, H, [H.identity] * len(G.generators))
    if class_signature(G) != class_signature(H):
        return None
    s = _Search(G, H)
    for Y in s.tuples():
        phi = s.check(Y)
        if phi is not None:
            return s.homomorphism(phi)
    return None


class AutomorphismGroup:
    """``Aut(G)`` as a permutation group on an invariant generating set ``omega``.

    ``omega`` is the union of all classes sharing class invariants with the
    classes of the generating tuple, so every automorphism permutes it.
    """

    def __init__(self, G, omega, perm_group, generators, X, table):
        self.group = G
        self.omega = omega
        self.omega_index = {g: i for i, g in enumerate(omega)}
        self.perm_group = perm_group
        self.generators = generators
        self._X = X
        self._table = table

    def order(self):
        return self.perm_group.order()

    def to_homomorphism(self, a):
        """Automorphism of ``G`` for a permutation ``a`` of ``omega``."""
        G = self.group
        Y = [self.omega[a[self.omega_index[x]]] for x in self._X]
        phi = images_define_homomorphism(self._table, Y, collect=True)
        idx = self._table.index
        return GroupHomomorphism(G, G, [phi[idx[g]] for g in G.generators])

    def to_permutation(self, hom):
        return tuple(self.omega_index[hom(w)] for w in self.omega)

    def inner(self, g):
        return tuple(self.omega_index[conj(w, g)] for w in self.omega)


def automorphism_group(G):
    """Generators of ``Aut(G)`` plus its faithful action on an invariant set."""
    _check_cap(G)
    cached = G.__dict__.get("_aut")
    if cached is not None:
        return cached
    cd = class_data(G)
    elems = G.table.elements
    s = _Search(G, G)
    X = s.X
    keys = {_class_key(cd, cd.class_index(x)) for x in X}
    omega = [elems[j] for c in range(len(cd.classes)) if _class_key(cd, c) in keys
             for j in cd.members[c]]
    if not omega:
        omega = [G.identity]
    oidx = {g: i for i, g in enumerate(omega)}
    tidx = s.table.index

    def perm_of(phi):
        return tuple(oidx[phi[tidx[w]]] for w in omega)

    perms = []
    for g in G.generators:
        p = tuple(oidx[conj(w, g)] for w in omega)
        if p not in perms:
            perms.append(p)
    homs = [GroupHomomorphism(G, G, [conj(x, g) for x in G.generators]) for g in G.generators]
    xpos = tuple(oidx[x] for x in X)

    def orbit(gens):
        seen = {xpos}
        queue = [xpos]
        for t in queue:
            for a in gens:
                u = tuple(a[i] for i in t)
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
                    if len(seen) > budget.get("aut_order"):
                        raise BudgetExceeded("aut_order", budget.get("aut_order"))
        return seen

    orb = orbit(perms)
    for Y in s.tuples():
        key = tuple(oidx[y] for y in Y)
        if key in orb:
            continue
        phi = s.check(Y)
        if phi is None:
            continue
        p = perm_of(phi)
        perms.append(p)
        homs.append(s.homomorphism(phi))
        orb = orbit(perms)
    A = PermGroup(perms, len(omega))
    res = AutomorphismGroup(G, omega, A, homs, X, s.table)
    G.__dict__["_aut"] = res
    return res
