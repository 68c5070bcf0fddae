"""Permutation groups.

``PermGroup`` is immutable once built. Derived data (stabilizer chain, element
table, conjugacy classes ...) is cached lazily on the instance; the caches are
write-once so concurrent readers observe either nothing or the final value.
"""

from __future__ import annotations

from functools import cached_property

from .. import budget
from ..errors import BudgetExceeded
from .perm import Permutation, comm, identity, inv, is_identity, mul, order as perm_order
from .schreier import StabChain


def _as_tuple(g):
    if isinstance(g, Permutation):
        return g.t
    return tuple(g)


class ElementTable:
    """Cayley graph of a small group with respect to its generators.

    Elements are numbered in breadth-first order from the identity, so
    ``parent[i]``/``via[i]`` describe a shortest word for element ``i``.
    """

    def __init__(self, gens, degree, limit):
        e = identity(degree)
        self.elements = [e]
        self.index = {e: 0}
        self.parent = [-1]
        self.via = [-1]
        self.gens = list(gens)
        right = [[] for _ in self.gens]
        elems, index = self.elements, self.index
        i = 0
        while i < len(elems):
            g = elems[i]
            for k, s in enumerate(self.gens):
                h = mul(g, s)
                j = index.get(h)
                if j is None:
                    j = len(elems)
                    if j >= limit:
                        raise BudgetExceeded("group_order", limit)
                    elems.append(h)
                    index[h] = j
                    self.parent.append(i)
                    self.via.append(k)
                right[k].append(j)
            i += 1
        self.right = right

    def __len__(self):
        return len(self.elements)

    def word(self, i):
        """Generator indices of a shortest word for element ``i``."""
        w = []
        while i:
            w.append(self.via[i])
            i = self.parent[i]
        w.reverse()
        return w

    def mul_index(self, i, j):
        return self.index[mul(self.elements[i], self.elements[j])]


class PermGroup:
    """A permutation group given by generators.

    ``semiregular=True`` declares that every point stabilizer is trivial
    (true for subgroups of a regular representation); order and membership
    then use a single orbit instead of a stabilizer chain.
    """

    def __init__(self, gens, degree=None, *, order=None, semiregular=False, name=None):
        gens = [_as_tuple(g) for g in gens]
        if degree is None:
            degree = max((len(g) for g in gens), default=1)
        self.degree = degree
        self.generators = [g if len(g) == degree else g + tuple(range(len(g), degree))
                           for g in gens]
        self.semiregular = semiregular
        self.name = name
        self._order_hint = order

    # -- basic structure -------------------------------------------------

    @cached_property
    def chain(self):
        return StabChain(self.generators, self.degree)

    @cached_property
    def _orbit0(self):
        orb = {0: identity(self.degree)}
        queue = [0]
        for q in queue:
            u = orb[q]
            for s in self.generators:
                r = s[q]
                if r not in orb:
                    orb[r] = mul(u, s)
                    queue.append(r)
        return orb

    def order(self):
        if self.semiregular:
            return len(self._orbit0)
        return self.chain.order()

    def __len__(self):
        return self.order()

    def contains(self, g):
        g = _as_tuple(g)
        if self.semiregular:
            u = self._orbit0.get(g[0])
            return u is not None and u == g
        return self.chain.contains(g)

    __contains__ = contains

    @property
    def identity(self):
        return identity(self.degree)

    def is_trivial(self):
        return all(is_identity(g) for g in self.generators)

    def is_abelian(self):
        gs = self.generators
        return all(mul(a, b) == mul(b, a) for i, a in enumerate(gs) for b in gs[i + 1:])

    def subgroup(self, gens, **kw):
        return PermGroup(gens, self.degree, semiregular=self.semiregular, **kw)

    def is_subgroup_of(self, other):
        return all(other.contains(g) for g in self.generators)

    def same_group(self, other):
        return self.order() == other.order() and self.is_subgroup_of(other)

    @cached_property
    def table(self):
        return ElementTable(self.generators, self.degree, budget.get("group_order") + 1)

    def elements(self):
        if self.order() > budget.get("group_order"):
            raise BudgetExceeded("group_order", budget.get("group_order"), self.order())
        return self.table.elements

    def random_elements(self, count, rng):
        """Deterministic pseudo-random elements (product replacement)."""
        gens = list(self.generators) or [self.identity]
        state = list(gens) * max(1, (10 + len(gens) - 1) // len(gens))
        state = state[:max(10, len(gens))]
        acc = self.identity
        for _ in range(50):
            i, j = rng.randrange(len(state)), rng.randrange(len(state))
            if i != j:
                state[i] = mul(state[i], state[j])
                acc = mul(acc, state[i])
        out = []
        for _ in range(count):
            i, j = rng.randrange(len(state)), rng.randrange(len(state))
            if i != j:
                state[i] = mul(state[i], state[j])
            acc = mul(acc, state[i])
            out.append(acc)
        return out

    # -- subgroups from closures -----------------------------------------

    def normal_closure(self, gens, within=None):
        """Smallest subgroup containing ``gens`` normalized by ``within`` (default self)."""
        conj_by = (within or self).generators
        n = self.degree
        gens = [g for g in map(_as_tuple, gens) if not is_identity(g)]
        N = PermGroup(gens, n, semiregular=self.semiregular)
        queue = list(gens)
        while queue:
            x = queue.pop()
            for g in conj_by:
                y = mul(mul(inv(g), x), g)
                if not N.contains(y):
                    gens = gens + [y]
                    N = PermGroup(gens, n, semiregular=self.semiregular)
                    queue.append(y)
        return N

    @cached_property
    def derived_subgroup(self):
        gs = self.generators
        cs = [comm(a, b) for i, a in enumerate(gs) for b in gs[i + 1:]]
        return self.normal_closure(cs)

    def is_perfect(self):
        if self.is_trivial():
            return True
        return self.derived_subgroup.order() == self.order()

    def derived_series(self):
        series = [self]
        while True:
            d = series[-1].derived_subgroup
            if d.order() == series[-1].order():
                return series
            series.append(d)

    def power_subgroup(self, k):
        """``G^k * G'`` i.e. the verbal subgroup for the abelian quotient."""
        from .perm import power
        return self.normal_closure(list(self.derived_subgroup.generators)
                                   + [power(g, k) for g in self.generators])

    def element_orders(self):
        return [perm_order(g) for g in self.elements()]

    def __repr__(self):
        if self.name:
            return f"<PermGroup {self.name} degree {self.degree}>"
        return f"<PermGroup degree {self.degree} with {len(self.generators)} generators>"


def symmetric_group(n):
    if n <= 1:
        return PermGroup([], max(n, 1), name=f"S{n}")
    gens = [tuple(list(range(1, n)) + [0]), (1, 0) + tuple(range(2, n))]
    return PermGroup(gens, n, name=f"S{n}")


def alternating_group(n):
    if n < 3:
        return PermGroup([], max(n, 1), name=f"A{n}")
    if n == 3:
        return PermGroup([(1, 2, 0)], 3, name="A3")
    c3 = (1, 2, 0) + tuple(range(3, n))
    if n % 2:
        big = tuple(list(range(1, n)) + [0])
    else:
        big = (0,) + tuple(list(range(2, n)) + [1])
    return PermGroup([big, c3], n, name=f"A{n}")


def cyclic_group(n):
    if n == 1:
        return PermGroup([], 1, name="C1")
    return PermGroup([tuple(list(range(1, n)) + [0])], n, name=f"C{n}")


def direct_product(*groups):
    """Direct product acting on disjoint point sets."""
    total = sum(G.degree for G in groups)
    gens = []
    off = 0
    for G in groups:
        for g in G.generators:
            img = list(range(total))
            for i, j in enumerate(g):
                img[off + i] = off + j
            gens.append(tuple(img))
        off += G.degree
    return PermGroup(gens, total)
