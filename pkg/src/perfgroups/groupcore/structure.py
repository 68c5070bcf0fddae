"""Conjugacy classes, normal subgroups and factor groups of small groups."""

from __future__ import annotations

from dataclasses import dataclass

from .. import budget
from ..errors import BudgetExceeded
from .perm import conj, identity, mul, order as perm_order
from .permgroup import PermGroup


@dataclass(frozen=True)
class ConjugacyClass:
    representative: tuple
    size: int
    centralizer_order: int
    element_order: int


class ClassData:
    """Conjugacy classes of ``G`` plus a map from element index to class."""

    def __init__(self, G):
        if G.order() > budget.get("group_order"):
            raise BudgetExceeded("group_order", budget.get("group_order"), G.order())
        tab = G.table
        elems, index = tab.elements, tab.index
        gens = G.generators
        cls_of = [-1] * len(elems)
        classes = []
        members = []
        for i, e in enumerate(elems):
            if cls_of[i] >= 0:
                continue
            c = len(classes)
            cls_of[i] = c
            orbit = [i]
            for j in orbit:
                x = elems[j]
                for g in gens:
                    k = index[conj(x, g)]
                    if cls_of[k] < 0:
                        cls_of[k] = c
                        orbit.append(k)
            n = len(orbit)
            classes.append(ConjugacyClass(e, n, len(elems) // n, perm_order(e)))
            members.append(orbit)
        self.group = G
        self.classes = classes
        self.members = members
        self.class_of = cls_of

    def class_index(self, g):
        return self.class_of[self.group.table.index[tuple(g)]]

    def classes_in(self, H):
        """Indices of classes whose representative lies in ``H`` (H normal)."""
        return frozenset(i for i, c in enumerate(self.classes) if H.contains(c.representative))


def class_data(G):
    cd = G.__dict__.get("_class_data")
    if cd is None:
        cd = ClassData(G)
        G.__dict__["_class_data"] = cd
    return cd


def conjugacy_classes(G):
    """List of ``(representative, class size, centralizer order)``."""
    return [(c.representative, c.size, c.centralizer_order) for c in class_data(G).classes]


@dataclass
class NormalSubgroup:
    group: PermGroup
    classes: frozenset
    order: int
    minimal: bool = False

    @property
    def key(self):
        return (self.order, tuple(sorted(self.classes)))


def _normal_from_classes(G, cd, gens):
    N = G.normal_closure(gens)
    return NormalSubgroup(N, cd.classes_in(N), N.order())


def normal_subgroups(G, minimal_only=False):
    """All normal subgroups of ``G`` (or only the minimal ones).

    Each entry carries the set of conjugacy classes it is the union of; the
    list is sorted by (order, classes). ``minimal`` flags minimal normal
    subgroups, i.e. nontrivial ones containing no smaller nontrivial one.
    """
    cd = class_data(G)
    cache = G.__dict__.setdefault("_normal_cache", {})
    if not minimal_only and "all" in cache:
        return cache["all"]
    if "closures" not in cache:
        found = {}
        for i, c in enumerate(cd.classes):
            if i == 0 and c.size == 1 and c.element_order == 1:
                continue
            N = _normal_from_classes(G, cd, [c.representative])
            found.setdefault(N.classes, N)
        cache["closures"] = found
    closures = cache["closures"]
    minimal = [N for N in closures.values()
               if not any(M.classes < N.classes for M in closures.values())]
    minset = {N.classes for N in minimal}
    if minimal_only:
        out = []
        for N in sorted(minimal, key=lambda N: N.key):
            out.append(NormalSubgroup(N.group, N.classes, N.order, True))
        return out
    trivial = NormalSubgroup(PermGroup([], G.degree), frozenset([cd.class_of[0]]), 1)
    allN = {trivial.classes: trivial}
    allN.update(closures)
    frontier = list(closures.values())
    cap = budget.get("normal_subgroups")
    while frontier:
        new = []
        current = list(allN.values())
        for A in frontier:
            for B in current:
                if A.classes <= B.classes or B.classes <= A.classes:
                    continue
                if (A.classes | B.classes) in allN:
                    continue
                J = PermGroup(A.group.generators + B.group.generators, G.degree)
                key = cd.classes_in(J)
                if key not in allN:
                    N = NormalSubgroup(J, key, J.order())
                    allN[key] = N
                    new.append(N)
                    if len(allN) > cap:
                        raise BudgetExceeded("normal_subgroups", cap)
        frontier = new
    out = []
    for N in sorted(allN.values(), key=lambda N: N.key):
        N.minimal = N.classes in minset
        out.append(N)
    cache["all"] = out
    return out


def minimal_normal_subgroups(G):
    return normal_subgroups(G, minimal_only=True)


def centre(G):
    cd = class_data(G)
    return PermGroup([c.representative for c in cd.classes if c.size == 1], G.degree)


def is_p_group_order(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def largest_normal_p_subgroup(G, p):
    """``O_p(G)``: the join of all normal p-subgroups."""
    best = PermGroup([], G.degree)
    for N in normal_subgroups(G):
        if N.order > best.order() and is_p_group_order(N.order, p):
            if best.is_subgroup_of(N.group):
                best = N.group
            else:
                best = PermGroup(best.generators + N.group.generators, G.degree)
    return best


def coset_labels(G, N):
    """Label each element index of ``G`` by its right coset ``N g``.

    Returns ``(labels, reps)`` with ``reps[c]`` the first element index of coset ``c``.
    """
    tab = G.table
    elems, index = tab.elements, tab.index
    nel = N.elements() if not N.is_trivial() else [identity(G.degree)]
    labels = [-1] * len(elems)
    reps = []
    for i, g in enumerate(elems):
        if labels[i] >= 0:
            continue
        c = len(reps)
        reps.append(i)
        for n in nel:
            labels[index[mul(n, g)]] = c
    return labels, reps


def factor_group(G, N):
    """``G/N`` in its regular action on the right cosets of ``N``.

    Returns ``(Q, images)`` where ``images[i]`` is the image of ``G.generators[i]``.
    """
    labels, reps = coset_labels(G, N)
    tab = G.table
    m = len(reps)
    images = []
    for k in range(len(G.generators)):
        right = tab.right[k]
        images.append(tuple(labels[right[r]] for r in reps))
    return PermGroup(images, m, semiregular=True), images
