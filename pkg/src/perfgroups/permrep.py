"""Faithful permutation representations of extensions.

For a subgroup ``U`` of ``F`` with pre-image ``T`` in ``E``, a homomorphism
``lambda: T -> C_p`` that is nonzero on ``M`` induces a representation of
``E`` on ``[F:U] * p`` points whose kernel meets ``M`` trivially (``M`` is
irreducible, so the kernel meets it in 0 or ``M``). Together with the action
of ``F`` this is faithful. ``lambda`` is found by Reidemeister-Schreier: trace
every relator of the extension presentation from every coset of ``U`` and
solve the resulting linear system over F_p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import budget
from .cohomology import extension
from .errors import InvariantViolation, SearchExhausted
from .ffmod import linalg as la
from .groupcore.homomorphism import GroupHomomorphism
from .groupcore.lowindex import low_index_subgroups
from .groupcore.perm import identity, inv, mul
from .groupcore.permgroup import PermGroup
from .groupcore.structure import coset_labels


@dataclass
class ExtensionRecord:
    """An extension ``E`` of ``M`` by ``F`` built from a cocycle on a rewriting system."""

    rws: object
    module: object
    cocycle: object
    presentation: object = None
    perm: PermGroup | None = None
    projection: GroupHomomorphism | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.presentation is None:
            self.presentation = extension(self.rws, self.module, self.cocycle)

    @property
    def factor(self):
        return self.rws.group

    def order(self):
        return self.factor.order() * self.module.p ** self.module.dim


# -- Reidemeister-Schreier ---------------------------------------------------

def _letter_actions_on_cosets(F, letters, U):
    labels, reps = coset_labels(F, U)
    tab = F.table
    elems, index = tab.elements, tab.index
    acts = []
    for x in letters:
        acts.append(tuple(labels[index[mul(elems[r], x)]] for r in reps))
    return acts


def _tree(acts, k):
    """Schreier tree from coset 0: set of (coset, generator) edges."""
    seen = [False] * k
    seen[0] = True
    tree = set()
    queue = [0]
    for c in queue:
        for g, a in enumerate(acts):
            d = a[c]
            if not seen[d]:
                seen[d] = True
                tree.add((c, g))
                queue.append(d)
    if not all(seen):
        raise InvariantViolation("coset action is not transitive")
    return tree


def _schreier_rows(relators, acts, k):
    """Exponent vectors (over all symbols ``c * ngens + g``) of traced relators."""
    ng = len(acts)
    invs = [inv(a) for a in acts]
    rows = []
    for rel in relators:
        for c0 in range(k):
            row = np.zeros(k * ng, dtype=np.int64)
            c = c0
            for x in rel:
                if x > 0:
                    g = x - 1
                    row[c * ng + g] += 1
                    c = acts[g][c]
                else:
                    g = -x - 1
                    c = invs[g][c]
                    row[c * ng + g] -= 1
            if c != c0:
                raise InvariantViolation("relator does not close up on cosets")
            rows.append(row)
    return rows


def separating_character(E, U):
    """``(lambda, info)`` for the pre-image of ``U``; ``lambda`` is ``None`` if it does not separate M.

    ``lambda`` is indexed by symbols ``c * ngens + g`` (zero on tree edges).
    ``info`` holds the p-ranks of ``T/T'`` and ``U/U'``.
    """
    R, M = E.rws, E.module
    p, a = M.p, M.dim
    P = E.presentation
    nl = len(R.letters)
    k = E.factor.order() // U.order()
    acts = _letter_actions_on_cosets(E.factor, [x.element for x in R.letters], U)
    acts += [tuple(range(k))] * a
    ng = len(acts)
    tree = _tree(acts, k)
    free = [c * ng + g for c in range(k) for g in range(ng) if (c, g) not in tree]
    space = la.RowSpace(len(free), p)
    batch = []
    for row in _schreier_rows(P.relators, acts, k):
        batch.append(row[free])
        if len(batch) >= 256:
            space.add(np.array(batch))
            batch = []
    if batch:
        space.add(np.array(batch))
    N = la.right_nullspace(space.basis, p) if space.dim else la.identity(len(free))
    module_cols = [i for i, s in enumerate(free) if s % ng >= nl]
    on_m = N[:, module_cols] if len(N) else np.zeros((0, len(module_cols)), dtype=np.int64)
    rank_t = len(N)
    rank_m = la.rank(on_m, p) if on_m.size else 0
    info = {"index": k, "rank_T": rank_t, "rank_U": rank_t - rank_m}
    if rank_m == 0:
        return None, info
    pick = next(i for i in range(len(N)) if np.any(on_m[i]))
    lam = np.zeros(k * ng, dtype=np.int64)
    lam[free] = N[pick]
    return lam, info


def induced_action(E, U, lam):
    """Images of the presentation generators on ``[F:U] * p`` points ``c * p + v``."""
    R, M = E.rws, E.module
    p, a = M.p, M.dim
    k = E.factor.order() // U.order()
    acts = _letter_actions_on_cosets(E.factor, [x.element for x in R.letters], U)
    acts += [tuple(range(k))] * a
    ng = len(acts)
    out = []
    for g, act in enumerate(acts):
        img = [0] * (k * p)
        for c in range(k):
            s = int(lam[c * ng + g])
            d = act[c]
            for v in range(p):
                img[c * p + v] = d * p + (v + s) % p
        out.append(tuple(img))
    return out


def _combine(F_images, other, degree_f):
    return [tuple(f) + tuple(degree_f + x for x in o) for f, o in zip(F_images, other)]


def _finish(E, gens, degree, info):
    G = PermGroup(gens, degree)
    if G.order() != E.order():
        raise InvariantViolation(f"permutation image has order {G.order()}, expected {E.order()}")
    R = E.rws
    images = [x.element for x in R.letters] + [identity(E.factor.degree)] * E.module.dim
    E.perm = G
    E.projection = GroupHomomorphism(G, E.factor, images)
    E.info.update(info)
    return G


def faithful_perm_rep(E):
    """Faithful permutation group for the extension ``E`` (also stored on ``E``)."""
    R, M, z = E.rws, E.module, E.cocycle
    F = E.factor
    p, a = M.p, M.dim
    n = F.degree
    f_part = [x.element for x in R.letters] + [identity(n)] * a
    if M.is_trivial() and z.is_zero():
        # direct product F x M with M acting regularly on p points per coordinate
        blocks = []
        for g in range(len(f_part)):
            img = []
            for d in range(a):
                shift = 1 if g == len(R.letters) + d else 0
                img += [d * p + (v + shift) % p for v in range(p)]
            blocks.append(tuple(img))
        return _finish(E, _combine(f_part, blocks, n), n + a * p, {"index": 1, "direct": True})
    cap = budget.get("perm_index_start")
    tried = set()
    while True:
        for S in low_index_subgroups(F, cap):
            key = (S.index, tuple(sorted(S.group.generators)))
            if key in tried:
                continue
            tried.add(key)
            lam, info = separating_character(E, S.group)
            if lam is None:
                continue
            if S.index * p > budget.get("block_points"):
                continue
            ind = induced_action(E, S.group, lam)
            return _finish(E, _combine(f_part, ind, n), n + S.index * p, info)
        if cap >= budget.get("perm_index_max"):
            raise SearchExhausted(f"no subgroup of index <= {cap} separates the module; raise perm_index_max")
        cap = min(2 * cap, budget.get("perm_index_max"))


# -- degree reduction ------------------------------------------------------------

def _orbits(gens, n):
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        orb = [s]
        for x in orb:
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        out.append(sorted(orb))
    return out


def _restrict(gens, orbit):
    pos = {x: i for i, x in enumerate(orbit)}
    return [tuple(pos[g[x]] for x in orbit) for g in gens]


def _glue(parts):
    """Join constituents (lists of generator images) into one action."""
    ngen = len(parts[0])
    out = []
    for i in range(ngen):
        img = []
        off = 0
        for part in parts:
            img += [off + x for x in part[i]]
            off += len(part[i])
        out.append(tuple(img))
    return out


def _closure(G, gens):
    """Element set of the subgroup of ``G`` generated by ``gens``."""
    e = G.identity
    elems = {e}
    queue = [e]
    for x in queue:
        for g in gens:
            y = mul(x, g)
            if y not in elems:
                elems.add(y)
                queue.append(y)
    return elems


def _coset_images(G, H):
    """Action of ``G.generators`` on right cosets of the element set ``H``."""
    index = {}
    reps = []
    for g in G.elements():
        if g in index:
            continue
        c = len(reps)
        reps.append(g)
        for h in H:
            index[mul(h, g)] = c
    return [tuple(index[mul(r, s)] for r in reps) for s in G.generators]


def _faithful(parts, order):
    gens = _glue(parts)
    return PermGroup(gens, len(gens[0])).order() == order


def reduce_degree(G, tries=20, seed=0):
    """Isomorphic permutation group of no larger degree.

    Deletes orbits that are not needed for faithfulness and replaces
    transitive constituents by actions on cosets of point stabilizers
    enlarged with random elements. Generators correspond to those of ``G``.
    """
    order = G.order()
    if order > budget.get("group_order") or not G.generators:
        return G
    rng = random.Random(seed)
    parts = [_restrict(G.generators, orb) for orb in _orbits(G.generators, G.degree)]
    parts = [q for q in parts if len(q[0]) > 1] or parts[:1]

    def prune(parts):
        for i in sorted(range(len(parts)), key=lambda i: -len(parts[i][0])):
            rest = [q for j, q in enumerate(parts) if j != i and q is not None]
            if rest and _faithful(rest, order):
                parts[i] = None
        return [q for q in parts if q is not None]

    parts = prune(parts)
    elems = G.elements()
    tab = G.table
    for i in range(len(parts)):
        deg = len(parts[i][0])
        # image of every element of G in this constituent, along the Cayley tree
        cimg = [identity(deg)] * len(elems)
        for j in range(1, len(elems)):
            cimg[j] = mul(cimg[tab.parent[j]], parts[i][tab.via[j]])
        stab = [elems[j] for j in range(len(elems)) if cimg[j][0] == 0]
        hgens, H = _generators_of(G, stab)
        best = parts[i]
        for _ in range(tries):
            g = elems[rng.randrange(len(elems))]
            if g in H:
                continue
            H2 = _closure(G, hgens + [g])
            if len(H2) == order or order // len(H2) >= len(best[0]):
                continue
            cand = _coset_images(G, H2)
            if _faithful(parts[:i] + [cand] + parts[i + 1:], order):
                best, H, hgens = cand, H2, hgens + [g]
        parts[i] = best
    parts = prune(parts)
    gens = _glue(parts)
    out = PermGroup(gens, len(gens[0]))
    if out.degree > G.degree:
        return G
    return out


def _generators_of(G, elements):
    """A generating list for the subgroup with the given elements, and its element set."""
    gens = []
    H = {G.identity}
    for g in elements:
        if g not in H:
            gens.append(g)
            H = _closure(G, gens)
    return gens, H
