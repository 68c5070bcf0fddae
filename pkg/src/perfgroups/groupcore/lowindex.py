"""Subgroups of small index, one per conjugacy class.

A subgroup of index ``k`` is the same thing as a transitive action on ``k``
points with a marked point. We search coset tables in standard form, pruning
with a set of short relators that hold in ``G`` (element orders of short
words). The relators need not present ``G``: every complete table is checked
against the Cayley graph before it is accepted. A table is kept only if no
re-basing of it at another coset is lexicographically smaller, which leaves
one subgroup per conjugacy class.
"""

from __future__ import annotations

from dataclasses import dataclass
import random
from itertools import product

from .. import budget
from ..errors import BudgetExceeded
from .homomorphism import images_define_homomorphism
from .perm import identity, inv, is_identity, mul, order as perm_order
from .permgroup import ElementTable, PermGroup
from .structure import coset_labels, factor_group, minimal_normal_subgroups


@dataclass
class LowIndexSubgroup:
    group: PermGroup
    index: int


def _short_relators(gens, max_word=4, max_len=48):
    """Relators ``w^{o(w)}`` for freely and cyclically reduced words ``w``.

    Letters are column numbers: ``2i`` for generator ``i``, ``2i+1`` for its
    inverse.
    """
    k = len(gens)
    perms = []
    for g in gens:
        perms.extend([g, inv(g)])
    seen = set()
    out = []
    for L in range(1, max_word + 1):
        for w in product(range(2 * k), repeat=L):
            if any(w[i] ^ 1 == w[i + 1] for i in range(L - 1)):
                continue
            if L > 1 and w[0] ^ 1 == w[-1]:
                continue
            # one word per class under rotation and inversion
            rots = [w[i:] + w[:i] for i in range(L)]
            iw = tuple(x ^ 1 for x in reversed(w))
            rots += [iw[i:] + iw[:i] for i in range(L)]
            key = min(rots)
            if key in seen:
                continue
            seen.add(key)
            g = perms[w[0]]
            for x in w[1:]:
                g = mul(g, perms[x])
            o = perm_order(g)
            if o * L <= max_len:
                out.append(list(w) * o)
    return out


def _cayley_relators(G, gens, max_len):
    """Relators read off non-tree edges of the Cayley graph, up to ``max_len``."""
    k = len(gens)
    perms = []
    for g in gens:
        perms.extend([g, inv(g)])
    tab = ElementTable(perms, G.degree, G.order() + 1)
    words = [()] * len(tab)
    for j in range(1, len(tab)):
        words[j] = words[tab.parent[j]] + (tab.via[j],)
    seen = set()
    out = []
    for i in range(len(tab)):
        for x in range(2 * k):
            j = tab.right[x][i]
            if tab.parent[j] == i and tab.via[j] == x:
                continue
            if len(words[i]) + 1 + len(words[j]) > max_len:
                continue
            r = []
            for y in words[i] + (x,) + tuple(y ^ 1 for y in reversed(words[j])):
                if r and r[-1] == y ^ 1:
                    r.pop()
                else:
                    r.append(y)
            while len(r) > 1 and r[0] == r[-1] ^ 1:
                r = r[1:-1]
            if not r:
                continue
            t = tuple(r)
            it = tuple(y ^ 1 for y in reversed(t))
            key = min([t[a:] + t[:a] for a in range(len(t))] + [it[a:] + it[:a] for a in range(len(t))])
            if key not in seen:
                seen.add(key)
                out.append(list(t))
    return out


class _Tables:
    """Backtrack state: a coset table with undo trail and relator scanning."""

    def __init__(self, ncols, maxcos, relators):
        self.ncols = ncols
        self.maxcos = maxcos
        self.T = [[-1] * ncols for _ in range(maxcos)]
        self.ncos = 1
        self.trail = []
        by_first = [[] for _ in range(ncols)]
        for r in relators:
            for i in range(len(r)):
                by_first[r[i]].append(r[i:] + r[:i])
        self.by_first = by_first

    def define(self, c, x, d):
        T = self.T
        T[c][x] = d
        T[d][x ^ 1] = c
        self.trail.append((c, x, d))

    def undo_to(self, length, ncos):
        T = self.T
        while len(self.trail) > length:
            c, x, d = self.trail.pop()
            T[c][x] = -1
            T[d][x ^ 1] = -1
        self.ncos = ncos

    def _scan(self, r, c, queue):
        T = self.T
        n = len(r)
        f, i = c, 0
        while i < n:
            nf = T[f][r[i]]
            if nf < 0:
                break
            f = nf
            i += 1
        if i == n:
            return f == c
        b, j = c, n - 1
        while j >= i:
            nb = T[b][r[j] ^ 1]
            if nb < 0:
                break
            b = nb
            j -= 1
        if j < i:
            return f == b
        if j == i:
            if T[b][r[i] ^ 1] >= 0:
                return False
            self.define(f, r[i], b)
            queue.append((f, r[i], b))
        return True

    def propagate(self, c, x, d):
        queue = [(c, x, d)]
        while queue:
            c, x, d = queue.pop()
            for r in self.by_first[x]:
                if not self._scan(r, c, queue):
                    return False
            for r in self.by_first[x ^ 1]:
                if not self._scan(r, d, queue):
                    return False
        return True

    def first_gap(self):
        T = self.T
        for c in range(self.ncos):
            row = T[c]
            for x in range(self.ncols):
                if row[x] < 0:
                    return c, x
        return None


def _standardize_from(T, ncos, ncols, start, ref):
    """Compare the table re-based at ``start`` with ``ref``; -1, 0 or 1."""
    new_of = {start: 0}
    old_of = [start]
    c = 0
    while c < len(old_of):
        row = T[old_of[c]]
        for x in range(ncols):
            t = row[x]
            v = new_of.get(t)
            if v is None:
                v = len(old_of)
                new_of[t] = v
                old_of.append(t)
            w = ref[c][x]
            if v != w:
                return -1 if v < w else 1
        c += 1
    return 0


def _partially_smaller(T, ncos, ncols, start):
    """True if re-basing the partial table at ``start`` is certainly smaller."""
    new_of = {start: 0}
    old_of = [start]
    c = 0
    while c < len(old_of):
        row = T[old_of[c]]
        ref = T[c]
        for x in range(ncols):
            t = row[x]
            w = ref[x]
            if t < 0 or w < 0:
                return False
            v = new_of.get(t)
            if v is None:
                v = len(old_of)
                new_of[t] = v
                old_of.append(t)
            if v != w:
                return v < w
        c += 1
    return False


def _is_canonical(T, ncos, ncols):
    for s in range(1, ncos):
        if _standardize_from(T, ncos, ncols, s, T) < 0:
            return False
    return True


def _coset_table_search(G, max_index):
    """Low-index search by coset tables; used when no abelian normal subgroup helps."""
    N = G.order()
    gens = [g for g in G.generators if not is_identity(g)]
    if N == 1 or not gens:
        return [G]
    k = len(gens)
    ncols = 2 * k
    m = min(max_index, N)
    relators = _short_relators(gens, 3, 24) + _cayley_relators(G, gens, 14)
    st = _Tables(ncols, m, relators)
    # initial deductions from relators at coset 0 happen on first definitions
    tab = G.table
    found = []

    def leaf():
        ncos = st.ncos
        if N % ncos or not _is_canonical(st.T, ncos, ncols):
            return
        images = [tuple(st.T[c][2 * i] for c in range(ncos)) for i in range(k)]
        full = []
        it = iter(images)
        for g in G.generators:
            full.append(identity(ncos) if is_identity(g) else next(it))
        if not images_define_homomorphism(tab, full):
            return
        found.append((ncos, full))

    # explicit stack of (trail length, ncos, gap, options, next option)
    stack = []
    gap = st.first_gap()
    while True:
        if gap is None:
            leaf()
        else:
            c, x = gap
            opts = [d for d in range(st.ncos) if st.T[d][x ^ 1] < 0]
            if st.ncos < m:
                opts.append(st.ncos)
            stack.append([len(st.trail), st.ncos, gap, opts, 0])
        # advance to the next consistent node
        gap = None
        advanced = False
        while stack:
            tl, nc, (c, x), opts, oi = stack[-1]
            st.undo_to(tl, nc)
            if oi >= len(opts):
                stack.pop()
                continue
            stack[-1][4] = oi + 1
            d = opts[oi]
            if d == st.ncos:
                st.ncos += 1
            st.define(c, x, d)
            if st.propagate(c, x, d) and not any(
                    _partially_smaller(st.T, st.ncos, ncols, s) for s in range(1, st.ncos)):
                gap = st.first_gap()
                advanced = True
                break
        if not advanced:
            break

    out = []
    for ncos, action in sorted(found, key=lambda r: r[0]):
        H = _stabilizer(G, action, ncos)
        if H.order() * ncos != N:
            raise AssertionError("coset action does not match subgroup order")
        out.append(H)
    return out


def _stabilizer(G, action, ncos):
    """Stabilizer of point 0 under a transitive action, via Schreier generators."""
    gens = G.generators
    rep = [None] * ncos
    rep[0] = identity(G.degree)
    queue = [0]
    for c in queue:
        for g, a in zip(gens, action):
            d = a[c]
            if rep[d] is None:
                rep[d] = mul(rep[c], g)
                queue.append(d)
    sgens = []
    H = PermGroup([], G.degree)
    target = G.order() // ncos
    for c in range(ncos):
        for g, a in zip(gens, action):
            h = mul(mul(rep[c], g), inv(rep[a[c]]))
            if not is_identity(h) and not H.contains(h):
                sgens.append(h)
                H = PermGroup(sgens, G.degree)
                if H.order() == target:
                    return H
    return H


# -- recursion through an abelian minimal normal subgroup -------------------

def _closure(gens, start, limit):
    """Elements of ``<start, gens>`` where ``start`` is a subgroup element set.

    Returns ``None`` as soon as more than ``limit`` elements appear.
    """
    elems = set(start)
    queue = list(elems)
    for x in queue:
        for g in gens:
            y = mul(x, g)
            if y not in elems:
                elems.add(y)
                if len(elems) > limit:
                    return None
                queue.append(y)
    return elems


def _small_generating_set(K, rng):
    gens = [g for g in K.generators if not is_identity(g)]
    n = K.order()
    if n == 1:
        return []
    kept = []
    S = PermGroup([], K.degree, semiregular=K.semiregular)
    for g in gens:
        if not S.contains(g):
            kept.append(g)
            S = PermGroup(kept, K.degree, semiregular=K.semiregular)
            if S.order() == n:
                break
    if len(kept) > 2:
        elems = K.elements()
        for _ in range(40):
            pair = [rng.choice(elems), rng.choice(elems)]
            if PermGroup(pair, K.degree, semiregular=K.semiregular).order() == n:
                return pair
    return kept


def _invariant_subgroups(Nel, ident, acting):
    """All subgroups of the abelian group ``Nel`` normalized by ``acting``."""
    trivial = frozenset([ident])
    found = {trivial}
    queue = [trivial]
    for L in queue:
        for x in Nel:
            if x in L:
                continue
            new = [x]
            S = set(L)
            for y in new:
                if y in S:
                    continue
                S = _closure([y], S, len(Nel))
                for a in acting:
                    z = mul(mul(inv(a), y), a)
                    if z not in S:
                        new.append(z)
            S = frozenset(S)
            if S not in found:
                found.add(S)
                queue.append(S)
    return found


def _coset_reps(Q, K):
    """Right coset representatives of ``K`` in ``Q`` (small groups only)."""
    kel = K.elements()
    seen = set()
    reps = []
    for q in Q.elements():
        if q in seen:
            continue
        reps.append(q)
        for k in kel:
            seen.add(mul(k, q))
    return reps


def _fuse(pool, acting):
    """One representative per orbit of ``acting`` (by conjugation) on ``pool``."""
    inv_act = [(inv(a), a) for a in acting]
    remaining = set(pool)
    reps = []
    for H in pool:
        if H not in remaining:
            continue
        reps.append(H)
        orbit = [H]
        remaining.discard(H)
        for X in orbit:
            for ai, a in inv_act:
                Y = frozenset(mul(mul(ai, h), a) for h in X)
                if Y in remaining:
                    remaining.discard(Y)
                    orbit.append(Y)
    return reps


def _subgroup_classes(G, max_index, rng):
    """Subgroup classes of ``G`` of index ``<= max_index`` as element sets and generators."""
    N_order = G.order()
    if N_order == 1:
        return [G]
    abelian = [N for N in minimal_normal_subgroups(G) if N.group.is_abelian()]
    if not abelian:
        return _coset_table_search(G, max_index)
    N = min(abelian, key=lambda N: N.order).group
    Q, _ = factor_group(G, N)
    _, reps = coset_labels(G, N)
    gel = G.table.elements
    Nel = N.elements()
    ident = G.identity
    Ngens = [g for g in N.generators if not is_identity(g)]
    out = []
    for Kbar in _subgroup_classes(Q, max_index, rng):
        iK = Q.order() // Kbar.order()
        room = max_index // iK

        def lift(q):
            return gel[reps[q[0]]]

        kbar = _small_generating_set(Kbar, rng)
        kl = [lift(q) for q in kbar]
        kel = set(Kbar.elements())
        # normalizer of Kbar in Q, lifted; K itself and N also act
        acting = [lift(t) for t in _coset_reps(Q, Kbar)
                  if all(mul(mul(inv(t), k), t) in kel for k in kbar)]
        acting = [a for a in acting if not is_identity(a)] + kl + Ngens
        Ls = [L for L in _invariant_subgroups(Nel, ident, kl)
              if len(Nel) // len(L) <= room]
        prefix = [1]
        for j in range(1, len(kbar) + 1):
            prefix.append(PermGroup(kbar[:j], Q.degree, semiregular=True).order())
        pool = []
        for L in sorted(Ls, key=len, reverse=True):
            Lset = frozenset(L)
            Lgens = _abelian_basis(Lset, ident)
            trans = _coset_reps_abelian(Nel, Lset)

            def rec(j, chosen, S):
                if j == len(kl):
                    pool.append(frozenset(S))
                    return
                target = prefix[j + 1] * len(Lset)
                for n in trans:
                    x = mul(kl[j], n)
                    T = _closure(Lgens + chosen + [x], S, target)
                    if T is not None and len(T) == target:
                        rec(j + 1, chosen + [x], T)

            rec(0, [], Lset)
        for H in _fuse(list(dict.fromkeys(pool)), acting):
            out.append(_group_from_set(H, G.degree))
    return out


def _abelian_basis(L, ident):
    gens = []
    span = {ident}
    for x in sorted(L):
        if x not in span:
            gens.append(x)
            span = _closure([x], span, len(L))
    return gens


def _coset_reps_abelian(Nel, L):
    seen = set()
    reps = []
    for x in Nel:
        if x in seen:
            continue
        reps.append(x)
        for l in L:
            seen.add(mul(l, x))
    return reps


def _group_from_set(H, degree):
    gens = []
    S = PermGroup([], degree)
    n = len(H)
    for h in sorted(H):
        if S.order() == n:
            break
        if not S.contains(h):
            gens.append(h)
            S = PermGroup(gens, degree)
    return S


def low_index_subgroups(G, max_index):
    """Representatives of the conjugacy classes of subgroups of index <= max_index.

    Subgroups of ``G/N`` for an abelian minimal normal ``N`` are lifted and
    refined by their intersection with ``N``; groups without such ``N`` fall
    back to a coset-table search.
    """
    cap = budget.get("low_index")
    if max_index > cap:
        raise BudgetExceeded("low_index", cap, max_index)
    n = G.order()
    if n > budget.get("group_order"):
        raise BudgetExceeded("group_order", budget.get("group_order"), n)
    rng = random.Random(1)
    subs = _subgroup_classes(G, max_index, rng)
    out = [LowIndexSubgroup(H, n // H.order()) for H in subs]
    out.sort(key=lambda s: (s.index, sorted(s.group.generators)))
    return out


def coset_action(G, H):
    """Images of ``G.generators`` on the right cosets of ``H`` (coset of 1 is 0)."""
    hel = H.elements()
    index = {}
    reps = []
    for g in G.elements():
        if g in index:
            continue
        c = len(reps)
        reps.append(g)
        for h in hel:
            index[mul(h, g)] = c
    return [tuple(index[mul(r, s)] for r in reps) for s in G.generators]
