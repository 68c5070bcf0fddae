"""Confluent rewriting systems for finite permutation groups.

Generators are grouped in levels along a chief series ``F = N_0 > N_1 > ... > 1``.
Level ``i`` holds generators of ``N_{i-1}`` modulo ``N_i``. Words are compared
by a wreath-product ordering: the letters of the top level are compared first
(weighted length, then lexicographically), and lower letters only break ties,
segment by segment from the left. Lower letters therefore move to the right,
so a normal form is ``u_1 u_2 ... u_r`` with ``u_i`` the least word of level
``i`` for the relevant coset of ``N_i``.

The rules are the minimal reducible words (every proper subword is a normal
form) with their normal forms as right hand sides. Such a system is confluent
by construction; the certificate in :meth:`RewritingSystem.certify` still
checks every critical pair and counts irreducible words.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import isqrt

from . import budget
from .errors import BudgetExceeded, InvariantViolation
from .groupcore.perm import identity, inv, is_identity, mul, power
from .groupcore.permgroup import PermGroup
from .groupcore.structure import class_data, normal_subgroups


@dataclass(frozen=True)
class Letter:
    name: str
    element: tuple
    level: int
    weight: int = 1
    rank: int = 0            # position inside its level for lexicographic comparison
    inverse_of: int | None = None


@dataclass(frozen=True)
class CriticalPair:
    overlap: tuple
    reducts: tuple           # the two one-step reducts of ``overlap``
    rules: tuple             # (i, j): rule i at position 0, rule j at ``offset``
    offset: int


def _names():
    k = 0
    while True:
        if k < 26:
            yield chr(ord("a") + k)
        else:
            yield f"g{k}"
        k += 1


def _quotient_order(g, N):
    k, x = 1, g
    while not N.contains(x):
        x = mul(x, g)
        k += 1
    return k


def chief_series(F):
    """Normal subgroups ``F = N_0 > N_1 > ... > N_r = 1``, each maximal in the previous."""
    nsubs = normal_subgroups(F)
    top = nsubs[-1]
    series = [top]
    cur = top
    while cur.order > 1:
        below = [N for N in nsubs if N.classes < cur.classes]
        cur = max(below, key=lambda N: N.key)
        series.append(cur)
    return [N.group if N is not top else F for N in series]


def _level_generators(F, upper, lower):
    """Few elements of ``upper`` generating it modulo ``lower``."""
    target = upper.order()
    base = list(lower.generators)
    cd = class_data(F)
    reps = [c.representative for c in cd.classes
            if upper.contains(c.representative) and not lower.contains(c.representative)]
    if target == lower.order():
        return []
    comms = [mul(mul(inv(a), inv(b)), mul(a, b)) for a in upper.generators for b in upper.generators]
    abelian = all(lower.contains(c) for c in comms)
    if not abelian:
        cands = sorted(upper.elements(), key=lambda g: (_quotient_order(g, lower), g))
        cands = [g for g in cands if not lower.contains(g)]
        reps.sort(key=lambda g: (_quotient_order(g, lower), g))
        for x in reps:
            for y in cands:
                if PermGroup(base + [x, y], F.degree).order() == target:
                    return [x, y]
    # abelian quotient (or no 2-generation): greedy, largest quotient order first
    cands = sorted((g for g in upper.elements() if not lower.contains(g)),
                   key=lambda g: (-_quotient_order(g, lower), g))
    chosen = []
    H = PermGroup(base, F.degree)
    for g in cands:
        if H.order() == target:
            break
        if not H.contains(g):
            chosen.append(g)
            H = PermGroup(base + chosen, F.degree)
    return chosen


class RewritingSystem:
    """A confluent rewriting system for ``group`` (see module docstring)."""

    def __init__(self, group, series, letters):
        self.group = group
        self.series = series
        self.letters = list(letters)
        self.nlevels = len(series) - 1
        cap = budget.get("group_order")
        if group.order() > cap:
            raise BudgetExceeded("group_order", cap, group.order())
        self._build_tables()
        self._build_normal_forms()
        self._build_rules()

    # -- construction --------------------------------------------------------

    def _build_tables(self):
        tab = self.group.table
        elems, index = tab.elements, tab.index
        self.identity_index = index[identity(self.group.degree)]
        self.letter_index = [index[a.element] for a in self.letters]
        self.right = [[index[mul(g, a.element)] for g in elems] for a in self.letters]
        self.left = [[index[mul(a.element, g)] for g in elems] for a in self.letters]

    def _level_cosets(self, upper, lower):
        """Coset label of every element index of ``upper`` modulo ``lower``."""
        tab = self.group.table
        index = tab.index
        lel = lower.elements() if not lower.is_trivial() else [identity(self.group.degree)]
        labels = {}
        reps = []
        for g in upper.elements():
            i = index[g]
            if i in labels:
                continue
            c = len(reps)
            reps.append(i)
            for n in lel:
                labels[index[mul(g, n)]] = c
        return labels, reps

    def _build_normal_forms(self):
        tab = self.group.table
        elems, index = tab.elements, tab.index
        levels = []
        for i in range(self.nlevels):
            upper, lower = self.series[i], self.series[i + 1]
            labels, reps = self._level_cosets(upper, lower)
            mine = [k for k, a in enumerate(self.letters) if a.level == i]
            # least word per coset: Dijkstra on (weight, ranks)
            words = {}
            heap = [(0, (), (), self.identity_index)]
            while heap:
                w, ranks, word, g = heapq.heappop(heap)
                c = labels[g]
                if c in words:
                    continue
                words[c] = (word, g)
                for k in mine:
                    a = self.letters[k]
                    h = self.right[k][g]
                    if labels[h] not in words:
                        heapq.heappush(heap, (w + a.weight, ranks + (a.rank,), word + (k,), h))
            if len(words) != len(reps):
                raise InvariantViolation("level letters do not generate the factor")
            levels.append((labels, {c: (word, inv(elems[g])) for c, (word, g) in words.items()}))
        nf = []
        for g in elems:
            word = ()
            for labels, trans in levels:
                wc, tinv = trans[labels[index[g]]]
                word += wc
                g = mul(tinv, g)
            if not is_identity(g):
                raise InvariantViolation("normal form does not evaluate to the element")
            nf.append(word)
        self.normal_form_of = nf
        self.word_index = {w: i for i, w in enumerate(nf)}
        if len(self.word_index) != len(nf):
            raise InvariantViolation("normal forms are not distinct")

    def _build_rules(self):
        nf, widx = self.normal_form_of, self.word_index
        rules = []
        cap = budget.get("rws_rules")
        for g, w in enumerate(nf):
            for k in range(len(self.letters)):
                h = self.right[k][g]
                cand = w + (k,)
                if nf[h] == cand:
                    continue
                if w:
                    s = cand[1:]
                    if nf[self.right[k][widx[w[1:]]]] != s:
                        continue
                rules.append((cand, nf[h]))
                if len(rules) > cap:
                    raise BudgetExceeded("rws_rules", cap, len(rules))
        rules.sort(key=lambda r: (len(r[0]), r[0]))
        self.rules = rules
        self.rule_index = {l: i for i, (l, _) in enumerate(rules)}
        self.lhs_lengths = sorted({len(l) for l, _ in rules})

    # -- basic queries -------------------------------------------------------

    @property
    def alphabet(self):
        return [a.name for a in self.letters]

    @property
    def levels(self):
        return [a.level for a in self.letters]

    def __repr__(self):
        return (f"<RewritingSystem {len(self.letters)} letters, {self.nlevels} levels, "
                f"{len(self.rules)} rules>")

    def parse(self, text):
        """Word from a string of single-character letter names (or a list of names)."""
        pos = {a.name: k for k, a in enumerate(self.letters)}
        return tuple(pos[c] for c in text)

    def format(self, word):
        return "".join(self.letters[k].name for k in word) or "<>"

    def evaluate(self, word):
        g = identity(self.group.degree)
        for k in word:
            g = mul(g, self.letters[k].element)
        return g

    def element_index(self, word):
        """Index in ``group.table`` of the element a word evaluates to."""
        e = self.identity_index
        for k in word:
            e = self.right[k][e]
        return e

    def word_of(self, g):
        """Normal form of a group element."""
        return self.normal_form_of[self.group.table.index[tuple(g)]]

    def generator_words(self):
        """Normal forms of the original generators of the group."""
        return [self.word_of(g) for g in self.group.generators]

    def normal_forms(self):
        return list(self.normal_form_of)

    # -- ordering ------------------------------------------------------------

    def _level_key(self, word):
        return (sum(self.letters[k].weight for k in word), tuple(self.letters[k].rank for k in word))

    def _cmp(self, u, v, level):
        if level >= self.nlevels:
            return 0
        lev = self.letters
        tu = [k for k in u if lev[k].level == level]
        tv = [k for k in v if lev[k].level == level]
        ku, kv = self._level_key(tu), self._level_key(tv)
        if ku != kv:
            return -1 if ku < kv else 1

        def segments(w):
            segs, cur = [], []
            for k in w:
                if lev[k].level == level:
                    segs.append(tuple(cur))
                    cur = []
                else:
                    cur.append(k)
            segs.append(tuple(cur))
            return segs

        for su, sv in zip(segments(u), segments(v)):
            c = self._cmp(su, sv, level + 1)
            if c:
                return c
        return 0

    def compare(self, u, v):
        """-1, 0 or 1 as ``u`` is smaller than, equal to or larger than ``v``."""
        return self._cmp(tuple(u), tuple(v), 0)

    # -- rewriting -----------------------------------------------------------

    def reduce(self, word, trace=None):
        """Normal form of ``word`` by leftmost reduction.

        If ``trace`` is a list, each rule application is appended as
        ``(rule index, element index of the word to the right of the lhs)``.
        """
        rules, ridx, lens = self.rules, self.rule_index, self.lhs_lengths
        pending = list(reversed(word))
        suf = []
        if trace is not None:
            e = self.identity_index
            for k in pending:
                e = self.left[k][e]
                suf.append(e)
        out = []
        while pending:
            k = pending.pop()
            if trace is not None:
                suf.pop()
            out.append(k)
            n = len(out)
            for L in lens:
                if L > n:
                    break
                j = ridx.get(tuple(out[n - L:]))
                if j is None:
                    continue
                del out[n - L:]
                if trace is not None:
                    trace.append((j, suf[-1] if suf else self.identity_index))
                for a in reversed(rules[j][1]):
                    if trace is not None:
                        suf.append(self.left[a][suf[-1] if suf else self.identity_index])
                    pending.append(a)
                break
        return tuple(out)

    def reduce_rightmost(self, word):
        """Normal form by always rewriting the rightmost lhs occurrence."""
        w = tuple(word)
        ridx = self.rule_index
        lens = self.lhs_lengths
        while True:
            hit = None
            for start in range(len(w) - 1, -1, -1):
                for L in lens:
                    if start + L > len(w):
                        break
                    j = ridx.get(w[start:start + L])
                    if j is not None:
                        hit = (start, L, j)
                        break
                if hit:
                    break
            if hit is None:
                return w
            start, L, j = hit
            w = w[:start] + self.rules[j][1] + w[start + L:]

    # -- confluence ----------------------------------------------------------

    def critical_pairs(self):
        """All overlaps of a suffix of one lhs with a prefix of another."""
        by_prefix = {}
        for j, (l, _) in enumerate(self.rules):
            for t in range(1, len(l)):
                by_prefix.setdefault(l[:t], []).append(j)
        for i, (l1, r1) in enumerate(self.rules):
            for t in range(1, len(l1)):
                s = l1[len(l1) - t:]
                for j in by_prefix.get(s, ()):
                    l2, r2 = self.rules[j]
                    overlap = l1 + l2[t:]
                    yield CriticalPair(overlap, (r1 + l2[t:], l1[:len(l1) - t] + r2), (i, j),
                                       len(l1) - t)

    def count_irreducible_words(self, limit=None):
        """Number of words containing no lhs, by depth-first extension."""
        ridx, lens = self.rule_index, self.lhs_lengths
        limit = limit or self.group.order() + 1
        count = 0
        stack = [()]
        while stack:
            w = stack.pop()
            count += 1
            if count > limit:
                break
            for k in range(len(self.letters)):
                x = w + (k,)
                n = len(x)
                if any(L <= n and x[n - L:] in ridx for L in lens):
                    continue
                stack.append(x)
        return count

    def certify(self):
        """Check every critical pair and the irreducible word count; raise on failure."""
        for cp in self.critical_pairs():
            a, b = (self.reduce(x) for x in cp.reducts)
            if a != b:
                raise InvariantViolation(f"critical pair {self.format(cp.overlap)} does not resolve")
        n = self.count_irreducible_words()
        if n != self.group.order():
            raise InvariantViolation(f"{n} irreducible words for a group of order {self.group.order()}")
        for l, r in self.rules:
            if self.compare(l, r) <= 0:
                raise InvariantViolation("rule is not decreasing")
        return True

    # -- serialization -------------------------------------------------------

    def to_record(self):
        return {"alphabet": self.alphabet, "levels": self.levels,
                "weights": [a.weight for a in self.letters],
                "rules": [[self.format(l), self.format(r)] for l, r in self.rules]}


def _letters_for_levels(gens_per_level, start=0):
    names = _names()
    letters = []
    for lev, gens in enumerate(gens_per_level):
        rank = 0
        for g, weight, qord in gens:
            letters.append(Letter(next(names), g, lev + start, weight, rank))
            rank += 1
            if qord > 2:
                letters.append(Letter(letters[-1].name.upper(), inv(g), lev + start, weight,
                                      rank, len(letters) - 1))
                rank += 1
    return letters


def confluent_rws(F, series=None, power_threshold=25):
    """Confluent rewriting system for ``F`` along a chief series (or the given series).

    ``series`` lists normal subgroups from ``F`` down to the trivial group.
    Cyclic levels of order above ``power_threshold`` get power generators.
    """
    if series is None:
        series = chief_series(F)
    else:
        series = [F] + list(series[1:]) if series[0] is not F else list(series)
    if series[-1].order() != 1:
        series.append(PermGroup([], F.degree))
    gens = []
    for i in range(len(series) - 1):
        gl = _level_generators(F, series[i], series[i + 1])
        gens.append([(g, 1, _quotient_order(g, series[i + 1])) for g in gl])
    R = RewritingSystem(F, series, _letters_for_levels(gens))
    for lev in range(R.nlevels):
        mine = [k for k, a in enumerate(R.letters) if a.level == lev and a.inverse_of is None]
        if len(mine) == 1:
            g = R.letters[mine[0]]
            m = _quotient_order(g.element, series[lev + 1])
            if m > power_threshold:
                R = add_power_generators(R, mine[0], isqrt(m))
    return R


def add_power_generators(R, g, k):
    """Add the letter ``y = g^k`` (weight ``k``) to the level of letter ``g``.

    ``g`` is a letter index or name. Returns ``R`` unchanged when the order of
    ``g`` modulo the next level is below ``k^2``.
    """
    if isinstance(g, str):
        g = R.alphabet.index(g)
    a = R.letters[g]
    lower = R.series[a.level + 1]
    m = _quotient_order(a.element, lower)
    if k < 2 or m < k * k:
        return R
    y = power(a.element, k)
    used = set(R.alphabet)
    name = next(n for n in _names() if n not in used and n.upper() not in used)
    qy = _quotient_order(y, lower)
    # within the level, y and its inverse precede all old letters lexicographically
    new = []
    for b in R.letters:
        if b.level == a.level:
            b = Letter(b.name, b.element, b.level, b.weight, b.rank + 2, b.inverse_of)
        new.append(b)
    extra = [Letter(name, y, a.level, a.weight * k, 0)]
    if qy > 2:
        extra.append(Letter(name.upper(), inv(y), a.level, a.weight * k, 1, len(new)))
    letters = new + extra
    return RewritingSystem(R.group, R.series, letters)


def rewrite(R, w, strategy="left"):
    """Normal form of ``w`` (a tuple of letter indices or a string of names)."""
    if isinstance(w, str):
        w = R.parse(w)
    if strategy == "left":
        return R.reduce(tuple(w))
    if strategy == "right":
        return R.reduce_rightmost(tuple(w))
    raise ValueError(f"unknown strategy {strategy!r}")
