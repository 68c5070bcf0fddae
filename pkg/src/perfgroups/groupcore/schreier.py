"""Deterministic Schreier-Sims.

Base points are chosen as the smallest point moved by the generator that
forces a new level, so the chain (and everything derived from it) is
reproducible run to run.
"""

from __future__ import annotations

from .perm import identity, inv, is_identity, mul


def _first_moved(g):
    for i, j in enumerate(g):
        if i != j:
            return i
    return None


def _orbit_transversal(point, gens, n):
    """Map each orbit point ``q`` to ``u`` with ``point^u = q``."""
    trans = {point: identity(n)}
    queue = [point]
    for q in queue:
        u = trans[q]
        for s in gens:
            r = s[q]
            if r not in trans:
                trans[r] = mul(u, s)
                queue.append(r)
    return trans


class StabChain:
    """Base, strong generators and transversals of a permutation group."""

    def __init__(self, gens, degree):
        self.degree = degree
        self.base = []
        self.strong = []
        self.level_gens = []
        self.transversals = []
        self._build([tuple(g) for g in gens if not is_identity(g)])

    def _level_gens(self, i):
        pts = self.base[:i]
        return [s for s in self.strong if all(s[b] == b for b in pts)]

    def _recompute(self, i):
        gens = self._level_gens(i)
        while len(self.level_gens) <= i:
            self.level_gens.append([])
            self.transversals.append({})
        self.level_gens[i] = gens
        self.transversals[i] = _orbit_transversal(self.base[i], gens, self.degree)

    def strip(self, g, start=0):
        """Sift ``g``; return ``(residue, level reached)``."""
        for lev in range(start, len(self.base)):
            beta = g[self.base[lev]]
            u = self.transversals[lev].get(beta)
            if u is None:
                return g, lev
            g = mul(g, inv(u))
        return g, len(self.base)

    def _build(self, gens):
        self.strong = list(gens)
        for s in self.strong:
            if all(s[b] == b for b in self.base):
                self.base.append(_first_moved(s))
        for i in range(len(self.base)):
            self._recompute(i)
        i = len(self.base) - 1
        while i >= 0:
            restart = False
            trans = self.transversals[i]
            for beta, u in list(trans.items()):
                for s in self.level_gens[i]:
                    us = mul(u, s)
                    w = trans[s[beta]]
                    if us == w:
                        continue
                    h = mul(us, inv(w))
                    y, j = self.strip(h, i + 1)
                    if j < len(self.base) or not is_identity(y):
                        self.strong.append(y)
                        if j == len(self.base):
                            self.base.append(_first_moved(y))
                        for lev in range(i + 1, j + 1):
                            self._recompute(lev)
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    def order(self):
        o = 1
        for t in self.transversals:
            o *= len(t)
        return o

    def contains(self, g):
        y, j = self.strip(tuple(g))
        return j == len(self.base) and is_identity(y)

    def elements(self):
        """All group elements (product of transversals)."""
        n = self.degree
        elems = [identity(n)]
        for t in reversed(self.transversals):
            reps = list(t.values())
            elems = [mul(e, u) for u in reps for e in elems]
        return elems
