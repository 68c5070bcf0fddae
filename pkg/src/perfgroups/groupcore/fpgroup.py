"""Finitely presented groups and their abelianization."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class FpPresentation:
    """Generators and relators; a word is a sequence of nonzero integers,
    ``i`` meaning generator ``i`` (1-based) and ``-i`` its inverse."""

    generator_names: list
    relators: list = field(default_factory=list)

    def __post_init__(self):
        n = len(self.generator_names)
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > n:
                    raise ValueError(f"relator {r} uses undeclared generator {x}")

    @property
    def ngens(self):
        return len(self.generator_names)

    def exponent_matrix(self):
        n = self.ngens
        rows = []
        for r in self.relators:
            row = [0] * n
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows


def smith_normal_form_diagonal(rows, ncols):
    """Nonzero-or-zero diagonal of the Smith normal form of an integer matrix.

    Returns the ``min(nrows, ncols)`` diagonal entries, each dividing the next
    among the nonzero ones.
    """
    A = [list(r) for r in rows if any(r)]
    m = len(A)
    n = ncols
    diag = []
    t = 0
    while t < m and t < n:
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        ri, rt = A[i], A[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rb, rt = A[bad], A[t]
                for j in range(t, n):
                    rt[j] += rb[j]
                continue
            # move the smallest entry of row/column t into the pivot
            best = (abs(A[t][t]), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, bi, bj = best
            if bi != t:
                A[t], A[bi] = A[bi], A[t]
            if bj != t:
                for row in A:
                    row[t], row[bj] = row[bj], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def abelian_invariants(P):
    """Torsion coefficients ``d1 | d2 | ...`` of ``P^ab`` followed by zeros for
    the free rank; ``[]`` iff the abelianization is trivial."""
    rows = P.exponent_matrix()
    diag = smith_normal_form_diagonal(rows, P.ngens)
    torsion = sorted(d for d in diag if d > 1)
    free = P.ngens - len(diag)
    return torsion + [0] * free


def is_perfect_presentation(P):
    return abelian_invariants(P) == []


def presentation_from_table(table, names=None):
    """Presentation read off a Cayley graph: one relator per non-tree edge.

    ``table`` is an ``ElementTable``; the relator for edge ``i --k--> j`` is
    ``word(i) * g_k * word(j)^-1``. These relators present the group.
    """
    k = len(table.gens)
    names = names or [f"g{i + 1}" for i in range(k)]
    words = [()] * len(table)
    for j in range(1, len(table)):
        words[j] = words[table.parent[j]] + (table.via[j] + 1,)
    rels = []
    for i in range(len(table)):
        for s in range(k):
            j = table.right[s][i]
            if table.parent[j] == i and table.via[j] == s and j != 0:
                continue
            rels.append(list(words[i]) + [s + 1] + [-x for x in reversed(words[j])])
    return FpPresentation(list(names), rels)
