"""Small matrix groups over finite fields, turned into permutation groups.

Field elements of GF(q) are integers ``0..q-1``: the base-``p`` digits are
coefficients of a polynomial modulo a fixed irreducible, and ``0``/``1`` are
the zero and identity.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .permgroup import PermGroup


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, e
    raise ValueError(f"{q} is not a prime power")


class GF:
    """Arithmetic tables for GF(q), q small."""

    def __init__(self, q):
        p, e = _prime_power(q)
        self.q, self.p, self.e = q, p, e
        poly = self._irreducible(p, e)
        self.add = [[self._vadd(a, b) for b in range(q)] for a in range(q)]
        self.mul = [[self._pmul(a, b, poly) for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [0] + [next(b for b in range(1, q) if self.mul[a][b] == 1) for a in range(1, q)]
        # a generator of the multiplicative group
        for g in range(2 if q > 2 else 1, q):
            x, k = g, 1
            while x != 1:
                x = self.mul[x][g]
                k += 1
            if k == q - 1:
                self.primitive = g
                break
        self.frobenius = [self.power(a, p) for a in range(q)]

    def _digits(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.e)]

    def _from_digits(self, d):
        return sum(c * self.p ** i for i, c in enumerate(d))

    def _vadd(self, a, b):
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    @staticmethod
    def _irreducible(p, e):
        """Monic irreducible of degree e as coefficient list (low to high), found by search."""
        if e == 1:
            return [0, 1]
        for tail in product(range(p), repeat=e):
            f = list(tail) + [1]
            if f[0] == 0:
                continue
            if not any(_poly_mod_is_zero(f, list(g) + [1], p)
                       for d in range(1, e // 2 + 1) for g in product(range(p), repeat=d)):
                return f
        raise ValueError("no irreducible polynomial found")

    def _pmul(self, a, b, f):
        p, e = self.p, self.e
        if e == 1:
            return a * b % p
        x, y = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, c in enumerate(x):
            for j, d in enumerate(y):
                prod[i + j] = (prod[i + j] + c * d) % p
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c:
                for i in range(e + 1):
                    prod[k - e + i] = (prod[k - e + i] - c * f[i]) % p
        return self._from_digits(prod[:e])

    def power(self, a, n):
        r = 1
        for _ in range(n):
            r = self.mul[r][a]
        return r

    def sub(self, a, b):
        return self.add[a][self.neg[b]]

    def elements(self):
        return range(self.q)


def _poly_mod_is_zero(f, g, p):
    """True if monic ``g`` divides ``f`` over GF(p)."""
    r = list(f)
    dg = len(g) - 1
    while len(r) - 1 >= dg:
        c = r[-1]
        if c:
            shift = len(r) - 1 - dg
            for i in range(len(g)):
                r[shift + i] = (r[shift + i] - c * g[i]) % p
        r.pop()
    return not any(r)


@lru_cache(maxsize=None)
def field(q):
    return GF(q)


def mat_vec(F, A, v):
    """Row vector times matrix: ``v * A``."""
    n = len(v)
    out = []
    for j in range(n):
        s = 0
        for i in range(n):
            if v[i] and A[i][j]:
                s = F.add[s][F.mul[v[i]][A[i][j]]]
        out.append(s)
    return tuple(out)


def _normalize(F, v):
    for x in v:
        if x:
            s = F.inv[x]
            return tuple(F.mul[s][y] for y in v)
    return v


def vectors(F, n):
    return [v for v in product(range(F.q), repeat=n) if any(v)]


def points(F, n):
    """Projective points of ``PG(n-1, q)``: vectors with first nonzero entry 1."""
    return [v for v in vectors(F, n) if _normalize(F, v) == v]


def group_on_vectors(mats, q, name=None):
    """Matrix group acting on the nonzero row vectors."""
    F = field(q)
    n = len(mats[0])
    vs = vectors(F, n)
    idx = {v: i for i, v in enumerate(vs)}
    gens = [tuple(idx[mat_vec(F, A, v)] for v in vs) for A in mats]
    return PermGroup(gens, len(vs), name=name)


def group_on_points(mats, q, name=None):
    """Matrix group acting on projective points (so scalars act trivially)."""
    F = field(q)
    n = len(mats[0])
    pts = points(F, n)
    idx = {v: i for i, v in enumerate(pts)}
    gens = [tuple(idx[_normalize(F, mat_vec(F, A, v))] for v in pts) for A in mats]
    return PermGroup(gens, len(pts), name=name)


def sl2_generators(q):
    """Two generators of SL(2, q): a transvection and a monomial element."""
    F = field(q)
    w = F.primitive
    a = ((w, 0), (0, F.inv[w]))
    t = ((1, 1), (0, 1))
    s = ((0, 1), (F.neg[1], 0))
    return [t, s, a] if q > 3 else [t, s]


def sl_generators(n, q):
    """Elementary transvections generating SL(n, q)."""
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
                m[i][j] = 1
                gens.append(tuple(map(tuple, m)))
    F = field(q)
    if q > 2:
        w = F.primitive
        d = [[0] * n for _ in range(n)]
        for i in range(n):
            d[i][i] = 1
        d[0][0] = w
        d[1][1] = F.inv[w]
        gens.append(tuple(map(tuple, d)))
    return gens


def sl2(q):
    return group_on_vectors(sl2_generators(q), q, name=f"SL(2,{q})")


def psl2(q):
    return group_on_points(sl2_generators(q), q, name=f"PSL(2,{q})")


def psl(n, q):
    return group_on_points(sl_generators(n, q), q, name=f"PSL({n},{q})")


def affine_group(mats, q, name=None):
    """Split extension ``q^n : <mats>`` acting on all vectors of ``F_q^n``."""
    F = field(q)
    n = len(mats[0])
    vs = list(product(range(q), repeat=n))
    idx = {v: i for i, v in enumerate(vs)}
    gens = [tuple(idx[mat_vec(F, A, v)] for v in vs) for A in mats]
    for k in range(n):
        e = tuple(1 if i == k else 0 for i in range(n))
        gens.append(tuple(idx[tuple(F.add[a][b] for a, b in zip(v, e))] for v in vs))
    return PermGroup(gens, len(vs), name=name)
