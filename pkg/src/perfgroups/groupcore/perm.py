"""Permutations.

Internally a permutation of degree n is a tuple of 0-based images. The
``Permutation`` class wraps such a tuple and is the public, 1-based face used
for serialization. Products act on the right: ``x^(ab) = (x^a)^b``.
"""

from __future__ import annotations

from math import gcd


def identity(n):
    return tuple(range(n))


def mul(a, b):
    """Product ``a*b``: apply ``a`` first, then ``b``."""
    return tuple(map(b.__getitem__, a))


def inv(a):
    r = [0] * len(a)
    for i, j in enumerate(a):
        r[j] = i
    return tuple(r)


def conj(a, g):
    """``g^-1 a g``."""
    r = [0] * len(a)
    for i, j in enumerate(a):
        r[g[i]] = g[j]
    return tuple(r)


def comm(a, b):
    """``a^-1 b^-1 a b``."""
    return mul(mul(inv(a), inv(b)), mul(a, b))


def power(a, k):
    n = len(a)
    if k < 0:
        a, k = inv(a), -k
    result = tuple(range(n))
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def is_identity(a):
    return all(i == j for i, j in enumerate(a))


def cycles(a):
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if seen[i]:
            continue
        c = [i]
        seen[i] = True
        j = a[i]
        while j != i:
            seen[j] = True
            c.append(j)
            j = a[j]
        out.append(c)
    return out


def order(a):
    o = 1
    for c in cycles(a):
        k = len(c)
        o = o * k // gcd(o, k)
    return o


def cycle_type(a):
    return tuple(sorted((len(c) for c in cycles(a)), reverse=True))


def from_cycles(n, cyc):
    """Build from 1-based cycles, e.g. ``from_cycles(5, [(1, 2, 3)])``."""
    img = list(range(n))
    for c in cyc:
        for k, x in enumerate(c):
            img[x - 1] = c[(k + 1) % len(c)] - 1
    return tuple(img)


def extend(a, n):
    """Pad ``a`` to degree ``n`` with fixed points."""
    if len(a) >= n:
        return tuple(a)
    return tuple(a) + tuple(range(len(a), n))


def direct_sum(a, b):
    """Act as ``a`` on the first points and as ``b`` on the next ones."""
    off = len(a)
    return tuple(a) + tuple(x + off for x in b)


class Permutation:
    """Immutable permutation with 1-based image list I/O."""

    __slots__ = ("t",)

    def __init__(self, images0):
        t = tuple(images0)
        if sorted(t) != list(range(len(t))):
            raise ValueError("not a permutation")
        self.t = t

    @classmethod
    def from_images(cls, images):
        return cls(i - 1 for i in images)

    @classmethod
    def from_cycles(cls, n, cyc):
        return cls(from_cycles(n, cyc))

    @property
    def images(self):
        return [i + 1 for i in self.t]

    @property
    def degree(self):
        return len(self.t)

    def __mul__(self, other):
        a, b = self.t, other.t
        n = max(len(a), len(b))
        return Permutation(mul(extend(a, n), extend(b, n)))

    def inverse(self):
        return Permutation(inv(self.t))

    def order(self):
        return order(self.t)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        n = max(len(self.t), len(other.t))
        return extend(self.t, n) == extend(other.t, n)

    def __hash__(self):
        t = self.t
        k = len(t)
        while k and t[k - 1] == k - 1:
            k -= 1
        return hash(t[:k])

    def __repr__(self):
        cyc = [c for c in cycles(self.t) if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cyc)
