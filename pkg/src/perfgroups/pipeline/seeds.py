"""Nonabelian simple groups used as seeds and their direct products."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import prod

from ..groupcore.matrixgroups import psl, psl2
from ..groupcore.perm import from_cycles
from ..groupcore.permgroup import PermGroup, alternating_group, direct_product
from ..groupcore.structure import normal_subgroups

# Every nonabelian simple group of order up to this bound is in the built-in
# list below (the next one missing would be PSU(3,3) of order 6048).
COMPLETE_BELOW = 6048


def _prime_powers(lo, hi):
    out = []
    for q in range(lo, hi + 1):
        for p in range(2, q + 1):
            if q % p == 0:
                r = q
                while r % p == 0:
                    r //= p
                if r == 1:
                    out.append(q)
                break
    return out


def _psl2_order(q):
    return q * (q * q - 1) // (2 if q % 2 else 1)


def _mathieu(n):
    c11 = [tuple(range(1, 12))]
    x = [(3, 7, 11, 8), (4, 10, 5, 6)]
    gens = [from_cycles(n, c11), from_cycles(n, x)]
    if n == 12:
        gens.append(from_cycles(12, [(1, 12), (2, 11), (3, 6), (4, 8), (5, 9), (7, 10)]))
    return PermGroup(gens, n, name=f"M{n}")


def _builtin(max_order):
    """``(name, order, constructor)`` for every built-in seed, ascending order."""
    items = []
    for n in range(5, 10):
        o = prod(range(3, n + 1))
        items.append((f"A{n}", o, lambda n=n: alternating_group(n)))
    # PSL(2,4) = PSL(2,5) = A5 and PSL(2,9) = A6 are listed as alternating groups
    for q in _prime_powers(7, 157):
        if q == 9:
            continue
        items.append((f"L2({q})", _psl2_order(q), lambda q=q: psl2(q)))
    for q, o in [(3, 5616), (4, 20160), (5, 372000)]:
        items.append((f"L3({q})", o, lambda q=q: psl(3, q)))
    items.append(("M11", 7920, lambda: _mathieu(11)))
    items.append(("M12", 95040, lambda: _mathieu(12)))
    items = [it for it in items if it[1] <= max_order]
    items.sort(key=lambda it: (it[1], it[0]))
    return items


@dataclass
class Seed:
    name: str
    order: int
    group: PermGroup


def _check_simple(S):
    if S.group.order() != S.order:
        raise ValueError(f"seed {S.name} has order {S.group.order()}, expected {S.order}")
    if not S.group.is_perfect():
        raise ValueError(f"seed {S.name} is not perfect")
    if len(normal_subgroups(S.group)) != 2:
        raise ValueError(f"seed {S.name} is not simple")


def load_seeds(max_order, seed_file=None, verify=True):
    """Seeds of order at most ``max_order``, built-ins plus any from ``seed_file``.

    A seed file holds blocks ``name <name> <degree>`` followed by one line of
    space-separated (0-based) images per generator, blocks separated by blank lines.
    """
    out = [Seed(name, o, make()) for name, o, make in _builtin(max_order)]
    if seed_file:
        out += [s for s in read_seed_file(seed_file) if s.order <= max_order]
        out.sort(key=lambda s: (s.order, s.name))
    if verify:
        for s in out:
            _check_simple(s)
        _check_distinct(out)
    return out


def _check_distinct(seeds):
    from ..isorej import fingerprint, is_isomorphic
    for a, b in combinations_with_replacement(range(len(seeds)), 2):
        A, B = seeds[a], seeds[b]
        if a == b or A.order != B.order:
            continue
        fa, fb = fingerprint(A.group, "cheap"), fingerprint(B.group, "cheap")
        if fa.compatible(fb) and is_isomorphic(A.group, B.group):
            raise ValueError(f"seeds {A.name} and {B.name} are isomorphic")


def read_seed_file(path):
    seeds = []
    name, degree, gens = None, None, []

    def flush():
        if name is not None:
            G = PermGroup(gens, degree, name=name)
            seeds.append(Seed(name, G.order(), G))

    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("name "):
                flush()
                _, name, deg = line.split()
                degree, gens = int(deg), []
            else:
                gens.append(tuple(int(x) for x in line.split()))
    flush()
    return seeds


def fitting_free(n, seeds):
    """Direct products of seeds of total order ``n`` as ``(name, group)`` pairs.

    Only products of at most four factors can occur below ``60^5``.
    """
    if n >= 60 ** 5:
        raise ValueError("direct products of five or more simple factors are not supported")
    orders = [s.order for s in seeds]
    out = []
    for k in range(1, 5):
        for combo in combinations_with_replacement(range(len(seeds)), k):
            if prod(orders[i] for i in combo) != n:
                continue
            groups = [seeds[i].group for i in combo]
            G = groups[0] if k == 1 else direct_product(*groups)
            out.append(("*".join(seeds[i].name for i in combo), G))
    return out
