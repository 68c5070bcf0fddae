"""Homomorphisms between permutation groups, given by generator images."""

from __future__ import annotations

from functools import cached_property

from .perm import identity, mul
from .permgroup import ElementTable, PermGroup


class GroupHomomorphism:
    """``source -> target`` defined by images of ``source.generators``."""

    def __init__(self, source, target, generator_images):
        self.source = source
        self.target = target
        self.generator_images = [tuple(x) for x in generator_images]
        if len(self.generator_images) != len(source.generators):
            raise ValueError("need one image per source generator")

    @cached_property
    def _map(self):
        tab = self.source.table
        tdeg = self.target.degree
        imgs = [identity(tdeg)] * len(tab)
        for j in range(1, len(tab)):
            imgs[j] = mul(imgs[tab.parent[j]], self.generator_images[tab.via[j]])
        return imgs

    def __call__(self, g):
        return self._map[self.source.table.index[tuple(g)]]

    def is_homomorphism(self):
        return images_define_homomorphism(self.source.table, self.generator_images)

    def is_injective(self):
        return len(set(self._map)) == len(self._map)

    def image(self):
        return PermGroup(self.generator_images, self.target.degree)

    def compose(self, other):
        """``other`` after ``self``."""
        return GroupHomomorphism(self.source, other.target,
                                 [other(x) for x in self.generator_images])


def images_define_homomorphism(table, images, collect=False):
    """Check that ``gen_k -> images[k]`` extends to a homomorphism.

    Walks the Cayley graph in ``table`` once; every edge must commute with the
    proposed map. Returns the element images (or ``None``) when ``collect``.
    """
    deg = len(images[0]) if images else 1
    n = len(table)
    phi = [None] * n
    phi[0] = identity(deg)
    right = table.right
    parent, via = table.parent, table.via
    k_range = range(len(images))
    for i in range(n):
        pi = phi[i]
        for k in k_range:
            j = right[k][i]
            h = mul(pi, images[k])
            if parent[j] == i and via[j] == k and j != 0:
                phi[j] = h
            elif phi[j] != h:
                return None if collect else False
    return phi if collect else True


def table_for(G, gens):
    """Element table of ``G`` with respect to another generating tuple."""
    return ElementTable(gens, G.degree, G.order() + 1)
