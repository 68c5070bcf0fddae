"""Permutation-group and finitely-presented-group fundamentals."""

from .fpgroup import FpPresentation, abelian_invariants, is_perfect_presentation, smith_normal_form_diagonal
from .homomorphism import GroupHomomorphism
from .iso import AutomorphismGroup, automorphism_group, isomorphic
from .lowindex import LowIndexSubgroup, coset_action, low_index_subgroups
from .perm import Permutation
from .permgroup import (PermGroup, alternating_group, cyclic_group, direct_product,
                        symmetric_group)
from .structure import (NormalSubgroup, centre, conjugacy_classes, factor_group,
                        largest_normal_p_subgroup, minimal_normal_subgroups, normal_subgroups)


def order(G):
    return G.order()


def is_perfect(G):
    return G.is_perfect()


__all__ = [
    "AutomorphismGroup", "FpPresentation", "GroupHomomorphism", "LowIndexSubgroup",
    "NormalSubgroup", "PermGroup", "Permutation", "abelian_invariants", "alternating_group",
    "automorphism_group", "centre", "conjugacy_classes", "coset_action", "cyclic_group",
    "direct_product", "factor_group", "is_perfect", "is_perfect_presentation", "isomorphic",
    "largest_normal_p_subgroup", "low_index_subgroups", "minimal_normal_subgroups",
    "normal_subgroups", "order", "smith_normal_form_diagonal", "symmetric_group",
]
