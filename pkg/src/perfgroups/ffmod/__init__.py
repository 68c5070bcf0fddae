"""Modules over prime fields: MeatAxe chopping, isomorphism, automorphisms, irreducibles."""

from .irreducibles import faithful_action, irreducible_modules
from .meataxe import (chop, composition_factors, endomorphism_basis, endomorphism_degree,
                      find_submodule, hom_space, is_absolutely_irreducible, is_irreducible,
                      module_automorphisms, module_isomorphism)
from .module import FpMatrix, FpModule, ModuleMap, permutation_module, trivial_module

__all__ = [
    "FpMatrix", "FpModule", "ModuleMap", "chop", "composition_factors", "endomorphism_basis",
    "endomorphism_degree", "faithful_action", "find_submodule", "hom_space",
    "is_absolutely_irreducible", "is_irreducible", "irreducible_modules",
    "module_automorphisms", "module_isomorphism", "permutation_module", "trivial_module",
]
