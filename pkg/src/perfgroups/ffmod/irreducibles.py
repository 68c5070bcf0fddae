"""All irreducible F_p-modules of a group, by the Burnside-Brauer closure."""

from __future__ import annotations

from .. import budget
from ..errors import BudgetExceeded, InvariantViolation
from ..groupcore.lowindex import coset_action, low_index_subgroups
from ..groupcore.permgroup import PermGroup
from ..groupcore.structure import factor_group, largest_normal_p_subgroup
from .meataxe import chop, endomorphism_degree, module_isomorphism
from .module import permutation_module


def faithful_action(Q, search_cap=60):
    """Images of ``Q.generators`` in a small faithful permutation action of ``Q``.

    Looks for a core-free subgroup of small index; falls back to the action
    ``Q`` is given in (restricted to moved points).
    """
    moved = sorted({i for g in Q.generators for i in range(Q.degree) if g[i] != i})
    best_deg = len(moved) if moved else 1
    n = Q.order()
    if n > 1:
        try:
            subs = low_index_subgroups(Q, min(search_cap, best_deg - 1, n))
        except BudgetExceeded:
            subs = []
        for s in subs:
            if s.index >= best_deg:
                break
            imgs = coset_action(Q, s.group)
            if PermGroup(imgs, s.index).order() == n:
                return imgs, s.index
    if not moved:
        return [(0,) for _ in Q.generators], 1
    pos = {x: i for i, x in enumerate(moved)}
    return [tuple(pos[g[x]] for x in moved) for g in Q.generators], len(moved)


def _find(mods, X):
    for Y in mods:
        if Y.dim == X.dim and module_isomorphism(X, Y) is not None:
            return Y
    return None


def irreducible_modules(F, p, dim_cap):
    """Irreducible F_p F-modules of dimension ``<= dim_cap``, one per isomorphism type.

    Modules are closed under tensoring with a faithful constituent of a
    permutation module of ``F/O_p(F)`` (all constituents if none is faithful)
    and chopping. ``O_p(F)`` acts trivially on every irreducible, so the
    action is pulled back from the quotient.
    """
    if not F.generators:
        raise ValueError("group needs at least one generator")
    O = largest_normal_p_subgroup(F, p)
    if O.order() > 1:
        Q, _ = factor_group(F, O)
    else:
        Q = F
    imgs, deg = faithful_action(Q)
    V = permutation_module(F, p, images=imgs, degree=deg)
    if V.kernel().order() != O.order():
        raise InvariantViolation("starting permutation module is not faithful on F/O_p(F)")
    consts = [X for X, _ in chop(V)]
    # one faithful constituent suffices (every irreducible occurs in its tensor powers)
    faithful = [X for X in consts if X.kernel().order() == O.order()]
    base = [min(faithful, key=lambda X: X.dim)] if faithful else consts
    found = list(consts)
    queue = list(consts)
    cap = budget.get("module_closure_dim")
    while queue:
        W = queue.pop(0)
        for X in base:
            if W.dim * X.dim > cap:
                raise BudgetExceeded("module_closure_dim", cap, W.dim * X.dim)
            for Y, _ in chop(W.tensor(X)):
                if _find(found, Y) is None:
                    found.append(Y)
                    queue.append(Y)
    out = [Y for Y in found if Y.dim <= dim_cap]
    out.sort(key=lambda Y: (Y.dim, endomorphism_degree(Y), Y.is_trivial() is False))
    return out
