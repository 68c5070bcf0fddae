"""Isomorphism rejection: fingerprints, canonical construction paths, deduplication."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import budget
from .errors import BudgetExceeded, InvariantViolation
from .groupcore.iso import automorphism_group, isomorphic
from .groupcore.lowindex import low_index_subgroups
from .groupcore.permgroup import PermGroup
from .groupcore.structure import class_data, factor_group, minimal_normal_subgroups, normal_subgroups

CHEAP = ("order", "derived", "classes", "class_orders")
FULL = CHEAP + ("normal", "low_index", "aut_order")

# instrumentation for tests: number of explicit isomorphism tests issued
stats = Counter()


@dataclass
class Fingerprint:
    """Tagged isomorphism invariants; ``None`` marks a component not computed."""

    components: dict = field(default_factory=dict)

    def get(self, key):
        return self.components.get(key)

    def compatible(self, other):
        """False only if some component computed on both sides differs."""
        for k, v in self.components.items():
            w = other.components.get(k)
            if v is not None and w is not None and v != w:
                return False
        return True

    def sort_key(self, keys=FULL):
        return tuple((0,) if self.components.get(k) is None else (1, self.components[k])
                     for k in keys)

    def serialize(self):
        parts = []
        for k in FULL:
            v = self.components.get(k)
            parts.append(f"{k}=" + ("absent" if v is None else _fmt(v)))
        return ";".join(parts)


def _fmt(v):
    if isinstance(v, tuple):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    if isinstance(v, bool):
        return "1" if v else "0"
    return str(v)


def _derived_data(G):
    """``(|G^(i)/G^(i+1)|, element orders of the quotient)`` along the derived series."""
    out = []
    series = G.derived_series()
    for A, B in zip(series, series[1:]):
        if A.order() == B.order():
            break
        Q, _ = factor_group(A, B)
        out.append((Q.order(), tuple(sorted(Counter(Q.element_orders()).items()))))
    return tuple(out)


def _component(G, key):
    if key == "order":
        return G.order()
    if key == "derived":
        return _derived_data(G)
    if key == "classes":
        return len(class_data(G).classes)
    if key == "class_orders":
        return tuple(sorted((c.element_order, c.size) for c in class_data(G).classes))
    if key == "normal":
        return tuple(sorted((N.order, N.group.is_perfect()) for N in normal_subgroups(G)))
    if key == "low_index":
        cap = budget.get("fingerprint_low_index")
        return tuple(sorted(Counter(S.index for S in low_index_subgroups(G, cap)).items()))
    if key == "aut_order":
        if G.order() > budget.get("fingerprint_aut_order"):
            return None
        return automorphism_group(G).order()
    raise KeyError(key)


def fingerprint(G, level="full", stop=None):
    """Fingerprint of ``G`` at the ``cheap`` or ``full`` level.

    ``stop`` is an optional predicate on the partial fingerprint; computing
    stops as soon as it returns True (e.g. once the group is identified).
    """
    keys = CHEAP if level == "cheap" else FULL
    fp = Fingerprint({})
    for k in keys:
        try:
            fp.components[k] = _component(G, k)
        except BudgetExceeded:
            fp.components[k] = None
        if stop is not None and stop(fp):
            break
    return fp


def _fp_of(G):
    fp = G.__dict__.get("_fingerprint")
    if fp is None:
        fp = fingerprint(G)
        G.__dict__["_fingerprint"] = fp
    return fp


def is_isomorphic(G, H):
    stats["isomorphic"] += 1
    return isomorphic(G, H) is not None


def identify(G, entries, complete=True):
    """Index of the entry isomorphic to ``G`` among ``(group, fingerprint)`` pairs, or None.

    With ``complete`` the type of ``G`` is known to occur among the entries,
    so a single fingerprint-compatible entry identifies it. Fingerprint
    components are computed only until the candidates are narrowed down.
    """
    remaining = list(range(len(entries)))

    def narrowed(fp):
        nonlocal remaining
        remaining = [i for i in remaining if fp.compatible(entries[i][1])]
        return len(remaining) <= 1

    fp = G.__dict__.get("_fingerprint")
    if fp is None:
        fingerprint(G, stop=narrowed)
    else:
        narrowed(fp)
    if complete and len(remaining) == 1:
        return remaining[0]
    for i in remaining:
        if is_isomorphic(G, entries[i][0]):
            return i
    return None


# -- canonical construction ---------------------------------------------------------

def module_subgroup(E):
    """The normal subgroup of ``E.perm`` generated by the module generators."""
    nl = len(E.rws.letters)
    return PermGroup(E.perm.generators[nl:], E.perm.degree)


def _factor_perm(G, N):
    from .permrep import reduce_degree
    Q, _ = factor_group(G, N)
    return reduce_degree(Q)


def canonical_check(E, catalog):
    """True iff ``E`` arises from its canonical (minimal) construction path.

    1. no minimal normal subgroup is smaller than ``M``;
    2. among minimal normal subgroups of order ``|M|``, the factor by ``M``
       has the least catalog index.
    ``catalog`` maps an order to its list of ``(group, fingerprint)`` pairs in
    index order; ``E.info['factor_index']`` is the index of ``F``.
    """
    G = E.perm
    m = E.module.p ** E.module.dim
    Mgroup = module_subgroup(E)
    mins = minimal_normal_subgroups(G)
    if any(N.order < m for N in mins):
        return False
    own = E.info["factor_index"]
    entries = catalog(G.order() // m)
    for N in mins:
        if N.order != m or Mgroup.same_group(N.group) or own == 0:
            continue
        idx = identify(_factor_perm(G, N.group), entries)
        if idx is None:
            raise InvariantViolation("factor group missing from a complete catalog order")
        if idx < own:
            return False
    return True


def second_equal_minimal(E):
    """True if ``E`` has a minimal normal subgroup other than ``M`` of the same order."""
    G = E.perm
    m = E.module.p ** E.module.dim
    Mgroup = module_subgroup(E)
    return any(N.order == m and not Mgroup.same_group(N.group)
               for N in minimal_normal_subgroups(G))


def dedupe(candidates):
    """Drop isomorphic duplicates, keeping the first of each class in the given order.

    A candidate with ``M`` as its only minimal normal subgroup of that order
    can only be isomorphic to another construction over the same factor by an
    isomorphism fixing ``M``, which the compatible-pair orbits already exclude;
    such candidates are kept without any explicit test.
    """
    kept = []
    flagged = []
    for E in candidates:
        if not second_equal_minimal(E):
            kept.append(E)
            continue
        fp = _fp_of(E.perm)
        dup = False
        for other in flagged:
            if fp.compatible(_fp_of(other.perm)) and is_isomorphic(E.perm, other.perm):
                dup = True
                break
        if not dup:
            flagged.append(E)
            kept.append(E)
    return kept


def dedupe_groups(groups):
    """Indices of pairwise non-isomorphic groups (first of each class), by fingerprint then test."""
    reps = []
    for i, G in enumerate(groups):
        fp = _fp_of(G)
        if not any(fp.compatible(_fp_of(groups[j])) and is_isomorphic(G, groups[j]) for j in reps):
            reps.append(i)
    return reps
