"""Perfect groups of a given order from the perfect groups of smaller orders."""

from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor, as_completed
from collections import Counter
from math import prod

from .. import budget
from ..cohomology import h2
from ..compat import compatible_pairs, module_orbit_representatives, orbit_representatives
from ..errors import InvariantViolation
from ..ffmod import irreducible_modules, trivial_module
from ..groupcore.fpgroup import is_perfect_presentation
from ..groupcore.homomorphism import GroupHomomorphism
from ..groupcore.permgroup import PermGroup
from ..groupcore.structure import normal_subgroups
from ..isorej import canonical_check, dedupe, dedupe_groups, fingerprint
from ..permrep import ExtensionRecord, faithful_perm_rep, reduce_degree
from ..rws import confluent_rws
from .catalog import CellStore, GroupRecord, PerfectCatalog
from .seeds import COMPLETE_BELOW, fitting_free, load_seeds

# counters for acceptance reporting (per process)
stats = Counter()


def prime_power(m):
    """``(p, a)`` if ``m = p^a`` with ``a >= 1``, else None."""
    if m < 2:
        return None
    p = next(q for q in range(2, m + 1) if m % q == 0)
    a = 0
    while m % p == 0:
        m //= p
        a += 1
    return (p, a) if m == 1 else None


def gl_order(a, p):
    return prod(p ** a - p ** i for i in range(a))


def admissible_cells(n, orders):
    """``(d, p, a)`` with ``d`` a proper divisor among ``orders``, ``n/d = p^a``, and ``a > 1`` or ``p | d``."""
    out = []
    for d in sorted(orders):
        if d >= n or n % d:
            continue
        pa = prime_power(n // d)
        if pa is None:
            continue
        p, a = pa
        if a > 1 or d % p == 0:
            out.append((d, p, a))
    return out


def gl_bound_allows(F, p, a):
    """Whether some nontrivial quotient of ``F`` has order dividing ``|GL_a(p)|``."""
    g = gl_order(a, p)
    n = F.order()
    if g % n == 0:
        return True
    return any(N.order < n and g % (n // N.order) == 0 for N in normal_subgroups(F))


def _rws(F):
    R = F.__dict__.get("_rws")
    if R is None:
        R = confluent_rws(F)
        stats["rws_built"] += 1
        if R.count_irreducible_words() != F.order():
            raise InvariantViolation("rewriting system has the wrong number of normal forms")
        R.certify()
        stats["rws_certified"] += 1
        F.__dict__["_rws"] = R
    return R


def cell_modules(F, p, a, all_modules=False):
    """Irreducible ``a``-dimensional modules that can give perfect extensions."""
    if a == 1:
        # a perfect group acts trivially on a 1-dimensional module
        return [trivial_module(F, p)]
    if not gl_bound_allows(F, p, a):
        return []
    mods = [M for M in irreducible_modules(F, p, a) if M.dim == a and not M.is_trivial()]
    return mods if all_modules else module_orbit_representatives(F, mods)


def cell_extensions(F, findex, d, p, a, all_cocycles=False, log_cell=None):
    """Perfect extensions of ``p^a`` by ``F`` with faithful small-degree permutation groups.

    With ``all_cocycles`` every module and every class in H^2 is used (no
    orbit reduction); otherwise one cocycle per compatible-pair orbit.
    """
    out = []
    R = _rws(F)
    for j, M in enumerate(cell_modules(F, p, a, all_modules=all_cocycles)):
        H = h2(F, M, R)
        if all_cocycles:
            zs = [H.cocycle(c) for c in H.elements()]
        else:
            zs = orbit_representatives(compatible_pairs(F, M), H)
        if log_cell is not None:
            log_cell(j, M, H, len(zs))
        for i, z in enumerate(zs):
            E = ExtensionRecord(R, M, z)
            if not is_perfect_presentation(E.presentation):
                continue
            P = faithful_perm_rep(E)
            stats["lifted"] += 1
            if P.order() != F.order() * p ** a:
                raise InvariantViolation("lifted permutation group has the wrong order")
            stats["lifted_exact"] += 1
            if not P.is_perfect():
                raise InvariantViolation("perfect presentation with a non-perfect permutation image")
            Q = reduce_degree(P)
            if Q.order() != E.order():
                raise InvariantViolation("degree reduction changed the group order")
            E.perm = Q
            E.projection = GroupHomomorphism(Q, F, E.projection.generator_images)
            E.info.update(factor_index=findex, d=d, p=p, a=a, orbit=i, module=j)
            out.append(E)
    return out


def _construction(E, F_order, F_index):
    i = E.info
    return (f"d={i['d']} F={F_order}/{F_index + 1} p={i['p']} a={i['a']} "
            f"orbit={i['orbit']} module={i['module']}")


def _finalize(order, items):
    """Sort ``(group, construction)`` pairs into catalog order and index them."""
    recs = []
    for arrival, (G, cons) in enumerate(items):
        if G.order() != order or not G.is_perfect():
            raise InvariantViolation(f"catalog candidate of order {G.order()} is not perfect of order {order}")
        fp = fingerprint(G)
        G.__dict__["_fingerprint"] = fp
        recs.append((fp.sort_key(("order", "derived", "classes", "class_orders")), fp.sort_key(), arrival,
                     G, fp, cons))
    recs.sort(key=lambda r: r[:3])
    return [GroupRecord(order, k + 1, G, fp, cons) for k, (_, _, _, G, fp, cons) in enumerate(recs)]


def run_cell(F, findex, d, p, a, entries):
    """Constructed groups of one ``(d, F, p, a)`` cell as ``(group, construction)`` pairs.

    ``entries`` maps an order to the catalog ``(group, fingerprint)`` pairs.
    """
    cands = cell_extensions(F, findex, d, p, a)
    cands = [E for E in cands if canonical_check(E, entries)]
    out = []
    for E in dedupe(cands):
        if not (E.info["a"] > 1 or E.info["d"] % E.info["p"] == 0):
            raise InvariantViolation("construction violates the admissibility rule")
        out.append((E.perm, _construction(E, d, findex)))
    return out


def _cell_job(args):
    F, findex, d, p, a, entries, caps = args
    for k, v in caps.items():
        budget.set_cap(k, v)
    res = run_cell(F, findex, d, p, a, lambda m: entries.get(m, []))
    return [(G.generators, G.degree, cons) for G, cons in res]


def order_cells(n, catalog):
    """``(d, p, a, record)`` for every cell of order ``n``, in cell-key order."""
    orders = [d for d in catalog.groups if d <= catalog.frontier]
    return [(d, p, a, rec) for d, p, a in admissible_cells(n, orders) for rec in catalog.get(d)]


def cell_key(d, p, a, rec):
    return f"{d}_{rec.index}_{p}_{a}"


def perfect_groups_of_order(n, catalog, seeds, jobs=1, cell_store=None, on_cell=None,
                            seeds_complete=False):
    """Complete, indexed list of perfect groups of order ``n``.

    Reads only catalog orders that properly divide ``n``. Cells are merged in
    cell-key order whatever order they finish in, so ``jobs`` does not change
    the result. ``cell_store`` (optional) persists finished cells for resuming.
    Beyond the range of the built-in seeds the caller must vouch that
    ``seeds`` holds every simple group of order dividing ``n``.
    """
    if n >= COMPLETE_BELOW and not seeds_complete:
        raise ValueError(f"built-in seeds are complete only below order {COMPLETE_BELOW}")
    catalog.reading_for = n
    try:
        items = [(G, f"seed {name}" if "*" not in name else f"product {name}")
                 for name, G in fitting_free(n, seeds)]
        cells = order_cells(n, catalog)
        done = {}
        todo = []
        for c in cells:
            key = cell_key(*c)
            got = cell_store.load(n, key) if cell_store is not None else None
            if got is not None:
                done[key] = got
            else:
                todo.append(c)
        if todo:
            divisors = sorted({m for m in catalog.groups if m < n and n % m == 0})
            entries = {m: catalog.entries(m) for m in divisors}
        else:
            entries = {}
    finally:
        catalog.reading_for = None

    def finished(c, res):
        key = cell_key(*c)
        done[key] = res
        if cell_store is not None:
            cell_store.save(n, key, res)
        if on_cell is not None:
            on_cell(n, c[0], c[1], c[2], c[3].index, len(res))

    if jobs > 1 and len(todo) > 1:
        caps = budget.snapshot()
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            futs = {pool.submit(_cell_job, (rec.group, rec.index - 1, d, p, a, entries, caps)):
                    (d, p, a, rec) for d, p, a, rec in todo}
            for fut in as_completed(futs):
                res = [(PermGroup(gens, deg), cons) for gens, deg, cons in fut.result()]
                finished(futs[fut], res)
    else:
        for c in todo:
            d, p, a, rec = c
            finished(c, run_cell(rec.group, rec.index - 1, d, p, a, lambda m: entries.get(m, [])))
    for c in cells:
        items.extend(done[cell_key(*c)])
    return _finalize(n, items)


def enumerate_up_to(N, catalog=None, seeds=None, seed_file=None, jobs=1, out_dir=None,
                    on_order=None, on_cell=None):
    """Extend ``catalog`` to be complete up to order ``N``.

    With ``out_dir`` every finished order and every finished cell is written
    there, so an interrupted run can continue from ``PerfectCatalog.load``.
    """
    catalog = catalog if catalog is not None else PerfectCatalog()
    seeds = seeds if seeds is not None else load_seeds(N, seed_file)
    store = CellStore(out_dir) if out_dir is not None else None
    for n in range(catalog.frontier + 1, N + 1):
        recs = (perfect_groups_of_order(n, catalog, seeds, jobs, store, on_cell)
                if n >= 60 else [])
        catalog.publish(n, recs)
        if out_dir is not None:
            catalog.save_order(out_dir, n)
            store.clear(n)
        if recs and on_order is not None:
            on_order(n, recs)
    return catalog


def enumerate_divisors(target, seeds, jobs=1, out_dir=None, on_order=None):
    """Catalog of perfect groups of every order dividing ``target``.

    Only divisors are built, so this reaches orders far beyond what
    ``enumerate_up_to`` can. ``seeds`` must contain every simple group whose
    order divides ``target``.
    """
    catalog = PerfectCatalog()
    store = CellStore(out_dir) if out_dir is not None else None
    for n in range(60, target + 1):
        if target % n:
            continue
        recs = perfect_groups_of_order(n, catalog, seeds, jobs, store, seeds_complete=True)
        catalog.publish(n, recs)      # complete for divisors of target only
        if out_dir is not None:
            catalog.save_order(out_dir, n)
            store.clear(n)
        if recs and on_order is not None:
            on_order(n, recs)
    return catalog


# -- slow path for cross-checking ---------------------------------------------------

def oracle_count(n, catalog, seeds):
    """Number of perfect groups of order ``n`` by brute force over every cocycle.

    Every module (not just orbit representatives) and every element of H^2
    is lifted; no canonical-path rule is applied; the resulting groups are
    reduced by fingerprints and explicit isomorphism tests.
    """
    groups = [G for _, G in fitting_free(n, seeds)]
    catalog.reading_for = n
    try:
        for d, p, a, rec in order_cells(n, catalog):
            for E in cell_extensions(rec.group, rec.index - 1, d, p, a, all_cocycles=True):
                groups.append(E.perm)
    finally:
        catalog.reading_for = None
    return len(dedupe_groups(groups))
