from hypothesis import given, settings, strategies as st

from perfgroups import isorej
from perfgroups.cohomology import h2
from perfgroups.compat import compatible_pairs, module_orbit_representatives, orbit_representatives
from perfgroups.ffmod import irreducible_modules, trivial_module
from perfgroups.groupcore import (PermGroup, alternating_group, direct_product, is_perfect_presentation,
                                  isomorphic)
from perfgroups.groupcore.matrixgroups import psl2, sl2
from perfgroups.groupcore.perm import mul
from perfgroups.isorej import (CHEAP, FULL, Fingerprint, canonical_check, dedupe, dedupe_groups,
                               fingerprint, identify, second_equal_minimal)
from perfgroups.permrep import ExtensionRecord, faithful_perm_rep, reduce_degree
from perfgroups.pipeline.catalog import parse_fingerprint


def regular(G):
    elems = G.elements()
    idx = {g: i for i, g in enumerate(elems)}
    return PermGroup([tuple(idx[mul(x, g)] for x in elems) for g in G.generators], len(elems))


def test_fingerprint_separates_sl25_from_a5_times_c2():
    A = alternating_group(5)
    B = direct_product(A, PermGroup([(1, 0)], 2))
    fa, fb = fingerprint(sl2(5)), fingerprint(B)
    assert fa.get("order") == fb.get("order") == 120
    assert not fa.compatible(fb)


def test_fingerprint_is_invariant_under_relabelling():
    G = psl2(7)
    f1 = fingerprint(G)
    f2 = fingerprint(reduce_degree(regular(G)))
    assert f1 == f2


def test_a5_fingerprint_values():
    fp = fingerprint(alternating_group(5))
    assert fp.get("classes") == 5
    assert fp.get("class_orders") == ((1, 1), (2, 15), (3, 20), (5, 12), (5, 12))
    assert fp.get("normal") == ((1, True), (60, True))
    assert fp.get("aut_order") == 120
    assert fp.get("derived") == ()


def test_cheap_level_has_only_cheap_components():
    fp = fingerprint(alternating_group(5), "cheap")
    assert set(fp.components) == set(CHEAP)


def test_none_component_is_a_wildcard():
    a = Fingerprint({"order": 60, "aut_order": None})
    b = Fingerprint({"order": 60, "aut_order": 120})
    c = Fingerprint({"order": 120, "aut_order": 120})
    assert a.compatible(b) and b.compatible(a)
    assert not a.compatible(c)


def test_serialize_round_trip():
    for G in [alternating_group(5), sl2(5), psl2(7)]:
        fp = fingerprint(G)
        back = parse_fingerprint(fp.serialize())
        assert back.compatible(fp) and fp.compatible(back)
        assert back.serialize() == fp.serialize()
    partial = Fingerprint({"order": 60})
    text = partial.serialize()
    assert text.count("absent") == len(FULL) - 1


@settings(max_examples=25, deadline=None)
@given(st.permutations(list(range(5))))
def test_fingerprint_stable_under_conjugation(pi):
    A = alternating_group(5)
    p = tuple(pi)
    inv = [0] * 5
    for i, x in enumerate(p):
        inv[x] = i
    conj = [tuple(p[g[inv[i]]] for i in range(5)) for g in A.generators]
    assert fingerprint(PermGroup(conj, 5), "cheap") == fingerprint(A, "cheap")


def test_identify_finds_the_right_entry():
    groups = [alternating_group(5), psl2(7)]
    entries = [(G, fingerprint(G)) for G in groups]
    assert identify(reduce_degree(regular(psl2(7))), entries) == 1
    assert identify(alternating_group(5), entries) == 0


def test_identify_incomplete_uses_isomorphism_test():
    A = alternating_group(5)
    entries = [(A, fingerprint(A))]
    before = isorej.stats["isomorphic"]
    assert identify(PermGroup(A.generators, 6), entries, complete=False) == 0
    assert isorej.stats["isomorphic"] == before + 1


def test_dedupe_groups_keeps_one_per_class():
    A = alternating_group(5)
    gs = [A, sl2(5), reduce_degree(regular(A)), regular(sl2(5)), psl2(7)]
    assert dedupe_groups(gs) == [0, 1, 4]


# -- canonical construction paths on real extensions ----------------------------------

_cache = {}


def cell_extensions(name, p, dim):
    key = (name, p, dim)
    if key not in _cache:
        F = {"A5": alternating_group(5), "SL25": sl2(5), "L27": psl2(7)}[name]
        out = []
        mods = [trivial_module(F, p)] if dim == 1 else \
            module_orbit_representatives(F, [M for M in irreducible_modules(F, p, dim) if M.dim == dim])
        for M in mods:
            H = h2(F, M)
            for z in orbit_representatives(compatible_pairs(F, M), H):
                E = ExtensionRecord(H.rws, M, z)
                if not is_perfect_presentation(E.presentation):
                    continue
                faithful_perm_rep(E)
                E.perm = reduce_degree(E.perm)
                E.info["factor_index"] = 0
                out.append(E)
        _cache[key] = (F, out)
    return _cache[key]


def test_960_extensions_are_canonical_and_unflagged():
    F, exts = cell_extensions("A5", 2, 4)
    assert len(exts) == 2
    cat = {60: [(F, fingerprint(F))]}
    for E in exts:
        assert canonical_check(E, cat.__getitem__)
        assert not second_equal_minimal(E)
    before = isorej.stats["isomorphic"]
    assert len(dedupe(exts)) == 2
    assert isorej.stats["isomorphic"] == before


def test_nonsplit_1344_canonical():
    F, exts = cell_extensions("L27", 2, 3)
    assert len(exts) == 2
    cat = {168: [(F, fingerprint(F))]}
    assert all(canonical_check(E, cat.__getitem__) for E in exts)
    assert not isomorphic(exts[0].perm, exts[1].perm)


def test_smaller_minimal_normal_subgroup_is_rejected():
    # over SL(2,5) the centre gives a minimal normal subgroup of order 2 < 16
    F, exts = cell_extensions("SL25", 2, 4)
    assert exts
    cat = {120: [(F, fingerprint(F))]}
    for E in exts:
        small = [N for N in isorej.minimal_normal_subgroups(E.perm) if N.order < 16]
        assert canonical_check(E, cat.__getitem__) == (not small)

