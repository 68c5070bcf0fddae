import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from perfgroups import budget
from perfgroups.errors import BudgetExceeded
from perfgroups.groupcore import (FpPresentation, PermGroup, Permutation, abelian_invariants,
                                  alternating_group, automorphism_group, conjugacy_classes,
                                  cyclic_group, direct_product, is_perfect, isomorphic,
                                  low_index_subgroups, normal_subgroups, order, symmetric_group)
from perfgroups.groupcore.fpgroup import presentation_from_table, smith_normal_form_diagonal
from perfgroups.groupcore.lowindex import _coset_table_search
from perfgroups.groupcore.matrixgroups import psl2, sl2
from perfgroups.groupcore.perm import from_cycles, inv, mul
from perfgroups.groupcore.structure import centre, factor_group, minimal_normal_subgroups


def brute_elements(gens, n):
    e = tuple(range(n))
    seen = {e}
    queue = [e]
    for x in queue:
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def quaternion():
    i = from_cycles(8, [(1, 2, 3, 4), (5, 6, 7, 8)])
    j = from_cycles(8, [(1, 5, 3, 7), (2, 8, 4, 6)])
    return PermGroup([i, j])


def small_groups():
    return {
        "S3": symmetric_group(3),
        "A4": alternating_group(4),
        "S4": symmetric_group(4),
        "Q8": quaternion(),
        "C6": cyclic_group(6),
        "A4xC2": direct_product(alternating_group(4), cyclic_group(2)),
        "D8xC3": PermGroup([from_cycles(7, [(1, 2, 3, 4)]), from_cycles(7, [(1, 3)]),
                            from_cycles(7, [(5, 6, 7)])]),
        "A5": alternating_group(5),
        "S5": symmetric_group(5),
        "SL25": sl2(5),
        "C2^3": PermGroup([from_cycles(6, [(1, 2)]), from_cycles(6, [(3, 4)]),
                           from_cycles(6, [(5, 6)])]),
    }


# -- permutations and orders --------------------------------------------------

def test_permutation_one_based_interface():
    a = Permutation.from_cycles(5, [(1, 2, 3)])
    b = Permutation.from_images([2, 1, 3, 4, 5])
    assert a.images == [2, 3, 1, 4, 5]
    assert (a * b).images == [1, 3, 2, 4, 5]      # apply a, then b
    assert (a * a.inverse()).images == [1, 2, 3, 4, 5]
    assert a.order() == 3


def test_order_examples():
    a5 = PermGroup([from_cycles(5, [(1, 2, 3, 4, 5)]), from_cycles(5, [(3, 4, 5)])])
    assert order(a5) == 60
    assert order(PermGroup([], 1)) == 1
    assert order(PermGroup([from_cycles(4, [(1, 2)]), from_cycles(4, [(1, 2, 3, 4)])])) == 24


perm_strategy = st.integers(min_value=2, max_value=7).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3).map(
        lambda gs: (n, [tuple(g) for g in gs])))


@settings(max_examples=60, deadline=None)
@given(perm_strategy, st.randoms(use_true_random=False))
def test_chain_order_matches_enumeration_and_relabelling(data, rnd):
    n, gens = data
    G = PermGroup(gens, n)
    assert G.order() == len(brute_elements(gens, n))
    # a relabelling of points changes the base the chain picks
    pi = list(range(n))
    rnd.shuffle(pi)
    pi = tuple(pi)
    H = PermGroup([mul(mul(inv(pi), g), pi) for g in gens], n)
    assert H.order() == G.order()
    for g in gens:
        assert G.contains(g)


@settings(max_examples=40, deadline=None)
@given(perm_strategy)
def test_class_equation(data):
    n, gens = data
    G = PermGroup(gens, n)
    classes = conjugacy_classes(G)
    assert sum(size for _, size, _ in classes) == G.order()
    for _, size, cent in classes:
        assert G.order() % size == 0
        assert size * cent == G.order()


# -- perfectness and abelianization ------------------------------------------

def test_is_perfect_examples():
    assert is_perfect(alternating_group(5))
    assert not is_perfect(symmetric_group(3))
    G = sl2(5)
    assert G.degree == 24
    assert is_perfect(G)


def test_sl25_derived_subgroup_by_enumeration():
    G = sl2(5)
    elems = G.elements()
    rnd = random.Random(3)
    comms = {mul(mul(inv(a), inv(b)), mul(a, b))
             for a, b in ((rnd.choice(elems), rnd.choice(elems)) for _ in range(200))}
    assert len(brute_elements(list(comms), G.degree)) == 120


def test_abelian_invariants_examples():
    assert abelian_invariants(FpPresentation(["a"], [[1] * 6])) == [6]
    a5 = FpPresentation(["a", "b"], [[1, 1], [2, 2, 2], [1, 2] * 5])
    assert abelian_invariants(a5) == []
    assert abelian_invariants(FpPresentation(["a", "b"], [[-1, -2, 1, 2]])) == [0, 0]
    assert abelian_invariants(FpPresentation(["a", "b"], [])) == [0, 0]


def test_smith_form_against_sympy():
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    rnd = random.Random(7)
    for _ in range(25):
        r, c = rnd.randint(1, 4), rnd.randint(1, 4)
        rows = [[rnd.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        ours = sorted(d for d in smith_normal_form_diagonal(rows, c) if d)
        S = smith_normal_form(Matrix(rows), domain=ZZ)
        theirs = sorted(abs(S[i, i]) for i in range(min(r, c)) if S[i, i] != 0)
        assert ours == theirs


def test_invalid_relator_rejected():
    with pytest.raises(ValueError):
        FpPresentation(["a"], [[1, 2]])


@pytest.mark.parametrize("name", sorted(small_groups()))
def test_perfect_iff_presentation_perfect(name):
    G = small_groups()[name]
    P = presentation_from_table(G.table)
    assert is_perfect(G) == (abelian_invariants(P) == [])


def test_presentation_abelianization_matches_group():
    assert abelian_invariants(presentation_from_table(symmetric_group(4).table)) == [2]
    assert abelian_invariants(presentation_from_table(cyclic_group(6).table)) == [6]


# -- classes and normal subgroups --------------------------------------------

def test_class_sizes_examples():
    assert sorted(s for _, s, _ in conjugacy_classes(alternating_group(5))) == [1, 12, 12, 15, 20]
    assert [s for _, s, _ in conjugacy_classes(cyclic_group(6))] == [1] * 6
    assert sorted(s for _, s, _ in conjugacy_classes(symmetric_group(3))) == [1, 2, 3]


def test_normal_subgroup_examples():
    assert [N.order for N in normal_subgroups(alternating_group(5))] == [1, 60]
    assert [N.order for N in minimal_normal_subgroups(alternating_group(5))] == [60]
    a4 = normal_subgroups(alternating_group(4))
    assert [N.order for N in a4] == [1, 4, 12]
    assert [N.minimal for N in a4] == [False, True, False]
    sl = normal_subgroups(sl2(5))
    assert [N.order for N in sl] == [1, 2, 120]
    assert [N.order for N in minimal_normal_subgroups(sl2(5))] == [2]
    assert centre(sl2(5)).order() == 2


def brute_normal_subgroups(G):
    """Normal subgroups as element sets: closures of unions of classes."""
    elems = G.elements()
    found = set()
    frontier = {frozenset([G.identity])}
    found |= frontier
    while frontier:
        new = set()
        for N in frontier:
            for x in elems:
                if x in N:
                    continue
                gens = list(N) + [mul(mul(inv(g), x), g) for g in elems]
                M = frozenset(brute_elements(gens, G.degree))
                if M not in found:
                    found.add(M)
                    new.add(M)
        frontier = new
    return found


@pytest.mark.parametrize("name", ["S3", "A4", "S4", "Q8", "C6", "A4xC2", "D8xC3", "C2^3"])
def test_normal_subgroups_match_brute_force(name):
    G = small_groups()[name]
    ours = {frozenset(N.group.elements()) if N.order > 1 else frozenset([G.identity])
            for N in normal_subgroups(G)}
    assert ours == brute_normal_subgroups(G)


@pytest.mark.parametrize("name", sorted(small_groups()))
def test_normal_subgroups_closed_under_meet_and_join(name):
    G = small_groups()[name]
    sets = {N.classes for N in normal_subgroups(G)}
    for A in sets:
        for B in sets:
            assert A & B in sets
    # joins: the class set of the join is a member too
    Ns = normal_subgroups(G)
    for A in Ns:
        for B in Ns:
            J = PermGroup(A.group.generators + B.group.generators, G.degree)
            assert any(J.order() == C.order and J.is_subgroup_of(C.group) for C in Ns)


def test_factor_group():
    G = symmetric_group(4)
    V = [N for N in normal_subgroups(G) if N.order == 4][0].group
    Q, imgs = factor_group(G, V)
    assert Q.order() == 6
    assert not Q.is_abelian()


# -- automorphisms and isomorphism -------------------------------------------

@pytest.mark.parametrize("name,size", [("A5", 120), ("Q8", 24), ("S4", 24), ("C6", 2),
                                       ("S3", 6), ("A4", 24)])
def test_automorphism_group_orders(name, size):
    assert automorphism_group(small_groups()[name]).order() == size


def test_aut_v4_is_gl22():
    v4 = PermGroup([from_cycles(4, [(1, 2), (3, 4)]), from_cycles(4, [(1, 3), (2, 4)])])
    assert automorphism_group(v4).order() == 6


def test_inner_automorphisms_index_two_in_aut_a5():
    G = alternating_group(5)
    A = automorphism_group(G)
    inner = PermGroup([A.inner(g) for g in G.generators], len(A.omega))
    assert inner.order() * 2 == A.order()


def test_automorphisms_are_automorphisms():
    G = sl2(5)
    A = automorphism_group(G)
    assert A.order() == 120
    for hom in A.generators:
        assert hom.is_homomorphism()
        assert hom.is_injective()


def test_isomorphic_examples():
    A5 = alternating_group(5)
    phi = isomorphic(A5, psl2(5))
    assert phi is not None and phi.is_homomorphism() and phi.is_injective()
    c4 = cyclic_group(4)
    v4 = PermGroup([from_cycles(4, [(1, 2), (3, 4)]), from_cycles(4, [(1, 3), (2, 4)])])
    assert isomorphic(c4, v4) is None
    assert isomorphic(A5, symmetric_group(5)) is None


def test_isomorphism_independent_of_generators():
    A5 = alternating_group(5)
    rnd = random.Random(5)
    for _ in range(5):
        while True:
            gs = A5.random_elements(2, rnd)
            if PermGroup(gs, 5).order() == 60:
                break
        H = PermGroup(gs, 5)
        assert isomorphic(A5, H) is not None
        assert isomorphic(H, psl2(5)) is not None


def test_sl25_not_isomorphic_to_s5_or_a5xc2():
    G = sl2(5)
    assert isomorphic(G, symmetric_group(5)) is None
    assert isomorphic(G, direct_product(alternating_group(5), cyclic_group(2))) is None


def test_order_cap_enforced():
    budget.set_cap("group_order", 50)
    try:
        with pytest.raises(BudgetExceeded):
            conjugacy_classes(alternating_group(5))
    finally:
        budget.reset()


# -- low index subgroups -----------------------------------------------------

def test_low_index_examples():
    A5 = alternating_group(5)
    assert [(s.index, s.group.order()) for s in low_index_subgroups(A5, 5)] == [(1, 60), (5, 12)]
    assert [(s.index, s.group.order()) for s in low_index_subgroups(A5, 6)] == [
        (1, 60), (5, 12), (6, 10)]
    assert [s.index for s in low_index_subgroups(cyclic_group(2), 2)] == [1, 2]


def test_low_index_a5_all_classes():
    got = [s.index for s in low_index_subgroups(alternating_group(5), 60)]
    assert got == [1, 5, 6, 10, 12, 15, 20, 30, 60]


def test_low_index_cap():
    with pytest.raises(BudgetExceeded):
        low_index_subgroups(alternating_group(5), budget.get("low_index") + 1)


def brute_subgroup_classes(G):
    """Subgroup conjugacy classes by closing over pairs of elements (small groups)."""
    elems = G.elements()
    subs = {frozenset(brute_elements([a, b], G.degree)) for a in elems for b in elems}
    # groups here are all 2-generated or we add triples
    subs |= {frozenset(brute_elements([a, b, c], G.degree))
             for a in elems[:12] for b in elems for c in elems[:12]}
    classes = []
    seen = set()
    for S in sorted(subs, key=len):
        if S in seen:
            continue
        orbit = {frozenset(mul(mul(inv(g), s), g) for s in S) for g in elems}
        seen |= orbit
        classes.append(len(S))
    return Counter(G.order() // s for s in classes)


@pytest.mark.parametrize("name", ["S3", "A4", "S4", "Q8", "C6", "D8xC3"])
def test_low_index_matches_brute_force(name):
    G = small_groups()[name]
    ours = Counter(s.index for s in low_index_subgroups(G, G.order()))
    assert ours == brute_subgroup_classes(G)


@pytest.mark.parametrize("name,m", [("S4", 24), ("A4xC2", 24), ("S5", 30), ("SL25", 40),
                                    ("C2^3", 8)])
def test_low_index_matches_coset_table_search(name, m):
    G = small_groups()[name]
    ours = Counter(s.index for s in low_index_subgroups(G, m))
    theirs = Counter(G.order() // H.order() for H in _coset_table_search(G, m))
    assert ours == theirs


def test_low_index_subgroups_not_conjugate():
    G = symmetric_group(4)
    subs = low_index_subgroups(G, 24)
    elems = G.elements()
    sets = [frozenset(s.group.elements()) for s in subs]
    for i, A in enumerate(sets):
        conj = {frozenset(mul(mul(inv(g), a), g) for a in A) for g in elems}
        for B in sets[i + 1:]:
            assert B not in conj
