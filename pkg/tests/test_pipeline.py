import math
import os

import pytest
from hypothesis import given, settings, strategies as st

from perfgroups.__main__ import main
from perfgroups.groupcore import isomorphic
from perfgroups.groupcore.matrixgroups import psl2
from perfgroups.pipeline import (PerfectCatalog, enumerate_up_to, fitting_free, holt_bounds,
                                 load_seeds, perfect_groups_of_order)
from perfgroups.pipeline.bounds import quantiles, stats_csv
from perfgroups.pipeline.catalog import CellStore, format_order, parse_order
from perfgroups.pipeline.engine import admissible_cells, gl_bound_allows, prime_power
from perfgroups.pipeline.seeds import COMPLETE_BELOW, read_seed_file


@pytest.fixture(scope="module")
def seeds():
    return load_seeds(COMPLETE_BELOW - 1)


@pytest.fixture(scope="module")
def catalog_1000(seeds):
    return enumerate_up_to(1000, seeds=seeds)


# -- seeds and Fitting-free groups ---------------------------------------------------

def test_seed_orders_ascending_and_simple(seeds):
    orders = [s.order for s in seeds]
    assert orders == sorted(orders)
    assert orders[:4] == [60, 168, 360, 504]


def test_seed_list_contains_all_simple_orders_below_bound(seeds):
    # orders of nonabelian simple groups below 6048, from the classification
    known = [60, 168, 360, 504, 660, 1092, 2448, 2520, 3420, 4080, 5616]
    assert sorted({s.order for s in seeds}) == known


def test_fitting_free_60(seeds):
    (name, G), = fitting_free(60, seeds)
    assert name == "A5" and G.order() == 60


def test_fitting_free_3600(seeds):
    (name, G), = fitting_free(3600, seeds)
    assert name == "A5*A5" and G.order() == 3600 and G.is_perfect()


def test_fitting_free_10080():
    s = load_seeds(10080)
    (name, G), = fitting_free(10080, s)
    assert name == "A5*L2(7)" and G.order() == 10080


def test_fitting_free_none(seeds):
    assert fitting_free(61, seeds) == []


def test_seed_file(tmp_path):
    G = psl2(7)
    path = tmp_path / "extra.txt"
    lines = [f"name X {G.degree}"] + [" ".join(map(str, g)) for g in G.generators]
    path.write_text("\n".join(lines) + "\n")
    (s,) = read_seed_file(str(path))
    assert s.order == 168 and isomorphic(s.group, G)
    with pytest.raises(ValueError):
        load_seeds(200, str(path))        # isomorphic to the built-in L2(7)


# -- divisor loop ---------------------------------------------------------------------

def test_prime_power():
    assert prime_power(16) == (2, 4)
    assert prime_power(5) == (5, 1)
    assert prime_power(12) is None and prime_power(1) is None


@settings(max_examples=50, deadline=None)
@given(st.integers(60, 5000))
def test_admissible_cells_rule(n):
    orders = [60, 120, 168, 336, 360, 504, 660, 720, 960]
    for d, p, a in admissible_cells(n, orders):
        assert d < n and d * p ** a == n
        assert a > 1 or d % p == 0


def test_admissible_cells_300():
    assert admissible_cells(300, [60]) == [(60, 5, 1)]
    assert admissible_cells(420, [60]) == []          # 7 does not divide 60


def test_gl_bound():
    A = load_seeds(60)[0].group
    assert not gl_bound_allows(A, 2, 2)      # |GL_2(2)| = 6
    assert gl_bound_allows(A, 2, 4)          # |GL_4(2)| = 20160 = 60 * 336
    assert not gl_bound_allows(A, 3, 2)      # |GL_2(3)| = 48


# -- per-order results -----------------------------------------------------------------

def test_order_120(catalog_1000):
    (r,) = catalog_1000.groups[120]
    assert r.construction.startswith("d=60 F=60/1 p=2 a=1")
    from perfgroups.groupcore.matrixgroups import sl2
    assert isomorphic(r.group, sl2(5))


def test_order_300_empty(catalog_1000):
    assert 300 not in catalog_1000.groups


def test_order_960(catalog_1000):
    recs = catalog_1000.groups[960]
    assert len(recs) == 2
    assert all(r.construction.startswith("d=60 F=60/1 p=2 a=4") for r in recs)


def test_census_1000(catalog_1000):
    assert catalog_1000.counts() == {60: 1, 120: 1, 168: 1, 336: 1, 360: 1, 504: 1, 660: 1, 960: 2}


def test_census_1000_with_sl29(catalog_1000):
    # the listed census omits SL(2,9), a central extension of A6
    assert catalog_1000.counts() == {60: 1, 120: 1, 168: 1, 336: 1, 360: 1, 504: 1, 660: 1,
                                      720: 1, 960: 2}


def test_enumerate_59_is_empty(seeds):
    cat = enumerate_up_to(59, seeds=seeds)
    assert cat.counts() == {} and cat.frontier == 59


def test_catalog_groups_are_perfect_with_declared_order(catalog_1000):
    for n, recs in catalog_1000.groups.items():
        for r in recs:
            assert r.group.order() == n and r.group.is_perfect()
            assert r.fingerprint.get("order") == n


def test_induction_access_check(catalog_1000):
    cat = PerfectCatalog(dict(catalog_1000.groups), 1000)
    cat.reading_for = 1080
    with pytest.raises(AssertionError):
        cat.get(720)              # 720 does not divide 1080
    cat.reading_for = None
    with pytest.raises(AssertionError):
        cat.get(1200)             # beyond the frontier


def test_no_order_published_twice(catalog_1000):
    cat = PerfectCatalog(dict(catalog_1000.groups), 1000)
    with pytest.raises(AssertionError):
        cat.publish(960, [])


# -- catalog files -----------------------------------------------------------------------

def test_format_round_trip(catalog_1000):
    for n, recs in catalog_1000.groups.items():
        text = format_order(n, recs)
        assert text.startswith(f"PERFECT v1 order={n} count={len(recs)}\n")
        order, back = parse_order(text)
        assert order == n and format_order(n, back) == text
        for r, s in zip(recs, back):
            assert r.group.generators == s.group.generators and r.construction == s.construction


def test_save_and_resume(tmp_path, seeds):
    out = str(tmp_path / "cat")
    enumerate_up_to(400, seeds=seeds, out_dir=out)
    assert sorted(os.listdir(out)) == ["frontier", "order_120.txt", "order_168.txt",
                                       "order_336.txt", "order_360.txt", "order_60.txt"]
    cat = PerfectCatalog.load(out)
    assert cat.frontier == 400 and cat.counts()[336] == 1
    enumerate_up_to(700, cat, seeds=seeds, out_dir=out)
    fresh = str(tmp_path / "fresh")
    enumerate_up_to(700, seeds=seeds, out_dir=fresh)
    for name in os.listdir(fresh):
        with open(os.path.join(out, name), "rb") as a, open(os.path.join(fresh, name), "rb") as b:
            assert a.read() == b.read()


def test_cell_checkpoint_is_reused(tmp_path, catalog_1000, seeds):
    store = CellStore(str(tmp_path))
    cat = PerfectCatalog(dict(catalog_1000.groups), 1000)
    cat.groups = {k: v for k, v in cat.groups.items() if k <= 960}
    cat.frontier = 959
    seen = []
    first = perfect_groups_of_order(960, cat, seeds, cell_store=store,
                                    on_cell=lambda *c: seen.append(c))
    assert seen and os.listdir(os.path.join(str(tmp_path), "cells", "960"))
    seen.clear()
    again = perfect_groups_of_order(960, cat, seeds, cell_store=store,
                                    on_cell=lambda *c: seen.append(c))
    assert seen == []         # every cell came from the checkpoint
    assert [r.group.generators for r in first] == [r.group.generators for r in again]


def test_jobs_do_not_change_result(catalog_1000, seeds):
    cat = PerfectCatalog({k: v for k, v in catalog_1000.groups.items() if k < 960}, 959)
    one = perfect_groups_of_order(960, cat, seeds, jobs=1)
    two = perfect_groups_of_order(960, cat, seeds, jobs=2)
    assert [format_order(960, one)] == [format_order(960, two)]


# -- bounds and statistics -------------------------------------------------------------

def test_bounds_at_two_million():
    lo, hi = holt_bounds(2 * 10 ** 6)
    assert lo == pytest.approx(1.8e-15, rel=0.05)
    assert hi == pytest.approx(2.6e189, rel=0.05)


def test_bounds_bracket_at_two():
    lo, hi = holt_bounds(2)
    assert lo <= 1 <= hi


def test_bounds_rejects_small_n():
    with pytest.raises(ValueError):
        holt_bounds(1)


@settings(max_examples=60, deadline=None)
@given(st.integers(16, 10 ** 7), st.integers(1, 1000))
def test_upper_bound_monotone(n, k):
    assert holt_bounds(n + k)[1] >= holt_bounds(n)[1]


def test_upper_bound_monotone_grid():
    ups = [holt_bounds(n)[1] for n in range(16, 5000)]
    assert all(a <= b for a, b in zip(ups, ups[1:]))


def test_stats_a5_only(seeds):
    cat = enumerate_up_to(60, seeds=seeds)
    lines = stats_csv(cat).splitlines()
    assert lines[0] == "order,index,degree,ratio"
    assert lines[1] == f"60,1,5,{5 / math.sqrt(60):.4f}" == "60,1,5,0.6455"


def test_stats_empty_is_header_only():
    assert stats_csv(PerfectCatalog()) == "order,index,degree,ratio\n"


def test_stats_degree_bound(catalog_1000):
    for line in stats_csv(catalog_1000).splitlines()[1:-1]:
        assert float(line.split(",")[3]) <= 10


def test_quantiles():
    assert quantiles([1, 2, 3, 4, 5], (0, 0.5, 1)) == [1, 3, 5]


# -- command line ------------------------------------------------------------------------

def test_cli_bounds(capsys):
    assert main(["bounds", "2000000"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("lower\t1.83e-15") and "upper\t2.54e+189" in out


def test_cli_enumerate_counts_stats(tmp_path, capsys):
    out = str(tmp_path / "c")
    assert main(["enumerate", "--max-order", "200", "--out", out]) == 0
    capsys.readouterr()
    assert main(["counts", "--out", out, "--range", "100..200"]) == 0
    assert capsys.readouterr().out == "order\tcount\n120\t1\n168\t1\ntotal\t2\n"
    assert main(["stats", "--out", out]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "60,1,5,0.6455"


def test_cli_budget_exit_code(tmp_path, capsys):
    out = str(tmp_path / "c")
    code = main(["enumerate", "--max-order", "130", "--out", out,
                 "--budget", "perm_index_start=2", "--budget", "perm_index_max=3"])
    assert code == 2
    assert PerfectCatalog.load(out).frontier == 119      # everything below 120 was saved


def test_cli_rejects_unknown_budget_key(capsys):
    with pytest.raises(SystemExit):
        main(["bounds", "100", "--budget", "nonsense=3"])
