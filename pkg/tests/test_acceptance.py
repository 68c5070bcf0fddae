"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

The lines are collected in the "acceptance criteria" section of the pytest summary.
The extended criterion 10 runs only with ``PERFGROUPS_EXTENDED=1``.
"""

import os
import re
import time

import pytest

from perfgroups.__main__ import main
from perfgroups.cohomology import h2
from perfgroups.ffmod import trivial_module
from perfgroups.groupcore import alternating_group
from perfgroups.groupcore.lowindex import low_index_subgroups
from perfgroups.groupcore.structure import minimal_normal_subgroups
from perfgroups.pipeline import PerfectCatalog, enumerate_up_to, load_seeds, oracle_count
from perfgroups.pipeline import engine
from perfgroups.pipeline.bounds import stats_csv
from perfgroups.pipeline.engine import admissible_cells, enumerate_divisors

CENSUS_1400 = {60: 1, 120: 1, 168: 1, 336: 1, 360: 1, 504: 1, 660: 1, 960: 2,
               1080: 1, 1092: 1, 1320: 1, 1344: 2}


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    """Two independent CLI runs of ``enumerate --max-order 1400``."""
    engine.stats.clear()
    out = []
    for k in range(2):
        d = str(tmp_path_factory.mktemp(f"run{k}"))
        t = time.time()
        code = main(["enumerate", "--max-order", "1400", "--out", d])
        out.append((d, code, time.time() - t))
    return out


def test_criterion_1_small_order_census(runs, report):
    d, code, secs = runs[0]
    counts = PerfectCatalog.load(d).counts()
    ok = code == 0 and counts == CENSUS_1400 and secs <= 600
    extra = {n: k for n, k in counts.items() if CENSUS_1400.get(n) != k}
    report(1, ok, f"counts {'match' if counts == CENSUS_1400 else 'differ at ' + str(extra)}, "
                  f"{secs:.0f} s")
    assert code == 0
    assert counts == CENSUS_1400
    assert secs <= 600


def test_criterion_2_oracle_equivalence(runs, report):
    seeds = load_seeds(2000)
    cat = PerfectCatalog.load(runs[0][0])
    t = time.time()
    cat = enumerate_up_to(2000, cat, seeds=seeds)
    fast_secs = time.time() - t + runs[0][2]
    oracle = PerfectCatalog()
    t = time.time()
    bad = []
    checked = 0
    for n in range(60, 2001):
        enumerate_up_to(n, oracle, seeds=seeds)
        if not admissible_cells(n, [m for m in oracle.groups if m < n]):
            continue
        checked += 1
        fast = len(cat.groups.get(n, []))
        slow = oracle_count(n, oracle, seeds)
        if fast != slow:
            bad.append((n, fast, slow))
    secs = time.time() - t
    ok = not bad and secs + fast_secs <= 1800
    report(2, ok, f"{checked} orders with extension cells compared, mismatches {bad}, "
                  f"fast {fast_secs:.0f} s, oracle {secs:.0f} s")
    assert not bad
    assert secs + fast_secs <= 1800


def test_criterion_3_schur_multiplier(report):
    A = alternating_group(5)
    dims = [h2(A, trivial_module(A, p)).h for p in (2, 3, 5)]
    ok = dims == [1, 0, 0]
    report(3, ok, f"dim H^2(A5, F_p) for p = 2, 3, 5: {dims}")
    assert ok


def has_complement(G, N):
    """Whether ``N`` has a complement in ``G``, by a search over subgroups of index |N|."""
    n = N.order()
    others = [x for x in N.elements() if x != N.identity]
    for S in low_index_subgroups(G, n):
        if S.index == n and not any(S.group.contains(x) for x in others):
            return True
    return False


def test_criterion_4_order_960_structure(runs, report):
    recs = PerfectCatalog.load(runs[0][0]).groups.get(960, [])
    split = []
    for r in recs:
        (N,) = [N for N in minimal_normal_subgroups(r.group) if N.order == 16]
        split.append(has_complement(r.group, N.group))
    ok = len(recs) == 2 and split.count(True) == 1
    report(4, ok, f"{len(recs)} groups of order 960, complement to the order-16 subgroup: {split}")
    assert len(recs) == 2
    assert split.count(True) == 1


def test_criterion_5_extension_order_law(runs, report):
    s = engine.stats
    ok = s["lifted"] > 0 and s["lifted"] == s["lifted_exact"]
    for d, _, _ in runs:
        for n, recs in PerfectCatalog.load(d).groups.items():
            ok &= all(r.group.order() == n for r in recs)
    report(5, ok, f"{s['lifted_exact']}/{s['lifted']} lifted extensions have order |F| p^a")
    assert ok


def test_criterion_6_confluence_certificates(runs, report):
    s = engine.stats
    ok = s["rws_built"] > 0 and s["rws_built"] == s["rws_certified"]
    report(6, ok, f"{s['rws_certified']}/{s['rws_built']} rewriting systems certified "
                  f"(normal-form count and all critical pairs)")
    assert ok


def test_criterion_7_bounds(capsys, report):
    assert main(["bounds", "2000000"]) == 0
    out = capsys.readouterr().out
    lo = float(re.search(r"lower\t(\S+)", out).group(1))
    hi = float(re.search(r"upper\t(\S+)", out).group(1))
    ok = abs(lo / 1.8e-15 - 1) <= 0.05 and abs(hi / 2.6e189 - 1) <= 0.05
    report(7, ok, f"lower {lo:.3g}, upper {hi:.3g}")
    assert ok


def test_criterion_8_determinism(runs, report):
    (a, _, _), (b, _, _) = runs
    names = sorted(os.listdir(a))
    same = names == sorted(os.listdir(b))
    for name in names if same else []:
        with open(os.path.join(a, name), "rb") as fa, open(os.path.join(b, name), "rb") as fb:
            same &= fa.read() == fb.read()
    report(8, same, f"{len(names)} catalog files {'byte-identical' if same else 'differ'}")
    assert same


def test_criterion_9_degree_statistics(runs, report):
    cat = PerfectCatalog.load(runs[0][0])
    rows = stats_csv(cat).splitlines()[1:-1]
    ratios = [float(r.split(",")[3]) for r in rows]
    ok = bool(ratios) and max(ratios) <= 10
    report(9, ok, f"{len(ratios)} groups, max degree/sqrt(order) {max(ratios):.3f}")
    assert ok


@pytest.mark.extended
@pytest.mark.skipif(os.environ.get("PERFGROUPS_EXTENDED") != "1",
                    reason="long-running; set PERFGROUPS_EXTENDED=1")
def test_criterion_10_order_61440(tmp_path, report):
    # 61440 = 2^12 * 3 * 5; A5 is the only simple group of order dividing it
    seeds = load_seeds(60)
    cat = enumerate_divisors(61440, seeds, out_dir=str(tmp_path))
    count = len(cat.groups.get(61440, []))
    ok = count == 98
    report(10, ok, f"{count} perfect groups of order 61440")
    assert ok
