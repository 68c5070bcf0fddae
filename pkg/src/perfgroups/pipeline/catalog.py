"""Catalog of perfect groups: in-memory records and the line-oriented file format."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from ..groupcore.permgroup import PermGroup
from ..isorej import FULL, Fingerprint

HEADER = "PERFECT v1"


@dataclass
class GroupRecord:
    order: int
    index: int                 # 1-based position within the order
    group: PermGroup
    fingerprint: Fingerprint
    construction: str          # "d=.. F=../.. p=.. a=.. orbit=.." | "seed NAME" | "product A*B"

    @property
    def degree(self):
        return self.group.degree


@dataclass
class PerfectCatalog:
    """Per-order lists of perfect groups, complete up to ``frontier``."""

    groups: dict = field(default_factory=dict)
    frontier: int = 0
    reading_for: int | None = None     # order under construction, for access checks

    def get(self, order):
        """Records of the given order; while building order n only proper divisors may be read."""
        n = self.reading_for
        if n is not None and (order >= n or n % order):
            raise AssertionError(f"order {n} read catalog entries of order {order}")
        if order > self.frontier:
            raise AssertionError(f"catalog is not complete at order {order}")
        return self.groups.get(order, [])

    def entries(self, order):
        """``(group, fingerprint)`` pairs in index order."""
        return [(r.group, r.fingerprint) for r in self.get(order)]

    def publish(self, order, records):
        if order != self.frontier + 1 and order <= self.frontier:
            raise AssertionError(f"order {order} already published")
        if records:
            self.groups[order] = records
        self.frontier = order

    def counts(self, lo=1, hi=None):
        hi = self.frontier if hi is None else hi
        return {n: len(rs) for n, rs in sorted(self.groups.items()) if lo <= n <= hi}

    # -- files -------------------------------------------------------------

    def save_order(self, directory, order):
        os.makedirs(directory, exist_ok=True)
        recs = self.groups.get(order, [])
        if recs:
            with open(os.path.join(directory, f"order_{order}.txt"), "w", newline="\n") as fh:
                fh.write(format_order(order, recs))
        with open(os.path.join(directory, "frontier"), "w", newline="\n") as fh:
            fh.write(f"{self.frontier}\n")

    @classmethod
    def load(cls, directory):
        cat = cls()
        path = os.path.join(directory, "frontier")
        if not os.path.exists(path):
            return cat
        with open(path) as fh:
            cat.frontier = int(fh.read().strip() or 0)
        for name in os.listdir(directory):
            if name.startswith("order_") and name.endswith(".txt"):
                with open(os.path.join(directory, name)) as fh:
                    order, recs = parse_order(fh.read())
                if order <= cat.frontier:
                    cat.groups[order] = recs
        return cat


class CellStore:
    """Finished cells of the order under construction, one file per cell."""

    def __init__(self, directory):
        self.directory = directory

    def _dir(self, order):
        return os.path.join(self.directory, "cells", str(order))

    def save(self, order, key, results):
        d = self._dir(order)
        os.makedirs(d, exist_ok=True)
        lines = [f"CELL v1 count={len(results)}"]
        for G, cons in results:
            lines.append(f"degree {G.degree}")
            lines += [" ".join(map(str, g)) for g in G.generators]
            lines.append(f"construction {cons}")
        tmp = os.path.join(d, key + ".tmp")
        with open(tmp, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, os.path.join(d, key + ".txt"))

    def load(self, order, key):
        path = os.path.join(self._dir(order), key + ".txt")
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            lines = fh.read().splitlines()
        out = []
        i = 1
        while i < len(lines):
            degree = int(lines[i].split()[1])
            i += 1
            gens = []
            while not lines[i].startswith("construction "):
                gens.append(tuple(int(x) for x in lines[i].split()))
                i += 1
            out.append((PermGroup(gens, degree), lines[i][len("construction "):]))
            i += 1
        return out

    def clear(self, order):
        d = self._dir(order)
        if os.path.isdir(d):
            for name in os.listdir(d):
                os.remove(os.path.join(d, name))
            os.rmdir(d)
        top = os.path.join(self.directory, "cells")
        if os.path.isdir(top) and not os.listdir(top):
            os.rmdir(top)


def format_order(order, records):
    lines = [f"{HEADER} order={order} count={len(records)}"]
    for r in records:
        lines.append(f"group {r.index}")
        lines.append(f"degree {r.degree}")
        for g in r.group.generators:
            lines.append(" ".join(map(str, g)))
        lines.append(f"fingerprint {r.fingerprint.serialize()}")
        lines.append(f"construction {r.construction}")
    return "\n".join(lines) + "\n"


def _tuples(v):
    if isinstance(v, list):
        return tuple(_tuples(x) for x in v)
    return v


def parse_fingerprint(text):
    comps = {}
    for part in text.split(";"):
        key, _, val = part.partition("=")
        if key not in FULL:
            raise ValueError(f"unknown fingerprint component {key!r}")
        comps[key] = None if val == "absent" else _tuples(json.loads(val))
    return Fingerprint(comps)


def parse_order(text):
    lines = text.splitlines()
    head = lines[0].split()
    if " ".join(head[:2]) != HEADER:
        raise ValueError("not a catalog file")
    fields = dict(x.split("=") for x in head[2:])
    order, count = int(fields["order"]), int(fields["count"])
    recs = []
    i = 1
    while i < len(lines):
        index = int(lines[i].split()[1])
        degree = int(lines[i + 1].split()[1])
        i += 2
        gens = []
        while not lines[i].startswith("fingerprint "):
            gens.append(tuple(int(x) for x in lines[i].split()))
            i += 1
        fp = parse_fingerprint(lines[i][len("fingerprint "):])
        cons = lines[i + 1][len("construction "):]
        i += 2
        recs.append(GroupRecord(order, index, PermGroup(gens, degree), fp, cons))
    if len(recs) != count:
        raise ValueError(f"order {order}: header says {count} groups, found {len(recs)}")
    return order, recs
