"""Asymptotic bounds on the number of perfect groups of order n, and degree statistics."""

from __future__ import annotations

import math
from fractions import Fraction


def holt_bounds(n, c=Fraction(11, 36)):
    """``(lower, upper)`` with lower ``n^(L^2/108 - c L)`` and upper ``n^(L^2/48 + L)``, ``L = log2 n``.

    Evaluated in the log domain; the result overflows to ``inf`` only beyond
    the float range.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    L = math.log2(n)
    ln = math.log(n)
    lo = (L * L / 108 - float(c) * L) * ln
    hi = (L * L / 48 + L) * ln
    return _exp(lo), _exp(hi)


def log10_bounds(n, c=Fraction(11, 36)):
    L = math.log2(n)
    return (L * L / 108 - float(c) * L) * math.log10(n), (L * L / 48 + L) * math.log10(n)


def _exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def parse_rational(text):
    return Fraction(text)


def degree_rows(catalog):
    """``(order, index, degree, degree / sqrt(order))`` for every catalog group."""
    rows = []
    for n, recs in sorted(catalog.groups.items()):
        for r in recs:
            rows.append((n, r.index, r.degree, r.degree / math.sqrt(n)))
    return rows


def quantiles(values, qs=(0.0, 0.1, 0.5, 0.9, 1.0)):
    if not values:
        return []
    v = sorted(values)
    out = []
    for q in qs:
        pos = q * (len(v) - 1)
        lo = int(math.floor(pos))
        hi = min(lo + 1, len(v) - 1)
        out.append(v[lo] + (v[hi] - v[lo]) * (pos - lo))
    return out


def stats_csv(catalog):
    """CSV text: one row per group, then a summary row of ratio quantiles."""
    rows = degree_rows(catalog)
    lines = ["order,index,degree,ratio"]
    for n, i, deg, r in rows:
        lines.append(f"{n},{i},{deg},{r:.4f}")
    if rows:
        qs = quantiles([r[3] for r in rows])
        lines.append("quantiles(0,0.1,0.5,0.9,1)," + ",".join(f"{q:.4f}" for q in qs))
    return "\n".join(lines) + "\n"
