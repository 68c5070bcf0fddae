"""Enumeration pipeline: seeds, catalog, per-order engine, bounds and CLI."""

from .bounds import holt_bounds
from .catalog import GroupRecord, PerfectCatalog
from .engine import enumerate_up_to, oracle_count, perfect_groups_of_order
from .seeds import fitting_free, load_seeds

__all__ = ["GroupRecord", "PerfectCatalog", "enumerate_up_to", "fitting_free", "holt_bounds",
           "load_seeds", "oracle_count", "perfect_groups_of_order"]
