"""Enumeration of finite perfect groups by iterated extension.

The engine builds perfect groups of a given order from perfect groups of
smaller order, using rewriting-system cohomology, compatible pairs and
canonical construction paths to reject isomorphic candidates.
"""

__version__ = "0.1.0"

from .errors import BudgetExceeded, InvariantViolation, SearchExhausted

__all__ = ["BudgetExceeded", "InvariantViolation", "SearchExhausted"]
