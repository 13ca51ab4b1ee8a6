"""Exact computations around strata of differentials with vanishing residues."""
__version__ = "0.1.0"
