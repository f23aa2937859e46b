"""Degeneracy-based graph coloring across space-constrained computation models."""

from .errors import (AllRunsAborted, DegencolorError, ParameterError,
                     QueryBudgetExceeded, ResourceLimitError, StreamFormatError)
from .graph import (Coloring, DegeneracyCertificate, Graph, Ordering,
                    degeneracy_ordering, exact_chromatic_number, exact_degeneracy,
                    greedy_color, list_coloring_solve, ordered_degrees, verify_proper)

__version__ = "0.1.0"

__all__ = ["AllRunsAborted", "DegencolorError", "ParameterError", "QueryBudgetExceeded",
           "ResourceLimitError", "StreamFormatError", "Coloring", "DegeneracyCertificate",
           "Graph", "Ordering", "degeneracy_ordering", "exact_chromatic_number",
           "exact_degeneracy", "greedy_color", "list_coloring_solve", "ordered_degrees",
           "verify_proper"]
