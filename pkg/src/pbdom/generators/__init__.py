"""Certified proof generators."""

from .clique import (GraphSpec, greedy_colouring, parse_dimacs, solve_clique_certified,
                     vertex_dominates)
from .php import gen_pigeonhole
from .symmetry import (emit_symmetry_breaking, is_syntactic_symmetry, parse_symmetries,
                       parse_symmetry)

__all__ = [
    "GraphSpec",
    "emit_symmetry_breaking",
    "gen_pigeonhole",
    "greedy_colouring",
    "is_syntactic_symmetry",
    "parse_dimacs",
    "parse_symmetries",
    "parse_symmetry",
    "solve_clique_certified",
    "vertex_dominates",
]
