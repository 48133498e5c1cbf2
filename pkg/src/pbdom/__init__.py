"""Checker for pseudo-Boolean proofs with redundance and dominance rules."""

from .core import (Constraint, Objective, Substitution, Vocabulary, add, divide, geq,
                   literal_axiom_implies, multiply, negate, saturate, substitute)
from .formats import FormatError, ParsedInstance, parse_opb, parse_proof, render_opb
from .propagation import PropagationEngine, propagate, rup_check
from .state import Configuration, Mode, ProofError, Verdict
from .strengthening import lex_order
from .verifier import verify

__all__ = [
    "Configuration",
    "Constraint",
    "FormatError",
    "Mode",
    "Objective",
    "ParsedInstance",
    "PropagationEngine",
    "ProofError",
    "Substitution",
    "Verdict",
    "Vocabulary",
    "add",
    "divide",
    "geq",
    "lex_order",
    "literal_axiom_implies",
    "multiply",
    "negate",
    "parse_opb",
    "parse_proof",
    "propagate",
    "render_opb",
    "rup_check",
    "saturate",
    "substitute",
    "verify",
]
