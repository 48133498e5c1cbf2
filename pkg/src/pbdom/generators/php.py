"""Pigeonhole formulas."""

from __future__ import annotations

from itertools import combinations

from ..core import Vocabulary, geq
from ..formats import ParsedInstance


def php_name(i: int, j: int, holes: int) -> str:
    """Variable for pigeon ``i`` in hole ``j``; ``p<i><j>`` while holes fit one digit."""
    return f"p{i}{j}" if holes <= 9 else f"p{i}_{j}"


def gen_pigeonhole(pigeons: int, holes: int) -> ParsedInstance:
    """At-least-one clause per pigeon, then pairwise at-most-one clauses per hole."""
    if pigeons < 1 or holes < 1:
        raise ValueError("need at least one pigeon and one hole")
    vocab = Vocabulary()
    var = {(i, j): vocab.intern(php_name(i, j, holes))
           for i in range(1, pigeons + 1) for j in range(1, holes + 1)}
    constraints = [geq([(1, var[i, j]) for j in range(1, holes + 1)], 1)
                   for i in range(1, pigeons + 1)]
    for j in range(1, holes + 1):
        for i, k in combinations(range(1, pigeons + 1), 2):
            constraints.append(geq([(1, -var[i, j]), (1, -var[k, j])], 1))
    inst = ParsedInstance(vocab, constraints, declared_vars=len(vocab),
                          declared_constraints=len(constraints))
    inst.source_count = len(constraints)
    return inst
