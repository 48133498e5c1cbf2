"""Shared fixtures: brute-force oracles, random objects and the PHP(4,3) setup."""

from __future__ import annotations

import itertools
import random
from pathlib import Path
from typing import Iterable, Sequence

from hypothesis import strategies as st

from pbdom.core import Constraint, Objective, Substitution, Vocabulary, ONE, ZERO, evaluate, geq
from pbdom.formats import ParsedInstance, parse_opb
from pbdom.generators import emit_symmetry_breaking, gen_pigeonhole, parse_symmetries

DATA = Path(__file__).parent / "data"

PHP43_ORDER = "p21 p22 p23 p11 p12 p13 p31 p32 p33 p41 p42 p43".split()


def assignments(nvars: int) -> Iterable[dict[int, bool]]:
    for bits in itertools.product((False, True), repeat=nvars):
        yield {v: bits[v - 1] for v in range(1, nvars + 1)}


def implies(premises: Sequence[Constraint], target: Constraint, nvars: int) -> bool:
    """Every assignment satisfying all premises satisfies ``target``."""
    for a in assignments(nvars):
        if all(evaluate(c, a) for c in premises) and not evaluate(target, a):
            return False
    return True


def equivalent(c1: Constraint, c2: Constraint, nvars: int) -> bool:
    return all(evaluate(c1, a) == evaluate(c2, a) for a in assignments(nvars))


def random_constraint(rng: random.Random, nvars: int, max_terms: int = 4,
                      max_coef: int = 5) -> Constraint:
    k = rng.randint(0, min(max_terms, nvars))
    vars_ = rng.sample(range(1, nvars + 1), k)
    terms = [(rng.randint(-max_coef, max_coef), v if rng.random() < 0.5 else -v) for v in vars_]
    return geq(terms, rng.randint(-3, 6))


def random_substitution(rng: random.Random, nvars: int) -> Substitution:
    mapping = {}
    for v in range(1, nvars + 1):
        r = rng.random()
        if r < 0.2:
            mapping[v] = ZERO
        elif r < 0.4:
            mapping[v] = ONE
        elif r < 0.6:
            w = rng.randint(1, nvars)
            mapping[v] = w if rng.random() < 0.5 else -w
    return Substitution(mapping)


def literals(nvars: int):
    return st.integers(1, nvars).flatmap(lambda v: st.sampled_from([v, -v]))


def constraints(nvars: int = 6, max_terms: int = 5, max_coef: int = 8):
    """Hypothesis strategy for normalized constraints over variables 1..nvars."""
    term = st.tuples(st.integers(-max_coef, max_coef), literals(nvars))
    return st.builds(geq, st.lists(term, max_size=max_terms), st.integers(-4, 12))


def substitutions(nvars: int = 6):
    image = st.one_of(st.just(ZERO), st.just(ONE), literals(nvars))
    return st.dictionaries(st.integers(1, nvars), image).map(Substitution)


def named(n: int) -> Vocabulary:
    return Vocabulary(f"x{i}" for i in range(1, n + 1))


def php43() -> ParsedInstance:
    return gen_pigeonhole(4, 3)


def php43_symmetries(inst: ParsedInstance):
    return parse_symmetries((DATA / "php43.sym").read_text(), inst.vocab.copy())


def php43_proof(half_support: bool = True, output: str = "NONE") -> tuple[ParsedInstance, str]:
    inst = php43()
    order = [inst.vocab.lookup(n) for n in PHP43_ORDER]
    proof = emit_symmetry_breaking(inst, php43_symmetries(inst), order,
                                   half_support=half_support, output=output)
    return inst, proof


def listing() -> list[str]:
    """Lines of the reference PHP(4,3) listing, whitespace normalized."""
    return (DATA / "php43_reference.txt").read_text().splitlines()


def instance_from(text: str) -> ParsedInstance:
    return parse_opb(text)


def zero_objective() -> Objective:
    return Objective()


CORE_DELETION_OPB = "1 p >= 1 ;"


def core_deletion_attack() -> list[str]:
    """Proof lines after the header: delete p >= 1 from the core, then dominate it away."""
    order = ["pre_order ex1", "vars", "left u1", "right v1", "aux", "end",
             "def", "1 v1 1 ~u1 >= 1 ;", "end",
             "transitivity", "vars", "fresh_right w1", "end", "proof", "qed", "end", "end"]
    return ["f 1", *order, "load_order ex1 p", "rup 1 p >= 1 ;", "delc 1",
            "dom 1 ~p >= 1 ; p -> 0", "rup >= 1 ;", "conclusion UNSAT"]


CORE_DELETION_LINE = 22
