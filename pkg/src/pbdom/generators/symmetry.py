"""Lex-leader symmetry breaking with dominance-based proof logging.

For each symmetry the emitter derives, by dominance with the symmetry as
witness, the exponential lex-leader constraint over the ordered breaking
variables.  It then peels off one breaking clause per non-stabilized
position, introducing the chain variables ``y_j`` by redundance and folding
their defining clauses back into a running accumulator.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..core import Substitution, Vocabulary, substitute
from ..formats import FormatError, ParsedInstance, render_witness

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_symmetry(text: str, vocab: Vocabulary) -> Substitution:
    """Parse cycle notation such as ``(p11 p43)(p12 ~p42)``."""
    body = text.strip()
    if _CYCLE_RE.sub("", body).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    mapping = {}
    for cycle in _CYCLE_RE.findall(body):
        lits = []
        for tok in cycle.split():
            var = vocab.lookup(tok.lstrip("~"))
            if var is None:
                raise ValueError(f"unknown variable {tok.lstrip('~')!r}")
            lits.append(-var if tok.startswith("~") else var)
        for k, lit in enumerate(lits):
            nxt = lits[(k + 1) % len(lits)]
            var = abs(lit)
            if var in mapping:
                raise ValueError(f"variable {vocab.name(var)} appears in two cycles")
            mapping[var] = nxt if lit > 0 else -nxt
    images = [abs(i) for i in mapping.values()]
    if len(set(images)) != len(images) or set(images) != set(mapping):
        raise ValueError(f"not a permutation: {text!r}")
    return Substitution(mapping)


def parse_symmetries(text: str, vocab: Vocabulary) -> list[Substitution]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip() and not line.lstrip().startswith(("*", "#")):
            try:
                out.append(parse_symmetry(line, vocab))
            except ValueError as e:
                raise FormatError(lineno, 1, str(e)) from None
    return out


def is_syntactic_symmetry(instance: ParsedInstance, sigma: Substitution) -> bool:
    """Whether applying ``sigma`` maps the formula onto itself as a multiset."""
    original = Counter(instance.constraints)
    mapped = Counter(substitute(c, sigma) for c in instance.constraints)
    if mapped != original:
        return False
    f = instance.objective
    if f.terms:
        obj = Counter((a, l) for a, l in f.terms)
        moved = Counter((a, sigma.image(l)) for a, l in f.terms)
        return obj == moved
    return True


def lex_pre_order_text(name: str, n: int) -> list[str]:
    """The ``pre_order`` block for the lexicographic order on ``n`` positions."""
    idx = range(1, n + 1)
    terms = " ".join(f"-{1 << (n - i)} u{i} {1 << (n - i)} v{i}" for i in range(n, 0, -1))
    return [
        f"pre_order {name}",
        "\tvars",
        "\t\tleft " + " ".join(f"u{i}" for i in idx),
        "\t\tright " + " ".join(f"v{i}" for i in idx),
        "\t\taux",
        "\tend",
        "",
        "\tdef",
        f"\t\t{terms} >= 0;",
        "\tend",
        "",
        "\ttransitivity",
        "\t\tvars",
        "\t\t\tfresh_right " + " ".join(f"w{i}" for i in idx),
        "\t\tend",
        "\t\tproof",
        "\t\t\tproofgoal #1",
        "\t\t\t\tpol 1 2 + 3 +",
        "\t\t\tqed -1",
        "\t\tqed",
        "\tend",
        "end",
    ]


@dataclass
class _Emitter:
    vocab: Vocabulary
    next_id: int
    lines: list[str] = field(default_factory=list)
    kept: list[int] = field(default_factory=list)
    y_counter: int = 0

    def fresh_y(self) -> str:
        while f"y{self.y_counter}" in self.vocab:
            self.y_counter += 1
        name = f"y{self.y_counter}"
        self.vocab.intern(name)
        self.y_counter += 1
        return name

    def lit(self, lit: int) -> str:
        return self.vocab.render_literal(lit)

    def new_id(self) -> int:
        cid = self.next_id
        self.next_id += 1
        return cid

    def clause(self, lits: Sequence[str]) -> str:
        return " ".join(f"1 {l}" for l in lits) + " >= 1 ;"


def emit_symmetry_breaking(instance: ParsedInstance, symmetries: Iterable[Substitution],
                           var_order: Sequence[int], limit: int = 100,
                           half_support: bool = False, compact: bool = False,
                           order_name: str | None = None,
                           output: str = "NONE") -> str:
    """Emit a proof deriving lex-leader breaking clauses for each symmetry.

    ``limit`` caps the breaking clauses per symmetry; with ``half_support``
    the cap is additionally half the number of non-stabilized positions.
    ``output`` is ``NONE`` or ``EQUISATISFIABLE``.  Chain variables are named
    ``y0, y1, ...`` skipping names the instance already uses.
    """
    symmetries = list(symmetries)
    for k, sigma in enumerate(symmetries, 1):
        if not is_syntactic_symmetry(instance, sigma):
            raise ValueError(f"symmetry {k} is not a syntactic symmetry of the instance")
    m = len(var_order)
    if m == 0:
        raise ValueError("empty variable order")
    vocab = instance.vocab.copy()
    em = _Emitter(vocab, len(instance.constraints) + 1)
    name = order_name or f"exp{instance.formula_count}"
    out = em.lines
    out.append("pseudo-Boolean proof version 2.0")
    out.append(f"f {instance.formula_count}")
    out.extend(lex_pre_order_text(name, m))
    out.append(f"load_order {name} " + " ".join(vocab.name(v) for v in var_order))
    compact_ids: list[int] = []

    for sigma in symmetries:
        positions = [i for i, x in enumerate(var_order, 1) if sigma.image(x) != x]
        count = min(limit, len(positions))
        if half_support:
            count = min(count, len(positions) // 2)
        if count == 0:
            continue
        terms = []
        for i in reversed(positions):
            x = var_order[i - 1]
            c = 1 << (m - i)
            terms.append(f"-{c} {em.lit(x)} {c} {em.lit(sigma.image(x))}")
        witness = render_witness(sigma, vocab)
        out.append(f"dom {' '.join(terms)} >= 0 ;  {witness} ; begin")
        out.extend(["\tproofgoal #2", "\t\tpol -1 -2 +", "\tqed -1", "end"])
        em.next_id += 3  # negated constraint, reversed order, sum
        acc = em.new_id()

        y_prev = em.fresh_y()
        out.append(f"red 1 {y_prev} >= 1 ; {y_prev} -> 1")
        em.kept.append(em.new_id())
        for j in range(1, count + 1):
            i = positions[j - 1]
            x = em.lit(var_order[i - 1])
            nx = em.lit(-var_order[i - 1])
            s = em.lit(sigma.image(var_order[i - 1]))
            ns = em.lit(-sigma.image(var_order[i - 1]))
            lits = [nx, s] if j == 1 else [f"~{y_prev}", nx, s]
            out.append("rup " + em.clause(lits))
            em.kept.append(em.new_id())
            if j == count:
                break
            y = em.fresh_y()
            out.append(f"red {em.clause([s, '~' + y_prev, y])} {y} -> 1")
            out.append(f"red {em.clause([nx, '~' + y_prev, y])} {y} -> 1")
            out.append(f"red {em.clause(['~' + y, y_prev])} {y} -> 0")
            out.append(f"red {em.clause(['~' + y, ns, x])} {y} -> 0")
            ids = [em.new_id() for _ in range(4)]
            em.kept.extend(ids)
            if compact:
                compact_ids.extend(ids[2:])
            out.append(f"pol {acc} {ids[3]} {1 << (m - i)} * +")
            new_acc = em.new_id()
            out.append(f"del id {acc}")
            acc = new_acc
            y_prev = y
        out.append(f"del id {acc}")

    if compact_ids:
        out.append("del id " + " ".join(map(str, compact_ids)))
    kept = [i for i in em.kept if i not in set(compact_ids)]
    if kept:
        out.append("core id " + " ".join(map(str, kept)))
    if output == "EQUISATISFIABLE":
        ids = list(range(1, len(instance.constraints) + 1)) + kept
        out.append("output EQUISATISFIABLE PERMUTATION")
        out.append(f"* #variable= {len(vocab)} #constraint={len(ids)}")
        out.append(" ".join(map(str, ids)))
    else:
        out.append("output NONE")
    out.append("conclusion NONE")
    out.append("end pseudo-Boolean proof")
    return "\n".join(out) + "\n"
