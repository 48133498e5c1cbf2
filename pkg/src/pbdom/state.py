"""Proof configurations and the non-strengthening rules.

A :class:`Configuration` tracks the core set C, the derived set D, the loaded
preorder with its variable list z, the best objective value v and the
distinguished constraint ``f <= v - 1``.  Every rule either succeeds and
updates the configuration or raises :class:`ProofError` and leaves it
untouched.
"""

from __future__ import annotations

import enum
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Collection, Iterable, Mapping, Sequence

from . import core
from .core import Constraint, Objective, Substitution
from .propagation import PropagationEngine

if TYPE_CHECKING:
    from .strengthening import PreorderDefinition, Subproof


class ProofError(Exception):
    """A rejected proof step."""

    def __init__(self, reason: str, line: int | None = None, column: int | None = None):
        super().__init__(reason)
        self.reason = reason
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line is None:
            return self.reason
        return f"line {self.line}: {self.reason}"


class Mode(enum.Enum):
    CHECKED = "checked"
    UNCHECKED = "unchecked"


INFINITY = None


class ConstraintStore:
    """Live constraints addressed by id, with creation order for relative ids."""

    def __init__(self, first_id: int = 1):
        self.engine = PropagationEngine()
        self.next_id = first_id
        self._order: list[int] = []

    def __contains__(self, cid: int) -> bool:
        return cid in self.engine.cons

    def __len__(self) -> int:
        return len(self.engine.cons)

    def get(self, cid: int) -> Constraint | None:
        return self.engine.cons.get(cid)

    def add(self, c: Constraint) -> int:
        cid = self.next_id
        self.next_id += 1
        self.engine.add(cid, c)
        self._order.append(cid)
        return cid

    def remove(self, cid: int) -> Constraint:
        c = self.engine.remove(cid)
        if len(self._order) > 2 * len(self.engine.cons) + 64:
            live = self.engine.cons
            self._order = [i for i in self._order if i in live]
        return c

    def resolve(self, ref: int, exclude: Collection[int] = ()) -> int:
        """Turn an absolute or relative (negative) reference into a live id."""
        live = self.engine.cons
        if ref > 0:
            if ref not in live or ref in exclude:
                raise ProofError(f"constraint {ref} is not available")
            return ref
        k = -ref
        for cid in reversed(self._order):
            if cid in live and cid not in exclude:
                k -= 1
                if k == 0:
                    return cid
        raise ProofError(f"relative reference {ref} out of range")


class Scope:
    """A view of a store used for derivations: premises minus ``exclude``.

    Temporary constraints added through a scope are retired by :meth:`close`.
    """

    def __init__(self, store: ConstraintStore, exclude: Collection[int] = ()):
        self.store = store
        self.exclude = exclude
        self.temps: list[int] = []

    def add_temp(self, c: Constraint) -> int:
        cid = self.store.add(c)
        self.temps.append(cid)
        return cid

    def retire(self, since: int = 0) -> None:
        for cid in self.temps[since:]:
            self.store.remove(cid)
        del self.temps[since:]

    def constraint(self, ref: int) -> Constraint:
        return self.store.get(self.store.resolve(ref, self.exclude))

    def rup(self, c: Constraint, extra: Iterable[Constraint] = ()) -> bool:
        return self.store.engine.rup(c, extra, self.exclude)

    def pol(self, tokens, line: int | None = None) -> Constraint:
        return evaluate_pol(tokens, self, line)


def evaluate_pol(tokens, scope: Scope, line: int | None = None) -> Constraint:
    """Run a reverse-polish cutting-planes program."""
    stack: list[object] = []

    def pop_constraint(tok) -> Constraint:
        if not stack or not isinstance(stack[-1], Constraint):
            raise ProofError(f"pol: operator {tok.value!r} needs a constraint operand",
                             line, tok.column)
        return stack.pop()

    for tok in tokens:
        if tok.kind == "id":
            try:
                stack.append(scope.constraint(tok.value))
            except ProofError as e:
                raise ProofError(f"pol: {e.reason}", line, tok.column) from None
        elif tok.kind == "lit":
            stack.append(core.literal_axiom(tok.value))
        elif tok.kind == "num":
            stack.append(tok.value)
        elif tok.value == "+":
            b = pop_constraint(tok)
            a = pop_constraint(tok)
            stack.append(core.add(a, b))
        elif tok.value == "s":
            stack.append(core.saturate(pop_constraint(tok)))
        else:
            if not stack or isinstance(stack[-1], Constraint):
                raise ProofError(f"pol: operator {tok.value!r} needs a scalar", line, tok.column)
            k = stack.pop()
            if k <= 0:
                raise ProofError(f"pol: nonpositive scalar {k}", line, tok.column)
            c = pop_constraint(tok)
            stack.append(core.multiply(c, k) if tok.value == "*" else core.divide(c, k))
    if len(stack) != 1 or not isinstance(stack[0], Constraint):
        raise ProofError("pol: program must leave exactly one constraint", line)
    return stack[0]


@dataclass
class LoadedOrder:
    definition: "PreorderDefinition"
    variables: tuple[int, ...]

    def is_trivial(self) -> bool:
        return not self.definition.constraints


@dataclass
class Stats:
    rules: Counter = field(default_factory=Counter)
    created: int = 0
    deleted: int = 0
    goals_auto: int = 0
    goals_subproof: int = 0
    peak_live: int = 0
    wall_time: float = 0.0

    def summary(self) -> dict:
        return {
            "rules": dict(sorted(self.rules.items())),
            "constraints_created": self.created,
            "constraints_deleted": self.deleted,
            "goals_auto": self.goals_auto,
            "goals_subproof": self.goals_subproof,
            "peak_live": self.peak_live,
            "wall_time": round(self.wall_time, 6),
        }


@dataclass
class Verdict:
    kind: str  # NONE, UNSAT, OPTIMAL, BOUND-GE
    value: int | None = None
    stats: Stats = field(default_factory=Stats)

    def __str__(self) -> str:
        return self.kind if self.value is None else f"{self.kind} {self.value}"


class Configuration:
    """The proof state ``(C, D, O, z, v)`` over a fixed input formula."""

    def __init__(self, formula: Sequence[Constraint], objective: Objective | None = None,
                 mode: Mode = Mode.CHECKED, vocab: core.Vocabulary | None = None):
        from .strengthening import TRIVIAL_ORDER

        self.mode = mode
        self.vocab = vocab if vocab is not None else core.Vocabulary()
        self.objective = objective if objective is not None else Objective()
        self.store = ConstraintStore()
        self.core: dict[int, Constraint] = {}
        self.derived: dict[int, Constraint] = {}
        for c in formula:
            self.core[self.store.add(c)] = c
        self.input: Mapping[int, Constraint] = dict(self.core)
        self.orders: dict[str, PreorderDefinition] = {}
        self.order = LoadedOrder(TRIVIAL_ORDER, ())
        self.best: int | None = INFINITY
        self.bound_id: int | None = None
        self.stats = Stats()
        self.stats.peak_live = len(self.store)
        # set while an unchecked deletion with nonempty D under the trivial
        # order is in effect; the safety oracle then skips the D condition
        self.relaxed_deletion = False
        self._started = time.perf_counter()

    # -- bookkeeping ----------------------------------------------------

    @property
    def next_id(self) -> int:
        return self.store.next_id

    @property
    def bound_constraint(self) -> tuple[int, Constraint] | None:
        if self.bound_id is None:
            return None
        return self.bound_id, self.store.get(self.bound_id)

    def live(self) -> dict[int, Constraint]:
        return dict(self.store.engine.cons)

    def scope(self, exclude: Collection[int] = ()) -> Scope:
        return Scope(self.store, exclude)

    def _touch(self, rule: str) -> None:
        self.stats.rules[rule] += 1
        if len(self.store) > self.stats.peak_live:
            self.stats.peak_live = len(self.store)

    def add_derived(self, c: Constraint) -> int:
        cid = self.store.add(c)
        self.derived[cid] = c
        self.stats.created += 1
        return cid

    def _drop(self, cid: int) -> None:
        self.store.remove(cid)
        self.stats.deleted += 1
        if not self.derived:
            self.relaxed_deletion = False

    def resolve(self, ref: int) -> int:
        return self.store.resolve(ref)

    # -- rules ------------------------------------------------------------

    def apply_pol(self, tokens, line: int | None = None) -> int:
        c = evaluate_pol(tokens, self.scope(), line)
        self._touch("pol")
        return self.add_derived(c)

    def apply_rup(self, c: Constraint, line: int | None = None) -> int:
        if not self.store.engine.rup(c):
            raise ProofError("rup: constraint does not follow by unit propagation", line)
        self._touch("rup")
        return self.add_derived(c)

    def apply_sol(self, values: Mapping[int, bool], line: int | None = None) -> int:
        needed = set(self.objective.variables())
        for cid, c in self.core.items():
            needed.update(c.variables())
        missing = sorted(v for v in needed if v not in values)
        if missing:
            raise ProofError("sol: assignment misses variable "
                             + self.vocab.name(missing[0]), line)
        for cid in sorted(self.core):
            if not core.evaluate(self.core[cid], values):
                raise ProofError(f"sol: assignment falsifies core constraint {cid}", line)
        value = core.evaluate_objective(self.objective, values)
        if self.best is not None and value >= self.best:
            raise ProofError(f"sol: objective value {value} does not improve on {self.best}", line)
        if self.bound_id is not None:
            self._drop(self.bound_id)
        self.best = value
        self.bound_id = self.store.add(core.bound_constraint(self.objective, value))
        self.stats.created += 1
        self._touch("sol")
        return self.bound_id

    def transfer_to_core(self, ids: Iterable[int], line: int | None = None) -> None:
        ids = list(ids)
        for cid in ids:
            if cid not in self.derived:
                raise ProofError(f"core: constraint {cid} is not in the derived set", line)
        if len(set(ids)) != len(ids):
            raise ProofError("core: duplicate id", line)
        for cid in ids:
            self.core[cid] = self.derived.pop(cid)
        if not self.derived:
            self.relaxed_deletion = False
        self._touch("core")

    def delete_derived(self, ids: Iterable[int], line: int | None = None) -> None:
        ids = list(ids)
        for cid in ids:
            if cid not in self.derived:
                what = "a core constraint" if cid in self.core else "not a live derived constraint"
                raise ProofError(f"del: constraint {cid} is {what}", line)
        if len(set(ids)) != len(ids):
            raise ProofError("del: duplicate id", line)
        for cid in ids:
            del self.derived[cid]
            self._drop(cid)
        self._touch("del")

    def delete_core_unchecked(self, ids: Iterable[int], line: int | None = None) -> None:
        ids = list(ids)
        if self.mode is not Mode.UNCHECKED:
            raise ProofError("delc: unchecked deletion is only available in unchecked mode", line)
        if self.derived and not self.order.is_trivial():
            raise ProofError("delc: unchecked deletion needs an empty derived set "
                             "or the trivial order", line)
        for cid in ids:
            if cid not in self.core:
                raise ProofError(f"delc: constraint {cid} is not in the core set", line)
        if len(set(ids)) != len(ids):
            raise ProofError("delc: duplicate id", line)
        if self.derived:
            self.relaxed_deletion = True
        for cid in ids:
            del self.core[cid]
            self._drop(cid)
        self._touch("delc")

    def delete_core_checked(self, cid: int, witness: Substitution | None = None,
                            subproofs: "Sequence[Subproof] | None" = None,
                            line: int | None = None, end_line: int | None = None) -> None:
        from .strengthening import check_core_deletion

        if cid not in self.core:
            raise ProofError(f"delc: constraint {cid} is not in the core set", line)
        check_core_deletion(self, cid, witness or core.IDENTITY, subproofs, line, end_line)
        del self.core[cid]
        self._drop(cid)
        self._touch("delc")

    def register_order(self, definition: "PreorderDefinition", line: int | None = None) -> None:
        if not definition.proven:
            raise ProofError(f"order {definition.name} has not been proven", line)
        self.orders[definition.name] = definition
        self._touch("pre_order")

    def load_order(self, name: str | None, variables: Sequence[int],
                   line: int | None = None) -> None:
        from .strengthening import TRIVIAL_ORDER

        if self.derived:
            raise ProofError("load_order: the derived set must be empty", line)
        if name is None:
            definition = TRIVIAL_ORDER
        else:
            definition = self.orders.get(name)
            if definition is None:
                raise ProofError(f"load_order: unknown order {name!r}", line)
        if len(variables) != definition.arity:
            raise ProofError(f"load_order: order {definition.name} expects "
                             f"{definition.arity} variables, got {len(variables)}", line)
        self.order = LoadedOrder(definition, tuple(variables))
        self._touch("load_order")

    def has_contradiction(self) -> bool:
        return any(c.is_conflicting() for c in self.core.values()) or \
            any(c.is_conflicting() for c in self.derived.values())

    def conclude(self, claim: str, value: int | None = None,
                 line: int | None = None) -> Verdict:
        if claim == "NONE":
            return self._verdict("NONE")
        if not self.has_contradiction():
            raise ProofError(f"conclusion {claim}: no contradiction has been derived", line)
        if claim == "UNSAT":
            if self.best is not None:
                raise ProofError("conclusion UNSAT: a solution has been logged", line)
            return self._verdict("UNSAT")
        if claim in ("OPTIMAL", "BOUND-GE"):
            if self.best != value:
                shown = "infinity" if self.best is None else self.best
                raise ProofError(f"conclusion {claim} {value}: best value is {shown}", line)
            if claim == "OPTIMAL" and self.mode is not Mode.CHECKED:
                raise ProofError("conclusion OPTIMAL requires checked mode", line)
            return self._verdict(claim, value)
        raise ProofError(f"unknown conclusion {claim!r}", line)

    def _verdict(self, kind: str, value: int | None = None) -> Verdict:
        self.stats.wall_time = time.perf_counter() - self._started
        return Verdict(kind, value, self.stats)


def init(formula: Sequence[Constraint], objective: Objective | None = None,
         mode: Mode = Mode.CHECKED, vocab: core.Vocabulary | None = None) -> Configuration:
    return Configuration(formula, objective, mode, vocab)
