"""Preorders and the redundance and dominance strengthening rules.

Goals are numbered as follows.  Redundance and checked deletion: the order
goals (one per order constraint, a single trivially true goal for the
trivial order), the objective goal, one goal per core then derived
constraint in ascending id order, and the substituted new constraint last.
Dominance: the order goals, the strict-order contradiction goal, the
objective goal, then one goal per core constraint.

Constraint goals whose constraint is untouched by the witness are their own
premise, so only the touched ones are ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

from . import core
from .core import (Constraint, Image, Substitution, Vocabulary, literal_axiom_implies,
                   negate, substitute)
from .state import ConstraintStore, ProofError, Scope

if TYPE_CHECKING:
    from .formats import PreOrder, Subproof
    from .state import Configuration


@dataclass
class PreorderDefinition:
    """A preorder ``O(u, v)`` over placeholders ``u_i = i`` and ``v_i = arity + i``."""

    name: str
    arity: int
    constraints: list[Constraint]
    vocab: Vocabulary | None = None
    proven: bool = False

    def instantiate(self, left: Sequence[Image], right: Sequence[Image]) -> list[Constraint]:
        n = self.arity
        mapping = {i + 1: img for i, img in enumerate(left)}
        mapping.update({n + i + 1: img for i, img in enumerate(right)})
        w = Substitution(mapping)
        return [substitute(c, w) for c in self.constraints]


TRIVIAL_ORDER = PreorderDefinition("trivial", 0, [], proven=True)


def lex_constraint_terms(n: int) -> list[tuple[int, int]]:
    """Signed terms of ``sum 2^(n-i) (v_i - u_i) >= 0`` from position n down to 1."""
    terms = []
    for i in range(n, 0, -1):
        c = 1 << (n - i)
        terms.append((-c, i))
        terms.append((c, n + i))
    return terms


def lex_order(n: int, name: str | None = None) -> PreorderDefinition:
    """The lexicographic order on ``n`` bits, proven with the canonical subproof."""
    from .formats import PolToken, Subproof

    if n < 1:
        raise ValueError("arity must be positive")
    vocab = Vocabulary([f"u{i}" for i in range(1, n + 1)] + [f"v{i}" for i in range(1, n + 1)]
                       + [f"w{i}" for i in range(1, n + 1)])
    c = core.geq(lex_constraint_terms(n), 0)
    definition = PreorderDefinition(name or f"lex{n}", n, [c], vocab)
    pol = [PolToken("id", 1, 0), PolToken("id", 2, 0), PolToken("op", "+", 0),
           PolToken("id", 3, 0), PolToken("op", "+", 0)]
    from .formats import Pol
    proof = [Subproof(1, 0, [Pol(0, pol)], -1, 0)]
    verify_preorder(definition, proof, [])
    return definition


# ---------------------------------------------------------------- goals

@dataclass
class ProofGoal:
    index: int
    target: Constraint | None
    kind: str  # "order", "objective", "contradiction" or "constraint"
    extra_premises: list[Constraint] = field(default_factory=list)
    source: int | None = None

    def describe(self, vocab: Vocabulary | None = None) -> str:
        if self.target is None:
            return f"#{self.index} ({self.kind}): derive contradiction"
        if vocab is not None:
            from .formats import render_constraint
            shown = render_constraint(self.target, vocab)
        else:
            shown = repr(self.target)
        return f"#{self.index} ({self.kind}): {shown}"


class GoalSet:
    """Numbered proof goals; constraint goals are materialized on demand."""

    def __init__(self, head: list[ProofGoal], constraint_ids: list[int],
                 store: ConstraintStore, witness: Substitution,
                 final: Constraint | None = None):
        self.head = head
        self.constraint_ids = constraint_ids
        self.store = store
        self.witness = witness
        self.final = final
        self._base = len(head)

    def __len__(self) -> int:
        return self._base + len(self.constraint_ids) + (self.final is not None)

    def _constraint_goal(self, pos: int) -> ProofGoal:
        cid = self.constraint_ids[pos]
        target = substitute(self.store.get(cid), self.witness)
        return ProofGoal(self._base + pos + 1, target, "constraint", source=cid)

    def get(self, k: int) -> ProofGoal | None:
        if 1 <= k <= self._base:
            return self.head[k - 1]
        pos = k - self._base - 1
        if 0 <= pos < len(self.constraint_ids):
            return self._constraint_goal(pos)
        if self.final is not None and k == len(self):
            return ProofGoal(k, self.final, "constraint")
        return None

    def __iter__(self) -> Iterator[ProofGoal]:
        for k in range(1, len(self) + 1):
            yield self.get(k)

    def pending(self) -> Iterator[ProofGoal]:
        """Goals that are not trivially their own premise, in index order."""
        yield from self.head
        touched = self.store.engine.touching(self.witness.domain())
        if touched:
            for pos, cid in enumerate(self.constraint_ids):
                if cid in touched:
                    yield self._constraint_goal(pos)
        if self.final is not None:
            yield ProofGoal(len(self), self.final, "constraint")


def _order_images(cfg: "Configuration", w: Substitution) -> tuple[list[Image], list[Image]]:
    z = list(cfg.order.variables)
    return [w.image(x) for x in z], z


def _order_goals(cfg: "Configuration", w: Substitution) -> list[ProofGoal]:
    images, z = _order_images(cfg, w)
    targets = cfg.order.definition.instantiate(images, z) or [core.TRUE]
    return [ProofGoal(i + 1, t, "order") for i, t in enumerate(targets)]


def _objective_goal(cfg: "Configuration", w: Substitution, index: int) -> ProofGoal:
    return ProofGoal(index, core.objective_goal(cfg.objective, w), "objective")


def goals_for_redundance(cfg: "Configuration", c: Constraint, w: Substitution) -> GoalSet:
    head = _order_goals(cfg, w)
    head.append(_objective_goal(cfg, w, len(head) + 1))
    ids = sorted(cfg.core) + sorted(cfg.derived)
    return GoalSet(head, ids, cfg.store, w, substitute(c, w))


def goals_for_dominance(cfg: "Configuration", c: Constraint, w: Substitution) -> GoalSet:
    head = _order_goals(cfg, w)
    images, z = _order_images(cfg, w)
    reversed_order = cfg.order.definition.instantiate(z, images)
    head.append(ProofGoal(len(head) + 1, None, "contradiction", reversed_order))
    head.append(_objective_goal(cfg, w, len(head) + 1))
    return GoalSet(head, sorted(cfg.core), cfg.store, w)


def goals_for_core_deletion(cfg: "Configuration", cid: int, w: Substitution) -> GoalSet:
    head = _order_goals(cfg, w)
    head.append(_objective_goal(cfg, w, len(head) + 1))
    ids = sorted(i for i in cfg.core if i != cid)
    return GoalSet(head, ids, cfg.store, w, substitute(cfg.core[cid], w))


# ---------------------------------------------------------------- discharge

def _auto(scope: Scope, goal: ProofGoal, extra: Sequence[Constraint]) -> bool:
    engine = scope.store.engine
    if goal.target is None:
        conflict, _ = engine.run([*extra, *goal.extra_premises], scope.exclude)
        return conflict is not None
    t = goal.target
    if t.is_trivial():
        return True
    if engine.contains_equal(t, scope.exclude) or t in extra:
        return True
    if any(literal_axiom_implies(e, t) for e in extra):
        return True
    if engine.rup(t, extra, scope.exclude):
        return True
    return engine.implied_by_single(t, scope.exclude)


def discharge_goal_auto(premises: Iterable[tuple[int, Constraint]], goal: ProofGoal,
                        extra: Sequence[Constraint] = ()) -> bool:
    """Try the automatic paths: trivial, syntactic, literal-axiom, RUP."""
    store = _store_from(premises)
    return _auto(Scope(store), goal, extra)


def _store_from(premises: Iterable[tuple[int, Constraint]]) -> ConstraintStore:
    items = sorted(premises)
    store = ConstraintStore(first_id=1)
    for cid, c in items:
        store.next_id = cid
        store.add(c)
    return store


def _run_subproof(scope: Scope, goal: ProofGoal, sub: "Subproof") -> None:
    from .formats import Pol

    mark = len(scope.temps)
    try:
        for c in (goal.extra_premises if goal.target is None else [negate(goal.target)]):
            scope.add_temp(c)
        for step in sub.steps:
            if isinstance(step, Pol):
                scope.add_temp(scope.pol(step.tokens, step.line))
            else:
                if not scope.rup(step.constraint):
                    raise ProofError("rup: constraint does not follow by unit propagation",
                                     step.line)
                scope.add_temp(step.constraint)
        try:
            closing = scope.constraint(sub.close_ref)
        except ProofError as e:
            raise ProofError(f"qed: {e.reason}", sub.close_line) from None
        if closing.is_conflicting():
            return
        if goal.target is None:
            raise ProofError(f"qed: constraint does not close goal #{goal.index}, "
                             "a contradiction is required", sub.close_line)
        if not literal_axiom_implies(closing, goal.target):
            raise ProofError(f"qed: constraint does not imply goal #{goal.index}",
                             sub.close_line)
    finally:
        scope.retire(mark)


def check_subproof(premises: Iterable[tuple[int, Constraint]], goal: ProofGoal,
                   sub: "Subproof") -> None:
    """Check one subproof against explicit premises; raises on failure."""
    store = _store_from(premises)
    _run_subproof(Scope(store), goal, sub)


def _discharge(scope: Scope, goals: GoalSet, neg: Constraint | None,
               subproofs: "Sequence[Subproof] | None", stats, line: int | None,
               vocab: Vocabulary | None = None) -> None:
    store = scope.store
    saved = store.next_id
    try:
        extra: list[Constraint] = []
        if neg is not None:
            if subproofs is not None:
                scope.add_temp(neg)
            else:
                extra = [neg]
        done: set[int] = set()
        for sub in subproofs or ():
            goal = goals.get(sub.goal)
            if goal is None:
                raise ProofError(f"proofgoal #{sub.goal} does not exist", sub.line)
            if sub.goal in done:
                raise ProofError(f"proofgoal #{sub.goal} proven twice", sub.line)
            _run_subproof(scope, goal, sub)
            done.add(sub.goal)
            if stats is not None:
                stats.goals_subproof += 1
        for goal in goals.pending():
            if goal.index in done:
                continue
            if not _auto(scope, goal, extra):
                raise ProofError(f"proof goal {goal.describe(vocab)} not discharged", line)
            if stats is not None:
                stats.goals_auto += 1
    except BaseException:
        scope.retire()
        store.next_id = saved
        raise
    scope.retire()


def apply_redundance(cfg: "Configuration", c: Constraint, w: Substitution,
                     subproofs: "Sequence[Subproof] | None" = None,
                     line: int | None = None) -> int:
    goals = goals_for_redundance(cfg, c, w)
    _discharge(cfg.scope(), goals, negate(c), subproofs, cfg.stats, line, cfg.vocab)
    cfg._touch("red")
    return cfg.add_derived(c)


def apply_dominance(cfg: "Configuration", c: Constraint, w: Substitution,
                    subproofs: "Sequence[Subproof] | None" = None,
                    line: int | None = None) -> int:
    goals = goals_for_dominance(cfg, c, w)
    _discharge(cfg.scope(), goals, negate(c), subproofs, cfg.stats, line, cfg.vocab)
    cfg._touch("dom")
    return cfg.add_derived(c)


def check_core_deletion(cfg: "Configuration", cid: int, w: Substitution,
                        subproofs: "Sequence[Subproof] | None" = None,
                        line: int | None = None, end_line: int | None = None) -> None:
    """Redundance check of core constraint ``cid`` from the remaining core alone.

    Derived constraints are neither premises nor obligations here.
    """
    goals = goals_for_core_deletion(cfg, cid, w)
    exclude = set(cfg.derived)
    exclude.add(cid)
    _discharge(cfg.scope(exclude), goals, negate(cfg.core[cid]), subproofs, cfg.stats,
               line, cfg.vocab)


# ---------------------------------------------------------------- preorders

def verify_preorder(definition: PreorderDefinition, transitivity: "Sequence[Subproof]",
                    reflexivity: "Sequence[Subproof]", line: int | None = None) -> None:
    """Check reflexivity and transitivity; marks the definition proven."""
    n = definition.arity
    u = list(range(1, n + 1))
    v = list(range(n + 1, 2 * n + 1))
    w = list(range(2 * n + 1, 3 * n + 1))

    refl_goals = [ProofGoal(i + 1, t, "order")
                  for i, t in enumerate(definition.instantiate(u, u))]
    store = ConstraintStore(first_id=1)
    _discharge(Scope(store), _Goals(refl_goals), None, list(reflexivity), None, line,
               definition.vocab)

    store = ConstraintStore(first_id=1)
    for c in definition.constraints:
        store.add(c)
    for c in definition.instantiate(v, w):
        store.add(c)
    trans_goals = [ProofGoal(i + 1, t, "order")
                   for i, t in enumerate(definition.instantiate(u, w))]
    _discharge(Scope(store), _Goals(trans_goals), None, list(transitivity), None, line,
               definition.vocab)
    definition.proven = True


class _Goals(GoalSet):
    def __init__(self, goals: list[ProofGoal]):
        super().__init__(goals, [], ConstraintStore(), core.IDENTITY)


def define_preorder(cmd: "PreOrder") -> PreorderDefinition:
    """Build and verify a preorder from a parsed ``pre_order`` block."""
    n = len(cmd.left)
    if len(cmd.right) != n:
        raise ProofError("pre_order: left and right lists differ in length", cmd.line)
    if cmd.aux:
        raise ProofError("pre_order: auxiliary variables are not supported", cmd.line)
    if cmd.constraints and len(cmd.fresh_right) != n:
        raise ProofError("pre_order: fresh_right must list one variable per position", cmd.line)
    definition = PreorderDefinition(cmd.name, n, list(cmd.constraints), cmd.vocab)
    try:
        verify_preorder(definition, cmd.transitivity, cmd.reflexivity, cmd.line)
    except ProofError as e:
        if e.line is None:
            e.line = cmd.line
        raise
    return definition
