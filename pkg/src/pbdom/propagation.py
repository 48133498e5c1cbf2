"""Slack-based unit propagation and reverse unit propagation.

:class:`PropagationEngine` is an incremental constraint database with
occurrence lists; each propagation run keeps per-constraint slack counters
that are updated only when one of the constraint's literals is falsified.
The module-level :func:`propagate` and :func:`rup_check` wrap it for one-off
use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Collection, Iterable, Mapping

from .core import Constraint, literal_axiom_implies, negate


class Assignment:
    """Partial assignment with a trail of ``(literal, reason)`` entries.

    ``reason`` is ``None`` for decisions and a constraint id otherwise.
    """

    __slots__ = ("values", "trail")

    def __init__(self, literals: Iterable[int] = ()):
        self.values: dict[int, bool] = {}
        self.trail: list[tuple[int, int | None]] = []
        for lit in literals:
            self.assign(lit)

    def __repr__(self) -> str:
        return f"Assignment({[l for l, _ in self.trail]})"

    def __contains__(self, var: int) -> bool:
        return var in self.values

    def value(self, lit: int) -> bool | None:
        val = self.values.get(abs(lit))
        if val is None:
            return None
        return val if lit > 0 else not val

    def assign(self, lit: int, reason: int | None = None) -> None:
        var = abs(lit)
        if var in self.values:
            raise ValueError(f"variable {var} assigned twice")
        self.values[var] = lit > 0
        self.trail.append((lit, reason))

    def copy(self) -> "Assignment":
        a = Assignment()
        a.values = dict(self.values)
        a.trail = list(self.trail)
        return a

    def literals(self) -> list[int]:
        return [lit for lit, _ in self.trail]


def slack(c: Constraint, a: Assignment | Mapping[int, bool]) -> int:
    values = a.values if isinstance(a, Assignment) else a
    s = -c.degree
    for coef, lit in c.terms:
        val = values.get(abs(lit))
        if val is None or val == (lit > 0):
            s += coef
    return s


@dataclass
class Fixpoint:
    assignment: Assignment


@dataclass
class Conflict:
    constraint_id: int
    assignment: Assignment = field(repr=False)


PropagationOutcome = Fixpoint | Conflict


class PropagationEngine:
    """Constraint database supporting repeated propagation queries."""

    def __init__(self, db: Iterable[tuple[int, Constraint]] = ()):
        self.cons: dict[int, Constraint] = {}
        self.occ: dict[int, dict[int, int]] = {}
        self.units: dict[int, None] = {}
        self.syntactic: dict[Constraint, set[int]] = {}
        self._temp = 0
        for cid, c in db:
            self.add(cid, c)

    def __len__(self) -> int:
        return len(self.cons)

    def __contains__(self, cid: int) -> bool:
        return cid in self.cons

    def get(self, cid: int) -> Constraint | None:
        return self.cons.get(cid)

    def add(self, cid: int, c: Constraint) -> None:
        if cid in self.cons:
            raise ValueError(f"constraint id {cid} already present")
        self.cons[cid] = c
        occ = self.occ
        for a, lit in c.terms:
            d = occ.get(lit)
            if d is None:
                occ[lit] = {cid: a}
            else:
                d[cid] = a
        if c.maxcoef > c.slack0 or c.slack0 < 0:
            self.units[cid] = None
        ids = self.syntactic.get(c)
        if ids is None:
            self.syntactic[c] = {cid}
        else:
            ids.add(cid)

    def remove(self, cid: int) -> Constraint:
        c = self.cons.pop(cid)
        for _, lit in c.terms:
            d = self.occ[lit]
            del d[cid]
            if not d:
                del self.occ[lit]
        self.units.pop(cid, None)
        ids = self.syntactic[c]
        ids.discard(cid)
        if not ids:
            del self.syntactic[c]
        return c

    def contains_equal(self, c: Constraint, exclude: Collection[int] = ()) -> bool:
        ids = self.syntactic.get(c)
        if not ids:
            return False
        return any(i not in exclude for i in ids)

    def touching(self, variables: Iterable[int]) -> set[int]:
        """Ids of constraints mentioning any of ``variables``."""
        out: set[int] = set()
        occ = self.occ
        for var in variables:
            for lit in (var, -var):
                d = occ.get(lit)
                if d:
                    out.update(d)
        return out

    def implied_by_single(self, target: Constraint, exclude: Collection[int] = ()) -> bool:
        """Whether some single constraint literal-axiom-implies ``target``."""
        for cid in self.touching(abs(l) for _, l in target.terms):
            if cid not in exclude and literal_axiom_implies(self.cons[cid], target):
                return True
        return False

    def _push_temps(self, extra: Iterable[Constraint]) -> list[int]:
        temps = []
        for c in extra:
            self._temp -= 1
            self.add(self._temp, c)
            temps.append(self._temp)
        return temps

    def _pop_temps(self, temps: list[int]) -> None:
        for cid in temps:
            self.remove(cid)

    def run(self, extra: Iterable[Constraint] = (), exclude: Collection[int] = (),
            assignment: Assignment | None = None) -> tuple[int | None, Assignment]:
        """Propagate the database plus ``extra`` constraints.

        Returns ``(conflicting id or None, assignment)``; extra constraints
        carry negative ids.  Ids in ``exclude`` are ignored.
        """
        temps = self._push_temps(extra)
        try:
            return self._run(exclude, assignment)
        finally:
            self._pop_temps(temps)

    def _run(self, exclude: Collection[int], assignment: Assignment | None):
        cons = self.cons
        occ = self.occ
        a = assignment.copy() if assignment is not None else Assignment()
        values = a.values
        trail = a.trail
        slacks: dict[int, int] = {}

        if assignment is not None and assignment.values:
            for cid, c in cons.items():
                if cid not in exclude:
                    slacks[cid] = slack(c, a)
            candidates = [cid for cid in cons if cid not in exclude]
        else:
            candidates = [cid for cid in self.units if cid not in exclude]

        def examine(cid: int, s: int) -> bool:
            c = cons[cid]
            if s < 0:
                return False
            if s < c.maxcoef:
                for coef, lit in c.terms:
                    if coef > s:
                        var = lit if lit > 0 else -lit
                        if var not in values:
                            values[var] = lit > 0
                            trail.append((lit, cid))
            return True

        for cid in candidates:
            s = slacks.get(cid)
            if s is None:
                s = cons[cid].slack0
            if not examine(cid, s):
                return cid, a
        # literals of a given initial assignment are already in the slacks
        head = len(assignment.trail) if assignment is not None else 0
        while head < len(trail):
            lit = trail[head][0]
            head += 1
            d = occ.get(-lit)
            if not d:
                continue
            for cid, coef in d.items():
                if cid in exclude:
                    continue
                s = slacks.get(cid)
                if s is None:
                    s = cons[cid].slack0
                s -= coef
                slacks[cid] = s
                if not examine(cid, s):
                    return cid, a
        return None, a

    def rup(self, c: Constraint, extra: Iterable[Constraint] = (),
            exclude: Collection[int] = ()) -> bool:
        """Whether database, ``extra`` and ``negate(c)`` propagate to conflict."""
        if c.is_trivial():
            return True
        conflict, _ = self.run([*extra, negate(c)], exclude)
        return conflict is not None


def _lowest_violated(db: Mapping[int, Constraint], a: Assignment, default: int) -> int:
    violated = [cid for cid, c in db.items() if slack(c, a) < 0]
    return min(violated) if violated else default


def propagate(db: Iterable[tuple[int, Constraint]], a: Assignment | None = None) -> PropagationOutcome:
    """Unit propagate ``db`` from ``a`` to a fixpoint or a conflict."""
    engine = PropagationEngine(db)
    start = a if a is not None else Assignment()
    conflict, result = engine.run(assignment=start)
    if conflict is None:
        return Fixpoint(result)
    return Conflict(_lowest_violated(engine.cons, result, conflict), result)


def rup_check(premises: Iterable[tuple[int, Constraint]], c: Constraint) -> bool:
    """Whether ``premises`` together with ``negate(c)`` propagate to conflict."""
    return PropagationEngine(premises).rup(c)
