import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbdom.core import FALSE, TRUE, evaluate, geq, negate
from pbdom.propagation import (Assignment, Conflict, Fixpoint, PropagationEngine, propagate,
                               rup_check, slack)

from support import constraints, implies, random_constraint

X, Y, Z = 1, 2, 3


class TestSlack:
    c = geq([(2, X), (1, Y), (1, Z)], 3)

    def test_violated(self):
        assert slack(self.c, Assignment([-X])) == -1

    def test_propagating(self):
        s = slack(self.c, Assignment())
        assert s == 1 and self.c.maxcoef > s
        out = propagate([(1, self.c)])
        assert isinstance(out, Fixpoint) and out.assignment.value(X) is True

    def test_trivial(self):
        assert slack(TRUE, Assignment()) == 0


class TestAssignment:
    def test_no_double_assignment(self):
        a = Assignment([X])
        with pytest.raises(ValueError):
            a.assign(-X)

    def test_trail_records_reasons(self):
        out = propagate([(1, geq([(1, X)], 1)), (2, geq([(1, -X), (1, Y)], 1))])
        assert out.assignment.trail == [(X, 1), (Y, 2)]


class TestPropagate:
    def test_chain_to_fixpoint(self):
        out = propagate([(1, geq([(1, X)], 1)), (2, geq([(1, -X), (1, Y)], 1))])
        assert isinstance(out, Fixpoint)
        assert out.assignment.literals() == [X, Y]

    def test_conflict(self):
        out = propagate([(1, geq([(1, X)], 1)), (2, geq([(1, -X)], 1))])
        assert isinstance(out, Conflict)
        assert slack(geq([(1, -X)], 1), out.assignment) < 0 or \
            slack(geq([(1, X)], 1), out.assignment) < 0

    def test_conflict_reports_lowest_violated(self):
        db = [(5, geq([(1, X)], 1)), (3, geq([(1, -X)], 1)), (4, FALSE)]
        out = propagate(db)
        assert isinstance(out, Conflict) and out.constraint_id == 3

    def test_starting_assignment(self):
        out = propagate([(1, geq([(1, X), (1, Y)], 1))], Assignment([-X]))
        assert isinstance(out, Fixpoint) and out.assignment.value(Y) is True

    def test_coefficients_that_cannot_reach_the_degree(self):
        # 126 + 60 + 24 + 24 + 60 + 126 = 420 < 465 once p11 = 1, p43 = 0 and y's are set
        p11, p12, p13, p31, p33, p41, p42, p43, y1, y2 = range(1, 11)
        c39 = geq([(255, -p11), (126, -p12), (60, -p13), (24, -p31), (24, p33), (60, p41),
                   (126, p42), (255, p43), (2048, -y1), (512, -y2)], 465)
        chain = geq([(1, y1), (1, -y2)], 1)
        out = propagate([(39, c39), (37, chain)], Assignment([y2, p11, -p43]))
        assert isinstance(out, Conflict)
        assert slack(c39, Assignment([y1, y2, p11, -p43])) == 420 - 465

    @given(st.lists(constraints(nvars=5), max_size=6))
    @settings(max_examples=80)
    def test_fixpoint_is_stable(self, cs):
        out = propagate(list(enumerate(cs, 1)))
        if isinstance(out, Fixpoint):
            a = out.assignment
            for c in cs:
                s = slack(c, a)
                assert s >= 0
                for coef, lit in c.terms:
                    if abs(lit) not in a.values:
                        assert coef <= s
        else:
            c = dict(enumerate(cs, 1))[out.constraint_id]
            assert slack(c, out.assignment) < 0

    @given(st.lists(constraints(nvars=5), max_size=6))
    @settings(max_examples=80)
    def test_propagated_literals_are_implied(self, cs):
        out = propagate(list(enumerate(cs, 1)))
        if isinstance(out, Fixpoint):
            for lit in out.assignment.literals():
                assert implies(cs, geq([(1, lit)], 1), 5)


class TestRup:
    def test_examples(self):
        assert rup_check([(1, geq([(1, X)], 1)), (2, geq([(1, -X), (1, Y)], 1))], geq([(1, Y)], 1))
        assert rup_check([(1, geq([(1, X)], 1)), (2, geq([(1, -X)], 1))], FALSE)
        assert not rup_check([(1, geq([(1, X), (1, Y)], 1))], geq([(1, Y)], 1))

    def test_trivial_target(self):
        assert rup_check([], TRUE)

    def test_engine_is_reusable_after_temporaries(self):
        engine = PropagationEngine([(1, geq([(1, X), (1, Y)], 1))])
        assert engine.rup(geq([(1, Y)], 1), extra=[geq([(1, -X)], 1)])
        assert not engine.rup(geq([(1, Y)], 1))
        assert len(engine) == 1

    def test_exclude(self):
        engine = PropagationEngine([(1, geq([(1, X)], 1)), (2, geq([(1, -X), (1, Y)], 1))])
        assert engine.rup(geq([(1, Y)], 1))
        assert not engine.rup(geq([(1, Y)], 1), exclude={1})

    def test_add_remove_keeps_indexes(self):
        engine = PropagationEngine()
        c = geq([(1, X), (1, Y)], 1)
        engine.add(7, c)
        assert engine.contains_equal(c) and engine.touching([X]) == {7}
        engine.remove(7)
        assert not engine.contains_equal(c) and engine.touching([X]) == set()
        with pytest.raises(ValueError):
            engine.add(8, c)
            engine.add(8, c)

    def test_random_rup_is_sound(self):
        rng = random.Random(11)
        for _ in range(300):
            n = rng.randint(1, 6)
            premises = [random_constraint(rng, n) for _ in range(rng.randint(0, 5))]
            target = random_constraint(rng, n)
            if rup_check(list(enumerate(premises, 1)), target):
                assert implies(premises, target, n)

    def test_rup_matches_negation_conflict(self):
        rng = random.Random(5)
        for _ in range(200):
            n = rng.randint(1, 5)
            premises = [random_constraint(rng, n) for _ in range(3)]
            target = random_constraint(rng, n)
            db = list(enumerate(premises + [negate(target)], 1))
            expected = target.is_trivial() or isinstance(propagate(db), Conflict)
            assert rup_check(list(enumerate(premises, 1)), target) == expected


def test_evaluate_agrees_with_slack_on_total_assignments():
    rng = random.Random(2)
    for _ in range(200):
        c = random_constraint(rng, 4)
        values = {v: rng.random() < 0.5 for v in range(1, 5)}
        assert evaluate(c, values) == (slack(c, values) >= 0)
