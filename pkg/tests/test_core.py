import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbdom.core import (FALSE, IDENTITY, ONE, TRUE, ZERO, Constraint, Objective, Substitution,
                        Vocabulary, add, bound_constraint, compose, divide, evaluate,
                        evaluate_objective, geq, literal_axiom, literal_axiom_implies, multiply,
                        negate, normalize, objective_goal, saturate, substitute)

from support import assignments, constraints, equivalent, implies, random_constraint, substitutions

X1, X2, X3, X4 = 1, 2, 3, 4


class TestVocabulary:
    def test_interning_is_a_bijection(self):
        v = Vocabulary()
        assert v.intern("p11") == 1
        assert v.intern("y0") == 2
        assert v.intern("p11") == 1
        assert v.name(2) == "y0"
        assert len(v) == 2

    def test_literal_parsing(self):
        v = Vocabulary(["a", "b"])
        assert v.literal("~b") == -2
        assert v.render_literal(-2) == "~b"

    @pytest.mark.parametrize("bad", ["1x", "x-y", "", "~"])
    def test_rejects_bad_names(self, bad):
        with pytest.raises(ValueError):
            Vocabulary().intern(bad)

    def test_copy_is_independent(self):
        v = Vocabulary(["a"])
        w = v.copy()
        w.intern("b")
        assert "b" not in v and len(v) == 1


class TestNormalize:
    def test_negative_coefficient_becomes_negated_literal(self):
        assert geq([(1, X1), (-2, X2)], -1) == Constraint(((1, X1), (2, -X2)), 1)

    def test_like_terms_merge(self):
        assert geq([(1, X1), (1, X1)], 1) == Constraint(((2, X1),), 1)

    def test_opposite_literals_cancel(self):
        c = geq([(1, X1), (1, -X1)], 1)
        assert c.terms == () and c.degree == 0 and c.is_trivial()

    def test_relations(self):
        assert normalize([(1, X1)], "<=", 0) == [geq([(1, -X1)], 1)]
        assert len(normalize([(1, X1), (1, X2)], "=", 1)) == 2
        with pytest.raises(ValueError):
            normalize([], "<", 0)

    def test_terms_sorted_by_variable(self):
        c = geq([(3, X3), (1, -X1), (2, X2)], 2)
        assert [abs(l) for _, l in c.terms] == [1, 2, 3]

    @given(constraints())
    def test_idempotent(self, c):
        again = geq(c.terms, c.degree)
        assert again == c

    @given(st.lists(st.tuples(st.integers(-6, 6), st.sampled_from([1, -1, 2, -2, 3, -3]))),
           st.integers(-5, 8))
    def test_equivalent_to_raw_relation(self, raw, rhs):
        c = geq(raw, rhs)
        for a in assignments(3):
            lhs = sum(k for k, l in raw if a[abs(l)] == (l > 0))
            assert evaluate(c, a) == (lhs >= rhs)


class TestNegate:
    def test_examples(self):
        assert negate(geq([(1, X1), (2, X2)], 2)) == geq([(1, -X1), (2, -X2)], 2)
        assert negate(FALSE) == TRUE

    @given(constraints(nvars=6))
    def test_involution(self, c):
        assert negate(negate(c)) == c

    @given(constraints(nvars=6))
    @settings(max_examples=60)
    def test_exactly_one_holds(self, c):
        n = negate(c)
        for a in assignments(6):
            assert evaluate(c, a) != evaluate(n, a)


class TestSubstitute:
    omega = Substitution({X1: ZERO, X3: -X4, X4: X3})
    rho = Substitution({X1: ONE, X2: ONE, X3: ZERO, X4: ZERO})

    def test_constant_folds_and_renames(self):
        c = geq([(1, X1), (1, X3)], 1)
        assert substitute(c, Substitution({X1: ZERO, X3: -X4})) == geq([(1, -X4)], 1)

    def test_identity(self):
        c = geq([(2, X1), (1, -X2)], 2)
        assert substitute(c, IDENTITY) == c

    def test_compose_example(self):
        assert compose(self.omega, self.rho) == Substitution(
            {X1: ZERO, X2: ONE, X3: ONE, X4: ZERO})

    def test_evaluation_through_composition(self):
        total = {1: True, 2: True, 3: False, 4: False}
        composed = compose(self.omega, self.rho)
        as_values = {v: composed.image(v) is ONE for v in range(1, 5)}
        rng = random.Random(3)
        for _ in range(50):
            c = random_constraint(rng, 4)
            assert evaluate(c, as_values) == evaluate(substitute(c, self.omega), total)

    def test_identity_laws_and_swap_involution(self):
        assert compose(IDENTITY, self.omega) == self.omega == compose(self.omega, IDENTITY)
        swap = Substitution({X1: X2, X2: X1})
        assert compose(swap, swap) == IDENTITY

    @given(substitutions(4), substitutions(4), substitutions(4))
    def test_composition_associative(self, a, b, c):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

    @given(substitutions(4), constraints(nvars=4))
    def test_respects_negation(self, w, c):
        for lit in range(1, 5):
            img, neg = w.image(lit), w.image(-lit)
            if img is ZERO or img is ONE:
                assert (img is ONE) == (neg is ZERO)
            else:
                assert neg == -img

    @given(st.permutations([1, 2, 3, 4, 5]), st.lists(st.booleans(), min_size=5, max_size=5),
           constraints(nvars=5), constraints(nvars=5))
    def test_renaming_distributes_over_add(self, perm, flips, a, b):
        w = Substitution({v: (-p if f else p) for v, p, f in zip(range(1, 6), perm, flips)})
        assert substitute(add(a, b), w) == add(substitute(a, w), substitute(b, w))

    @given(substitutions(5), constraints(nvars=5), constraints(nvars=5))
    @settings(max_examples=60)
    def test_distributes_over_add_semantically(self, w, a, b):
        # clamping degrees before the sum loses slack in both directions,
        # so only the premise-level implication survives in general
        assert implies([substitute(a, w), substitute(b, w)], substitute(add(a, b), w), 5)
        assert implies([substitute(a, w), substitute(b, w)],
                       add(substitute(a, w), substitute(b, w)), 5)

    @given(substitutions(5), constraints(nvars=5))
    @settings(max_examples=60)
    def test_semantics(self, w, c):
        for a in assignments(5):
            after = {v: (w.image(v) is ONE) if w.image(v) in (ZERO, ONE) else
                     (a[abs(w.image(v))] == (w.image(v) > 0)) for v in range(1, 6)}
            assert evaluate(substitute(c, w), a) == evaluate(c, after)


class TestCuttingPlanes:
    def test_add_cancels(self):
        assert add(geq([(1, X1), (1, X2)], 1), geq([(1, -X1), (1, X2)], 1)) == \
            Constraint(((2, X2),), 1)

    def test_add_neutral(self):
        c = geq([(3, X1), (1, -X4)], 2)
        assert add(c, TRUE) == c

    def test_multiply(self):
        assert multiply(geq([(1, X1), (1, X2)], 1), 3) == geq([(3, X1), (3, X2)], 3)
        c = geq([(2, X1)], 1)
        assert multiply(c, 1) == c
        with pytest.raises(ValueError):
            multiply(c, 0)

    def test_divide_rounds_up(self):
        c = geq([(2, X1), (3, X2), (5, X3)], 6)
        assert divide(c, 2) == geq([(1, X1), (2, X2), (3, X3)], 3)
        assert divide(c, 1) == c
        with pytest.raises(ValueError):
            divide(c, -1)

    def test_saturate(self):
        assert saturate(geq([(5, X1), (1, X2)], 2)) == geq([(2, X1), (1, X2)], 2)
        c = geq([(1, X1), (1, X2)], 1)
        assert saturate(c) == c

    def test_literal_axioms(self):
        assert literal_axiom(X1) == Constraint(((1, X1),), 0)
        assert literal_axiom(-X1).terms == ((1, -X1),)
        weakened = add(literal_axiom(-X1), geq([(1, X1), (1, X2)], 1))
        assert weakened == geq([(1, X2)], 0)

    def test_lex_transitivity_sum_is_conflicting(self):
        from pbdom.strengthening import lex_constraint_terms
        n = 12
        uv = geq(lex_constraint_terms(n), 0)
        shift = {i: i + n for i in range(1, 2 * n + 1)}
        vw = geq([(a, shift[l]) for a, l in lex_constraint_terms(n)], 0)
        uw_terms = [(a, l if l <= n else l + n) for a, l in lex_constraint_terms(n)]
        total = add(add(uv, vw), negate(geq(uw_terms, 0)))
        assert total.terms == () and total.degree == 1 and total.is_conflicting()

    @given(constraints(nvars=5), constraints(nvars=5), st.integers(1, 4), st.integers(1, 4))
    @settings(max_examples=80)
    def test_steps_are_sound(self, a, b, k, d):
        assert implies([a, b], add(a, b), 5)
        assert implies([a], multiply(a, k), 5)
        assert implies([a], divide(a, d), 5)
        assert equivalent(a, saturate(a), 5)


class TestLiteralAxiomImplies:
    def test_examples(self):
        assert literal_axiom_implies(geq([(2, X1), (1, X2)], 2), geq([(2, X1), (1, X2), (1, X3)], 2))
        assert not literal_axiom_implies(geq([(1, X1)], 1), geq([(1, X2)], 1))
        assert literal_axiom_implies(FALSE, geq([(1, X2)], 1))

    def test_dominant_coefficient_gives_first_breaking_clause(self):
        lex = geq([(-1, 1), (1, 2), (-2, 3), (2, 4), (-4, 5), (4, 6)], 0)
        weakened = geq([(4, -5), (4, 6)], 1)
        assert literal_axiom_implies(lex, weakened)
        assert saturate(weakened) == geq([(1, -5), (1, 6)], 1)

    @given(constraints(nvars=5), constraints(nvars=5))
    @settings(max_examples=150)
    def test_sound(self, c, t):
        if literal_axiom_implies(c, t):
            assert implies([c], t, 5)


class TestEvaluate:
    def test_examples(self):
        assert evaluate(geq([(1, X1), (1, X2)], 1), {1: True, 2: False})
        assert not evaluate(FALSE, {})

    def test_partial_assignment_is_an_error(self):
        with pytest.raises(KeyError):
            evaluate(geq([(1, X1)], 1), {})

    def test_objective(self):
        assert evaluate_objective(Objective(), {1: True}) == 0
        f = Objective([(1, -1), (1, -2), (1, -3)])
        assert evaluate_objective(f, {1: True, 2: True, 3: True}) == 0
        assert evaluate_objective(f, {1: True, 2: True, 3: False}) - \
            evaluate_objective(f, {1: True, 2: True, 3: True}) == 1

    def test_objective_goal_for_swap_is_trivial(self):
        f = Objective([(1, -1), (1, -2), (1, -3)])
        assert objective_goal(f, Substitution({1: 2, 2: 1})).is_trivial()

    def test_bound_constraint(self):
        f = Objective([(1, -1), (1, -2), (1, -3)])
        assert bound_constraint(f, 0).is_conflicting()
        assert bound_constraint(Objective(), 0).is_conflicting()
        assert bound_constraint(f, 2) == geq([(1, 1), (1, 2), (1, 3)], 2)
