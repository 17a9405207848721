import pytest
from hypothesis import given, settings, strategies as st

from aectopo.errors import BudgetExceeded
from aectopo.formulas import Or, depth, parse, subformulas
from aectopo.fragment import (FragmentBudget, audit_closure, dual, fragment_closure, is_idempotent, sentences,
                              terms, variable_set)
from aectopo.structures import Vocabulary

from conftest import GRAPH, PREDICATE, UNARY_FUNCTION
from strategies import formulas


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_one_variable_counts(d):
    # two atoms, then each level adds negation, existential and singleton conjunction: f(d) = 3^(d+1) - 1
    F = fragment_closure((), variable_set(1), PREDICATE, FragmentBudget(max_depth=d))
    assert len(F) == 3 ** (d + 1) - 1


def test_two_variable_count():
    # 6 atoms; depth 1 adds 6 negations, 6 conjunctions and 6 * 2 existentials
    F = fragment_closure((), variable_set(2), PREDICATE, FragmentBudget(max_depth=1))
    assert len(F) == 30


def test_terms_with_function_depth():
    ts = terms(UNARY_FUNCTION, ("x0",), max_depth=2)
    assert [str(t) for t in ts] == ["x0", "(s x0)", "(s (s x0))"]


def test_closure_audit_and_idempotence():
    F = fragment_closure((), variable_set(2), GRAPH, FragmentBudget(max_depth=1))
    assert audit_closure(F) == []
    assert is_idempotent(F)
    assert all(depth(phi) <= 1 for phi in F)


def test_seed_enters_with_subformulas_and_duals():
    seed = parse("(forall (x0) (or (rel E x0 x0) (exists (x1) (rel E x0 x1))))")
    F = fragment_closure([seed], variable_set(2), GRAPH, FragmentBudget(max_depth=1))
    assert seed in F
    assert all(s in F for s in subformulas(seed))
    for s in subformulas(seed):
        if isinstance(s, Or):
            assert dual(s) in F
    assert seed in sentences(F)
    assert audit_closure(F) == []
    assert is_idempotent(F)


@settings(max_examples=25, deadline=None)
@given(st.lists(formulas(GRAPH, ("x0", "x1"), max_leaves=4), max_size=2))
def test_closure_properties_on_random_seeds(seed):
    F = fragment_closure(seed, variable_set(2), GRAPH, FragmentBudget(max_depth=1, max_count=50_000))
    assert all(phi in F for phi in seed)
    assert audit_closure(F) == []
    assert is_idempotent(F)


def test_seed_outside_variables_rejected():
    with pytest.raises(ValueError):
        fragment_closure([parse("(rel E x0 x5)")], variable_set(2), GRAPH)


def test_member_budget():
    with pytest.raises(BudgetExceeded):
        fragment_closure((), variable_set(2), GRAPH, FragmentBudget(max_depth=2, max_count=100))


def test_budget_validation():
    with pytest.raises(ValueError):
        FragmentBudget(max_width=0)
    with pytest.raises(ValueError):
        FragmentBudget(max_depth=-1)
