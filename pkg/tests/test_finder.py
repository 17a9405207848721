import itertools

import pytest
from hypothesis import given, settings, strategies as st

from aectopo.finder import Grounding, Solver, find_model, satisfiable
from aectopo.formulas import evaluate, parse
from aectopo.structures import Vocabulary, enumerate_structures

from conftest import GRAPH, UNARY_FUNCTION
from strategies import formulas

SMALL = Vocabulary(relations=(("R", 2), ("P", 1)), constants=("c",))


def brute_sat(nvars, clauses):
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


cnfs = st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.lists(
    st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])), min_size=0, max_size=4),
    max_size=24)))


@settings(max_examples=300, deadline=None)
@given(cnfs)
def test_dpll_agrees_with_truth_tables(cnf):
    n, clauses = cnf
    model = Solver(n, clauses).solve()
    assert (model is not None) == brute_sat(n, clauses)
    if model is not None:
        # value[var] is 1 or -1; index 0 unused
        assert all(any((model[abs(l)] > 0) == (l > 0) for l in c) for c in clauses)


def test_solver_assumptions():
    s = Solver(2, [[1, 2], [-1, 2]])
    assert s.solve([-2]) is None
    assert s.solve([2]) is not None


def test_pigeonhole_unsatisfiable():
    # 4 pigeons, 3 holes; variable p*3+h+1 means pigeon p sits in hole h
    v = lambda p, h: p * 3 + h + 1
    clauses = [[v(p, h) for h in range(3)] for p in range(4)]
    clauses += [[-v(p, h), -v(q, h)] for h in range(3) for p, q in itertools.combinations(range(4), 2)]
    assert Solver(12, clauses).solve() is None


@settings(max_examples=60, deadline=None)
@given(st.lists(formulas(SMALL, ("x0", "x1"), max_leaves=5), min_size=1, max_size=2), st.integers(1, 2))
def test_find_model_agrees_with_enumeration(phis, n):
    from aectopo.formulas import Forall, free_variables, sorted_vars
    sentences = [Forall(tuple(sorted_vars(free_variables(p))), p) if free_variables(p) else p for p in phis]
    expected = any(all(evaluate(M, s) for s in sentences) for M in enumerate_structures(SMALL, n))
    model = find_model(sentences, SMALL, n)
    assert (model is not None) == expected
    if model is not None:
        assert all(evaluate(model, s) for s in sentences)


def test_functions_are_enumerated():
    # an involution without fixed points exists at size 2, not at size 1 or 3
    phi = parse("(forall (x0) (and (= (s (s x0)) x0) (not (= (s x0) x0))))")
    assert [satisfiable([phi], UNARY_FUNCTION, n) for n in (1, 2, 3)] == [False, True, False]


def test_models_enumeration_counts():
    # symmetric loopless graphs on 3 labelled vertices: 2^3
    g = Grounding(GRAPH, 3)
    g.add(parse("(forall (x0 x1) (and (not (rel E x0 x0)) (or (not (rel E x0 x1)) (rel E x1 x0))))"))
    assert len(list(g.models())) == 8


def test_henkin_constants():
    phi = parse("(and (rel E c0 c1) (not (rel E c1 c0)))")
    M = find_model([phi], GRAPH, 2, henkin={"c0": 0, "c1": 1})
    assert M.holds("E", (0, 1)) and not M.holds("E", (1, 0))
    assert not satisfiable([phi], GRAPH, 2, henkin={"c0": 0, "c1": 0})
