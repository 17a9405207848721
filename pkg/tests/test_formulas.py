import itertools

import pytest
from hypothesis import given, settings, strategies as st

from aectopo.errors import EvaluationError
from aectopo.formulas import (And, Const, Exists, Forall, Not, Or, ParseError, Rel, Var, all_variables, depth,
                              eval_term, evaluate, free_variables, instantiate, max_quantifier_length, max_width,
                              parse, subformulas, substitute, symbols_of, to_text)
from aectopo.structures import Structure

from strategies import MIXED, VARS, formulas, terms


@st.composite
def models(draw, max_size=3):
    n = draw(st.integers(1, max_size))
    R = draw(st.sets(st.sampled_from(list(itertools.product(range(n), repeat=2)))))
    P = draw(st.sets(st.sampled_from([(a,) for a in range(n)])))
    f = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return Structure.make(MIXED, n, {"R": R, "P": P}, {"f": f}, {"c": draw(st.integers(0, n - 1))})


@st.composite
def model_and_env(draw):
    M = draw(models())
    env = {v: draw(st.integers(0, M.size - 1)) for v in VARS}
    return M, env


def brute_eval(M, phi, env):
    """Independent evaluator: quantifiers expand into explicit finite families."""
    if isinstance(phi, (Exists, Forall)):
        results = []
        for values in itertools.product(range(M.size), repeat=len(phi.vars)):
            inner = dict(env)
            inner.update(zip(phi.vars, values))
            results.append(brute_eval(M, phi.child, inner))
        return any(results) if isinstance(phi, Exists) else all(results)
    if isinstance(phi, Not):
        return not brute_eval(M, phi.child, env)
    if isinstance(phi, And):
        return all(brute_eval(M, c, env) for c in phi.children)
    if isinstance(phi, Or):
        return any(brute_eval(M, c, env) for c in phi.children)
    return evaluate(M, phi, env)


def test_parse_examples():
    phi = parse("(forall (x0) (or (not (rel P x0)) (exists (x1) (rel R x0 (f x1)))))")
    assert isinstance(phi, Forall) and phi.vars == ("x0",)
    assert free_variables(phi) == frozenset()
    assert symbols_of(phi) == {"P", "R", "f"}
    assert depth(phi) >= 3
    assert max_quantifier_length(parse("(exists (x0 x1) (= x0 x1))")) == 2
    assert max_width(parse("(and (= x0 x0) (= x1 x1) (= c c))")) == 3


@pytest.mark.parametrize("bad", ["(rel)", "(and)", "(= x0)", "(exists x0 (= x0 x0))", "(foo x0)",
                                 "(not (= x0 x0)", "(= x0 x0))", "(exists (c) (= c c))"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_text_roundtrip(phi):
    assert parse(to_text(phi)) == phi


@settings(max_examples=150, deadline=None)
@given(formulas(), model_and_env())
def test_evaluate_agrees_with_expanded_quantifiers(phi, me):
    M, env = me
    assert evaluate(M, phi, env) == brute_eval(M, phi, env)


@settings(max_examples=150, deadline=None)
@given(formulas(), st.sampled_from(VARS), terms(), model_and_env())
def test_substitution_agrees_with_environment_update(phi, v, t, me):
    # M |= phi[v := t][env]  iff  M |= phi[env with v := t^M]
    M, env = me
    lhs = evaluate(M, substitute(phi, v, t, [f"x{i}" for i in range(8)]), env)
    env2 = dict(env)
    env2[v] = eval_term(M, t, env)
    assert lhs == evaluate(M, phi, env2)


@settings(max_examples=100, deadline=None)
@given(formulas(), model_and_env())
def test_instantiate_by_constants(phi, me):
    M, env = me
    names = {v: f"k{v}" for v in VARS}
    sentence = instantiate(phi, {v: Const(k) for v, k in names.items()})
    assert not free_variables(sentence)
    assert evaluate(M, sentence, constants={names[v]: a for v, a in env.items()}) == evaluate(M, phi, env)


def test_substitution_avoids_capture():
    phi = parse("(exists (x1) (rel R x0 x1))")
    out = substitute(phi, "x0", Var("x1"), ["x0", "x1", "x2"])
    assert free_variables(out) == {"x1"}
    assert out.vars == ("x2",)
    assert substitute(phi, "x1", Var("x2")) == phi


def test_subformulas_and_variables():
    phi = parse("(and (rel P x0) (not (exists (x1) (rel R x0 x1))))")
    subs = {to_text(s) for s in subformulas(phi)}
    assert "(rel R x0 x1)" in subs and "(rel P x0)" in subs and to_text(phi) in subs
    assert all_variables(phi) == {"x0", "x1"}


def test_evaluation_errors():
    M = Structure.make(MIXED, 1, {}, {"f": [0]}, {"c": 0})
    with pytest.raises(EvaluationError):
        evaluate(M, parse("(rel R x0 x0)"))
    with pytest.raises(EvaluationError):
        evaluate(M, parse("(rel Q c)"))
    with pytest.raises(EvaluationError):
        evaluate(M, Rel("P", (Const("d"),)))
