import itertools

import pytest

from aectopo.aec import build_aec, members
from aectopo.formulas import evaluate, free_variables
from aectopo.presentation import (block_space_size, bruteforce_model_count, build_presentation, expand,
                                  expected_axiom_count, failing_axioms, is_model, literal_bruteforce_model_count,
                                  literal_space_size, verify_presentation)
from aectopo.structures import Structure, Vocabulary, canonical_form, enumerate_structures

from conftest import GRAPH, PREDICATE

ORDER = Vocabulary(relations=(("L", 2),))


def unlabelled(A, n):
    return {canonical_form(M)[0] for M in members(A, n)}


def test_blocks_are_members_up_to_isomorphism(graph_aec, graph_theory):
    # unlabelled simple graphs on 1 and 2 vertices: 1 + 2
    C = graph_theory.catalog
    assert len(C.blocks) == 3
    assert {b.rep for b in C.blocks} == unlabelled(graph_aec, 1) | unlabelled(graph_aec, 2)


def test_axiom_counts(graph_theory):
    T = graph_theory
    assert len(T.axioms) == expected_axiom_count(T.catalog, T.tuple_budget)
    assert sum(T.counts().values()) == len(T.axioms)
    assert len(T.by_schema(3)) == T.tuple_budget == 2
    assert all(not free_variables(a.formula) for a in T.axioms)
    assert T.vocab.relations[0] == ("E", 2)


def test_new_predicates_are_fresh(graph_theory):
    T = graph_theory
    new = [n for n, _ in T.vocab.relations if n not in T.tau]
    assert len(new) == len(T.catalog.blocks) + len(T.catalog.pairs)
    assert len(set(new)) == len(new)
    assert not set(new) & set(T.tau.symbols)


def test_expansions_are_models(graph_aec, graph_theory):
    for n in (1, 2, 3):
        for M in members(graph_aec, n):
            Mstar = expand(graph_aec, graph_theory, M)
            assert Mstar.reduct(GRAPH) == M
            assert failing_axioms(Mstar, graph_theory) == []


def test_expansion_respects_isomorphism(graph_aec, graph_theory):
    M = Structure.make(GRAPH, 3, {"E": [(0, 1), (1, 0)]})
    for perm in itertools.permutations(range(3)):
        assert expand(graph_aec, graph_theory, M.permute(perm)) == expand(graph_aec, graph_theory, M).permute(perm)


def test_expand_rejects_non_members(graph_aec, graph_theory):
    with pytest.raises(ValueError):
        expand(graph_aec, graph_theory, Structure.make(GRAPH, 2, {"E": [(0, 1)]}))


def test_corrupted_expansion_names_failing_axioms(graph_aec, graph_theory):
    T = graph_theory
    M = Structure.make(GRAPH, 2, {"E": [(0, 1), (1, 0)]})
    Mstar = expand(graph_aec, T, M)
    edge = next(i for i, b in enumerate(T.catalog.blocks) if b.size == 2 and b.rep.relation("E"))
    name = T.block_predicate(edge)
    rels = {r: set(Mstar.relation(r)) for r, _ in T.vocab.relations}
    rels[name].discard((0, 1))
    bad = Structure.make(T.vocab, 2, rels)
    failing = failing_axioms(bad, T)
    assert failing and not is_model(bad, T)
    assert {a.schema for a in failing} <= {2, 3, 4, 5}
    assert all(not evaluate(bad, a.formula) for a in failing)


def test_plain_reduct_is_not_a_model(graph_theory):
    R0 = Structure.make(GRAPH, 1)
    assert not is_model(R0.expand(graph_theory.vocab, {}), graph_theory)


def test_unique_expansion_two_routes(graph_aec, graph_theory):
    # solver-free block enumeration at size 2 and the literal enumeration at size 1
    T = graph_theory
    assert block_space_size(T, 2) == 1024 and literal_space_size(T, 1) == 4096
    for R0 in enumerate_structures(GRAPH, 2):
        count, found = bruteforce_model_count(T, R0)
        if graph_aec.is_member(R0):
            assert count == 1 and found[0] == expand(graph_aec, T, R0)
        else:
            assert count == 0
    for R0 in enumerate_structures(GRAPH, 1):
        assert literal_bruteforce_model_count(T, R0) == (1 if graph_aec.is_member(R0) else 0)


def test_verify_small_class():
    A = build_aec(PREDICATE, "all-structures", block_bound=1, cap=2)
    rep = verify_presentation(A, build_presentation(A), cap=2)
    assert rep.passed, rep.to_dict()
    assert [c.name for c in rep.clauses] == ["1-models-are-class-members", "2-unique-expansion",
                                             "3-strong-implies-substructure", "4-substructure-implies-strong",
                                             "5-expansion-extends"]


def test_transitivity_is_not_two_local():
    # with 2-element blocks the covering axioms accept a non-transitive relation on 3 points
    A = build_aec(ORDER, "partial-orders", block_bound=2, cap=3)
    rep = verify_presentation(A, build_presentation(A), cap=3, search_cap=3)
    clause = rep.clause("1-models-are-class-members")
    assert not clause.passed
    L = {tuple(t) for t in clause.counterexample["reduct"]["relations"]["L"]}
    assert any((a, b) in L and (b, c) in L and (a, c) not in L
               for a, b, c in itertools.permutations(range(3)))
    assert all(c.passed for c in rep.clauses if c is not clause)


def test_export_text_lists_every_axiom(graph_theory):
    text = graph_theory.export_text()
    assert text.count("\n") >= len(graph_theory.axioms)
