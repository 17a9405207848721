import itertools

import pytest
from hypothesis import given, settings, strategies as st

from aectopo.errors import BudgetExceeded, NotIsomorphic, VocabularyMismatch
from aectopo.structures import (Structure, Vocabulary, automorphisms, canonical_form, coherent_iso,
                                count_structures, enumerate_structures, find_isomorphism, is_canonical,
                                is_isomorphism)

from conftest import GRAPH, PREDICATE_AND_CONSTANT, UNARY_FUNCTION

MIXED = Vocabulary(relations=(("R", 2),), functions=(("f", 1),), constants=("c",))


@st.composite
def mixed_structures(draw, max_size=3):
    n = draw(st.integers(1, max_size))
    pairs = list(itertools.product(range(n), repeat=2))
    R = draw(st.sets(st.sampled_from(pairs)))
    f = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    c = draw(st.integers(0, n - 1))
    return Structure.make(MIXED, n, {"R": R}, {"f": f}, {"c": c})


def test_make_and_access():
    M = Structure.make(MIXED, 2, {"R": [(0, 1)]}, {"f": [1, 0]}, {"c": 1})
    assert M.holds("R", (0, 1)) and not M.holds("R", (1, 0))
    assert M.apply("f", (0,)) == 1
    assert M.constant("c") == 1
    assert list(M.universe) == [0, 1]


def test_make_rejects_bad_tables():
    with pytest.raises(ValueError):
        Structure.make(GRAPH, 2, {"E": [(0, 2)]})
    with pytest.raises(ValueError):
        Structure.make(UNARY_FUNCTION, 2, {}, {"s": [0]})
    with pytest.raises(VocabularyMismatch):
        Structure.make(GRAPH, 2, {"F": [(0, 1)]})
    with pytest.raises(ValueError):
        Structure.make(PREDICATE_AND_CONSTANT, 0, {}, {}, {})


@pytest.mark.parametrize("vocab,size,expected", [
    (GRAPH, 2, 16), (GRAPH, 3, 512), (UNARY_FUNCTION, 3, 27), (PREDICATE_AND_CONSTANT, 2, 8),
    (PREDICATE_AND_CONSTANT, 0, 0), (MIXED, 2, 16 * 4 * 2),
])
def test_count_matches_enumeration(vocab, size, expected):
    # closed forms: 2^(n^k) per k-ary relation, n^(n^k) per k-ary function
    assert count_structures(vocab, size) == expected
    listed = list(enumerate_structures(vocab, size))
    assert len(listed) == expected == len(set(listed))


def test_enumeration_limit():
    with pytest.raises(BudgetExceeded):
        list(enumerate_structures(GRAPH, 4, limit=100))


@pytest.mark.parametrize("size,classes", [(1, 1), (2, 2), (3, 4), (4, 11)])
def test_isomorphism_classes_of_simple_graphs(size, classes):
    # number of unlabelled simple graphs on n vertices: 1, 2, 4, 11
    reps = set()
    for M in enumerate_structures(GRAPH, size, limit=1 << 17):
        E = M.relation("E")
        if any((a, a) in E for a in range(size)) or any((b, a) not in E for a, b in E):
            continue
        reps.add(canonical_form(M)[0])
    assert len(reps) == classes


@settings(max_examples=60, deadline=None)
@given(mixed_structures(), st.data())
def test_canonical_form_is_invariant(M, data):
    perm = data.draw(st.permutations(range(M.size)))
    N = M.permute(perm)
    assert is_isomorphism(perm, M, N)
    C, f = canonical_form(M)
    assert is_canonical(C)
    assert M.permute(f.mapping) == C
    assert canonical_form(N)[0] == C
    assert find_isomorphism(M, N) is not None


@settings(max_examples=40, deadline=None)
@given(mixed_structures(), st.data())
def test_coherent_iso_composition(M, data):
    p = data.draw(st.permutations(range(M.size)))
    q = data.draw(st.permutations(range(M.size)))
    N, K = M.permute(p), M.permute(q)
    fMN, fNK, fMK = coherent_iso(M, N), coherent_iso(N, K), coherent_iso(M, K)
    assert is_isomorphism(fMN.mapping, M, N)
    assert fMN.then(fNK).mapping == fMK.mapping
    assert coherent_iso(M, M).mapping == tuple(range(M.size))


def test_coherent_iso_rejects_non_isomorphic():
    M = Structure.make(GRAPH, 2)
    N = Structure.make(GRAPH, 2, {"E": [(0, 1)]})
    with pytest.raises(NotIsomorphic):
        coherent_iso(M, N)


def test_automorphisms_of_edge_and_path():
    edge = Structure.make(GRAPH, 2, {"E": [(0, 1), (1, 0)]})
    assert sorted(automorphisms(edge)) == [(0, 1), (1, 0)]
    path = Structure.make(GRAPH, 3, {"E": [(0, 1), (1, 0), (1, 2), (2, 1)]})
    assert sorted(automorphisms(path)) == [(0, 1, 2), (2, 1, 0)]


@settings(max_examples=40, deadline=None)
@given(mixed_structures())
def test_serialisation_roundtrip(M):
    assert Structure.from_text(M.to_text()) == M
    assert Structure.from_dict(M.to_dict()) == M


def test_restrict_and_closure():
    M = Structure.make(MIXED, 3, {"R": [(0, 2), (2, 1)]}, {"f": [0, 0, 2]}, {"c": 0})
    assert M.is_closed([0, 2]) and not M.is_closed([1, 2])
    sub, emb = M.restrict([0, 2])
    assert emb == (0, 2)
    assert sub.relation("R") == {(0, 1)}
    assert sub.function_table("f") == (0, 1)
    with pytest.raises(ValueError):
        M.restrict([1])


def test_reduct_and_expand():
    big = GRAPH.extend(relations=[("Q", 1)])
    M = Structure.make(GRAPH, 2, {"E": [(0, 1)]})
    X = M.expand(big, {"Q": [(1,)]})
    assert X.holds("Q", (1,))
    assert X.reduct(GRAPH) == M
