"""Hypothesis strategies for formulas over small vocabularies."""

from __future__ import annotations

from hypothesis import strategies as st

from aectopo.formulas import And, App, Const, Eq, Exists, Forall, Not, Or, Rel, Var
from aectopo.structures import Vocabulary

MIXED = Vocabulary(relations=(("R", 2), ("P", 1)), functions=(("f", 1),), constants=("c",))
VARS = ("x0", "x1", "x2")


def terms(vocab: Vocabulary = MIXED, variables=VARS):
    base = st.sampled_from([Var(v) for v in variables] + [Const(c) for c in vocab.constants])
    if not vocab.functions:
        return base
    return st.one_of(base, st.builds(lambda f, a: App(f, (a,)),
                                     st.sampled_from([n for n, a in vocab.functions if a == 1]), base))


def atoms(vocab: Vocabulary = MIXED, variables=VARS):
    t = terms(vocab, variables)
    rels = [st.builds(lambda *args, n=name: Rel(n, args), *([t] * arity)) for name, arity in vocab.relations]
    return st.one_of(st.builds(Eq, t, t), *rels)


def formulas(vocab: Vocabulary = MIXED, variables=VARS, max_leaves: int = 8):
    def extend(inner):
        family = st.lists(inner, min_size=1, max_size=3).map(tuple)
        qvars = st.lists(st.sampled_from(variables), min_size=1, max_size=2, unique=True).map(tuple)
        return st.one_of(st.builds(Not, inner), st.builds(And, family), st.builds(Or, family),
                         st.builds(Exists, qvars, inner), st.builds(Forall, qvars, inner))
    return st.recursive(atoms(vocab, variables), extend, max_leaves=max_leaves)
