"""Declarative toy abstract elementary classes and their desk-scale validation.

A ``ToyAEC`` pairs a class predicate with a strong-substructure test given on
subsets: ``strong(N, A)`` says the induced substructure of ``N`` on the
sorted tuple ``A`` is a strong submodel of ``N``.  Embeddings are handled by
moving to isomorphic copies, so subsets are all that is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from .errors import BudgetExceeded
from .structures import DEFAULT_ENUMERATION_LIMIT, Structure, Vocabulary, count_structures, enumerate_structures

ClassPredicate = Callable[[Structure], bool]
StrongPredicate = Callable[[Structure, tuple], bool]


@dataclass(frozen=True, eq=False)
class ToyAEC:
    vocab: Vocabulary
    in_class: ClassPredicate
    strong: StrongPredicate
    block_bound: int = 2
    cap: int = 4
    name: str = "custom"
    strong_name: str = "custom"

    def __post_init__(self):
        if self.block_bound < 1:
            raise ValueError("block bound must be at least 1")
        if self.cap < self.block_bound:
            raise ValueError("universe cap must be at least the block bound")

    def is_member(self, M: Structure) -> bool:
        return M.size >= 1 and M.vocab == self.vocab and bool(self.in_class(M))

    def is_strong(self, N: Structure, subset) -> bool:
        """Whether the induced substructure on ``subset`` is a strong submodel of ``N``."""
        subset = tuple(sorted(set(subset)))
        if not subset or not N.is_closed(subset):
            return False
        sub, _ = N.restrict(subset)
        if not self.is_member(sub):
            return False
        return bool(self.strong(N, subset))

    def describe(self) -> dict:
        return {"class": self.name, "strong": self.strong_name, "block_bound": self.block_bound,
                "cap": self.cap, "vocabulary": self.vocab.to_dict()}


def members(A: ToyAEC, size: int, limit: int = DEFAULT_ENUMERATION_LIMIT) -> Iterator[Structure]:
    """Class members on ``{0..size-1}``."""
    if size < 1:
        return
    for M in enumerate_structures(A.vocab, size, limit):
        if A.is_member(M):
            yield M


def subsets(n: int, min_size: int = 1, max_size: int | None = None) -> Iterator[tuple]:
    top = n if max_size is None else min(n, max_size)
    for k in range(min_size, top + 1):
        yield from itertools.combinations(range(n), k)


def strong_subsets(A: ToyAEC, N: Structure) -> list[tuple]:
    return [s for s in subsets(N.size) if A.is_strong(N, s)]


def relative(inner: tuple, outer: tuple) -> tuple:
    """Positions of ``inner`` inside the relabelled restriction to ``outer``."""
    pos = {e: i for i, e in enumerate(outer)}
    return tuple(pos[e] for e in inner)


# ------------------------------------------------------------------ library
def _binary(vocab: Vocabulary, params: Mapping) -> str:
    name = params.get("relation")
    binaries = [n for n, a in vocab.relations if a == 2]
    if name is None:
        if len(binaries) != 1:
            raise ValueError("class needs exactly one binary relation or a 'relation' parameter")
        return binaries[0]
    if name not in binaries:
        raise ValueError(f"{name} is not a binary relation of the vocabulary")
    return name


def _unary_function(vocab: Vocabulary, params: Mapping) -> str:
    name = params.get("function")
    unaries = [n for n, a in vocab.functions if a == 1]
    if name is None:
        if len(unaries) != 1:
            raise ValueError("class needs exactly one unary function or a 'function' parameter")
        return unaries[0]
    if name not in unaries:
        raise ValueError(f"{name} is not a unary function of the vocabulary")
    return name


def loopless_symmetric_graphs(vocab: Vocabulary, params: Mapping) -> ClassPredicate:
    E = _binary(vocab, params)

    def pred(M: Structure) -> bool:
        edges = M.relation(E)
        return all(a != b and (b, a) in edges for a, b in edges)
    return pred


def all_structures(vocab: Vocabulary, params: Mapping) -> ClassPredicate:
    return lambda M: True


def partial_orders(vocab: Vocabulary, params: Mapping) -> ClassPredicate:
    """Strict partial orders: irreflexive and transitive."""
    R = _binary(vocab, params)

    def pred(M: Structure) -> bool:
        rel = M.relation(R)
        if any(a == b for a, b in rel):
            return False
        return all((a, d) in rel for a, b in rel for c, d in rel if b == c)
    return pred


def involutions(vocab: Vocabulary, params: Mapping) -> ClassPredicate:
    s = _unary_function(vocab, params)

    def pred(M: Structure) -> bool:
        return all(M.apply(s, (M.apply(s, (a,)),)) == a for a in M.universe)
    return pred


CLASS_LIBRARY: dict[str, Callable[[Vocabulary, Mapping], ClassPredicate]] = {
    "loopless-symmetric-graphs": loopless_symmetric_graphs,
    "all-structures": all_structures,
    "partial-orders": partial_orders,
    "involutions": involutions,
}


def induced_substructure(vocab: Vocabulary, params: Mapping) -> StrongPredicate:
    return lambda N, subset: True


def proper_induced_substructure(vocab: Vocabulary, params: Mapping) -> StrongPredicate:
    """Strictly smaller induced substructures; not reflexive, kept as a negative example."""
    return lambda N, subset: len(subset) < N.size


def no_external_edges(vocab: Vocabulary, params: Mapping) -> StrongPredicate:
    """No relation tuple mixes the subset with its complement."""
    names = [n for n, _ in vocab.relations]

    def pred(N: Structure, subset: tuple) -> bool:
        inside = set(subset)
        for name in names:
            for t in N.relation(name):
                flags = {a in inside for a in t}
                if len(flags) == 2:
                    return False
        return True
    return pred


STRONG_PREDICATES: dict[str, Callable[[Vocabulary, Mapping], StrongPredicate]] = {
    "no-external-edges": no_external_edges,
}


def induced_plus_predicate(vocab: Vocabulary, params: Mapping) -> StrongPredicate:
    name = params.get("predicate")
    if name not in STRONG_PREDICATES:
        raise ValueError(f"unknown strong predicate {name!r}; known: {sorted(STRONG_PREDICATES)}")
    return STRONG_PREDICATES[name](vocab, params)


STRONG_LIBRARY: dict[str, Callable[[Vocabulary, Mapping], StrongPredicate]] = {
    "induced-substructure": induced_substructure,
    "proper-induced-substructure": proper_induced_substructure,
    "induced-plus-predicate": induced_plus_predicate,
}


def build_aec(vocab: Vocabulary, class_name: str, strong_name: str = "induced-substructure",
              block_bound: int = 2, cap: int = 4, class_params: Mapping | None = None,
              strong_params: Mapping | None = None) -> ToyAEC:
    if class_name not in CLASS_LIBRARY:
        raise ValueError(f"unknown class {class_name!r}; known: {sorted(CLASS_LIBRARY)}")
    if strong_name not in STRONG_LIBRARY:
        raise ValueError(f"unknown strong relation {strong_name!r}; known: {sorted(STRONG_LIBRARY)}")
    pred = CLASS_LIBRARY[class_name](vocab, dict(class_params or {}))
    strong = STRONG_LIBRARY[strong_name](vocab, dict(strong_params or {}))
    label = strong_name
    if strong_name == "induced-plus-predicate":
        label = f"{strong_name}:{(strong_params or {}).get('predicate')}"
    return ToyAEC(vocab, pred, strong, block_bound, cap, class_name, label)


# --------------------------------------------------------------- validation
@dataclass
class AxiomCheck:
    name: str
    passed: bool = True
    checked: int = 0
    counterexample: dict | None = None

    def fail(self, witness: dict):
        if self.passed:
            self.passed = False
            self.counterexample = witness

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "counterexample": self.counterexample}


@dataclass
class ValidationReport:
    aec: dict
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> AxiomCheck:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        return {"aec": self.aec, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _generators(n: int) -> list[tuple]:
    """Transposition (0 1) and the n-cycle generate the symmetric group."""
    if n < 2:
        return []
    swap = (1, 0) + tuple(range(2, n))
    cycle = tuple((i + 1) % n for i in range(n))
    return [swap] if n == 2 else [swap, cycle]


def validate_aec(A: ToyAEC, limit: int = DEFAULT_ENUMERATION_LIMIT) -> ValidationReport:
    """Exhaustive check of the AEC axioms on all structures of size at most the cap."""
    for n in range(1, A.cap + 1):
        total = count_structures(A.vocab, n)
        if total > limit:
            raise BudgetExceeded(f"{total} structures of size {n} exceed the validation limit {limit}")

    iso = AxiomCheck("isomorphism-closure")
    refl = AxiomCheck("reflexivity")
    trans = AxiomCheck("transitivity")
    coh = AxiomCheck("coherence")
    ls = AxiomCheck("downward-ls")
    chain = AxiomCheck("chain-union")
    nonempty = AxiomCheck("blocks-exist")
    report = ValidationReport(A.describe(), [iso, refl, trans, coh, ls, chain, nonempty])

    def strong_in(N, s):
        return A.is_strong(N, s)

    for n in range(1, A.cap + 1):
        gens = _generators(n)
        for M in enumerate_structures(A.vocab, n, limit):
            member = A.is_member(M)
            for g in gens:
                iso.checked += 1
                image = M.permute(g)
                if A.is_member(image) != member:
                    iso.fail({"structure": M.to_dict(), "permutation": list(g)})
            if not member:
                continue
            strong = {s: strong_in(M, s) for s in subsets(n)}
            for g in gens:
                image = M.permute(g)
                for s, ok in strong.items():
                    iso.checked += 1
                    if strong_in(image, tuple(sorted(g[a] for a in s))) != ok:
                        iso.fail({"structure": M.to_dict(), "subset": list(s), "permutation": list(g)})

            refl.checked += 1
            if not strong[tuple(range(n))]:
                refl.fail({"structure": M.to_dict()})

            strong_sets = [s for s, ok in strong.items() if ok]
            for B in strong_sets:
                sub_b, _ = M.restrict(B)
                for Asub in strong_sets:
                    if not set(Asub) < set(B):
                        continue
                    rel = relative(Asub, B)
                    a_in_b = strong_in(sub_b, rel)
                    coh.checked += 1
                    if not a_in_b:
                        coh.fail({"structure": M.to_dict(), "inner": list(Asub), "middle": list(B)})
                for Asub in subsets(len(B)):
                    if len(Asub) == len(B) or not strong_in(sub_b, Asub):
                        continue
                    image = tuple(B[i] for i in Asub)
                    trans.checked += 1
                    if not strong[image]:
                        trans.fail({"structure": M.to_dict(), "inner": list(image), "middle": list(B)})

            for C in strong_sets:
                sub_c, _ = M.restrict(C)
                for B_rel in subsets(len(C), max_size=len(C) - 1):
                    if not strong_in(sub_c, B_rel):
                        continue
                    sub_b, _ = sub_c.restrict(B_rel)
                    for A_rel in subsets(len(B_rel), max_size=len(B_rel) - 1):
                        if not strong_in(sub_b, A_rel):
                            continue
                        chain.checked += 1
                        in_c = tuple(B_rel[i] for i in A_rel)
                        if not strong_in(sub_c, in_c):
                            chain.fail({"structure": M.to_dict(), "chain": [list(in_c), list(B_rel)],
                                        "top": list(C)})

            for X in subsets(n, max_size=A.block_bound):
                ls.checked += 1
                if not any(set(X) <= set(s) and len(s) <= A.block_bound for s in strong_sets):
                    ls.fail({"structure": M.to_dict(), "subset": list(X)})

    nonempty.checked += 1
    if not any(True for _ in members(A, 1, limit)):
        nonempty.fail({"size": 1})
    return report

