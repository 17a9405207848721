"""Theory functions on a sentence index and the model/theory correspondence.

Fix a universe size ``n`` and Henkin constants ``c0..c{n-1}`` naming its
elements.  The sentence index S holds every constant instance of a
fragment's members.  A structure is sent to its theory function (the 0/1
valuation of S); a theory function is decoded back from its atomic part.
The set B of "good" valuations is cut out by four conditions, each of which
is also emitted as a family of open sets of 2^S for the G-delta check.

Consistency means satisfiable on the universe ``{0..n-1}`` with ``c_i``
interpreted as ``i``.  Every encoded structure satisfies that reading,
since the constants name distinct elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .aec import ToyAEC, members
from .errors import BudgetExceeded, DecodeError
from .finder import satisfiable
from .formulas import (ATOMS, App, Const, Eq, Exists, Forall, Formula, Not, Or, Rel, children, compile_formula,
                       evaluate, free_variables, instantiate, parse, sorted_vars, subformulas, to_text)
from .fragment import Fragment, FragmentBudget, fragment_closure, order_key, variable_set
from .structures import Structure, Vocabulary, enumerate_structures


def henkin_constants(n: int, vocab: Vocabulary, prefix: str = "c") -> tuple[str, ...]:
    names = tuple(f"{prefix}{i}" for i in range(n))
    clash = sorted(set(names) & set(vocab.symbols))
    if clash:
        raise ValueError(f"Henkin constant names collide with the vocabulary: {clash}")
    return names


# ----------------------------------------------------------- sentence index
@dataclass(eq=False)
class SentenceIndex:
    vocab: Vocabulary
    n: int
    constants: tuple[str, ...]
    sentences: tuple[Formula, ...]
    sources: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.position = {s: i for i, s in enumerate(self.sentences)}
        if len(self.position) != len(self.sentences):
            raise ValueError("duplicate sentences in index")

    def __len__(self) -> int:
        return len(self.sentences)

    def __contains__(self, phi) -> bool:
        return phi in self.position

    @cached_property
    def compiled(self) -> list:
        henkin = self.henkin
        return [compile_formula(s, henkin) for s in self.sentences]

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.sentences)

    @property
    def henkin(self) -> dict:
        return {c: i for i, c in enumerate(self.constants)}

    def const(self, i: int) -> Const:
        return Const(self.constants[i])

    def negation_pairs(self) -> list[tuple[Formula, Formula]]:
        return [(s, Not(s)) for s in self.sentences if Not(s) in self.position]

    def disjunctions(self) -> list[tuple[Formula, tuple[Formula, ...]]]:
        """Disjunction sentences whose disjuncts are all listed."""
        return [(s, s.children) for s in self.sentences
                if isinstance(s, Or) and all(c in self.position for c in s.children)]

    def witnesses(self, phi: Exists) -> list[Formula]:
        out = []
        for tup in itertools.product(range(self.n), repeat=len(phi.vars)):
            out.append(instantiate(phi.child, {v: self.const(i) for v, i in zip(phi.vars, tup)}))
        return out

    def existentials(self) -> list[tuple[Formula, list[Formula]]]:
        """Existential sentences with every constant instance listed."""
        out = []
        for s in self.sentences:
            if isinstance(s, Exists):
                inst = self.witnesses(s)
                if all(i in self.position for i in inst):
                    out.append((s, inst))
        return out

    def restrict(self, keep: Iterable[Formula]) -> SentenceIndex:
        """Sub-index on the listed sentences (kept in index order)."""
        keep = set(keep)
        missing = [to_text(s) for s in keep if s not in self.position]
        if missing:
            raise ValueError(f"sentences not in the index: {missing}")
        sents = tuple(s for s in self.sentences if s in keep)
        return SentenceIndex(self.vocab, self.n, self.constants, sents,
                             {s: self.sources[s] for s in sents if s in self.sources})

    def to_dict(self) -> dict:
        return {"n": self.n, "constants": list(self.constants), "size": len(self),
                "sentences": [to_text(s) for s in self.sentences]}


def build_sentence_set(F: Fragment, n: int, max_sentences: int | None = 200_000,
                       constants: Sequence[str] | None = None) -> SentenceIndex:
    """Every instance of a fragment member by the Henkin constants, ordered by (depth, text).

    ``sources`` records, per sentence, the first member and parameter tuple
    that produced it.
    """
    consts = tuple(constants) if constants is not None else henkin_constants(n, F.vocab)
    if len(consts) != n:
        raise ValueError("need exactly one Henkin constant per universe element")
    sources = {}
    for phi in F.members:
        fv = sorted_vars(free_variables(phi))
        for tup in itertools.product(range(n), repeat=len(fv)):
            s = instantiate(phi, {v: Const(consts[i]) for v, i in zip(fv, tup)})
            if s not in sources:
                sources[s] = (phi, tuple(zip(fv, tup)))
                if max_sentences is not None and len(sources) > max_sentences:
                    raise BudgetExceeded(f"sentence index exceeds {max_sentences} sentences")
    sents = tuple(sorted(sources, key=order_key))
    return SentenceIndex(F.vocab, n, consts, sents, sources)


def atomic_fragment(vocab: Vocabulary, n: int, max_tuple: int = 1, max_depth: int = 1,
                    max_term_depth: int = 1, seed: Iterable[Formula] = ()) -> Fragment:
    """Fragment generated by ``seed`` with enough variables for ``n``-ary atoms."""
    arity = max([a for _, a in vocab.relations] + [a + 1 for _, a in vocab.functions] + [2])
    V = variable_set(max(arity, max_tuple + 1))
    return fragment_closure(seed, V, vocab, FragmentBudget(max_depth=max_depth, max_tuple=max_tuple,
                                                           max_term_depth=max_term_depth))


# ----------------------------------------------------------- theory functions
@dataclass(frozen=True)
class TheoryFunction:
    """A (possibly partial) 0/1 valuation of sentences."""
    values: Mapping[Formula, int]

    def __call__(self, phi: Formula) -> int:
        return self.values[phi]

    def get(self, phi: Formula, default=None):
        return self.values.get(phi, default)

    def __contains__(self, phi) -> bool:
        return phi in self.values

    def is_total_on(self, S: SentenceIndex) -> bool:
        return all(s in self.values for s in S.sentences)

    def true_set(self) -> list[Formula]:
        return sorted((s for s, v in self.values.items() if v), key=order_key)

    def with_values(self, changes: Mapping[Formula, int]) -> TheoryFunction:
        d = dict(self.values)
        d.update(changes)
        return TheoryFunction(d)

    def to_records(self) -> list[tuple[str, int]]:
        return sorted((to_text(s), int(v)) for s, v in self.values.items())

    @classmethod
    def from_records(cls, records: Iterable[Sequence]) -> TheoryFunction:
        return cls({parse(text): int(bit) for text, bit in records})

    def mask(self, S: SentenceIndex) -> int:
        return sum(1 << i for i, s in enumerate(S.sentences) if self.values.get(s))

    @classmethod
    def from_mask(cls, S: SentenceIndex, mask: int) -> TheoryFunction:
        return cls({s: (mask >> i) & 1 for i, s in enumerate(S.sentences)})


def encode(Mstar: Structure, S: SentenceIndex) -> TheoryFunction:
    if Mstar.size != S.n:
        raise ValueError(f"structure has size {Mstar.size}, index expects {S.n}")
    return TheoryFunction({s: int(c(Mstar, {})) for s, c in zip(S.sentences, S.compiled)})


def decode(f: TheoryFunction, S: SentenceIndex) -> Structure:
    """Read a structure off the atomic part of ``f``.

    Relations come from ``R(c..)``, function values from ``F(c..) = c_l``,
    constants from ``c = c_i``.
    """
    n, C = S.n, S.const
    vocab = S.vocab

    def lookup(phi):
        v = f.get(phi)
        if v is None:
            raise DecodeError(f"theory function does not determine {to_text(phi)}")
        return v

    relations = {}
    for name, arity in vocab.relations:
        relations[name] = [args for args in itertools.product(range(n), repeat=arity)
                           if lookup(Rel(name, tuple(C(a) for a in args)))]

    def witness(term, what):
        hits = [l for l in range(n) if lookup(Eq(term, C(l)))]
        if len(hits) != 1:
            kind = "no witness" if not hits else f"multiple witnesses {hits}"
            raise DecodeError(f"{kind} for {what}")
        return hits[0]

    functions = {}
    for name, arity in vocab.functions:
        functions[name] = [witness(App(name, tuple(C(a) for a in args)), f"{name}{args}")
                           for args in itertools.product(range(n), repeat=arity)]
    constants = {c: witness(Const(c), c) for c in vocab.constants}
    return Structure.make(vocab, n, relations, functions, constants)


# ---------------------------------------------------------- membership in B
class ConsistencyOracle:
    """Memoised satisfiability of sentence sets with ``c_i`` naming element ``i``."""

    def __init__(self, S: SentenceIndex):
        self.S = S
        self.cache: dict[frozenset, bool] = {}

    def __call__(self, sentences: Iterable[Formula]) -> bool:
        key = frozenset(sentences)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = satisfiable(sorted(key, key=order_key), self.S.vocab, self.S.n, self.S.henkin)
        return hit

    def minimal_core(self, sentences: Sequence[Formula]) -> list[Formula]:
        """Minimal unsatisfiable subset of an unsatisfiable list, by chunked deletion.

        Chunks start at half the list and halve whenever no chunk of the
        current size can be dropped; the final pass drops single sentences,
        so the result is minimal.
        """
        core = list(sentences)
        chunk = max(1, len(core) // 2)
        while True:
            i = 0
            while i < len(core):
                trial = core[:i] + core[i + chunk:]
                if not self(trial):
                    core = trial
                else:
                    i += chunk
            if chunk == 1:
                return core
            chunk = max(1, chunk // 2)


@dataclass
class BViolation:
    condition: int
    witness: list[str]
    detail: str = ""

    def to_dict(self) -> dict:
        return {"condition": self.condition, "witness": self.witness, "detail": self.detail}


@dataclass
class BReport:
    violations: list[BViolation] = field(default_factory=list)
    checked: dict = field(default_factory=lambda: {"1": 0, "2": 0, "3": 0, "4": 0})
    subset_arity: int | None = None

    @property
    def member(self) -> bool:
        return not self.violations

    @property
    def conditions(self) -> list[int]:
        return sorted({v.condition for v in self.violations})

    def to_dict(self) -> dict:
        return {"member": self.member, "violated": self.conditions, "checked": self.checked,
                "subset_arity": self.subset_arity, "violations": [v.to_dict() for v in self.violations]}


def check_B_membership(f: TheoryFunction, S: SentenceIndex, subset_arity: int | None = None,
                       oracle: ConsistencyOracle | None = None, first_only: bool = False) -> BReport:
    """Check the four conditions cutting out B.

    Condition (1) is checked on the whole true set when ``subset_arity`` is
    None, otherwise on each of its subsets of at most that many sentences.
    """
    if not f.is_total_on(S):
        raise ValueError("theory function must be total on the sentence index")
    oracle = oracle or ConsistencyOracle(S)
    report = BReport(subset_arity=subset_arity)

    def bad(v):
        report.violations.append(v)
        return first_only

    for phi, neg in S.negation_pairs():
        report.checked["2"] += 1
        if f(phi) == f(neg):
            if bad(BViolation(2, [to_text(phi), to_text(neg)], f"both {'true' if f(phi) else 'false'}")):
                return report
    for phi, parts in S.disjunctions():
        report.checked["3"] += 1
        if f(phi) != int(any(f(p) for p in parts)):
            if bad(BViolation(3, [to_text(phi)], "disjunction value differs from its disjuncts")):
                return report
    for phi, inst in S.existentials():
        report.checked["4"] += 1
        if f(phi) != int(any(f(i) for i in inst)):
            detail = "no Henkin witness" if f(phi) else "witnessed but false"
            if bad(BViolation(4, [to_text(phi)], detail)):
                return report

    true = [s for s in S.sentences if f(s)]
    if subset_arity is None:
        report.checked["1"] += 1
        if not oracle(true):
            core = oracle.minimal_core(true)
            bad(BViolation(1, [to_text(s) for s in core], "inconsistent true set (minimal core)"))
    else:
        for k in range(1, subset_arity + 1):
            for A in itertools.combinations(true, k):
                report.checked["1"] += 1
                if not oracle(A):
                    if bad(BViolation(1, [to_text(s) for s in A], f"inconsistent subset of size {k}")):
                        return report
    return report


# ------------------------------------------------------ G-delta witnesses
@dataclass(frozen=True)
class OpenSet:
    """Union of basic cylinders; each cylinder fixes finitely many coordinates."""
    cylinders: tuple[tuple[tuple[int, int], ...], ...]

    def coordinates(self) -> set[int]:
        return {i for cyl in self.cylinders for i, _ in cyl}

    def contains(self, mask: int) -> bool:
        return any(all((mask >> i) & 1 == b for i, b in cyl) for cyl in self.cylinders)

    def bitmap(self, k: int) -> np.ndarray:
        masks = np.arange(1 << k, dtype=np.int64)
        out = np.zeros(1 << k, dtype=bool)
        for cyl in self.cylinders:
            hit = np.ones(1 << k, dtype=bool)
            for i, b in cyl:
                hit &= ((masks >> i) & 1) == b
            out |= hit
        return out

    def to_records(self, S: SentenceIndex) -> list[list[list]]:
        return [[[to_text(S.sentences[i]), b] for i, b in cyl] for cyl in self.cylinders]


@dataclass
class WitnessFamily:
    condition: str
    description: str
    members: list[OpenSet]

    def to_dict(self, S: SentenceIndex) -> dict:
        return {"condition": self.condition, "description": self.description,
                "members": [m.to_records(S) for m in self.members]}


def inconsistent_subsets(S: SentenceIndex, arity: int, oracle: ConsistencyOracle | None = None) -> list[tuple]:
    oracle = oracle or ConsistencyOracle(S)
    out = []
    for k in range(1, arity + 1):
        for A in itertools.combinations(S.sentences, k):
            if not oracle(A):
                out.append(A)
    return out


def gdelta_witnesses(S: SentenceIndex, subset_arity: int = 3, oracle: ConsistencyOracle | None = None,
                     max_sentences: int = 24) -> list[WitnessFamily]:
    """The open-set families whose intersection is B (condition (1) truncated to ``subset_arity``)."""
    if len(S) > max_sentences:
        raise BudgetExceeded(f"{len(S)} sentences exceed the witness budget {max_sentences}")
    pos = S.position
    fams = []
    I = inconsistent_subsets(S, subset_arity, oracle)
    fams.append(WitnessFamily("1", "for each inconsistent subset A: some member of A is false",
                              [OpenSet(tuple(((pos[p], 0),) for p in A)) for A in I]))
    fams.append(WitnessFamily("2", "for each listed φ with ¬φ listed: f(φ)=0 iff f(¬φ)=1",
                              [OpenSet((((pos[p], 0), (pos[q], 1)), ((pos[p], 1), (pos[q], 0))))
                               for p, q in S.negation_pairs()]))
    up, down = [], []
    for d, parts in S.disjunctions():
        for p in parts:
            up.append(OpenSet((((pos[p], 0),), ((pos[d], 1),))))
        down.append(OpenSet((((pos[d], 0),),) + tuple(((pos[p], 1),) for p in parts)))
    fams.append(WitnessFamily("3a", "f(φ_i)=1 implies f(⋁φ)=1", up))
    fams.append(WitnessFamily("3b", "f(⋁φ)=0 or some f(φ_i)=1", down))
    up, down = [], []
    for e, inst in S.existentials():
        for i in inst:
            up.append(OpenSet((((pos[i], 0),), ((pos[e], 1),))))
        down.append(OpenSet((((pos[e], 0),),) + tuple(((pos[i], 1),) for i in inst)))
    fams.append(WitnessFamily("4a", "f(φ(c))=1 implies f(∃x φ)=1", up))
    fams.append(WitnessFamily("4b", "f(∃x φ)=0 or some f(φ(c))=1", down))
    return fams


def families_bitmap(fams: Sequence[WitnessFamily], k: int) -> np.ndarray:
    out = np.ones(1 << k, dtype=bool)
    for fam in fams:
        for m in fam.members:
            out &= m.bitmap(k)
    return out


def bruteforce_B(S: SentenceIndex, subset_arity: int = 3, oracle: ConsistencyOracle | None = None) -> np.ndarray:
    """Membership in B for every valuation of S, by direct condition checking."""
    oracle = oracle or ConsistencyOracle(S)
    k = len(S)
    out = np.zeros(1 << k, dtype=bool)
    for mask in range(1 << k):
        f = TheoryFunction.from_mask(S, mask)
        out[mask] = check_B_membership(f, S, subset_arity, oracle, first_only=True).member
    return out


@dataclass
class GdeltaReport:
    size: int
    subset_arity: int
    family_sizes: dict
    members_bruteforce: int
    members_families: int
    mismatches: list[int]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {"sentences": self.size, "subset_arity": self.subset_arity, "family_sizes": self.family_sizes,
                "members_bruteforce": self.members_bruteforce, "members_families": self.members_families,
                "mismatches": self.mismatches[:10], "passed": self.passed}


def gdelta_check(S: SentenceIndex, subset_arity: int = 3, max_sentences: int = 16) -> GdeltaReport:
    if len(S) > max_sentences:
        raise BudgetExceeded(f"{len(S)} sentences exceed the exhaustive budget {max_sentences}")
    oracle = ConsistencyOracle(S)
    fams = gdelta_witnesses(S, subset_arity, oracle, max_sentences)
    via_families = families_bitmap(fams, len(S))
    direct = bruteforce_B(S, subset_arity, oracle)
    diff = np.nonzero(via_families != direct)[0].tolist()
    return GdeltaReport(len(S), subset_arity, {f.condition: len(f.members) for f in fams},
                        int(direct.sum()), int(via_families.sum()), diff)


# ------------------------------------------------------------------- bases
@dataclass(frozen=True)
class BasicSet:
    """``{M : M |= φ(a)}`` for a formula and a parameter assignment."""
    formula: Formula
    params: tuple[tuple[str, int], ...]

    def contains(self, M: Structure) -> bool:
        return evaluate(M, self.formula, dict(self.params))

    def describe(self) -> str:
        ps = ",".join(f"{v}={a}" for v, a in self.params)
        return f"{to_text(self.formula)} [{ps}]"


BASIS_MODES = ("quantifier-free", "first-order", "fragment")


def _quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Exists, Forall)):
        return False
    if isinstance(phi, ATOMS):
        return True
    return all(_quantifier_free(c) for c in children(phi))


def basis_formulas(mode: str, vocab: Vocabulary, F: Fragment | None = None, max_depth: int = 1,
                   max_tuple: int = 1, variables: int = 2) -> list[Formula]:
    if mode not in BASIS_MODES:
        raise ValueError(f"unknown basis mode {mode!r}; known: {list(BASIS_MODES)}")
    if mode == "fragment":
        if F is None:
            raise ValueError("fragment mode needs a fragment")
        return list(F.members)
    G = fragment_closure((), variable_set(variables), vocab,
                         FragmentBudget(max_depth=max_depth, max_tuple=max_tuple))
    if mode == "quantifier-free":
        return [phi for phi in G.members if _quantifier_free(phi)]
    return list(G.members)


def basis(mode: str, vocab: Vocabulary, n: int, F: Fragment | None = None,
          max_sets: int | None = None, **kw) -> Iterator[BasicSet]:
    """Basic open sets of ``Mod_n(vocab)``: one per formula and parameter tuple."""
    count = 0
    for phi in basis_formulas(mode, vocab, F, **kw):
        fv = sorted_vars(free_variables(phi))
        for tup in itertools.product(range(n), repeat=len(fv)):
            count += 1
            if max_sets is not None and count > max_sets:
                raise BudgetExceeded(f"basis exceeds {max_sets} sets")
            yield BasicSet(phi, tuple(zip(fv, tup)))


def basis_size(formulas: Iterable[Formula], n: int) -> int:
    return sum(n ** len(free_variables(phi)) for phi in formulas)


# ------------------------------------------------------------- continuity
@dataclass
class ContinuityReport:
    structures: int
    sentences: int
    conditions_checked: int = 0
    basic_sets_checked: int = 0
    injective: bool = True
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.injective and not self.failures

    def to_dict(self) -> dict:
        return {"structures": self.structures, "sentences": self.sentences,
                "conditions_checked": self.conditions_checked, "basic_sets_checked": self.basic_sets_checked,
                "injective": self.injective, "passed": self.passed, "failures": self.failures[:10]}


def continuity_check(S: SentenceIndex, space: Sequence[Structure], max_coordinates: int = 2,
                     condition_sentences: int | None = None, basic_sets: Iterable[BasicSet] | None = None
                     ) -> ContinuityReport:
    """Both continuity directions of the encoding, checked extensionally over ``space``.

    Preimages: every condition fixing at most ``max_coordinates`` of the
    first ``condition_sentences`` sentences pulls back to the conjunction
    basic set of the sentences' source formulas.  Images: every basic set
    ``{M : M |= φ(a)}`` maps onto the condition ``f(φ(c_a)) = 1`` within the
    image.  The space is typically all structures of a size, or all
    expansions of class members.
    """
    space = list(space)
    report = ContinuityReport(len(space), len(S))
    codes = [encode(M, S) for M in space]
    masks = [f.mask(S) for f in codes]
    seen = {}
    for M, m in zip(space, masks):
        if m in seen:
            report.injective = False
            report.failures.append({"direction": "injective", "first": seen[m].to_dict(), "second": M.to_dict()})
            break
        seen[m] = M
    coords = list(range(len(S) if condition_sentences is None else min(len(S), condition_sentences)))
    encoded = np.array([[f(S.sentences[i]) for i in coords] for f in codes], dtype=bool).reshape(len(space), len(coords))
    source = np.zeros_like(encoded)
    for c, i in enumerate(coords):
        phi, params = S.sources[S.sentences[i]]
        for j, M in enumerate(space):
            source[j, c] = evaluate(M, phi, dict(params))

    everywhere = np.ones(len(space), dtype=bool)
    for k in range(0, max_coordinates + 1):
        for chosen in itertools.combinations(range(len(coords)), k):
            for bits in itertools.product((False, True), repeat=k):
                report.conditions_checked += 1
                pre = everywhere.copy()
                basic = everywhere.copy()
                for c, b in zip(chosen, bits):
                    pre &= encoded[:, c] == b
                    basic &= source[:, c] == b
                if not np.array_equal(pre, basic):
                    report.failures.append({"direction": "preimage", "condition":
                                            [[to_text(S.sentences[coords[c]]), int(b)] for c, b in zip(chosen, bits)]})

    everything = range(len(space))
    if basic_sets is None:
        basic_sets = [BasicSet(*S.sources[S.sentences[i]]) for i in coords]
    henkin_term = S.const
    for U in basic_sets:
        report.basic_sets_checked += 1
        members_ = {j for j in everything if U.contains(space[j])}
        sentence = instantiate(U.formula, {v: henkin_term(a) for v, a in U.params})
        if sentence not in S.position:
            report.failures.append({"direction": "image", "basic_set": U.describe(),
                                    "reason": "instance not in sentence index"})
            continue
        i = S.position[sentence]
        image = {j for j in everything if (masks[j] >> i) & 1}
        if members_ != image:
            report.failures.append({"direction": "image", "basic_set": U.describe()})
    return report


# ------------------------------------------------- class as an intersection
@dataclass
class IntersectionReport:
    size: int
    members: int
    model_reducts: int
    axioms_used: int
    mismatches: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {"size": self.size, "members": self.members, "model_reducts": self.model_reducts,
                "axioms_used": self.axioms_used, "passed": self.passed, "mismatches": self.mismatches[:10]}


def class_as_intersection(A: ToyAEC, T, n: int, axioms=None) -> IntersectionReport:
    """Reducts of the size-``n`` models of the axioms versus the class members of size ``n``.

    Also checks that each model is the expansion of its reduct.
    """
    from .presentation import expand, reduct_models
    axioms = list(T.axioms if axioms is None else axioms)
    member_set = set(members(A, n))
    reducts = set()
    report = IntersectionReport(n, len(member_set), 0, len(axioms))
    for R0, models in reduct_models(A, T, n, limit=2, axioms=axioms):
        if not models:
            continue
        reducts.add(R0)
        if R0 not in member_set:
            report.mismatches.append({"kind": "spurious model", "reduct": R0.to_dict(),
                                      "model": models[0].to_dict()})
            continue
        if len(models) > 1 or models[0] != expand(A, T, R0):
            report.mismatches.append({"kind": "model is not the expansion", "reduct": R0.to_dict()})
    for M in sorted(member_set - reducts, key=lambda s: s.key()):
        report.mismatches.append({"kind": "member without model", "structure": M.to_dict()})
    report.model_reducts = len(reducts)
    return report


def all_structures(vocab: Vocabulary, n: int, limit: int = 1 << 16) -> list[Structure]:
    return list(enumerate_structures(vocab, n, limit))


# ------------------------------------------------------ canonical corruptions
def corrupt_double_truth(f: TheoryFunction, S: SentenceIndex) -> tuple[TheoryFunction, Formula]:
    """Make some listed ``φ`` and ``¬φ`` both true."""
    for phi, neg in S.negation_pairs():
        if f(phi) and not f(neg):
            return f.with_values({neg: 1}), phi
        if f(neg) and not f(phi):
            return f.with_values({phi: 1}), neg
    raise ValueError("no negation pair to corrupt")


def corrupt_missing_witness(f: TheoryFunction, S: SentenceIndex,
                            target: Formula | None = None) -> tuple[TheoryFunction, Formula]:
    """Make an existential sentence true while every constant instance stays false.

    Negations of the touched sentences, when listed, are flipped along with
    them so that the negation condition is untouched.
    """
    candidates = [(phi, inst) for phi, inst in S.existentials() if target is None or phi == target]
    # an existential that is already false needs only its own value changed
    candidates.sort(key=lambda pair: f(pair[0]))
    for phi, inst in candidates:
        changes = {phi: 1}
        for i in inst:
            changes[i] = 0
            if Not(i) in S.position:
                changes[Not(i)] = 1
        if Not(phi) in S.position:
            changes[Not(phi)] = 0
        return f.with_values(changes), phi
    raise ValueError("no existential sentence with all instances listed")


def assert_true(f: TheoryFunction, sentences: Iterable[Formula]) -> TheoryFunction:
    return f.with_values({s: 1 for s in sentences})


def universal_sentences(S: SentenceIndex) -> list[Formula]:
    return [s for s in S.sentences if isinstance(s, Forall)]


def truncated_index(S: SentenceIndex, limit: int) -> SentenceIndex:
    """A sub-index of at most ``limit`` sentences that keeps every condition populated.

    Whole groups are taken in turn from three kinds: an existential with its
    instances, a disjunction with its disjuncts, and a negation pair.  Each
    group also brings the listed negations of its members.  A group is skipped
    when it would overflow the limit.
    """
    def closed(group):
        out = []
        for s in group:
            for t in (s, Not(s)):
                if t in S.position and t not in out:
                    out.append(t)
        return out

    def rank(group):
        # sentences without relation symbols are fixed by the Henkin reading; take them last
        return sum(1 for s in group if not any(isinstance(a, Rel) for a in subformulas(s)))

    kinds = [[closed([e] + list(inst)) for e, inst in S.existentials()],
             [closed([d] + list(parts)) for d, parts in S.disjunctions()],
             [closed([p]) for p, _ in S.negation_pairs()]]
    kinds = [sorted(groups, key=rank) for groups in kinds]
    keep: list[Formula] = []
    chosen = set()
    cursors = [0, 0, 0]
    progress = True
    while progress:
        progress = False
        for k, groups in enumerate(kinds):
            while cursors[k] < len(groups):
                group = [s for s in groups[cursors[k]] if s not in chosen]
                cursors[k] += 1
                if group and len(keep) + len(group) <= limit:
                    keep.extend(group)
                    chosen.update(group)
                    progress = True
                    break
    return S.restrict(keep)
