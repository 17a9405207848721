"""Finite vocabularies and structures on initial-segment universes.

A structure of size ``n`` has universe ``{0, ..., n-1}``.  Relation tables
are frozensets of tuples; function tables are flat tuples indexed by the
argument tuple in ``itertools.product`` order.  Constants are stored as
0-ary functions, so a constant's table has exactly one entry.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BudgetExceeded, NotIsomorphic, VocabularyMismatch

DEFAULT_ENUMERATION_LIMIT = 1 << 22


@dataclass(frozen=True)
class Vocabulary:
    relations: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple((str(n), int(a)) for n, a in self.relations))
        object.__setattr__(self, "functions", tuple((str(n), int(a)) for n, a in self.functions))
        object.__setattr__(self, "constants", tuple(str(c) for c in self.constants))
        names = [n for n, _ in self.relations] + [n for n, _ in self.functions] + list(self.constants)
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate symbol names: {dup}")
        for name in names:
            if not name or any(ch.isspace() or ch in "()" for ch in name) or name == "=":
                raise ValueError(f"illegal symbol name {name!r}")
        for name, arity in self.relations:
            if arity < 1:
                raise ValueError(f"relation {name} must have arity >= 1")
        for name, arity in self.functions:
            if arity < 0:
                raise ValueError(f"function {name} has negative arity")

    @property
    def function_symbols(self) -> tuple[tuple[str, int], ...]:
        """Functions followed by constants (as 0-ary functions)."""
        return self.functions + tuple((c, 0) for c in self.constants)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations) + tuple(n for n, _ in self.function_symbols)

    def arity(self, name: str) -> int:
        for n, a in self.relations + self.function_symbols:
            if n == name:
                return a
        raise KeyError(name)

    def kind(self, name: str) -> str:
        if any(n == name for n, _ in self.relations):
            return "relation"
        if any(n == name for n, _ in self.functions):
            return "function"
        if name in self.constants:
            return "constant"
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def extend(self, relations: Iterable[tuple[str, int]] = (), functions=(), constants=()) -> Vocabulary:
        return Vocabulary(self.relations + tuple(relations), self.functions + tuple(functions),
                          self.constants + tuple(constants))

    def restrict(self, names: Iterable[str]) -> Vocabulary:
        keep = set(names)
        return Vocabulary(tuple(r for r in self.relations if r[0] in keep),
                          tuple(f for f in self.functions if f[0] in keep),
                          tuple(c for c in self.constants if c in keep))

    def to_dict(self) -> dict:
        return {"relations": [list(r) for r in self.relations],
                "functions": [list(f) for f in self.functions],
                "constants": list(self.constants)}

    @classmethod
    def from_dict(cls, d: Mapping) -> Vocabulary:
        return cls(tuple(tuple(r) for r in d.get("relations", ())),
                   tuple(tuple(f) for f in d.get("functions", ())),
                   tuple(d.get("constants", ())))


def _index(args: Sequence[int], n: int) -> int:
    i = 0
    for a in args:
        i = i * n + a
    return i


class Structure:
    """An immutable finite structure over a vocabulary."""

    __slots__ = ("vocab", "size", "_rels", "_funs", "_hash", "_relmap", "_funmap")

    def __init__(self, vocab: Vocabulary, size: int, rels: Sequence[frozenset], funs: Sequence[tuple]):
        if size < 0:
            raise ValueError("size must be non-negative")
        if size == 0 and vocab.constants:
            raise ValueError("constants need a nonempty universe")
        if len(rels) != len(vocab.relations) or len(funs) != len(vocab.function_symbols):
            raise VocabularyMismatch("table count does not match vocabulary")
        rels = tuple(frozenset(map(tuple, r)) for r in rels)
        for (name, arity), table in zip(vocab.relations, rels):
            for t in table:
                if len(t) != arity or any(not 0 <= a < size for a in t):
                    raise ValueError(f"tuple {t} of {name} outside universe or wrong arity")
        funs = tuple(tuple(f) for f in funs)
        for (name, arity), table in zip(vocab.function_symbols, funs):
            if len(table) != size ** arity:
                raise ValueError(f"function table of {name} is not total")
            if any(not 0 <= v < size for v in table):
                raise ValueError(f"value of {name} outside universe")
        self.vocab = vocab
        self.size = size
        self._rels = rels
        self._funs = funs
        self._hash = hash((vocab, size, rels, funs))
        self._relmap = {n: r for (n, _), r in zip(vocab.relations, rels)}
        self._funmap = {n: f for (n, _), f in zip(vocab.function_symbols, funs)}

    @classmethod
    def make(cls, vocab: Vocabulary, size: int, relations: Mapping[str, Iterable] | None = None,
             functions: Mapping[str, Mapping | Sequence] | None = None,
             constants: Mapping[str, int] | None = None) -> Structure:
        """Build a structure; omitted relations are empty, omitted functions must not exist."""
        relations = relations or {}
        functions = dict(functions or {})
        for c, v in (constants or {}).items():
            functions[c] = (v,)
        unknown = (set(relations) | set(functions)) - set(vocab.symbols)
        if unknown:
            raise VocabularyMismatch(f"symbols not in vocabulary: {sorted(unknown)}")
        rels = [frozenset(tuple(t) for t in relations.get(n, ())) for n, _ in vocab.relations]
        funs = []
        for name, arity in vocab.function_symbols:
            if name not in functions:
                raise ValueError(f"missing interpretation for {name}")
            table = functions[name]
            if isinstance(table, Mapping):
                table = [table[args] for args in itertools.product(range(size), repeat=arity)]
            funs.append(tuple(table))
        return cls(vocab, size, rels, funs)

    # -- access -----------------------------------------------------------------
    def relation(self, name: str) -> frozenset:
        return self._relmap[name]

    def holds(self, name: str, args: Sequence[int]) -> bool:
        return tuple(args) in self._relmap[name]

    def function_table(self, name: str) -> tuple:
        return self._funmap[name]

    def apply(self, name: str, args: Sequence[int]) -> int:
        return self._funmap[name][_index(args, self.size)]

    def constant(self, name: str) -> int:
        return self._funmap[name][0]

    @property
    def universe(self) -> range:
        return range(self.size)

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (self._hash == other._hash and self.vocab == other.vocab and self.size == other.size
                and self._rels == other._rels and self._funs == other._funs)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Structure({self.to_text()})"

    # -- transformations --------------------------------------------------------
    def key(self) -> tuple:
        """Total-order key used for canonical minimisation."""
        return (self.size, tuple(tuple(sorted(r)) for r in self._rels), self._funs)

    def permute(self, perm: Sequence[int]) -> Structure:
        """Image of this structure under the bijection ``i -> perm[i]``."""
        n = self.size
        rels = [frozenset(tuple(perm[a] for a in t) for t in r) for r in self._rels]
        funs = []
        for (name, arity), table in zip(self.vocab.function_symbols, self._funs):
            new = [0] * len(table)
            for idx, args in enumerate(itertools.product(range(n), repeat=arity)):
                new[_index([perm[a] for a in args], n)] = perm[table[idx]]
            funs.append(tuple(new))
        return Structure(self.vocab, n, rels, funs)

    def is_closed(self, subset: Iterable[int]) -> bool:
        """Whether ``subset`` carries a substructure (closed under functions, holds constants)."""
        sub = set(subset)
        for name, arity in self.vocab.function_symbols:
            if arity == 0:
                if self.constant(name) not in sub:
                    return False
                continue
            for args in itertools.product(sorted(sub), repeat=arity):
                if self.apply(name, args) not in sub:
                    return False
        return True

    def restrict(self, subset: Iterable[int]) -> tuple[Structure, tuple[int, ...]]:
        """Induced substructure on ``subset`` relabelled in increasing order.

        Returns the substructure and the embedding (tuple of original elements).
        """
        elems = tuple(sorted(set(subset)))
        if not self.is_closed(elems):
            raise ValueError(f"subset {elems} is not closed under the functions")
        pos = {e: i for i, e in enumerate(elems)}
        rels = [frozenset(tuple(pos[a] for a in t) for t in r if all(a in pos for a in t))
                for r in self._rels]
        funs = [tuple(pos[self.apply(name, args)] for args in itertools.product(elems, repeat=arity))
                for name, arity in self.vocab.function_symbols]
        return Structure(self.vocab, len(elems), rels, funs), elems

    def reduct(self, vocab: Vocabulary) -> Structure:
        rels = [self._relmap[n] for n, _ in vocab.relations]
        funs = [self._funmap[n] for n, _ in vocab.function_symbols]
        return Structure(vocab, self.size, rels, funs)

    def expand(self, vocab: Vocabulary, relations: Mapping[str, Iterable]) -> Structure:
        """Expansion to a larger vocabulary by new relation tables."""
        rels = [self._relmap[n] if n in self._relmap else frozenset(map(tuple, relations.get(n, ())))
                for n, _ in vocab.relations]
        funs = [self._funmap[n] for n, _ in vocab.function_symbols]
        return Structure(vocab, self.size, rels, funs)

    # -- serialisation ----------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vocabulary": self.vocab.to_dict(),
            "size": self.size,
            "relations": {n: sorted(list(t) for t in r) for (n, _), r in zip(self.vocab.relations, self._rels)},
            "functions": {n: [list(args) + [v] for args, v in
                              zip(itertools.product(range(self.size), repeat=a), table)]
                          for (n, a), table in zip(self.vocab.functions, self._funs)},
            "constants": {c: self.constant(c) for c in self.vocab.constants},
        }

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: Mapping) -> Structure:
        vocab = Vocabulary.from_dict(d["vocabulary"])
        n = d["size"]
        funs = {}
        for name, arity in vocab.functions:
            funs[name] = {tuple(row[:-1]): row[-1] for row in d["functions"][name]}
        return cls.make(vocab, n, {k: [tuple(t) for t in v] for k, v in d["relations"].items()},
                        funs, d.get("constants", {}))

    @classmethod
    def from_text(cls, text: str) -> Structure:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Isomorphism:
    source: Structure
    target: Structure
    mapping: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    def inverse(self) -> Isomorphism:
        inv = [0] * len(self.mapping)
        for i, v in enumerate(self.mapping):
            inv[v] = i
        return Isomorphism(self.target, self.source, tuple(inv))

    def then(self, other: Isomorphism) -> Isomorphism:
        """``other ∘ self``."""
        return Isomorphism(self.source, other.target, tuple(other.mapping[v] for v in self.mapping))


def is_isomorphism(f: Sequence[int] | Mapping[int, int], M: Structure, N: Structure) -> bool:
    if M.vocab != N.vocab:
        raise VocabularyMismatch("structures have different vocabularies")
    if M.size != N.size:
        return False
    f = tuple(f[i] for i in range(M.size))
    if sorted(f) != list(range(N.size)):
        return False
    return M.permute(f) == N


def find_isomorphism(M: Structure, N: Structure) -> tuple[int, ...] | None:
    """Exhaustive search over all bijections; the oracle for canonical forms."""
    if M.vocab != N.vocab:
        raise VocabularyMismatch("structures have different vocabularies")
    if M.size != N.size:
        return None
    for perm in itertools.permutations(range(M.size)):
        if M.permute(perm) == N:
            return perm
    return None


@lru_cache(maxsize=1 << 16)
def canonical_form(M: Structure) -> tuple[Structure, Isomorphism]:
    """Least permuted copy of ``M`` under ``Structure.key``.

    Among the minimising permutations the lexicographically first one is
    taken, so the returned isomorphism is a fixed choice per structure.
    """
    best_key = None
    best = None
    for perm in itertools.permutations(range(M.size)):
        image = M.permute(perm)
        k = image.key()
        if best_key is None or k < best_key:
            best_key, best = k, (image, perm)
    image, perm = best
    return image, Isomorphism(M, image, tuple(perm))


def is_canonical(M: Structure) -> bool:
    return canonical_form(M)[0] == M


def coherent_iso(M: Structure, N: Structure) -> Isomorphism:
    """The fixed isomorphism ``f_{M,N}`` routed through the canonical representative."""
    cm, fm = canonical_form(M)
    cn, fn = canonical_form(N)
    if cm != cn:
        raise NotIsomorphic("structures are not isomorphic")
    return fm.then(Isomorphism(cn, N, fn.inverse().mapping))


def automorphisms(M: Structure) -> list[tuple[int, ...]]:
    return [p for p in itertools.permutations(range(M.size)) if M.permute(p) == M]


def count_structures(vocab: Vocabulary, size: int) -> int:
    if size == 0 and vocab.constants:
        return 0
    total = 1
    for _, arity in vocab.relations:
        total *= 2 ** (size ** arity)
    for _, arity in vocab.function_symbols:
        total *= size ** (size ** arity)
    return total


def enumerate_structures(vocab: Vocabulary, size: int,
                         limit: int = DEFAULT_ENUMERATION_LIMIT) -> Iterator[Structure]:
    """Every structure on ``{0..size-1}`` exactly once, in a fixed order."""
    total = count_structures(vocab, size)
    if total > limit:
        raise BudgetExceeded(f"{total} structures of size {size} exceed the enumeration limit {limit}")
    if total == 0:
        return
    rel_spaces = [list(itertools.product(range(size), repeat=a)) for _, a in vocab.relations]
    rel_choices = [range(1 << len(space)) for space in rel_spaces]
    fun_choices = [list(itertools.product(range(size), repeat=size ** a)) for _, a in vocab.function_symbols]
    for masks in itertools.product(*rel_choices):
        rels = [frozenset(t for bit, t in enumerate(space) if mask >> bit & 1)
                for mask, space in zip(masks, rel_spaces)]
        for funs in itertools.product(*fun_choices):
            yield Structure(vocab, size, rels, funs)
