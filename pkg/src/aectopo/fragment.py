"""Budget-bounded fragment closure and its audit.

A fragment over a variable set V is closed under: all atomic formulas (1),
subformulas (2), substitution of terms for free variables (3), negation (4),
existential quantification over tuples from V (5), conjunction of members
(6), and a bound on the number of free variables (7).  The infinite closure
is truncated by a budget: rule results are members only when they fit it.
Seed formulas and all their subformulas are always members.

Disjunctions are kept as syntax of their own.  For every member ``(or F)``
the fragment also holds ``(not (and {(not φ) : φ in F}))``, the form rule (6)
produces, so both spellings are available to sentence indexes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, VariablesExhausted
from .formulas import (And, App, Const, Eq, Exists, Formula, Not, Or, Rel, Term, Var,
                       all_variables, depth, free_variables, max_quantifier_length, max_term_depth,
                       max_width, sorted_vars, subformulas, substitute, to_text)
from .structures import Vocabulary


@dataclass(frozen=True)
class FragmentBudget:
    max_depth: int = 1
    max_width: int = 1
    max_count: int = 200_000
    max_free: int | None = None
    max_tuple: int = 1
    max_term_depth: int = 1

    def __post_init__(self):
        for name in ("max_width", "max_count", "max_tuple"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("max_depth", "max_term_depth"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.max_free is not None and self.max_free < 0:
            raise ValueError("max_free must be non-negative")


def variable_set(size: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(size))


def terms(vocab: Vocabulary, variables: Sequence[str], constants: Sequence[str] = (),
          max_depth: int = 1) -> list[Term]:
    """All terms over ``variables`` and constants with nesting depth at most ``max_depth``."""
    level = [Var(v) for v in variables] + [Const(c) for c in list(vocab.constants) + list(constants)]
    out = list(level)
    seen = set(out)
    for _ in range(max_depth):
        new = []
        for name, arity in vocab.functions:
            for args in itertools.product(out, repeat=arity):
                t = App(name, tuple(args))
                if t not in seen:
                    seen.add(t)
                    new.append(t)
        if not new:
            break
        out.extend(new)
    return out


def atomic_formulas(vocab: Vocabulary, variables: Sequence[str], constants: Sequence[str] = (),
                    max_term_depth: int = 1) -> list[Formula]:
    """Rule (1): every relation atom and equation over the available terms."""
    ts = terms(vocab, variables, constants, max_term_depth)
    out = []
    for name, arity in vocab.relations:
        for args in itertools.product(ts, repeat=arity):
            out.append(Rel(name, tuple(args)))
    for a, b in itertools.product(ts, repeat=2):
        out.append(Eq(a, b))
    return out


def dual(phi: Or) -> Formula:
    """``(not (and (not φ1) ...))`` for ``(or φ1 ...)``."""
    return Not(And(tuple(Not(c) for c in phi.children)))


def order_key(phi: Formula) -> tuple:
    return (depth(phi), to_text(phi))


@dataclass
class Fragment:
    variables: tuple[str, ...]
    vocab: Vocabulary
    constants: tuple[str, ...]
    budget: FragmentBudget
    seed: tuple[Formula, ...]
    members: tuple[Formula, ...]
    _set: frozenset = field(default=frozenset(), repr=False)

    def __post_init__(self):
        self._set = frozenset(self.members)

    def __contains__(self, phi) -> bool:
        return phi in self._set

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.members)

    @property
    def max_free(self) -> int:
        return self.budget.max_free if self.budget.max_free is not None else len(self.variables)

    def fits(self, phi: Formula) -> bool:
        return _fits(phi, self.variables, self.budget, self.max_free)

    def terms(self) -> list[Term]:
        return terms(self.vocab, self.variables, self.constants, self.budget.max_term_depth)


def _fits(phi: Formula, variables, budget: FragmentBudget, max_free: int) -> bool:
    if depth(phi) > budget.max_depth:
        return False
    if max_width(phi) > budget.max_width:
        return False
    if max_quantifier_length(phi) > budget.max_tuple:
        return False
    if max_term_depth(phi) > budget.max_term_depth:
        return False
    if len(free_variables(phi)) > max_free:
        return False
    return all_variables(phi) <= set(variables)


def quantifier_tuples(variables: Sequence[str], max_tuple: int) -> list[tuple[str, ...]]:
    out = []
    for k in range(1, max_tuple + 1):
        out.extend(itertools.permutations(variables, k))
    return out


def rule_results(phi: Formula, F: Fragment, tuples=None, ts=None) -> Iterator[tuple[str, Formula]]:
    """Rule (2)-(5) applications to one member, as ``(rule, result)`` pairs.

    Rule (6) depends on several members and is handled by the caller.
    """
    for sub in subformulas(phi):
        if sub is not phi:
            yield "subformula", sub
    ts = F.terms() if ts is None else ts
    for v in sorted_vars(free_variables(phi)):
        for t in ts:
            if isinstance(t, Var) and t.name == v:
                continue
            try:
                yield "substitution", substitute(phi, v, t, F.variables)
            except VariablesExhausted:
                continue
    yield "negation", Not(phi)
    for tup in (quantifier_tuples(F.variables, F.budget.max_tuple) if tuples is None else tuples):
        yield "exists", Exists(tup, phi)
    if isinstance(phi, Or):
        yield "dual", dual(phi)


def fragment_closure(seed: Iterable[Formula], variables: Sequence[str], vocab: Vocabulary,
                     budget: FragmentBudget | None = None, constants: Sequence[str] = ()) -> Fragment:
    """Least set containing ``seed`` closed under the budgeted rules.

    Members are ordered by (depth, text).  Raises ``BudgetExceeded`` when
    the member count passes ``budget.max_count``.
    """
    budget = budget or FragmentBudget()
    variables = tuple(variables)
    seed = tuple(seed)
    for phi in seed:
        stray = all_variables(phi) - set(variables)
        if stray:
            raise ValueError(f"seed formula uses variables outside V: {sorted_vars(stray)}")
    F = Fragment(variables, vocab, tuple(constants), budget, seed, ())
    max_free = F.max_free
    members: set[Formula] = set()
    order: list[Formula] = []
    queue: list[Formula] = []

    def add(phi, forced=False):
        if phi in members:
            return
        if not forced and not _fits(phi, variables, budget, max_free):
            return
        if len(members) >= budget.max_count:
            raise BudgetExceeded(f"fragment exceeds {budget.max_count} members")
        members.add(phi)
        order.append(phi)
        queue.append(phi)

    seeded = set()
    for phi in seed:
        for sub in subformulas(phi):
            seeded.add(sub)
    for sub in sorted(seeded, key=order_key):
        add(sub, forced=True)
    for atom in atomic_formulas(vocab, variables, constants, budget.max_term_depth):
        add(atom)

    tuples = quantifier_tuples(variables, budget.max_tuple)
    ts = F.terms()
    while queue:
        phi = queue.pop()
        for rule, result in rule_results(phi, F, tuples, ts):
            add(result, forced=rule in ("subformula", "dual"))
        if budget.max_width >= 1 and depth(phi) + 1 <= budget.max_depth:
            for family in _families_with(phi, order, budget):
                add(And(family))

    members_sorted = tuple(sorted(order, key=order_key))
    return Fragment(variables, vocab, tuple(constants), budget, seed, members_sorted)


def _families_with(phi: Formula, order: Sequence[Formula], budget: FragmentBudget):
    """Rule (6) families containing ``phi``: distinct members in (depth, text) order."""
    yield (phi,)
    if budget.max_width < 2:
        return
    others = [m for m in order if m != phi and depth(m) + 1 <= budget.max_depth]
    for k in range(1, budget.max_width):
        for rest in itertools.combinations(others, k):
            yield tuple(sorted((phi,) + rest, key=order_key))


@dataclass(frozen=True)
class Violation:
    rule: str
    source: str
    result: str


def audit_closure(F: Fragment) -> list[Violation]:
    """Every rule application whose result fits the budget must be a member.

    Subformulas and duals must be members unconditionally.
    """
    out = []
    tuples = quantifier_tuples(F.variables, F.budget.max_tuple)
    ts = F.terms()
    for atom in atomic_formulas(F.vocab, F.variables, F.constants, F.budget.max_term_depth):
        if F.fits(atom) and atom not in F:
            out.append(Violation("atomic", "", to_text(atom)))
    for phi in F.members:
        for rule, result in rule_results(phi, F, tuples, ts):
            required = rule in ("subformula", "dual") or F.fits(result)
            if required and result not in F:
                out.append(Violation(rule, to_text(phi), to_text(result)))
        if F.budget.max_width >= 1:
            families = [(phi,)]
            if F.budget.max_width >= 2:
                families = [f for f in _families_with(phi, F.members, F.budget)]
            for family in families:
                result = And(family)
                if F.fits(result) and result not in F:
                    out.append(Violation("conjunction", to_text(phi), to_text(result)))
    for phi in F.seed:
        if phi not in F:
            out.append(Violation("seed", "", to_text(phi)))
    return out


def is_idempotent(F: Fragment) -> bool:
    again = fragment_closure(F.members, F.variables, F.vocab, F.budget, F.constants)
    return again.members == F.members


def sentences(F: Fragment) -> list[Formula]:
    return [phi for phi in F.members if not free_variables(phi)]

