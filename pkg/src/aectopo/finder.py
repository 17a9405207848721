"""Finite model finding: ground sentences over a fixed universe, solve by DPLL.

Relation atoms become propositional variables.  Function and constant
symbols must be interpreted by a fixed structure; callers enumerate their
tables explicitly (they are tiny at desk scale).  Equalities are evaluated at
grounding time, so every clause mentions relation atoms only.

The search is complete, so "no model" answers are exhaustive over the whole
interpretation space of the free relations.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EvaluationError
from .formulas import (And, App, Const, Eq, Exists, Forall, Formula, Not, Or, Rel, Var,
                       constants_of, symbols_of)
from .structures import Structure, Vocabulary, enumerate_structures

TRUE = True
FALSE = False


class Solver:
    """DPLL with two watched literals and chronological backtracking."""

    def __init__(self, nvars: int, clauses: Iterable[Sequence[int]] = ()):
        self.nvars = nvars
        self.clauses: list[list[int]] = []
        self.units: list[int] = []
        self.empty = False
        self.watches: dict[int, list[int]] = {}
        for c in clauses:
            self.add_clause(c)

    def add_clause(self, clause: Sequence[int]):
        clause = list(dict.fromkeys(clause))
        if any(-l in clause for l in clause):
            return
        for l in clause:
            if abs(l) > self.nvars:
                self.nvars = abs(l)
        if not clause:
            self.empty = True
        elif len(clause) == 1:
            self.units.append(clause[0])
        else:
            idx = len(self.clauses)
            self.clauses.append(clause)
            self.watches.setdefault(clause[0], []).append(idx)
            self.watches.setdefault(clause[1], []).append(idx)

    def solve(self, assumptions: Sequence[int] = ()) -> list[int] | None:
        """A satisfying assignment as ``value[var] in {1, -1}`` (index 0 unused), or None."""
        if self.empty:
            return None
        n = self.nvars
        value = [0] * (n + 1)
        trail: list[int] = []
        clauses = self.clauses
        watches = self.watches

        def enqueue(lit):
            v = value[abs(lit)]
            if v:
                return (v > 0) == (lit > 0)
            value[abs(lit)] = 1 if lit > 0 else -1
            trail.append(lit)
            return True

        for lit in list(self.units) + list(assumptions):
            if not enqueue(lit):
                return None
        qhead = 0
        decisions: list[tuple[int, int, bool]] = []
        next_var = 1

        while True:
            conflict = False
            while qhead < len(trail):
                lit = trail[qhead]
                qhead += 1
                false_lit = -lit
                wl = watches.get(false_lit)
                if not wl:
                    continue
                i = 0
                while i < len(wl):
                    ci = wl[i]
                    c = clauses[ci]
                    if c[0] == false_lit:
                        c[0], c[1] = c[1], c[0]
                    other = c[0]
                    ov = value[abs(other)]
                    if ov and (ov > 0) == (other > 0):
                        i += 1
                        continue
                    moved = False
                    for k in range(2, len(c)):
                        l = c[k]
                        lv = value[abs(l)]
                        if not lv or (lv > 0) == (l > 0):
                            c[1], c[k] = l, c[1]
                            watches.setdefault(l, []).append(ci)
                            wl[i] = wl[-1]
                            wl.pop()
                            moved = True
                            break
                    if moved:
                        continue
                    if ov:
                        conflict = True
                        break
                    enqueue(other)
                    i += 1
                if conflict:
                    break
            if conflict:
                while decisions:
                    pos, lit, flipped = decisions.pop()
                    for l in trail[pos:]:
                        value[abs(l)] = 0
                    del trail[pos:]
                    qhead = pos
                    next_var = min(next_var, abs(lit))
                    if not flipped:
                        decisions.append((pos, -lit, True))
                        enqueue(-lit)
                        break
                else:
                    return None
                continue
            while next_var <= n and value[next_var]:
                next_var += 1
            if next_var > n:
                return value
            decisions.append((len(trail), -next_var, False))
            enqueue(-next_var)


class Grounding:
    """Propositional encoding of sentences over the universe ``{0..size-1}``.

    ``fixed`` interprets every function and constant symbol and may fix some
    relations; relations of ``vocab`` absent from ``fixed`` are free.
    ``henkin`` interprets extra constant names (the ``c_i`` of a sentence index).
    """

    def __init__(self, vocab: Vocabulary, size: int, fixed: Structure | None = None,
                 henkin: Mapping[str, int] | None = None):
        self.vocab = vocab
        self.size = size
        self.fixed = fixed
        self.henkin = dict(henkin or {})
        fixed_names = set(fixed.vocab.symbols) if fixed is not None else set()
        missing = [n for n, _ in vocab.function_symbols if n not in fixed_names]
        if missing:
            raise ValueError(f"functions/constants must be fixed for grounding: {missing}")
        self.free = [(n, a) for n, a in vocab.relations if n not in fixed_names]
        self._free_names = {n for n, _ in self.free}
        self.atoms: dict[tuple, int] = {}
        self.nvars = 0
        self.clauses: list[list[int]] = []
        for name, arity in self.free:
            for args in itertools.product(range(size), repeat=arity):
                self.atom(name, args)
        self.natoms = self.nvars

    def atom(self, name: str, args: tuple) -> int:
        key = (name, tuple(args))
        v = self.atoms.get(key)
        if v is None:
            self.nvars += 1
            v = self.atoms[key] = self.nvars
        return v

    def _term(self, t, env):
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise EvaluationError(f"unbound variable {t.name}") from None
        if isinstance(t, Const):
            if t.name in self.henkin:
                return self.henkin[t.name]
            if self.fixed is not None and t.name in self.fixed.vocab.constants:
                return self.fixed.constant(t.name)
            raise EvaluationError(f"unknown constant {t.name}")
        return self.fixed.apply(t.func, [self._term(a, env) for a in t.args])

    def ground(self, phi: Formula, env: dict | None = None, positive: bool = True):
        """Negation-normal propositional form of ``phi`` (True, False, literal, or node)."""
        return self._g(phi, dict(env or {}), positive)

    def _g(self, phi, env, pos):
        if isinstance(phi, Rel):
            args = tuple(self._term(a, env) for a in phi.args)
            if phi.name in self._free_names:
                v = self.atoms[(phi.name, args)]
                return v if pos else -v
            if self.fixed is None or phi.name not in self.fixed.vocab:
                raise EvaluationError(f"unknown relation {phi.name}")
            return self.fixed.holds(phi.name, args) == pos
        if isinstance(phi, Eq):
            return (self._term(phi.left, env) == self._term(phi.right, env)) == pos
        if isinstance(phi, Not):
            return self._g(phi.child, env, not pos)
        if isinstance(phi, (And, Or)):
            conj = isinstance(phi, And) == pos
            return _combine(conj, (self._g(c, env, pos) for c in phi.children))
        conj = isinstance(phi, Forall) == pos
        saved = {v: env[v] for v in phi.vars if v in env}
        parts = []
        for values in itertools.product(range(self.size), repeat=len(phi.vars)):
            env.update(zip(phi.vars, values))
            parts.append(self._g(phi.child, env, pos))
        for v in phi.vars:
            env.pop(v, None)
        env.update(saved)
        return _combine(conj, parts)

    def add(self, phi: Formula, env: dict | None = None):
        self.add_node(self.ground(phi, env))

    def add_node(self, node):
        for clause in self._cnf(node):
            self.clauses.append(clause)

    def _cnf(self, node) -> list[list[int]]:
        if node is True:
            return []
        if node is False:
            return [[]]
        if isinstance(node, int):
            return [[node]]
        kind, parts = node
        if kind == "and":
            out = []
            for p in parts:
                out.extend(self._cnf(p))
            return out
        clause = []
        for p in parts:
            if isinstance(p, int):
                clause.append(p)
                continue
            sub = self._cnf(p)
            if len(sub) == 1:
                clause.extend(sub[0])
            else:
                # one-directional definition: sound for satisfiability and for
                # enumeration projected onto the atom variables
                self.nvars += 1
                aux = self.nvars
                for c in sub:
                    self.clauses.append([-aux] + c)
                clause.append(aux)
        return [clause]

    def solver(self) -> Solver:
        return Solver(self.nvars, self.clauses)

    def assumptions_for(self, structure: Structure) -> list[int]:
        """Unit literals fixing every free atom that ``structure`` interprets."""
        out = []
        for name, _ in self.free:
            if name not in structure.vocab:
                continue
            table = structure.relation(name)
            for (n, args), v in self.atoms.items():
                if n == name:
                    out.append(v if args in table else -v)
        return out

    def decode(self, value: Sequence[int]) -> Structure:
        rels = {name: [] for name, _ in self.free}
        for (name, args), v in self.atoms.items():
            if value[v] > 0:
                rels[name].append(args)
        if self.fixed is None:
            base = Structure(Vocabulary(), self.size, [], [])
        else:
            base = self.fixed
        full = {}
        for name, _ in self.vocab.relations:
            full[name] = rels[name] if name in rels else base.relation(name)
        funs = {name: base.function_table(name) for name, _ in self.vocab.function_symbols}
        return Structure(self.vocab, self.size, [frozenset(full[n]) for n, _ in self.vocab.relations],
                         [funs[n] for n, _ in self.vocab.function_symbols])

    def models(self, assumptions: Sequence[int] = (), limit: int | None = None) -> Iterator[Structure]:
        """Distinct models (differing on some free atom), up to ``limit``."""
        solver = self.solver()
        found = 0
        while limit is None or found < limit:
            value = solver.solve(assumptions)
            if value is None:
                return
            found += 1
            yield self.decode(value)
            solver.add_clause([-v if value[v] > 0 else v for v in range(1, self.natoms + 1)])


def _combine(conj: bool, parts) -> object:
    """Simplifying n-ary and/or over grounded parts."""
    absorbing = not conj
    kind = "and" if conj else "or"
    out = []
    for p in parts:
        if p is absorbing:
            return absorbing
        if p is (not absorbing):
            continue
        if isinstance(p, tuple) and p[0] == kind:
            out.extend(p[1])
        else:
            out.append(p)
    if not out:
        return not absorbing
    if len(out) == 1:
        return out[0]
    lits = {p for p in out if isinstance(p, int)}
    if any(-l in lits for l in lits):
        return absorbing
    return (kind, tuple(out))


def function_interpretations(vocab: Vocabulary, size: int, names: Iterable[str] | None = None,
                             limit: int = 1 << 16) -> Iterator[Structure]:
    """All interpretations of the function/constant symbols of ``vocab`` (restricted to ``names``)."""
    wanted = set(names) if names is not None else None
    sub = Vocabulary((), tuple(f for f in vocab.functions if wanted is None or f[0] in wanted),
                     tuple(c for c in vocab.constants if wanted is None or c in wanted))
    yield from enumerate_structures(sub, size, limit=limit)


def find_model(sentences: Sequence[Formula], vocab: Vocabulary, size: int,
               henkin: Mapping[str, int] | None = None) -> Structure | None:
    """Some structure of the given size satisfying every sentence, or None.

    Function and constant symbols are enumerated explicitly (only those that
    occur; the rest get an arbitrary fixed table), relations are solved for.
    """
    if size == 0 and vocab.constants:
        return None
    used = set()
    for s in sentences:
        used |= symbols_of(s) | constants_of(s)
    occurring = [n for n, _ in vocab.function_symbols if n in used]
    default = {n: (0,) * (size ** a) for n, a in vocab.function_symbols if n not in used}
    fvocab = Vocabulary((), vocab.functions, vocab.constants)
    for interp in function_interpretations(vocab, size, occurring):
        funs = [interp.function_table(n) if n in occurring else default[n] for n, _ in fvocab.function_symbols]
        if size == 0 and any(default.values()):
            continue
        fixed = Structure(fvocab, size, [], funs)
        g = Grounding(vocab, size, fixed=fixed, henkin=henkin)
        for s in sentences:
            g.add(s)
        for model in g.models(limit=1):
            return model
    return None


def satisfiable(sentences: Sequence[Formula], vocab: Vocabulary, size: int,
                henkin: Mapping[str, int] | None = None) -> bool:
    return find_model(sentences, vocab, size, henkin) is not None
