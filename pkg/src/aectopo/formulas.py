"""Formula AST with tuple quantifiers and finite conjunction/disjunction families.

Variables are the symbols ``x0, x1, ...``; every other bare symbol in a term
position is a constant.  Formulas print to (and parse from) a parenthesised
prefix syntax::

    (rel E x0 x1)   (= t1 t2)   (not φ)   (and φ1 φ2 ...)   (or φ1 ...)
    (exists (x1 x2) φ)   (forall (x0) φ)

and a function application term is written ``(f t1 ...)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import EvaluationError, VariablesExhausted
from .structures import Structure

VAR_RE = re.compile(r"^x(\d+)$")


def var_index(name: str) -> int:
    return int(VAR_RE.match(name).group(1))


def _hashed(cls):
    """Cache the structural hash; formulas are hashed constantly in sentence indexes."""
    names = tuple(f for f in cls.__annotations__ if f != "_h")
    tag = cls.__name__

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((tag,) + tuple(getattr(self, f) for f in names)))

    cls.__post_init__ = __post_init__
    cls.__hash__ = lambda self: self._h
    return cls


# --------------------------------------------------------------------- terms
@dataclass(frozen=True, eq=True)
@_hashed
class Var:
    name: str
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=True)
@_hashed
class Const:
    name: str
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=True)
@_hashed
class App:
    func: str
    args: tuple
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __str__(self):
        return "(" + " ".join([self.func] + [str(a) for a in self.args]) + ")"


Term = Union[Var, Const, App]


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        out = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def term_depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max((term_depth(a) for a in t.args), default=0)
    return 0


# ------------------------------------------------------------------ formulas
class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"<{to_text(self)}>"


@dataclass(frozen=True, eq=True, repr=False)
@_hashed
class Rel(Formula):
    name: str
    args: tuple
    _h: int = field(default=0, init=False, compare=False)


@dataclass(frozen=True, eq=True, repr=False)
@_hashed
class Eq(Formula):
    left: Term
    right: Term
    _h: int = field(default=0, init=False, compare=False)


@dataclass(frozen=True, eq=True, repr=False)
@_hashed
class Not(Formula):
    child: Formula
    _h: int = field(default=0, init=False, compare=False)


@dataclass(frozen=True, eq=True, repr=False)
@_hashed
class And(Formula):
    children: tuple
    _h: int = field(default=0, init=False, compare=False)


@dataclass(frozen=True, eq=True, repr=False)
@_hashed
class Or(Formula):
    children: tuple
    _h: int = field(default=0, init=False, compare=False)


@dataclass(frozen=True, eq=True, repr=False)
@_hashed
class Exists(Formula):
    vars: tuple
    child: Formula
    _h: int = field(default=0, init=False, compare=False)


@dataclass(frozen=True, eq=True, repr=False)
@_hashed
class Forall(Formula):
    vars: tuple
    child: Formula
    _h: int = field(default=0, init=False, compare=False)


ATOMS = (Rel, Eq)
QUANTIFIERS = (Exists, Forall)
FAMILIES = (And, Or)


def rel(name: str, *args) -> Rel:
    return Rel(name, tuple(_term(a) for a in args))


def eq(a, b) -> Eq:
    return Eq(_term(a), _term(b))


def conj(*children) -> And:
    if not children:
        raise ValueError("conjunction families are nonempty")
    return And(tuple(children))


def disj(*children) -> Or:
    if not children:
        raise ValueError("disjunction families are nonempty")
    return Or(tuple(children))


def exists(variables, child) -> Exists:
    return Exists(_vartuple(variables), child)


def forall(variables, child) -> Forall:
    return Forall(_vartuple(variables), child)


def implies(a: Formula, b: Formula) -> Or:
    return Or((Not(a), b))


def _vartuple(variables) -> tuple:
    if isinstance(variables, str):
        variables = (variables,)
    vs = tuple(v.name if isinstance(v, Var) else v for v in variables)
    if not vs or len(set(vs)) != len(vs) or any(not VAR_RE.match(v) for v in vs):
        raise ValueError(f"bad quantifier tuple {vs}")
    return vs


def _term(t) -> Term:
    if isinstance(t, (Var, Const, App)):
        return t
    if isinstance(t, str):
        return Var(t) if VAR_RE.match(t) else Const(t)
    raise TypeError(f"not a term: {t!r}")


def children(phi: Formula) -> tuple:
    if isinstance(phi, (Not, Exists, Forall)):
        return (phi.child,)
    if isinstance(phi, FAMILIES):
        return phi.children
    return ()


@lru_cache(maxsize=1 << 20)
def depth(phi: Formula) -> int:
    if isinstance(phi, ATOMS):
        return 0
    return 1 + max(depth(c) for c in children(phi))


def max_width(phi: Formula) -> int:
    own = len(phi.children) if isinstance(phi, FAMILIES) else 0
    return max([own] + [max_width(c) for c in children(phi)])


def max_quantifier_length(phi: Formula) -> int:
    own = len(phi.vars) if isinstance(phi, QUANTIFIERS) else 0
    return max([own] + [max_quantifier_length(c) for c in children(phi)])


def atom_terms(phi: Formula) -> tuple:
    if isinstance(phi, Rel):
        return phi.args
    if isinstance(phi, Eq):
        return (phi.left, phi.right)
    return ()


def max_term_depth(phi: Formula) -> int:
    if isinstance(phi, ATOMS):
        return max((term_depth(t) for t in atom_terms(phi)), default=0)
    return max(max_term_depth(c) for c in children(phi))


# ------------------------------------------------------------- syntax queries
@lru_cache(maxsize=1 << 20)
def free_variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, ATOMS):
        out = set()
        for t in atom_terms(phi):
            out |= term_vars(t)
        return frozenset(out)
    if isinstance(phi, QUANTIFIERS):
        return free_variables(phi.child) - set(phi.vars)
    out = frozenset()
    for c in children(phi):
        out |= free_variables(c)
    return out


@lru_cache(maxsize=1 << 20)
def all_variables(phi: Formula) -> frozenset[str]:
    """Free and bound variable names occurring anywhere in ``phi``."""
    if isinstance(phi, ATOMS):
        return free_variables(phi)
    out = frozenset(phi.vars) if isinstance(phi, QUANTIFIERS) else frozenset()
    for c in children(phi):
        out |= all_variables(c)
    return out


def sorted_vars(vs: Iterable[str]) -> list[str]:
    return sorted(vs, key=var_index)


def constants_of(phi: Formula) -> frozenset[str]:
    def tc(t):
        if isinstance(t, Const):
            return {t.name}
        if isinstance(t, App):
            return set().union(*(tc(a) for a in t.args)) if t.args else set()
        return set()
    if isinstance(phi, ATOMS):
        return frozenset(set().union(*(tc(t) for t in atom_terms(phi))) if atom_terms(phi) else set())
    out = frozenset()
    for c in children(phi):
        out |= constants_of(c)
    return out


def symbols_of(phi: Formula) -> frozenset[str]:
    """Relation and function names used (constants excluded)."""
    def tf(t):
        if isinstance(t, App):
            return {t.func}.union(*(tf(a) for a in t.args))
        return set()
    if isinstance(phi, Rel):
        return frozenset({phi.name}.union(*(tf(t) for t in phi.args)))
    if isinstance(phi, Eq):
        return frozenset(tf(phi.left) | tf(phi.right))
    out = frozenset()
    for c in children(phi):
        out |= symbols_of(c)
    return out


def subformulas(phi: Formula) -> set[Formula]:
    out = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if f in out:
            continue
        out.add(f)
        stack.extend(children(f))
    return out


# -------------------------------------------------------------- substitution
def substitute_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.func, tuple(substitute_term(a, mapping) for a in t.args))
    return t


def substitute(phi: Formula, v: str, t: Term, variables: Sequence[str] | None = None) -> Formula:
    """Capture-avoiding ``phi[v := t]``.

    A bound variable that would capture a variable of ``t`` is renamed to the
    first member of ``variables`` (V-order) not occurring in ``phi`` or ``t``.
    """
    t = _term(t)
    if v not in free_variables(phi):
        return phi
    if variables is None:
        used = all_variables(phi) | term_vars(t) | {v}
        top = max((var_index(u) for u in used), default=-1)
        variables = [f"x{i}" for i in range(top + 1 + len(used))]
    return _subst(phi, v, t, tuple(variables))


def _subst(phi, v, t, variables):
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(substitute_term(a, {v: t}) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(substitute_term(phi.left, {v: t}), substitute_term(phi.right, {v: t}))
    if v not in free_variables(phi):
        return phi
    if isinstance(phi, Not):
        return Not(_subst(phi.child, v, t, variables))
    if isinstance(phi, FAMILIES):
        return type(phi)(tuple(_subst(c, v, t, variables) for c in phi.children))
    tv = term_vars(t)
    bound = list(phi.vars)
    body = phi.child
    for i, b in enumerate(bound):
        if b in tv:
            avoid = all_variables(phi) | tv | {v} | set(bound)
            fresh = next((w for w in variables if w not in avoid), None)
            if fresh is None:
                raise VariablesExhausted(f"no fresh variable to rename {b} in {to_text(phi)}")
            body = _subst(body, b, Var(fresh), variables)
            bound[i] = fresh
    return type(phi)(tuple(bound), _subst(body, v, t, variables))


def instantiate(phi: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous substitution of closed terms (no capture possible)."""
    if not mapping:
        return phi
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(substitute_term(a, mapping) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(substitute_term(phi.left, mapping), substitute_term(phi.right, mapping))
    if isinstance(phi, Not):
        return Not(instantiate(phi.child, mapping))
    if isinstance(phi, FAMILIES):
        return type(phi)(tuple(instantiate(c, mapping) for c in phi.children))
    inner = {k: val for k, val in mapping.items() if k not in phi.vars}
    return type(phi)(phi.vars, instantiate(phi.child, inner))


# ---------------------------------------------------------------- evaluation
def eval_term(M: Structure, t: Term, env: Mapping[str, int], constants: Mapping[str, int] | None = None) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {t.name}") from None
    if isinstance(t, Const):
        if constants and t.name in constants:
            return constants[t.name]
        if t.name in M.vocab.constants:
            return M.constant(t.name)
        raise EvaluationError(f"unknown constant {t.name}")
    if t.func not in M.vocab or M.vocab.kind(t.func) != "function":
        raise EvaluationError(f"unknown function {t.func}")
    return M.apply(t.func, [eval_term(M, a, env, constants) for a in t.args])


def evaluate(M: Structure, phi: Formula, env: Mapping[str, int] | None = None,
             constants: Mapping[str, int] | None = None) -> bool:
    """Standard satisfaction ``M |= phi[env]``; ``constants`` interprets extra constant names."""
    return _eval(M, phi, dict(env or {}), constants)


def _eval(M, phi, env, constants):
    if isinstance(phi, Rel):
        if phi.name not in M.vocab or M.vocab.kind(phi.name) != "relation":
            raise EvaluationError(f"unknown relation {phi.name}")
        return M.holds(phi.name, [eval_term(M, a, env, constants) for a in phi.args])
    if isinstance(phi, Eq):
        return eval_term(M, phi.left, env, constants) == eval_term(M, phi.right, env, constants)
    if isinstance(phi, Not):
        return not _eval(M, phi.child, env, constants)
    if isinstance(phi, And):
        return all(_eval(M, c, env, constants) for c in phi.children)
    if isinstance(phi, Or):
        return any(_eval(M, c, env, constants) for c in phi.children)
    want = isinstance(phi, Exists)
    saved = {v: env[v] for v in phi.vars if v in env}
    result = not want
    for values in itertools.product(range(M.size), repeat=len(phi.vars)):
        env.update(zip(phi.vars, values))
        if _eval(M, phi.child, env, constants) == want:
            result = want
            break
    for v in phi.vars:
        env.pop(v, None)
    env.update(saved)
    return result


def compile_formula(phi: Formula, constants: Mapping[str, int] | None = None):
    """Closure ``(M, env) -> bool`` equivalent to ``evaluate``, for repeated evaluation.

    Symbols are looked up by name at call time; the vocabulary is not checked.
    """
    constants = dict(constants or {})

    def term(t):
        if isinstance(t, Var):
            name = t.name
            return lambda M, env: env[name]
        if isinstance(t, Const):
            if t.name in constants:
                value = constants[t.name]
                return lambda M, env: value
            name = t.name
            return lambda M, env: M.constant(name)
        name, args = t.func, [term(a) for a in t.args]
        return lambda M, env: M.apply(name, [a(M, env) for a in args])

    def fixed(t):
        return isinstance(t, Const) and t.name in constants

    def form(p):
        if isinstance(p, Rel):
            name = p.name
            # fast paths for Henkin instances and plain variable tuples
            if all(fixed(a) for a in p.args):
                key = tuple(constants[a.name] for a in p.args)
                return lambda M, env: key in M.relation(name)
            if all(isinstance(a, Var) for a in p.args):
                vs = tuple(a.name for a in p.args)
                return lambda M, env: tuple([env[v] for v in vs]) in M.relation(name)
            args = [term(a) for a in p.args]
            return lambda M, env: tuple([a(M, env) for a in args]) in M.relation(name)
        if isinstance(p, Eq):
            left, right = term(p.left), term(p.right)
            return lambda M, env: left(M, env) == right(M, env)
        if isinstance(p, Not):
            child = form(p.child)
            return lambda M, env: not child(M, env)
        if isinstance(p, FAMILIES):
            kids = [form(c) for c in p.children]
            if isinstance(p, And):
                return lambda M, env: all(k(M, env) for k in kids)
            return lambda M, env: any(k(M, env) for k in kids)
        child, vs, want = form(p.child), p.vars, isinstance(p, Exists)

        def quantified(M, env):
            inner = dict(env)
            for values in itertools.product(range(M.size), repeat=len(vs)):
                inner.update(zip(vs, values))
                if child(M, inner) == want:
                    return want
            return not want
        return quantified

    return form(phi)


# ------------------------------------------------------------ text interface
def term_text(t: Term) -> str:
    return str(t)


@lru_cache(maxsize=1 << 20)
def to_text(phi: Formula) -> str:
    if isinstance(phi, Rel):
        return "(rel " + " ".join([phi.name] + [str(a) for a in phi.args]) + ")"
    if isinstance(phi, Eq):
        return f"(= {phi.left} {phi.right})"
    if isinstance(phi, Not):
        return f"(not {to_text(phi.child)})"
    if isinstance(phi, And):
        return "(and " + " ".join(to_text(c) for c in phi.children) + ")"
    if isinstance(phi, Or):
        return "(or " + " ".join(to_text(c) for c in phi.children) + ")"
    head = "exists" if isinstance(phi, Exists) else "forall"
    return f"({head} ({' '.join(phi.vars)}) {to_text(phi.child)})"


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    return re.findall(r"\(|\)|[^\s()]+", text)


def _read(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[pos]
    if tok == ")":
        raise ParseError(f"unexpected ')' at token {pos}")
    if tok != "(":
        return tok, pos + 1
    out = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise ParseError("unbalanced parentheses")
        if tokens[pos] == ")":
            return out, pos + 1
        item, pos = _read(tokens, pos)
        out.append(item)


def _build_term(s) -> Term:
    if isinstance(s, str):
        return _term(s)
    if not s or not isinstance(s[0], str):
        raise ParseError(f"bad term {s!r}")
    return App(s[0], tuple(_build_term(a) for a in s[1:]))


def _build(s) -> Formula:
    if not isinstance(s, list) or not s or not isinstance(s[0], str):
        raise ParseError(f"bad formula {s!r}")
    head, rest = s[0], s[1:]
    if head == "rel":
        if not rest or not isinstance(rest[0], str):
            raise ParseError("rel needs a name")
        return Rel(rest[0], tuple(_build_term(a) for a in rest[1:]))
    if head == "=":
        if len(rest) != 2:
            raise ParseError("= takes two terms")
        return Eq(_build_term(rest[0]), _build_term(rest[1]))
    if head == "not":
        if len(rest) != 1:
            raise ParseError("not takes one formula")
        return Not(_build(rest[0]))
    if head in ("and", "or"):
        if not rest:
            raise ParseError(f"{head} needs a nonempty family")
        return (And if head == "and" else Or)(tuple(_build(c) for c in rest))
    if head in ("exists", "forall"):
        if len(rest) != 2 or not isinstance(rest[0], list):
            raise ParseError(f"{head} takes a variable list and a formula")
        try:
            vs = _vartuple(rest[0])
        except ValueError as e:
            raise ParseError(str(e)) from None
        return (Exists if head == "exists" else Forall)(vs, _build(rest[1]))
    raise ParseError(f"unknown connective {head!r}")


def parse(text: str) -> Formula:
    tokens = _tokenize(text)
    sexp, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise ParseError("trailing input")
    return _build(sexp)
