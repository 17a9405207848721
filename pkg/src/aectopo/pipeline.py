"""Command pipelines behind the CLI.

Each command takes a ``RunConfig`` and a shared ``Context`` and returns a
``Report``: a deterministic document of checks plus failure records, and any
extra artifact files.  Nothing time-dependent goes into a report; timings
are logged instead.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable

from . import gmetric
from .aec import members, validate_aec
from .config import RunConfig
from .formulas import parse, symbols_of, to_text
from .fragment import FragmentBudget, audit_closure, fragment_closure, is_idempotent, variable_set
from .logicspace import (BASIS_MODES, ConsistencyOracle, SentenceIndex, all_structures, assert_true,
                         atomic_fragment, basis, basis_formulas, basis_size, build_sentence_set, check_B_membership,
                         class_as_intersection, continuity_check, corrupt_double_truth, corrupt_missing_witness,
                         decode, encode, gdelta_check, gdelta_witnesses, truncated_index, universal_sentences)
from .presentation import (FINITIZATION_NOTE, build_presentation, expand, expected_axiom_count, failing_axioms,
                           verify_presentation)
from .structures import Structure

log = logging.getLogger("aectopo")


@dataclass
class Report:
    command: str
    header: dict
    checks: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, name: str, passed: bool, checked: int = 0, detail=None, witness=None):
        """Record one check; a failed check also becomes a failure record."""
        entry = {"name": name, "passed": bool(passed), "checked": checked}
        if detail is not None:
            entry["detail"] = detail
        self.checks.append(entry)
        if not passed:
            self.failures.append({"check": name, "witness": witness})

    def to_dict(self) -> dict:
        return {"command": self.command, "header": self.header, "passed": self.passed,
                "checks": self.checks, "failures": self.failures, "data": self.data}

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"result: {'PASS' if self.passed else 'FAIL'}"]
        for key in sorted(self.header):
            lines.append(f"{key}: {json.dumps(self.header[key], sort_keys=True)}")
        lines.append("")
        for c in self.checks:
            mark = "PASS" if c["passed"] else "FAIL"
            extra = f" ({c['checked']} checked)" if c["checked"] else ""
            lines.append(f"{mark} {c['name']}{extra}")
            if "detail" in c:
                lines.append(f"     {json.dumps(c['detail'], sort_keys=True)}")
        if self.failures:
            lines.append("")
            lines.append("failures:")
            for f in self.failures:
                lines.append(f"  {f['check']}: {json.dumps(f['witness'], sort_keys=True)}")
        return "\n".join(lines) + "\n"


class Context:
    """Lazily built objects shared between the commands of one run."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._indexes: dict[int, SentenceIndex] = {}

    @cached_property
    def aec(self):
        return self.cfg.aec()

    @cached_property
    def theory(self):
        return build_presentation(self.aec, self.cfg.budgets.tuple_budget)

    @cached_property
    def logic_bound(self) -> int:
        return min(self.cfg.b, self.cfg.budgets.logic_block_bound or self.cfg.b)

    @cached_property
    def logic_aec(self):
        """The class with the block bound used for the logic-space commands."""
        if self.logic_bound == self.cfg.b:
            return self.aec
        return replace(self.aec, block_bound=self.logic_bound)

    @cached_property
    def logic_theory(self):
        if self.logic_bound == self.cfg.b:
            return self.theory
        return build_presentation(self.logic_aec, self.logic_bound)

    @cached_property
    def fragment_budget(self) -> FragmentBudget:
        bud = self.cfg.budgets
        nv = bud.fragment_variables or 2 * self.logic_bound
        return FragmentBudget(max_depth=bud.fragment_depth, max_width=bud.fragment_width,
                              max_count=bud.fragment_count, max_free=nv, max_tuple=bud.fragment_tuple,
                              max_term_depth=bud.fragment_term_depth)

    @cached_property
    def fragment(self):
        t = time.perf_counter()
        nv = self.fragment_budget.max_free
        T = self.logic_theory
        F = fragment_closure(T.sentences(), variable_set(nv), T.vocab, self.fragment_budget)
        log.info("fragment generated by T*: %d members in %.2fs", len(F), time.perf_counter() - t)
        return F

    def index(self, n: int) -> SentenceIndex:
        if n not in self._indexes:
            t = time.perf_counter()
            self._indexes[n] = build_sentence_set(self.fragment, n, self.cfg.budgets.sentence_count)
            log.info("sentence index at n=%d: %d sentences in %.2fs", n, len(self._indexes[n]),
                     time.perf_counter() - t)
        return self._indexes[n]

    def members(self, n: int) -> list[Structure]:
        return list(members(self.aec, n))

    def expansions(self, n: int) -> list[Structure]:
        """Expansions to the logic-space τ* of the class members of size ``n``."""
        return [expand(self.logic_aec, self.logic_theory, M) for M in self.members(n)]


def header(cfg: RunConfig, ctx: Context) -> dict:
    return {"config": cfg.name, "config_digest": cfg.digest(), "aec": ctx.aec.describe(),
            "finitization": FINITIZATION_NOTE, "logic_block_bound": ctx.logic_bound}


def _digest(records) -> str:
    return hashlib.sha256(json.dumps(records, sort_keys=True).encode()).hexdigest()[:16]


# ------------------------------------------------------------------ commands
def cmd_validate_aec(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("validate-aec", header(cfg, ctx))
    v = validate_aec(ctx.aec)
    for c in v.checks:
        rep.check(c.name, c.passed, c.checked, witness=c.counterexample)
    return rep


def cmd_build_presentation(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("build-presentation", header(cfg, ctx))
    T = ctx.theory
    expected = expected_axiom_count(T.catalog, T.tuple_budget)
    rep.check("axiom-count", len(T.axioms) == expected, len(T.axioms), {"generated": len(T.axioms),
                                                                       "recounted": expected})
    used = set()
    for a in T.axioms:
        used |= symbols_of(a.formula)
    unused = [n for n, _ in T.vocab.relations if n not in T.tau and n not in used]
    rep.check("every-new-predicate-used", not unused, len(T.vocab.relations), witness=unused)
    F = ctx.fragment
    LT = ctx.logic_theory
    outside = [to_text(a.formula) for a in LT.axioms if a.formula not in F]
    rep.check("axioms-in-fragment", not outside, len(LT.axioms), witness=outside[:5])
    violations = audit_closure(F)
    rep.check("fragment-closure-audit", not violations, len(F),
              witness=[v.__dict__ for v in violations[:5]])
    rep.check("fragment-idempotent", is_idempotent(F), len(F))
    rep.data = {"blocks": len(T.catalog.blocks), "pairs": len(T.catalog.pairs), "axioms": T.counts(),
                "tuple_budget": T.tuple_budget, "tau_star_symbols": len(T.vocab.symbols),
                "name_collisions": list(T.expanded.collisions), "fragment_members": len(F),
                "fragment_generated_by_block_bound": ctx.logic_bound,
                "fragment_budget": F.budget.__dict__}
    rep.artifacts["tstar.txt"] = T.export_text()
    rep.artifacts["tau_star.json"] = json.dumps({"vocabulary": T.vocab.to_dict(), "catalog": T.catalog.to_dict()},
                                                sort_keys=True, indent=1) + "\n"
    return rep


def cmd_verify_presentation(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("verify-presentation", header(cfg, ctx))
    b = cfg.budgets
    t = time.perf_counter()
    pr = verify_presentation(ctx.aec, ctx.theory, cfg.cap, b.search_cap, b.bruteforce_cap, b.literal_cap)
    log.info("verify-presentation took %.2fs", time.perf_counter() - t)
    for c in pr.clauses:
        rep.check(c.name, c.passed, c.checked, c.note or None, c.counterexample)
    rep.data = {"header": pr.header, "validation": pr.validation}
    return rep


def _roundtrip_sizes(cfg: RunConfig) -> range:
    return range(1, min(cfg.cap, cfg.budgets.roundtrip_size) + 1)


def cmd_encode(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("encode", header(cfg, ctx))
    per_size = {}
    T = ctx.logic_theory
    for n in _roundtrip_sizes(cfg):
        S = ctx.index(n)
        seen = {}
        clash = None
        axioms_false = []
        digests = []
        for Mstar in ctx.expansions(n):
            f = encode(Mstar, S)
            key = f.mask(S)
            if key in seen and clash is None:
                clash = [seen[key].to_dict(), Mstar.to_dict()]
            seen[key] = Mstar
            axioms_false += [to_text(a.formula) for a in T.axioms if a.formula in S and not f(a.formula)]
            digests.append(_digest(f.to_records()))
        rep.check(f"injective-n{n}", clash is None, len(seen), witness=clash)
        rep.check(f"tstar-axioms-true-n{n}", not axioms_false, len(seen), witness=axioms_false[:5])
        per_size[str(n)] = {"sentences": len(S), "expansions": len(seen), "theory_function_digests": digests}
    rep.data = {"per_size": per_size}
    return rep


def _base_roundtrip(cfg: RunConfig, n: int) -> tuple[int, list]:
    """Round trip over every τ-structure of size ``n`` through the atomic fragment of τ."""
    S = build_sentence_set(atomic_fragment(cfg.vocabulary, n), n, cfg.budgets.sentence_count)
    bad = []
    count = 0
    for M in all_structures(cfg.vocabulary, n):
        count += 1
        f = encode(M, S)
        back = decode(f, S)
        if back != M or encode(back, S).values != f.values:
            bad.append(M.to_dict())
    return count, bad


def cmd_decode(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("decode", header(cfg, ctx))
    for n in _roundtrip_sizes(cfg):
        S = ctx.index(n)
        bad = []
        induction = []
        exps = ctx.expansions(n)
        for Mstar in exps:
            f = encode(Mstar, S)
            back = decode(f, S)
            if back != Mstar:
                bad.append(Mstar.to_dict())
            elif encode(back, S).values != f.values:
                induction.append(Mstar.to_dict())
        rep.check(f"expansion-roundtrip-n{n}", not bad, len(exps), witness=bad[:3])
        rep.check(f"induction-claim-n{n}", not induction, len(exps), witness=induction[:3])
        count, bad = _base_roundtrip(cfg, n)
        rep.check(f"base-structure-roundtrip-n{n}", not bad, count, witness=bad[:3])
    return rep


def _corrupt_expansion(ctx: Context, n: int) -> tuple[Structure, list]:
    """An expansion with one block-predicate tuple removed, which no longer satisfies T*."""
    T = ctx.logic_theory
    for Mstar in reversed(ctx.expansions(n)):
        for i, blk in enumerate(T.catalog.blocks):
            name = T.block_predicate(i)
            table = sorted(Mstar.relation(name))
            if blk.size < 2 or not table:
                continue
            rels = {r: set(Mstar.relation(r)) for r, _ in T.vocab.relations}
            rels[name].discard(table[-1])
            bad = Structure.make(T.vocab, n, {r: sorted(v) for r, v in rels.items()},
                                 {f: Mstar.function_table(f) for f, _ in T.vocab.function_symbols})
            failing = failing_axioms(bad, T)
            if failing:
                return bad, failing
    raise ValueError("no expansion admits a corrupting deletion")


def cmd_check_b(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("check-b", header(cfg, ctx))
    arity = None
    for n in range(1, cfg.cap + 1):
        S = ctx.index(n)
        oracle = ConsistencyOracle(S)
        exps = ctx.expansions(n)
        bad = []
        for Mstar in exps:
            r = check_B_membership(encode(Mstar, S), S, arity, oracle)
            if not r.member:
                bad.append({"structure": Mstar.reduct(cfg.vocabulary).to_dict(), "violated": r.conditions})
        rep.check(f"expansions-in-B-n{n}", not bad, len(exps), witness=bad[:3])

    n = min(2, cfg.cap)
    S = ctx.index(n)
    oracle = ConsistencyOracle(S)
    base = encode(ctx.expansions(n)[0], S)
    corrupted = {}

    f, phi = corrupt_double_truth(base, S)
    corrupted["double-truth"] = (f, 2, to_text(phi))
    target = None
    if cfg.vocabulary.relations:
        R, arity_ = cfg.vocabulary.relations[0]
        if arity_ == 2:
            cand = parse(f"(exists (x0) (rel {R} {S.constants[0]} x0))")
            target = cand if cand in S else None
    f, phi = corrupt_missing_witness(base, S, target)
    corrupted["missing-henkin-witness"] = (f, 4, to_text(phi))
    bad, failing = _corrupt_expansion(ctx, n)
    f = assert_true(encode(bad, S), universal_sentences(S))
    corrupted["inconsistent-finite-subset"] = (f, 1, to_text(failing[0].formula))

    details = {}
    for name, (f, expected, what) in corrupted.items():
        r = check_B_membership(f, S, None, oracle)
        ok = (not r.member) and expected in r.conditions
        details[name] = {"expected_condition": expected, "named_conditions": r.conditions, "corrupted_at": what}
        witness = next((v.to_dict() for v in r.violations if v.condition == expected), None)
        rep.check(f"{name}-rejected", ok, 1, {"named": r.conditions, "expected": expected},
                  None if ok else details[name])
        details[name]["witness"] = witness
    rep.data = {"corruptions": details, "universe_size": n, "consistency": "satisfiable with c_i naming element i"}
    return rep


def cmd_gdelta_check(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("gdelta-check", header(cfg, ctx))
    b = cfg.budgets
    n = min(b.gdelta_size, cfg.cap)
    S = truncated_index(ctx.index(n), b.gdelta_sentences)
    t = time.perf_counter()
    g = gdelta_check(S, b.subset_arity, max_sentences=b.gdelta_sentences)
    log.info("gdelta-check over 2^%d functions took %.2fs", len(S), time.perf_counter() - t)
    rep.check("families-equal-bruteforce-B", g.passed, 1 << len(S), g.to_dict(), g.mismatches[:10])
    fams = gdelta_witnesses(S, b.subset_arity, max_sentences=b.gdelta_sentences)
    opened = all(m.coordinates() for f in fams for m in f.members)
    rep.check("members-depend-on-finitely-many-coordinates", opened, sum(len(f.members) for f in fams))
    rep.data = {"sentences": [to_text(s) for s in S.sentences], "universe_size": n}
    rep.artifacts["witness_families.json"] = json.dumps([f.to_dict(S) for f in fams], sort_keys=True,
                                                        indent=1) + "\n"
    return rep


def cmd_continuity_check(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("continuity-check", header(cfg, ctx))
    b = cfg.budgets
    n = min(b.continuity_size, cfg.cap)
    # every structure of the base vocabulary, through the atomic fragment of τ
    F = atomic_fragment(cfg.vocabulary, n)
    S = build_sentence_set(F, n, b.sentence_count)
    space = all_structures(cfg.vocabulary, n)
    basic = list(basis("fragment", cfg.vocabulary, n, F=F))
    c = continuity_check(S, space, b.continuity_coordinates, b.continuity_sentences, basic)
    rep.check(f"base-space-n{n}", c.passed, c.conditions_checked + c.basic_sets_checked, c.to_dict(), c.failures[:5])
    # expansions of the class members, through the fragment generated by T*
    S = ctx.index(n)
    space = ctx.expansions(n)
    c = continuity_check(S, space, b.continuity_coordinates, b.continuity_sentences)
    rep.check(f"expansion-space-n{n}", c.passed, c.conditions_checked + c.basic_sets_checked, c.to_dict(),
              c.failures[:5])
    weights = {}
    for mode in BASIS_MODES:
        forms = basis_formulas(mode, cfg.vocabulary, F if mode == "fragment" else None)
        weights[mode] = basis_size(forms, n)
    rep.data = {"basis_sizes": weights, "universe_size": n}
    return rep


def cmd_class_intersection(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("class-intersection", header(cfg, ctx))
    T = ctx.theory
    sizes = range(1, min(cfg.budgets.intersection_size, cfg.cap) + 1)
    for n in sizes:
        r = class_as_intersection(ctx.aec, T, n)
        rep.check(f"reducts-equal-members-n{n}", r.passed, r.members, r.to_dict(), r.mismatches[:3])
    ablated = T.without(T.by_schema(3))
    found = []
    for n in sizes:
        r = class_as_intersection(ctx.aec, T, n, axioms=ablated.axioms)
        found += [{"size": n, **m} for m in r.mismatches[:1]]
    rep.check("schema-3-ablation-detected", bool(found), len(sizes), {"first_mismatch": found[:1]},
              "ablating the covering axioms went unnoticed")
    return rep


def cmd_metric_demo(cfg: RunConfig, ctx: Context) -> Report:
    rep = Report("metric-demo", header(cfg, ctx))
    b = cfg.budgets
    degree, L, a = b.metric_degree, b.metric_length, b.metric_alphabet
    if L > degree:
        rep.check("length-within-degree", False, 0, witness={"length": L, "degree": degree})
        return rep
    pts = [p for k in range(1, L + 1) for p in gmetric.all_points(k, a)]
    by_len = {}
    for p in pts:
        by_len.setdefault(len(p), []).append(p)
    triples = 0
    for k, group in sorted(by_len.items()):
        for res in gmetric.metric_axioms_sweep(group, degree):
            rep.check(f"{res.name}-length{k}", res.passed, res.checked, witness=res.failures)
            triples += res.checked if res.name == "triangle" else 0
        res = gmetric.ball_cylinder_sweep(group, degree)
        rep.check(f"ball-cylinder-length{k}", res.passed, res.checked, witness=res.failures)
    grid = gmetric.group_grid(degree, tuple(range(min(3, degree))), -b.group_entry, b.group_entry)
    for res in gmetric.group_laws_sweep(grid):
        rep.check(res.name, res.passed, res.checked, witness=res.failures)
    units = [gmetric.coinitial_sequence(i, degree) for i in range(degree)]
    rep.check("coinitial-strictly-decreasing", all(u > v for u, v in zip(units, units[1:])), degree)

    x = tuple(range(L)) if a >= L else tuple(i % a for i in range(L))
    y = tuple((v + 1) % a for v in x)
    demos = {
        "eventually-constant": (gmetric.constant_family(x, head=[y]), True, x),
        "alternating": (gmetric.alternating_family(x, y), False, None),
        "converging": (gmetric.converging_family(x, filler=(x[-1] + 1) % a), True, x),
    }
    out = {}
    for name, (fam, cauchy, limit) in demos.items():
        r = gmetric.cauchy_and_limit(fam, degree)
        ok = r.is_cauchy == cauchy and r.limit == limit
        out[name] = r.to_dict()
        rep.check(f"cauchy-{name}", ok, degree, r.to_dict(), None if ok else r.to_dict())
    balls = {}
    for alpha in range(degree):
        B = gmetric.ball(x, units[alpha])
        balls[str(units[alpha])] = str(B)
    rep.data = {"degree": degree, "length": L, "alphabet": a, "points": len(pts), "triples_checked": triples,
                "cauchy": out, "balls_around": gmetric.point_text(x), "balls": balls,
                "group_grid": len(grid)}
    return rep


COMMANDS: dict[str, Callable[[RunConfig, Context], Report]] = {
    "validate-aec": cmd_validate_aec,
    "build-presentation": cmd_build_presentation,
    "verify-presentation": cmd_verify_presentation,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "check-b": cmd_check_b,
    "gdelta-check": cmd_gdelta_check,
    "continuity-check": cmd_continuity_check,
    "class-intersection": cmd_class_intersection,
    "metric-demo": cmd_metric_demo,
}

PIPELINE = tuple(COMMANDS)


def run_command(name: str, cfg: RunConfig, ctx: Context | None = None) -> Report:
    ctx = ctx or Context(cfg)
    t = time.perf_counter()
    rep = COMMANDS[name](cfg, ctx)
    log.info("%s: %s in %.2fs", name, "pass" if rep.passed else "FAIL", time.perf_counter() - t)
    return rep


def run_all(cfg: RunConfig, stop_after_validation: bool = True) -> list[Report]:
    """Every command in pipeline order.  A failed validation skips the rest."""
    ctx = Context(cfg)
    out = []
    for name in PIPELINE:
        rep = run_command(name, cfg, ctx)
        out.append(rep)
        if name == "validate-aec" and not rep.passed and stop_after_validation:
            break
    return out
