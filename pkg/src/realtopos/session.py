"""Executing parsed sessions.

Declarations are evaluated in order; each query produces one report entry.
Queries can be farmed out to worker processes, in which case every worker
re-evaluates the (cheap) declarations and runs just its own query, so the
report is the same whatever the number of workers.
"""

from __future__ import annotations

import inspect
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

from . import dsl
from .assemblies import (
    AsmMap, Assembly, EmptyExistence, UniverseTooSmall, classify_check, find_tracker, is_cover,
    prop_objects, verify_map,
)
from .combinators import (
    CASE, DEFAULT_CONTEXT, KBAR, P0, P1, PAIR, PRED, SUCC, ISZERO, I, normal, numeral,
    standard_realizer,
)
from .lam import Const, LApp, Lam, Var, compile
from .logic import (
    BOT, EMPTY, FULL_A, FULL_SUB, NO, TOP, UNKNOWN, YES, Base, Conj, Disj, Imp, Inter,
    NestedProp, Predicate, Union, base, check_containment, const_pred, entails_search,
    entails_verify, nconj, ndisj, nimp,
)
from .pca import App, FuelExhausted, K, Oracle, S, format_term, reduce
from .smallmaps import SmallMapConfig, is_small
from .subtopos import CLOSED, OPEN, U
from .suites import SCHEMA, run_suite

__all__ = ["Config", "run", "run_source", "exit_code", "SessionError"]


@dataclass(frozen=True)
class Config:
    fuel: int = 10_000
    depth: int = 7
    seed: int = 0
    timing: bool = False
    pinned: frozenset = field(default=frozenset())  # keys a ``set`` may not override

    def echo(self) -> dict:
        return {"fuel": self.fuel, "depth": self.depth, "seed": self.seed}


class SessionError(Exception):
    pass


_CONSTS = {
    "K": K, "S": S, "I": I, "i": I, "kbar": KBAR, "p": PAIR, "p0": P0, "p1": P1,
    "succ": SUCC, "pred": PRED, "iszero": ISZERO, "case": CASE, "case_guard": CASE,
}


class _Env:
    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.ctx = DEFAULT_CONTEXT.with_fuel(cfg.fuel)
        self.oracles = set()
        self.props, self.nested, self.preds = {}, {}, {}
        self.assemblies, self.maps, self.universes = {}, {}, {}
        self.closure = None

    def set(self, key, value):
        if key in self.cfg.pinned:
            return
        self.cfg = replace(self.cfg, **{key: value})
        self.ctx = DEFAULT_CONTEXT.with_fuel(self.cfg.fuel)

    # terms
    def const(self, name):
        if name in _CONSTS:
            return _CONSTS[name]
        if name in self.oracles:
            return Oracle(name)
        return standard_realizer(name)

    def lam_of(self, e, bound=()):
        if isinstance(e, dsl.Name):
            return Var(e.ident) if e.ident in bound else Const(self.const(e.ident))
        if isinstance(e, dsl.Num):
            return Const(numeral(e.value))
        if isinstance(e, dsl.Ap):
            return LApp(self.lam_of(e.fun, bound), self.lam_of(e.arg, bound))
        body = self.lam_of(e.body, bound + e.params)
        for x in reversed(e.params):
            body = Lam(x, body)
        return body

    def realizer(self, e):
        return normal(compile(self.lam_of(e)))

    def witness(self, e):
        t = compile(self.lam_of(e))
        r = reduce(t, self.cfg.fuel)
        if isinstance(r, FuelExhausted):
            raise SessionError(f"base witness {dsl.pp_term(e)} has no normal form within fuel")
        return r.term

    # propositions
    def prop(self, e):
        if isinstance(e, dsl.PBase):
            return base(*(self.witness(t) for t in e.terms))
        if isinstance(e, dsl.PAtom):
            return FULL_A if e.kind == "full" else FULL_SUB
        if isinstance(e, dsl.PRef):
            return self.props[e.name]
        a, b = self.prop(e.left), self.prop(e.right)
        if e.op == "->":
            return Imp(a, b, (), True)
        return Conj(a, b) if e.op == "/\\" else Disj(a, b)

    def nest(self, e):
        if isinstance(e, dsl.NPair):
            return NestedProp(self.prop(e.pot), self.prop(e.act))
        if isinstance(e, dsl.NAtom):
            return {"top": TOP, "bot": BOT, "u": U}[e.kind]
        if isinstance(e, dsl.NRef):
            if e.name not in self.nested:
                if e.name not in self.preds:
                    raise KeyError(e.name)
                raise SessionError(f"{e.name!r} names a predicate, not a nested proposition")
            return self.nested[e.name]
        if isinstance(e, dsl.NClose):
            j = {"open": OPEN, "closed": CLOSED}.get(e.kind, self.closure)
            if j is None:
                raise SessionError("j(...) used before a closure declaration")
            return j(self.nest(e.arg))
        a, b = self.nest(e.left), self.nest(e.right)
        return {"->": nimp, "/\\": nconj, "\\/": ndisj}[e.op](a, b)

    def predicate(self, e, index=None):
        """A predicate for the lhs/rhs of an entailment.  Named predicates are
        taken as they are; nested expressions become constant predicates,
        with connectives between predicates taken pointwise."""
        if isinstance(e, dsl.NRef) and e.name in self.preds:
            return self.preds[e.name]
        if isinstance(e, dsl.NBin):
            a, b = self.predicate(e.left, index), self.predicate(e.right, index)
            if a.index != b.index:
                a, b = self._align(a, b)
            fn = {"->": nimp, "/\\": nconj, "\\/": ndisj}[e.op]
            return a.pointwise(b, fn)
        if isinstance(e, dsl.NClose) and _mentions_pred(e, self.preds):
            j = {"open": OPEN, "closed": CLOSED}.get(e.kind, self.closure)
            if j is None:
                raise SessionError("j(...) used before a closure declaration")
            return self.predicate(e.arg, index).map(j)
        return const_pred(("*",) if index is None else index, self.nest(e))

    def _align(self, a, b):
        if a.index == ("*",):
            return const_pred(b.index, a.at["*"]), b
        if b.index == ("*",):
            return a, const_pred(a.index, b.at["*"])
        raise SessionError("entailment between predicates over different index sets")


def _mentions_pred(e, preds):
    if isinstance(e, dsl.NRef):
        return e.name in preds
    if isinstance(e, (dsl.NBin,)):
        return _mentions_pred(e.left, preds) or _mentions_pred(e.right, preds)
    if isinstance(e, dsl.NClose):
        return _mentions_pred(e.arg, preds)
    return False


def _pair(env, lhs, rhs):
    a, b = env.predicate(lhs), env.predicate(rhs)
    if a.index != b.index:
        a, b = env._align(a, b)
    return a, b


def _empty(p) -> bool:
    """Syntactic emptiness: sound, not complete."""
    if p == EMPTY or (isinstance(p, Base) and not p.witnesses):
        return True
    if isinstance(p, Conj):
        return _empty(p.left) or _empty(p.right)
    if isinstance(p, Disj):
        return _empty(p.left) and _empty(p.right)
    if isinstance(p, Inter):
        return any(_empty(q) for q in p.parts)
    if isinstance(p, Union):
        return all(_empty(q) for q in p.parts)
    return False


def _refuted(phi, psi, ctx):
    """An index whose antecedent is inhabited while the consequent is
    syntactically empty: no realizer can exist."""
    from .logic import witness_sample
    for i in phi.index:
        for level in ("pot", "act"):
            src, tgt = getattr(phi.at[i], level), getattr(psi.at[i], level)
            if _empty(tgt) and witness_sample(src, ctx):
                return {"index": str(i), "level": level, "reason": "consequent is empty"}
    return None


def _entry(stmt, kind):
    line, col = stmt.pos
    return {"line": line, "kind": kind, "query": dsl.pp_statement(stmt)[:-1]}


def _query(env: _Env, stmt):
    ctx, cfg = env.ctx, env.cfg
    if isinstance(stmt, dsl.CheckQ):
        out = _entry(stmt, "check")
        phi, psi = _pair(env, stmt.lhs, stmt.rhs)
        if stmt.realizer is not None:
            a = env.realizer(stmt.realizer)
            rep = entails_verify(phi, psi, a, ctx)
            out.update(verdict=str(rep.holds), realizer=format_term(a),
                       counterexamples=rep.failures[:5])
            return out
        a = entails_search(phi, psi, cfg.depth, ctx)
        if a is not None:
            out.update(verdict="Yes", realizer=format_term(a))
            return out
        ref = _refuted(phi, psi, ctx)
        if ref is not None:
            out.update(verdict="No", realizer=None, counterexamples=[ref])
        else:
            out.update(verdict="Unknown", realizer=None, reason=f"no realizer up to size {cfg.depth}")
        return out
    if isinstance(stmt, dsl.SearchQ):
        out = _entry(stmt, "search")
        phi, psi = _pair(env, stmt.lhs, stmt.rhs)
        a = entails_search(phi, psi, stmt.depth, ctx)
        if a is None:
            out.update(verdict="Unknown", realizer=None, reason=f"not found at depth {stmt.depth}")
        else:
            out.update(verdict="Yes", realizer=format_term(a))
        return out
    if isinstance(stmt, dsl.MapQ):
        out = _entry(stmt, stmt.kind)
        f = env.maps[stmt.map]
        if stmt.kind == "verify":
            rep = verify_map(f, ctx)
            out.update(verdict=str(rep.holds), realizer=format_term(f.tracker),
                       counterexamples=rep.failures[:5])
        else:
            rep = is_cover(f, min(cfg.depth, 5), ctx=ctx)
            out.update(verdict=str(rep.verdict),
                       realizer=None if rep.lifting is None else format_term(rep.lifting))
            if rep.reason:
                out["reason"] = rep.reason
        return out
    if isinstance(stmt, dsl.SmallQ):
        out = _entry(stmt, "small")
        if stmt.bound < 3:
            raise SessionError("bound must be at least 3")
        ok = is_small(env.maps[stmt.map], SmallMapConfig(stmt.bound))
        out["verdict"] = "Yes" if ok else "No"
        return out
    if isinstance(stmt, dsl.ClassifyQ):
        out = _entry(stmt, "classify")
        res = classify_check(env.maps[stmt.map], env.universes[stmt.universe], ctx)
        out.update(verdict=res.pop("verdict"), detail=res)
        return out
    if isinstance(stmt, dsl.SuiteQ):
        out = _entry(stmt, "suite")
        params = dict(stmt.params)
        fn_params = inspect.signature(_suite_fn(stmt.name)).parameters
        params.setdefault("seed", cfg.seed)
        if "fuel" in fn_params:
            params.setdefault("fuel", cfg.fuel)
        if "ctx" in fn_params:
            params["ctx"] = ctx
        if stmt.operator is not None:
            params["operators"] = (stmt.operator,)
        rep = run_suite(stmt.name, **params)
        out.update(verdict="Yes" if rep["passed"] else "No", report=rep)
        return out
    raise TypeError(stmt)


def _suite_fn(name):
    from .suites import SUITES
    return SUITES[name]


def _declare(env: _Env, stmt):
    if isinstance(stmt, dsl.OracleDecl):
        env.oracles.update(stmt.names)
    elif isinstance(stmt, dsl.PropDecl):
        env.props[stmt.name] = env.prop(stmt.expr)
    elif isinstance(stmt, dsl.NestedDecl):
        n = env.nest(stmt.expr)
        bad = check_containment(n, env.ctx)
        if bad:
            raise SessionError(f"actual witnesses {', '.join(format_term(t) for t in bad)} "
                               "are impure or not potential witnesses")
        env.nested[stmt.name] = n
    elif isinstance(stmt, dsl.PredDecl):
        env.preds[stmt.name] = Predicate(stmt.index, {i: env.nest(e) for i, e in stmt.fibres})
    elif isinstance(stmt, dsl.AssemblyDecl):
        X = Assembly(tuple(x for x, _ in stmt.fibres), {x: env.nest(e) for x, e in stmt.fibres},
                     stmt.name)
        try:
            X.validate(env.ctx)
        except EmptyExistence as exc:
            raise SessionError(str(exc)) from None
        env.assemblies[stmt.name] = X
    elif isinstance(stmt, dsl.MapDecl):
        X, Y = env.assemblies[stmt.source], env.assemblies[stmt.target]
        graph = dict(stmt.graph)
        missing = [x for x in X.carrier if x not in graph]
        if missing or len(graph) != len(stmt.graph):
            raise SessionError(f"graph of {stmt.name} is not a function on {stmt.source}")
        if stmt.tracker is None:
            t = find_tracker(X, Y, graph, (I, P0, P1), min(env.cfg.depth, 5), env.ctx)
            if t is None:
                raise SessionError(f"no tracker found for {stmt.name}")
        else:
            t = env.realizer(stmt.tracker)
        env.maps[stmt.name] = AsmMap(X, Y, graph, t, stmt.name)
    elif isinstance(stmt, dsl.UniverseDecl):
        env.universes[stmt.name] = prop_objects([env.nest(m) for m in stmt.members], env.ctx)
    elif isinstance(stmt, dsl.ClosureDecl):
        env.closure = {"open": OPEN, "closed": CLOSED}[stmt.kind]
    elif isinstance(stmt, dsl.SetDecl):
        env.set(stmt.key, stmt.value)


def _execute(session: dsl.Session, cfg: Config, only: int | None = None) -> list:
    env = _Env(cfg)
    entries = []
    qi = -1
    broken = set()
    for stmt in session.statements:
        if isinstance(stmt, dsl.Comment):
            continue
        if isinstance(stmt, dsl.QUERIES):
            qi += 1
            if only is not None and qi != only:
                continue
            t0 = time.perf_counter()
            try:
                e = _query(env, stmt)
            except (SessionError, UniverseTooSmall, KeyError, ValueError) as exc:
                e = _entry(stmt, "error")
                e.update(verdict="Error", message=_message(exc, broken))
            if env.cfg.timing:
                e["seconds"] = round(time.perf_counter() - t0, 4)
            entries.append(e)
            continue
        try:
            _declare(env, stmt)
        except (SessionError, KeyError, ValueError) as exc:
            if only is None:
                e = _entry(stmt, "error")
                e.update(verdict="Error", message=_message(exc, broken))
                entries.append(e)
            name = getattr(stmt, "name", None)
            if name:
                broken.add(name)
    return entries


def _message(exc, broken):
    if isinstance(exc, KeyError):
        name = exc.args[0] if exc.args else "?"
        if name in broken:
            return f"{name!r} failed to build earlier"
        return f"unknown name {name!r}"
    return str(exc)


def _worker(args):
    src, cfg_dict, k = args
    cfg = Config(**{**cfg_dict, "pinned": frozenset(cfg_dict["pinned"])})
    return _execute(dsl.parse(src), cfg, only=k)


def run(session: dsl.Session, cfg: Config = Config(), jobs: int = 1, source: str | None = None) -> dict:
    """Execute a session and build its JSON report."""
    t0 = time.perf_counter()
    nq = len(session.queries)
    if jobs > 1 and nq > 1:
        src = dsl.pretty(session)
        d = asdict(cfg)
        d["pinned"] = sorted(cfg.pinned)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_worker, [(src, d, k) for k in range(nq)]))
        # the pretty-printed source has its own line numbers
        lines = [q.pos[0] for q in session.queries]
        qs = []
        for k, part in enumerate(parts):
            for e in part:
                e["line"] = lines[k]
                qs.append(e)
        decl_errors = [e for e in _execute(_declarations_only(session), cfg) if e["kind"] == "error"]
        entries = sorted(decl_errors + qs, key=lambda e: e["line"])
    else:
        entries = _execute(session, cfg)
    summary = {"queries": nq, "yes": 0, "no": 0, "unknown": 0, "errors": 0}
    for e in entries:
        key = {"Yes": "yes", "No": "no", "Unknown": "unknown"}.get(e["verdict"], "errors")
        summary[key] += 1
    report = {"schema": SCHEMA}
    if source is not None:
        report["source"] = source
    report["config"] = cfg.echo()
    report["results"] = entries
    report["summary"] = summary
    report["exit_code"] = exit_code(report)
    if cfg.timing:
        report["seconds"] = round(time.perf_counter() - t0, 4)
    return report


def _declarations_only(session):
    return dsl.Session(tuple(s for s in session.statements if not isinstance(s, dsl.QUERIES)))


def exit_code(report: dict) -> int:
    s = report["summary"]
    return 1 if s["no"] or s["errors"] else 0


def run_source(src: str, cfg: Config = Config(), jobs: int = 1, source: str | None = None) -> dict:
    return run(dsl.parse(src), cfg, jobs, source)
