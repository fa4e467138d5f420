"""Nested propositions, predicates over finite index sets, and entailment.

A single-level proposition (``Prop1``) is an expression tree over finite
witness sets.  Membership is three-valued because application may run out
of fuel.  Finite *witness samples* stand in for the infinite sets wherever a
proposition has to be enumerated (antecedents of implications, entailment
checks, realizer search).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from enum import IntEnum
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .combinators import DEFAULT_CONTEXT, KBAR, P0, P1, PAIR, I, NestedPca
from .pca import App, FuelExhausted, K, NormalForm, Term, format_term, iter_subpca, reduce, term_key

__all__ = [
    "Verdict", "Prop1", "Base", "FullA", "FullSub", "Imp", "Conj", "Disj", "Inter", "Union",
    "FULL_A", "FULL_SUB", "EMPTY", "base", "NestedProp", "TOP", "BOT", "nested",
    "nimp", "nconj", "ndisj", "eq_prop", "attach_witness",
    "test", "witness_sample", "check_containment",
    "Predicate", "const_pred", "pconj", "pdisj", "pimp",
    "IndexMismatch", "NotAPullback", "EntailmentReport", "entails_verify", "entails_search",
    "holds", "reindex", "exists_along", "forall_along", "generic_family", "generic_decompose",
    "PullbackSquare", "pullback_square", "beck_chevalley_check", "equivalent",
    "format_prop", "prop_to_json", "nested_to_json",
]


class Verdict(IntEnum):
    NO = 0
    UNKNOWN = 1
    YES = 2

    def __str__(self) -> str:
        return ("No", "Unknown", "Yes")[self]

    def __and__(self, other):
        return Verdict(min(self, other))

    def __or__(self, other):
        return Verdict(max(self, other))


YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN


def meet(vs: Iterable[Verdict]) -> Verdict:
    out = YES
    for v in vs:
        if v is NO:
            return NO
        out = out & v
    return out


def join(vs: Iterable[Verdict]) -> Verdict:
    out = NO
    for v in vs:
        if v is YES:
            return YES
        out = out | v
    return out


# --------------------------------------------------------------------------
# single-level propositions

class Prop1:
    """Base class; subclasses are frozen dataclasses with a cached hash."""

    __slots__ = ()

    def _key(self):
        return (type(self).__name__,) + tuple(getattr(self, f.name) for f in fields(self) if f.compare)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(self._key()))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._h != other._h:
            return False
        return self._key() == other._key()

    def __str__(self):
        return format_prop(self)


def _node(cls):
    cls = dataclass(frozen=True, eq=False)(cls)
    return cls


@_node
class Base(Prop1):
    witnesses: tuple = ()
    _h: int = field(default=0, init=False, compare=False, repr=False)


@_node
class FullA(Prop1):
    _h: int = field(default=0, init=False, compare=False, repr=False)


@_node
class FullSub(Prop1):
    _h: int = field(default=0, init=False, compare=False, repr=False)


@_node
class Imp(Prop1):
    """``ante -> cons``.  Its sample is drawn from ``attached`` candidates
    (plus identity and constant maps when ``canonical``), filtered by test."""

    ante: Prop1
    cons: Prop1
    attached: tuple = ()
    canonical: bool = False
    _h: int = field(default=0, init=False, compare=False, repr=False)


@_node
class Conj(Prop1):
    left: Prop1
    right: Prop1
    _h: int = field(default=0, init=False, compare=False, repr=False)


@_node
class Disj(Prop1):
    left: Prop1
    right: Prop1
    _h: int = field(default=0, init=False, compare=False, repr=False)


@_node
class Inter(Prop1):
    parts: tuple = ()
    _h: int = field(default=0, init=False, compare=False, repr=False)


@_node
class Union(Prop1):
    parts: tuple = ()
    _h: int = field(default=0, init=False, compare=False, repr=False)


FULL_A = FullA()
FULL_SUB = FullSub()
EMPTY = Base(())


def _sorted_terms(ts: Iterable[Term]) -> tuple:
    return tuple(sorted(set(ts), key=term_key))


def base(*terms: Term) -> Base:
    for t in terms:
        if not t.normal:
            raise ValueError(f"witness {t} is not a normal form")
    return Base(_sorted_terms(terms))


def attach_witness(p: Imp, *terms: Term) -> Imp:
    return Imp(p.ante, p.cons, _sorted_terms(p.attached + terms), p.canonical)


# --------------------------------------------------------------------------
# membership and samples

def _ap(f: Term, x: Term, ctx: NestedPca):
    return reduce(App(f, x), ctx.fuel)


@lru_cache(maxsize=1 << 19)
def test(p: Prop1, t: Term, ctx: NestedPca = DEFAULT_CONTEXT) -> Verdict:
    """Three-valued membership of a normal-form term in ``p``."""
    tp = type(p)
    if tp is Base:
        return YES if t in p.witnesses else NO
    if tp is FullA:
        return YES
    if tp is FullSub:
        return YES if t.pure else NO
    if tp is Imp:
        out = YES
        for w in witness_sample(p.ante, ctx):
            r = _ap(t, w, ctx)
            if isinstance(r, FuelExhausted):
                out = UNKNOWN
                continue
            v = test(p.cons, r.term, ctx)
            if v is NO:
                return NO
            out = out & v
        return out
    if tp is Conj:
        r0 = _ap(P0, t, ctx)
        r1 = _ap(P1, t, ctx)
        v0 = UNKNOWN if isinstance(r0, FuelExhausted) else test(p.left, r0.term, ctx)
        if v0 is NO:
            return NO
        v1 = UNKNOWN if isinstance(r1, FuelExhausted) else test(p.right, r1.term, ctx)
        return v0 & v1
    if tp is Disj:
        tag = _ap(P0, t, ctx)
        if isinstance(tag, FuelExhausted):
            return UNKNOWN
        if tag.term is K:
            side = p.left
        elif tag.term is KBAR:
            side = p.right
        else:
            return NO
        r1 = _ap(P1, t, ctx)
        if isinstance(r1, FuelExhausted):
            return UNKNOWN
        return test(side, r1.term, ctx)
    if tp is Inter:
        return meet(test(q, t, ctx) for q in p.parts)
    if tp is Union:
        return join(test(q, t, ctx) for q in p.parts)
    raise TypeError(f"not a proposition: {p!r}")


def _pairs(left: Sequence[Term], right: Sequence[Term], tag_ctx: NestedPca):
    out = []
    for a in left:
        for b in right:
            r = reduce(App(App(PAIR, a), b), tag_ctx.fuel)
            if isinstance(r, NormalForm):
                out.append(r.term)
    return out


@lru_cache(maxsize=1 << 16)
def witness_sample(p: Prop1, ctx: NestedPca = DEFAULT_CONTEXT) -> tuple:
    """A finite, deterministic sample of members of ``p``."""
    tp = type(p)
    if tp is Base:
        return p.witnesses
    if tp is FullA:
        return ctx.full_sample
    if tp is FullSub:
        return tuple(t for t in ctx.full_sample if t.pure)
    if tp is Conj:
        return _dedup(_pairs(witness_sample(p.left, ctx), witness_sample(p.right, ctx), ctx))
    if tp is Disj:
        return _dedup(_pairs((K,), witness_sample(p.left, ctx), ctx)
                      + _pairs((KBAR,), witness_sample(p.right, ctx), ctx))
    if tp is Imp:
        cands = list(p.attached)
        if p.canonical:
            cands.append(I)
            cands.extend(App(K, w) for w in witness_sample(p.cons, ctx))
        return tuple(t for t in _dedup(cands) if test(p, t, ctx) is YES)
    if tp is Inter:
        if not p.parts:
            return ctx.full_sample
        # full parts only filter, unless nothing else supplies candidates
        sources = [q for q in p.parts if type(q) not in (FullA, FullSub)] or p.parts
        cands = _dedup(t for q in sources for t in witness_sample(q, ctx))
        return tuple(t for t in cands if all(test(q, t, ctx) is YES for q in p.parts))
    if tp is Union:
        return _dedup(t for q in p.parts for t in witness_sample(q, ctx))
    raise TypeError(f"not a proposition: {p!r}")


def _dedup(ts: Iterable[Term]) -> tuple:
    seen = set()
    out = []
    for t in ts:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(out)


# --------------------------------------------------------------------------
# nested propositions

@dataclass(frozen=True)
class NestedProp:
    """A pair (potential, actual); actual realizers lie in the sub-algebra."""

    pot: Prop1
    act: Prop1

    def __str__(self):
        return f"({format_prop(self.pot)}, {format_prop(self.act)})"


def nested(pot: Prop1, act: Prop1 | None = None) -> NestedProp:
    """Nested proposition; ``act`` defaults to the pure part of ``pot``."""
    if act is None:
        act = Inter((FULL_SUB, pot))
    return NestedProp(pot, act)


TOP = NestedProp(FULL_A, FULL_SUB)
BOT = NestedProp(EMPTY, EMPTY)


def nconj(a: NestedProp, b: NestedProp) -> NestedProp:
    return NestedProp(Conj(a.pot, b.pot), Conj(a.act, b.act))


def ndisj(a: NestedProp, b: NestedProp) -> NestedProp:
    return NestedProp(Disj(a.pot, b.pot), Disj(a.act, b.act))


def nimp(a: NestedProp, b: NestedProp) -> NestedProp:
    pot = Imp(a.pot, b.pot, canonical=True)
    act = Inter((FULL_SUB, pot, Imp(a.act, b.act, canonical=True)))
    return NestedProp(pot, act)


def eq_prop(x, y) -> NestedProp:
    return TOP if x == y else BOT


def check_containment(n: NestedProp, ctx: NestedPca = DEFAULT_CONTEXT) -> list:
    """Members of the actual sample that are impure or fail the potential level."""
    return [t for t in witness_sample(n.act, ctx)
            if not t.pure or test(n.pot, t, ctx) is not YES]


# --------------------------------------------------------------------------
# predicates

class IndexMismatch(ValueError):
    pass


class NotAPullback(ValueError):
    pass


@dataclass(frozen=True)
class Predicate:
    index: tuple
    at: Mapping

    def __post_init__(self):
        missing = [i for i in self.index if i not in self.at]
        if missing:
            raise ValueError(f"predicate undefined at {missing}")
        object.__setattr__(self, "at", {i: self.at[i] for i in self.index})

    def __getitem__(self, i) -> NestedProp:
        return self.at[i]

    @classmethod
    def of(cls, index: Iterable, fn: Callable | Mapping) -> "Predicate":
        index = tuple(index)
        get = fn.__getitem__ if isinstance(fn, Mapping) else fn
        return cls(index, {i: get(i) for i in index})

    def pointwise(self, other: "Predicate", op) -> "Predicate":
        _same_index(self, other)
        return Predicate(self.index, {i: op(self.at[i], other.at[i]) for i in self.index})

    def map(self, op) -> "Predicate":
        return Predicate(self.index, {i: op(self.at[i]) for i in self.index})


def const_pred(index: Iterable, n: NestedProp) -> Predicate:
    return Predicate.of(index, lambda _: n)


def pconj(a: Predicate, b: Predicate) -> Predicate:
    return a.pointwise(b, nconj)


def pdisj(a: Predicate, b: Predicate) -> Predicate:
    return a.pointwise(b, ndisj)


def pimp(a: Predicate, b: Predicate) -> Predicate:
    return a.pointwise(b, nimp)


def _same_index(a: Predicate, b: Predicate):
    if set(a.index) != set(b.index):
        raise IndexMismatch(f"index sets differ: {a.index} vs {b.index}")


@dataclass
class EntailmentReport:
    holds: Verdict
    realizer: Term | None
    evidence: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "holds": str(self.holds),
            "realizer": None if self.realizer is None else format_term(self.realizer),
            "evidence": {str(k): v for k, v in self.evidence.items()},
            "failures": self.failures,
        }


def _obligations(phi: Predicate, psi: Predicate, ctx: NestedPca):
    _same_index(phi, psi)
    out = []
    for i in phi.index:
        for w in witness_sample(phi.at[i].pot, ctx):
            out.append((i, "pot", w, psi.at[i].pot))
        for w in witness_sample(phi.at[i].act, ctx):
            out.append((i, "act", w, psi.at[i].act))
    return out


def _check(a: Term, w: Term, target: Prop1, ctx: NestedPca) -> Verdict:
    r = reduce(App(a, w), ctx.fuel)
    if isinstance(r, FuelExhausted):
        return UNKNOWN
    return test(target, r.term, ctx)


def entails_verify(phi: Predicate, psi: Predicate, a: Term,
                   ctx: NestedPca = DEFAULT_CONTEXT) -> EntailmentReport:
    """Does the single actual realizer ``a`` witness phi |- psi on every sample?"""
    obligations = _obligations(phi, psi, ctx)
    evidence = {i: {"pass": 0, "fail": 0, "unknown": 0} for i in phi.index}
    failures = []
    verdict = YES if a.pure else NO
    if not a.pure:
        failures.append({"reason": "realizer not in the sub-algebra"})
    for i, level, w, target in obligations:
        v = _check(a, w, target, ctx)
        key = {YES: "pass", NO: "fail", UNKNOWN: "unknown"}[v]
        evidence[i][key] += 1
        if v is not YES:
            failures.append({"index": str(i), "level": level, "witness": format_term(w),
                             "verdict": str(v)})
        verdict = verdict & v
    return EntailmentReport(verdict, a, evidence, failures)


def holds(phi: Predicate, psi: Predicate, a: Term, ctx: NestedPca = DEFAULT_CONTEXT) -> bool:
    """Verdict-only ``entails_verify``: stops at the first failed obligation."""
    if not a.pure:
        return False
    return all(_check(a, w, target, ctx) is YES for _, _, w, target in _obligations(phi, psi, ctx))


def entails_search(phi: Predicate, psi: Predicate, max_size: int = 7,
                   ctx: NestedPca = DEFAULT_CONTEXT, fuel: int | None = None) -> Term | None:
    """First pure-SK term, in enumeration order, realizing phi |- psi.

    ``fuel`` bounds each application during the scan; the winner is
    re-verified at the context's fuel.
    """
    scan = ctx if fuel is None else ctx.with_fuel(fuel)
    obligations = [(w, target) for _, _, w, target in _obligations(phi, psi, ctx)]
    if not obligations:
        return next(iter_subpca(1))
    order = list(range(len(obligations)))
    for a in iter_subpca(max_size):
        ok = True
        for pos, k in enumerate(order):
            w, target = obligations[k]
            if _check(a, w, target, scan) is not YES:
                ok = False
                if pos:
                    order.insert(0, order.pop(pos))
                break
        if ok and (scan is ctx or entails_verify(phi, psi, a, ctx).holds is YES):
            return a
    return None


def equivalent(phi: Predicate, psi: Predicate, max_size: int = 7,
               ctx: NestedPca = DEFAULT_CONTEXT):
    """Realizers for both directions of phi -||- psi (either may be None)."""
    return entails_search(phi, psi, max_size, ctx), entails_search(psi, phi, max_size, ctx)


# --------------------------------------------------------------------------
# reindexing and quantifiers

def reindex(u: Mapping, phi: Predicate) -> Predicate:
    """Precomposition with u : J -> I (u given as a J-indexed mapping)."""
    return Predicate(tuple(u), {j: phi.at[u[j]] for j in u})


def exists_along(u: Mapping, phi: Predicate, codomain: Iterable) -> Predicate:
    codomain = tuple(codomain)
    out = {}
    for i in codomain:
        pre = [j for j in phi.index if u[j] == i]
        if not pre:
            out[i] = BOT
        else:
            out[i] = NestedProp(Union(tuple(phi.at[j].pot for j in pre)),
                                Union(tuple(phi.at[j].act for j in pre)))
    return Predicate(codomain, out)


def forall_along(u: Mapping, phi: Predicate, codomain: Iterable) -> Predicate:
    codomain = tuple(codomain)
    out = {}
    for i in codomain:
        if not phi.index:
            out[i] = TOP
            continue
        parts = [nimp(eq_prop(u[j], i), phi.at[j]) for j in phi.index]
        out[i] = NestedProp(Inter(tuple(p.pot for p in parts)), Inter(tuple(p.act for p in parts)))
    return Predicate(codomain, out)


def generic_family(props: Iterable[NestedProp]) -> Predicate:
    """The identity family on a finite set of nested propositions."""
    props = tuple(dict.fromkeys(props))
    return Predicate(props, {p: p for p in props})


def generic_decompose(phi: Predicate) -> dict:
    """The classifying map of phi into the generic family."""
    return dict(phi.at)


# --------------------------------------------------------------------------
# Beck-Chevalley

@dataclass(frozen=True)
class PullbackSquare:
    """P --vp--> K
       |w        |u
       J --v---> I
    """

    P: tuple
    K: tuple
    J: tuple
    I: tuple
    vp: Mapping
    w: Mapping
    u: Mapping
    v: Mapping

    def validate(self):
        for x in self.P:
            if self.u[self.vp[x]] != self.v[self.w[x]]:
                raise NotAPullback(f"square does not commute at {x!r}")
        canon = [(k, j) for k in self.K for j in self.J if self.u[k] == self.v[j]]
        image = [(self.vp[x], self.w[x]) for x in self.P]
        if len(set(image)) != len(image) or set(image) != set(canon):
            raise NotAPullback("comparison map to the pullback is not a bijection")


def pullback_square(u: Mapping, v: Mapping, K: Iterable, J: Iterable, I: Iterable) -> PullbackSquare:
    K, J, I = tuple(K), tuple(J), tuple(I)
    P = tuple((k, j) for k in K for j in J if u[k] == v[j])
    return PullbackSquare(P, K, J, I, {x: x[0] for x in P}, {x: x[1] for x in P}, dict(u), dict(v))


def beck_chevalley_check(sq: PullbackSquare, phi: Predicate, max_size: int = 7,
                         ctx: NestedPca = DEFAULT_CONTEXT) -> dict:
    sq.validate()
    out = {}
    lhs = reindex(sq.u, exists_along(sq.v, phi, sq.I))
    rhs = exists_along(sq.vp, reindex(sq.w, phi), sq.K)
    out["exists"] = equivalent(lhs, rhs, max_size, ctx)
    lhs = reindex(sq.u, forall_along(sq.v, phi, sq.I))
    rhs = forall_along(sq.vp, reindex(sq.w, phi), sq.K)
    out["forall"] = equivalent(lhs, rhs, max_size, ctx)
    return out


# --------------------------------------------------------------------------
# printing / serialization

def format_prop(p: Prop1) -> str:
    tp = type(p)
    if tp is Base:
        return "base {" + ", ".join(format_term(t) for t in p.witnesses) + "}"
    if tp is FullA:
        return "full"
    if tp is FullSub:
        return "fullsub"
    if tp is Imp:
        return f"({format_prop(p.ante)} -> {format_prop(p.cons)})"
    if tp is Conj:
        return f"({format_prop(p.left)} /\\ {format_prop(p.right)})"
    if tp is Disj:
        return f"({format_prop(p.left)} \\/ {format_prop(p.right)})"
    name = "inter" if tp is Inter else "union"
    return name + "[" + ", ".join(format_prop(q) for q in p.parts) + "]"


def prop_to_json(p: Prop1):
    tp = type(p)
    if tp is Base:
        return {"base": [format_term(t) for t in p.witnesses]}
    if tp is FullA:
        return "full"
    if tp is FullSub:
        return "fullsub"
    if tp is Imp:
        d = {"imp": [prop_to_json(p.ante), prop_to_json(p.cons)]}
        if p.attached:
            d["attached"] = [format_term(t) for t in p.attached]
        return d
    if tp in (Conj, Disj):
        return {tp.__name__.lower(): [prop_to_json(p.left), prop_to_json(p.right)]}
    return {tp.__name__.lower(): [prop_to_json(q) for q in p.parts]}


def nested_to_json(n: NestedProp) -> dict:
    return {"pot": prop_to_json(n.pot), "act": prop_to_json(n.act)}
