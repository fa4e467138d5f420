"""The subterminal u = (A, {}), its open and closed closure operators, the
relative and modified triposes, and pointwise sheafification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .combinators import CASE, DEFAULT_CONTEXT, KBAR, P0, P1, PAIR, I, NestedPca, normal
from .lam import Const, LApp, Var, compile, lam, lapp
from .logic import (
    BOT, EMPTY, FULL_A, FULL_SUB, NO, TOP, UNKNOWN, YES, Base, EntailmentReport, Inter,
    NestedProp, Predicate, Prop1, Verdict, _same_index, entails_search, entails_verify,
    nconj, ndisj, nimp, test, witness_sample,
)
from .pca import App, FuelExhausted, K, Term, format_term, iter_subpca, reduce

__all__ = [
    "U", "SubterminalU", "ClosureOperator", "OPEN", "CLOSED", "apply_closure",
    "j_laws_check", "RelPredicate", "entails_rel", "embed_relative",
    "ModPredicate", "mod_validate", "mod_connect", "sheafify", "complementarity_realizer",
    "closure_by_name",
]

U = NestedProp(FULL_A, EMPTY)


@dataclass(frozen=True)
class SubterminalU:
    prop: NestedProp = U

    def check(self, ctx: NestedPca = DEFAULT_CONTEXT) -> bool:
        pot_ok = all(test(self.prop.pot, t, ctx) is YES for t in ctx.full_sample)
        act_ok = all(test(self.prop.act, t, ctx) is NO for t in ctx.full_sample)
        return pot_ok and act_ok


def _c(e) -> Term:
    return normal(compile(e))


v = Var
_INL = normal(App(PAIR, K))
_INR = normal(App(PAIR, KBAR))


def _case(z, f, g):
    return lapp(Const(CASE), z, f, g)


def _open_realizers() -> dict:
    return {
        "unit": _c(lam("x d", v("x"))),
        "mult": _c(lam("t d", lapp(v("t"), v("d"), v("d")))),
        "meet_split": _c(lam("t", lapp(
            Const(PAIR),
            lam("d", LApp(Const(P0), LApp(v("t"), v("d")))),
            lam("d", LApp(Const(P1), LApp(v("t"), v("d"))))))),
        "meet_join": _c(lam("z d", lapp(
            Const(PAIR),
            lapp(Const(P0), v("z"), v("d")),
            lapp(Const(P1), v("z"), v("d"))))),
    }


def _closed_realizers() -> dict:
    inl, inr = Const(_INL), Const(_INR)
    return {
        "unit": _INR,
        "mult": _c(lam("z", _case(v("z"), inl, lam("y", v("y"))))),
        "meet_split": _c(lam("z", _case(
            v("z"),
            lam("a", lapp(Const(PAIR), LApp(inl, v("a")), LApp(inl, v("a")))),
            lam("y", lapp(Const(PAIR),
                          LApp(inr, LApp(Const(P0), v("y"))),
                          LApp(inr, LApp(Const(P1), v("y")))))))),
        "meet_join": _c(lam("z", _case(
            LApp(Const(P0), v("z")),
            inl,
            lam("y1", _case(
                LApp(Const(P1), v("z")),
                inl,
                lam("y2", LApp(inr, lapp(Const(PAIR), v("y1"), v("y2"))))))))),
    }


@dataclass(frozen=True)
class ClosureOperator:
    """``open`` sends p to u -> p, ``closed`` sends p to u \\/ p."""

    kind: str
    carrier: SubterminalU = field(default_factory=SubterminalU)

    def __post_init__(self):
        if self.kind not in ("open", "closed"):
            raise ValueError(f"unknown closure kind {self.kind!r}")

    def __call__(self, p: NestedProp) -> NestedProp:
        u = self.carrier.prop
        return nimp(u, p) if self.kind == "open" else ndisj(u, p)

    @property
    def realizers(self) -> dict:
        return _REALIZERS[self.kind]

    def fmap(self, c: Term) -> Term:
        """Realizer of j(p) |- j(q) from a realizer c of p |- q."""
        if self.kind == "open":
            e = lam("t d", LApp(Const(c), LApp(v("t"), v("d"))))
        else:
            e = lam("z", _case(v("z"), Const(_INL),
                               lam("x", LApp(Const(_INR), LApp(Const(c), v("x"))))))
        return _c(e)

    def __str__(self):
        return self.kind


_REALIZERS = {"open": _open_realizers(), "closed": _closed_realizers()}
OPEN = ClosureOperator("open")
CLOSED = ClosureOperator("closed")


def closure_by_name(name: str) -> ClosureOperator:
    return {"open": OPEN, "closed": CLOSED}[name]


def apply_closure(j: ClosureOperator, p):
    if isinstance(p, Predicate):
        return p.map(j)
    return j(p)


def sheafify(j: ClosureOperator, phi: Predicate) -> Predicate:
    return phi.map(j)


def complementarity_realizer() -> Term:
    """Realizer of o_u(p) /\\ c_u(p) |- p."""
    return _c(lam("z", _case(
        LApp(Const(P1), v("z")),
        lam("a", LApp(LApp(Const(P0), v("z")), v("a"))),
        lam("x", v("x")))))


def _law(name, phi, psi, realizer, ctx, max_size):
    rep = entails_verify(phi, psi, realizer, ctx)
    entry = {"law": name, "realizer": format_term(realizer), "verdict": str(rep.holds)}
    if rep.holds is not YES and max_size:
        found = entails_search(phi, psi, max_size, ctx)
        entry["searched"] = None if found is None else format_term(found)
        if found is not None:
            entry["verdict"] = "Yes"
    return entry


def j_laws_check(j: ClosureOperator, samples: Iterable[tuple], ctx: NestedPca = DEFAULT_CONTEXT,
                 max_size: int = 0) -> dict:
    """Local-operator laws on sample pairs (phi, psi) of predicates.

    Each law is verified with its library realizer; when ``max_size`` is
    positive a failing law falls back to brute-force search.
    """
    r = j.realizers
    laws = []
    for phi, psi in samples:
        jp = sheafify(j, phi)
        conj = phi.pointwise(psi, nconj)
        laws.append(_law("inflation", phi, jp, r["unit"], ctx, max_size))
        laws.append(_law("idempotence", sheafify(j, jp), jp, r["mult"], ctx, max_size))
        j_conj = sheafify(j, conj)
        conj_j = jp.pointwise(sheafify(j, psi), nconj)
        laws.append(_law("meet_split", j_conj, conj_j, r["meet_split"], ctx, max_size))
        laws.append(_law("meet_join", conj_j, j_conj, r["meet_join"], ctx, max_size))
        # monotonicity on the entailed pair phi /\ psi |- phi
        laws.append(_law("monotone", j_conj, jp, j.fmap(P0), ctx, max_size))
    failures = [x for x in laws if x["verdict"] != "Yes"]
    return {"operator": j.kind, "checked": len(laws), "failures": failures, "laws": laws}


# --------------------------------------------------------------------------
# relative tripos

@dataclass(frozen=True)
class RelPredicate:
    index: tuple
    at: Mapping

    def __post_init__(self):
        object.__setattr__(self, "at", {i: self.at[i] for i in self.index})

    @classmethod
    def of(cls, index, fn) -> "RelPredicate":
        index = tuple(index)
        return cls(index, {i: fn(i) for i in index})


def entails_rel(phi: RelPredicate, psi: RelPredicate, a: Term,
                ctx: NestedPca = DEFAULT_CONTEXT) -> EntailmentReport:
    _same_index(phi, psi)
    verdict = YES if a.pure else NO
    evidence = {i: {"pass": 0, "fail": 0, "unknown": 0} for i in phi.index}
    failures = [] if a.pure else [{"reason": "realizer not in the sub-algebra"}]
    for i in phi.index:
        for w in witness_sample(phi.at[i], ctx):
            r = reduce(App(a, w), ctx.fuel)
            vd = UNKNOWN if isinstance(r, FuelExhausted) else test(psi.at[i], r.term, ctx)
            evidence[i][{YES: "pass", NO: "fail", UNKNOWN: "unknown"}[vd]] += 1
            if vd is not YES:
                failures.append({"index": str(i), "witness": format_term(w), "verdict": str(vd)})
            verdict = verdict & vd
    return EntailmentReport(verdict, a, evidence, failures)


def embed_relative(phi: RelPredicate) -> Predicate:
    return Predicate(phi.index, {i: NestedProp(p, Inter((FULL_SUB, p))) for i, p in phi.at.items()})


# --------------------------------------------------------------------------
# modified tripos

@dataclass(frozen=True)
class ModPredicate:
    pred: Predicate
    global_witness: Term
    closed_inserted: bool = False

    def __post_init__(self):
        if not self.global_witness.pure:
            raise ValueError("global witness must lie in the sub-algebra")


def _is_global(t: Term, phi: Predicate, ctx: NestedPca) -> bool:
    return t.pure and all(test(phi.at[i].pot, t, ctx) is YES for i in phi.index)


def mod_validate(phi: Predicate, max_size: int = 5,
                 ctx: NestedPca = DEFAULT_CONTEXT) -> ModPredicate | None:
    """Find a pure term lying in every potential fibre.

    Candidates from the fibres' own samples are tried first, then all
    pure terms up to ``max_size``.
    """
    if not phi.index:
        return ModPredicate(phi, I)
    seen = set()
    for i in phi.index:
        for t in witness_sample(phi.at[i].pot, ctx):
            if t not in seen:
                seen.add(t)
                if _is_global(t, phi, ctx):
                    return ModPredicate(phi, t)
    for t in iter_subpca(max_size):
        if t not in seen and _is_global(t, phi, ctx):
            return ModPredicate(phi, t)
    return None


_CONNECTIVES = {"and": nconj, "or": ndisj, "imp": nimp}


def mod_connect(op: str, phi: ModPredicate, psi: ModPredicate,
                ctx: NestedPca = DEFAULT_CONTEXT) -> ModPredicate:
    """A connective of the modified tripos.

    The plain connective is used when it keeps a global potential witness;
    otherwise c_u is inserted.  Conjunction never needs the insertion.
    """
    fn = _CONNECTIVES[op]
    raw = phi.pred.pointwise(psi.pred, fn)
    if op == "and":
        w = normal(App(App(PAIR, phi.global_witness), psi.global_witness))
        if _is_global(w, raw, ctx):
            return ModPredicate(raw, w)
    elif op == "or":
        w = normal(App(_INL, phi.global_witness))
        if _is_global(w, raw, ctx):
            return ModPredicate(raw, w)
    found = mod_validate(raw, ctx=ctx)
    if found is not None:
        return found
    closed = sheafify(CLOSED, raw)
    out = mod_validate(closed, ctx=ctx)
    assert out is not None, "c_u-closed predicates always have a global witness"
    return ModPredicate(closed, out.global_witness, True)


def collapse_realizer(m: ModPredicate) -> Term:
    """Realizer of c_u(phi) |- phi for phi in the modified fibre."""
    return _c(lam("z", _case(v("z"), Const(App(K, m.global_witness)), lam("x", v("x")))))


__all__.append("collapse_realizer")
