"""Finite assemblies and tracked maps.

An assembly is a finite carrier with an existence proposition for every
element; a map is a function on carriers together with a pure tracker that
realizes ``E_X |- f*E_Y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Mapping, Sequence

from .combinators import CASE, DEFAULT_CONTEXT, KBAR, P0, P1, PAIR, I, NestedPca, compose as tcompose
from .combinators import normal, pairing, standard_realizer
from .lam import Const, LApp, Var, compile, lam, lapp
from .logic import (
    BOT, NO, TOP, UNKNOWN, YES, Base, Conj, EntailmentReport, FULL_A, Imp, Inter, FULL_SUB,
    NestedProp, Predicate, Verdict, base, entails_search, entails_verify, exists_along, holds,
    forall_along, nconj, ndisj, nimp, pconj, pdisj, pimp, reindex, witness_sample,
    nested_to_json,
)
from .pca import App, K, Term, format_term, iter_subpca

__all__ = [
    "Assembly", "AsmMap", "EmptyExistence", "NotAMono", "UniverseTooSmall",
    "verify_map", "check_map", "compose", "identity", "terminal", "initial", "terminal_map",
    "product", "pair_map", "equalizer", "pullback", "sum_", "copair", "exponential",
    "evaluation", "transpose", "Exponential", "find_tracker", "is_cover", "CoverReport",
    "is_mono", "is_iso", "prop_objects", "PropObjects", "classify", "weak_power", "WeakPower",
    "subobject", "SubLogic", "sub_logic", "image_factorization", "label_str", "assembly_to_json",
    "map_to_json", "fiber",
]


class EmptyExistence(ValueError):
    pass


class NotAMono(ValueError):
    pass


class UniverseTooSmall(LookupError):
    pass


def label_str(x) -> str:
    if isinstance(x, NestedProp):
        return str(x)
    if isinstance(x, Assembly):
        return x.name or f"<assembly {len(x.carrier)}>"
    if isinstance(x, tuple):
        return "(" + ", ".join(label_str(y) for y in x) + ")"
    return str(x)


@dataclass(frozen=True, eq=False)
class Assembly:
    carrier: tuple
    existence: Mapping
    name: str = ""
    _key: tuple = field(default=(), init=False, repr=False)

    def __post_init__(self):
        carrier = tuple(self.carrier)
        if len(set(carrier)) != len(carrier):
            raise ValueError("carrier has duplicate labels")
        ex = {x: self.existence[x] for x in carrier}
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "existence", ex)
        object.__setattr__(self, "_key", (carrier, tuple(ex[x] for x in carrier)))

    def validate(self, ctx: NestedPca = DEFAULT_CONTEXT) -> "Assembly":
        empty = [x for x in self.carrier if not witness_sample(self.existence[x].pot, ctx)]
        if empty:
            raise EmptyExistence(f"elements without potential realizers: {empty}")
        return self

    def E(self, x) -> NestedProp:
        return self.existence[x]

    def as_predicate(self) -> Predicate:
        return Predicate(self.carrier, self.existence)

    def __len__(self):
        return len(self.carrier)

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        return isinstance(other, Assembly) and self._key == other._key

    def __repr__(self):
        return f"Assembly({self.name or label_str(self.carrier)})"


def assembly(carrier: Iterable, existence, name: str = "", ctx: NestedPca = DEFAULT_CONTEXT) -> Assembly:
    carrier = tuple(carrier)
    get = existence.__getitem__ if isinstance(existence, Mapping) else existence
    return Assembly(carrier, {x: get(x) for x in carrier}, name).validate(ctx)


__all__.append("assembly")


@dataclass(frozen=True, eq=False)
class AsmMap:
    source: Assembly
    target: Assembly
    graph: Mapping
    tracker: Term
    name: str = ""

    def __post_init__(self):
        g = {x: self.graph[x] for x in self.source.carrier}
        for x, y in g.items():
            if y not in self.target.existence:
                raise ValueError(f"graph sends {x!r} outside the target carrier")
        object.__setattr__(self, "graph", g)

    def __call__(self, x):
        return self.graph[x]

    def __repr__(self):
        return f"AsmMap({self.name or '?'}: {self.source!r} -> {self.target!r})"


def verify_map(f: AsmMap, ctx: NestedPca = DEFAULT_CONTEXT) -> EntailmentReport:
    return entails_verify(f.source.as_predicate(), reindex(f.graph, f.target.as_predicate()),
                          f.tracker, ctx)


def check_map(f: AsmMap, ctx: NestedPca = DEFAULT_CONTEXT) -> AsmMap:
    rep = verify_map(f, ctx)
    if rep.holds is not YES:
        raise ValueError(f"tracker {format_term(f.tracker)} does not verify: {rep.failures[:3]}")
    return f


def find_tracker(X: Assembly, Y: Assembly, graph: Mapping, hints: Sequence[Term] = (),
                 max_size: int = 5, ctx: NestedPca = DEFAULT_CONTEXT) -> Term | None:
    """First verifying tracker: the hints in order, then brute-force search."""
    phi = X.as_predicate()
    psi = reindex({x: graph[x] for x in X.carrier}, Y.as_predicate())
    for h in hints:
        if holds(phi, psi, h, ctx):
            return h
    if max_size <= 0:
        return None
    return entails_search(phi, psi, max_size, ctx)


def identity(X: Assembly) -> AsmMap:
    return AsmMap(X, X, {x: x for x in X.carrier}, I, "id")


def compose(g: AsmMap, f: AsmMap) -> AsmMap:
    """g . f"""
    if f.target != g.source:
        raise ValueError("maps are not composable")
    return AsmMap(f.source, g.target, {x: g.graph[f.graph[x]] for x in f.source.carrier},
                  tcompose(g.tracker, f.tracker))


def fiber(f: AsmMap, y) -> tuple:
    return tuple(x for x in f.source.carrier if f.graph[x] == y)


def is_mono(f: AsmMap) -> bool:
    vals = list(f.graph.values())
    return len(set(vals)) == len(vals)


# --------------------------------------------------------------------------
# limits

TERMINAL = Assembly(("*",), {"*": TOP}, "1")
INITIAL = Assembly((), {}, "0")


def terminal() -> Assembly:
    return TERMINAL


def initial() -> Assembly:
    return INITIAL


def terminal_map(X: Assembly) -> AsmMap:
    return AsmMap(X, TERMINAL, {x: "*" for x in X.carrier}, I, "!")


def initial_map(X: Assembly) -> AsmMap:
    return AsmMap(INITIAL, X, {}, I, "0")


__all__.append("initial_map")


@dataclass(frozen=True)
class Product:
    obj: Assembly
    fst: AsmMap
    snd: AsmMap


def product(X: Assembly, Y: Assembly) -> Product:
    carrier = tuple(cartesian(X.carrier, Y.carrier))
    P = Assembly(carrier, {(x, y): nconj(X.E(x), Y.E(y)) for x, y in carrier},
                 f"{X.name}x{Y.name}" if X.name and Y.name else "")
    return Product(P, AsmMap(P, X, {c: c[0] for c in carrier}, P0, "fst"),
                   AsmMap(P, Y, {c: c[1] for c in carrier}, P1, "snd"))


def pair_map(f: AsmMap, g: AsmMap, prod: Product | None = None) -> AsmMap:
    """The mediating map <f, g> : Z -> X x Y."""
    if f.source != g.source:
        raise ValueError("pairing needs a common source")
    prod = prod or product(f.target, g.target)
    return AsmMap(f.source, prod.obj, {z: (f.graph[z], g.graph[z]) for z in f.source.carrier},
                  pairing(f.tracker, g.tracker))


def equalizer(f: AsmMap, g: AsmMap) -> AsmMap:
    if f.source != g.source or f.target != g.target:
        raise ValueError("equalizer needs a parallel pair")
    X = f.source
    carrier = tuple(x for x in X.carrier if f.graph[x] == g.graph[x])
    Eq = Assembly(carrier, {x: X.E(x) for x in carrier})
    return AsmMap(Eq, X, {x: x for x in carrier}, I, "eq")


@dataclass(frozen=True)
class Pullback:
    obj: Assembly
    fst: AsmMap  # to the source of f
    snd: AsmMap  # to the source of g


def pullback(f: AsmMap, g: AsmMap) -> Pullback:
    """Pullback of f : X -> Z and g : Y -> Z."""
    if f.target != g.target:
        raise ValueError("pullback needs a common codomain")
    X, Y = f.source, g.source
    carrier = tuple((x, y) for x in X.carrier for y in Y.carrier if f.graph[x] == g.graph[y])
    P = Assembly(carrier, {(x, y): nconj(X.E(x), Y.E(y)) for x, y in carrier})
    return Pullback(P, AsmMap(P, X, {c: c[0] for c in carrier}, P0),
                    AsmMap(P, Y, {c: c[1] for c in carrier}, P1))


# --------------------------------------------------------------------------
# sums

TAG_L = NestedProp(Base((K,)), Base((K,)))
TAG_R = NestedProp(Base((KBAR,)), Base((KBAR,)))
INL = normal(App(PAIR, K))
INR = normal(App(PAIR, KBAR))


@dataclass(frozen=True)
class Sum:
    obj: Assembly
    inl: AsmMap
    inr: AsmMap


def sum_(X: Assembly, Y: Assembly) -> Sum:
    carrier = tuple(("inl", x) for x in X.carrier) + tuple(("inr", y) for y in Y.carrier)
    ex = {("inl", x): nconj(TAG_L, X.E(x)) for x in X.carrier}
    ex.update({("inr", y): nconj(TAG_R, Y.E(y)) for y in Y.carrier})
    S_ = Assembly(carrier, ex, f"{X.name}+{Y.name}" if X.name and Y.name else "")
    return Sum(S_, AsmMap(X, S_, {x: ("inl", x) for x in X.carrier}, INL, "inl"),
               AsmMap(Y, S_, {y: ("inr", y) for y in Y.carrier}, INR, "inr"))


def copair(f: AsmMap, g: AsmMap, s: Sum | None = None) -> AsmMap:
    if f.target != g.target:
        raise ValueError("copairing needs a common target")
    s = s or sum_(f.source, g.source)
    graph = {("inl", x): f.graph[x] for x in f.source.carrier}
    graph.update({("inr", y): g.graph[y] for y in g.source.carrier})
    tracker = normal(compile(lam("z", lapp(Const(CASE), Var("z"), Const(f.tracker), Const(g.tracker)))))
    return AsmMap(s.obj, f.target, graph, tracker, "copair")


# --------------------------------------------------------------------------
# exponentials

def fn_label(X: Assembly, f: Mapping) -> tuple:
    return tuple((x, f[x]) for x in X.carrier)


def _exp_existence(X: Assembly, Y: Assembly, f: Mapping, trackers: Sequence[Term]) -> NestedProp:
    trackers = tuple(trackers)
    pots = tuple(Imp(X.E(x).pot, Y.E(f[x]).pot, trackers) for x in X.carrier)
    acts = tuple(Imp(X.E(x).act, Y.E(f[x]).act, trackers) for x in X.carrier)
    if not X.carrier:
        # the empty product of implications: anything, but only pure actually
        return NestedProp(Base(trackers), Base(trackers))
    pot = Inter(pots)
    return NestedProp(pot, Inter((FULL_SUB, pot) + acts))


@dataclass(frozen=True)
class Exponential:
    obj: Assembly
    base: Assembly  # X
    cod: Assembly   # Y
    trackers: Mapping  # carrier label -> tracker found
    missing: tuple  # functions with no tracker found at the search depth

    def function(self, label) -> dict:
        return dict(label)


EVAL_TRACKER = normal(compile(lam("w", LApp(LApp(Const(P0), Var("w")), LApp(Const(P1), Var("w"))))))


def exponential(X: Assembly, Y: Assembly, max_size: int = 4, hints: Sequence[Term] = (),
                ctx: NestedPca = DEFAULT_CONTEXT) -> Exponential:
    """Y^X on the functions for which a tracker was found."""
    points, trackers, missing = [], {}, []
    default_hints = [I, App(K, K), P0, P1, standard_realizer("const_kbar")]
    # constant trackers for every pure potential witness of the codomain
    for y in Y.carrier:
        for w in witness_sample(Y.E(y).act, ctx):
            if App(K, w) not in default_hints:
                default_hints.append(App(K, w))
    default_hints = tuple(default_hints)
    for values in cartesian(Y.carrier, repeat=len(X.carrier)):
        f = dict(zip(X.carrier, values))
        t = find_tracker(X, Y, f, tuple(hints) + default_hints, max_size, ctx)
        lab = fn_label(X, f)
        if t is None:
            missing.append(lab)
            continue
        points.append(lab)
        trackers[lab] = t
    ex = {lab: _exp_existence(X, Y, dict(lab), (trackers[lab],)) for lab in points}
    name = f"{Y.name}^{X.name}" if X.name and Y.name else ""
    return Exponential(Assembly(tuple(points), ex, name), X, Y, trackers, tuple(missing))


def evaluation(E: Exponential) -> AsmMap:
    prod = product(E.obj, E.base)
    graph = {(f, x): dict(f)[x] for f, x in prod.obj.carrier}
    return AsmMap(prod.obj, E.cod, graph, EVAL_TRACKER, "ev")


def transpose(g: AsmMap, Z: Assembly, E: Exponential) -> AsmMap | None:
    """Transpose of g : Z x X -> Y, or None when some transposed point is not
    a found point of the exponential."""
    X = E.base
    graph = {}
    for z in Z.carrier:
        lab = fn_label(X, {x: g.graph[(z, x)] for x in X.carrier})
        if lab not in E.obj.existence:
            return None
        graph[z] = lab
    tracker = normal(compile(lam("z x", LApp(Const(g.tracker), lapp(Const(PAIR), Var("z"), Var("x"))))))
    return AsmMap(Z, E.obj, graph, tracker, "transpose")


# --------------------------------------------------------------------------
# subobjects and their logic

def subobject(X: Assembly, phi: Predicate, ctx: NestedPca = DEFAULT_CONTEXT) -> AsmMap:
    """The mono {x | phi(x)} >-> X with E(x) = E_X(x) /\\ phi(x)."""
    carrier = tuple(x for x in X.carrier
                    if witness_sample(nconj(X.E(x), phi.at[x]).pot, ctx))
    S_ = Assembly(carrier, {x: nconj(X.E(x), phi.at[x]) for x in carrier})
    return AsmMap(S_, X, {x: x for x in carrier}, P0, "incl")


@dataclass(frozen=True)
class SubLogic:
    """Fibrewise logic on predicates over a carrier, with quantifiers along graphs."""

    X: Assembly

    def top(self) -> Predicate:
        return Predicate(self.X.carrier, {x: TOP for x in self.X.carrier})

    def bottom(self) -> Predicate:
        return Predicate(self.X.carrier, {x: BOT for x in self.X.carrier})

    def meet(self, a, b):
        return pconj(a, b)

    def join(self, a, b):
        return pdisj(a, b)

    def imp(self, a, b):
        return pimp(a, b)

    def pull(self, f: AsmMap, psi: Predicate) -> Predicate:
        return reindex(f.graph, psi)

    def quantify(self, f: AsmMap, phi: Predicate, mode: str) -> Predicate:
        if mode == "exists":
            return exists_along(f.graph, phi, f.target.carrier)
        if mode == "forall":
            return forall_along(f.graph, phi, f.target.carrier)
        raise ValueError(f"unknown quantifier {mode!r}")


def sub_logic(X: Assembly) -> SubLogic:
    return SubLogic(X)


# --------------------------------------------------------------------------
# covers, isos, image factorization

@dataclass
class CoverReport:
    verdict: Verdict
    lifting: Term | None
    reason: str = ""

    def __bool__(self):
        return self.verdict is YES


def is_cover(f: AsmMap, max_size: int = 5, hints: Sequence[Term] = (),
             ctx: NestedPca = DEFAULT_CONTEXT) -> CoverReport:
    """Surjective graph plus a pure lifting term: E_Y |- exists_f E_X."""
    X, Y = f.source, f.target
    image = set(f.graph.values())
    if any(y not in image for y in Y.carrier):
        return CoverReport(NO, None, "graph not surjective")
    phi = Y.as_predicate()
    psi = exists_along(f.graph, X.as_predicate(), Y.carrier)
    for h in tuple(hints) + (I,):
        if holds(phi, psi, h, ctx):
            return CoverReport(YES, h)
    if max_size > 0:
        a = entails_search(phi, psi, max_size, ctx)
        if a is not None:
            return CoverReport(YES, a)
    return CoverReport(UNKNOWN, None, f"no lifting term found up to size {max_size}")


def is_iso(f: AsmMap, hints: Sequence[Term] = (), max_size: int = 5,
           ctx: NestedPca = DEFAULT_CONTEXT) -> Term | None:
    """A tracker for the inverse graph when f is a bijection, else None."""
    if not is_mono(f) or set(f.graph.values()) != set(f.target.carrier):
        return None
    inv = {y: x for x, y in f.graph.items()}
    return find_tracker(f.target, f.source, inv, tuple(hints) + (I, P0, P1), max_size, ctx)


def image_factorization(f: AsmMap) -> tuple:
    """f = m . e with e a cover (tracked by i) onto the image and m a mono."""
    X, Y = f.source, f.target
    img = tuple(y for y in Y.carrier if any(f.graph[x] == y for x in X.carrier))
    ex = {y: NestedProp(_union([X.E(x).pot for x in fiber(f, y)]),
                        _union([X.E(x).act for x in fiber(f, y)])) for y in img}
    Im = Assembly(img, ex)
    e = AsmMap(X, Im, dict(f.graph), I, "e")
    m = AsmMap(Im, Y, {y: y for y in img}, f.tracker, "m")
    return e, m


def _union(parts):
    from .logic import Union
    return parts[0] if len(parts) == 1 else Union(tuple(parts))


# --------------------------------------------------------------------------
# the generic mono and weak power objects

@dataclass(frozen=True)
class PropObjects:
    Prop: Assembly
    Tr: Assembly
    top: AsmMap


CONST_K = standard_realizer("const_k")


def prop_objects(universe: Iterable[NestedProp], ctx: NestedPca = DEFAULT_CONTEXT) -> PropObjects:
    props = tuple(dict.fromkeys(universe))
    Prop = Assembly(props, {a: TOP for a in props}, "Prop")
    tr = tuple(a for a in props if witness_sample(a.pot, ctx))
    Tr = Assembly(tr, {a: a for a in tr}, "Tr")
    return PropObjects(Prop, Tr, AsmMap(Tr, Prop, {a: a for a in tr}, CONST_K, "top"))


def _need(universe: PropObjects, p: NestedProp) -> NestedProp:
    if p not in universe.Prop.existence:
        raise UniverseTooSmall(f"proposition {p} is not registered")
    return p


def classify(m: AsmMap, universe: PropObjects) -> AsmMap:
    """The characteristic map X -> Prop of a mono S >-> X."""
    if not is_mono(m):
        raise NotAMono("classify needs an injective graph")
    X, S_ = m.target, m.source
    inv = {y: s for s, y in m.graph.items()}
    graph = {}
    for x in X.carrier:
        if x not in inv:
            graph[x] = _need(universe, BOT)
        elif S_.E(inv[x]) == X.E(x):
            graph[x] = _need(universe, TOP)
        else:
            graph[x] = _need(universe, S_.E(inv[x]))
    return AsmMap(X, universe.Prop, graph, CONST_K, "chi")


def classify_check(m: AsmMap, universe: PropObjects, ctx: NestedPca = DEFAULT_CONTEXT) -> dict:
    """Pull top back along the characteristic map and compare with m."""
    chi = classify(m, universe)
    pb = pullback(chi, universe.top)
    # pb.obj carrier: (x, A) with chi(x) = A inhabited
    to_m = {c: c[0] for c in pb.obj.carrier}
    inv_m = {y: s for s, y in m.graph.items()}
    ok_carrier = set(to_m.values()) == set(m.graph.values()) and len(to_m) == len(m.graph)
    out = {"verdict": "No", "chi": {label_str(x): str(a) for x, a in chi.graph.items()}}
    if not ok_carrier:
        out["reason"] = "pullback carrier differs from the image of m"
        return out
    fwd_graph = {c: inv_m[c[0]] for c in pb.obj.carrier}
    back_graph = {s: (m.graph[s], chi.graph[m.graph[s]]) for s in m.source.carrier}
    hints_fwd = (P1, normal(App(App(standard_realizer("comp"), m.tracker), P0)), P0)
    pair_self = pairing(m.tracker, I)
    hints_back = (pairing(m.tracker, CONST_K), pair_self, pairing(m.tracker, App(K, I)))
    t1 = find_tracker(pb.obj, m.source, fwd_graph, hints_fwd, 0, ctx)
    t2 = find_tracker(m.source, pb.obj, back_graph, hints_back, 0, ctx)
    out["forward"] = None if t1 is None else format_term(t1)
    out["backward"] = None if t2 is None else format_term(t2)
    out["verdict"] = "Yes" if t1 is not None and t2 is not None else "No"
    return out


__all__.append("classify_check")


@dataclass(frozen=True)
class WeakPower:
    PX: Exponential
    props: PropObjects
    membership: AsmMap  # mono into PX x X
    ev: AsmMap


def weak_power(X: Assembly, universe: PropObjects, ctx: NestedPca = DEFAULT_CONTEXT) -> WeakPower:
    PX = exponential(X, universe.Prop, max_size=0, hints=(CONST_K, App(K, CONST_K)), ctx=ctx)
    if PX.missing:
        raise UniverseTooSmall("some functions into Prop had no tracker")
    ev = evaluation(PX)
    pb = pullback(ev, universe.top)
    mem_obj = pb.obj
    membership = AsmMap(mem_obj, ev.source, {c: c[0] for c in mem_obj.carrier}, P0, "member")
    return WeakPower(PX, universe, membership, ev)


def weak_classify(R: AsmMap, Y: Assembly, X: Assembly, wp: WeakPower,
                  ctx: NestedPca = DEFAULT_CONTEXT) -> dict:
    """Recover a relation mono R >-> Y x X from a graph Y -> PX.

    The graph sends y to x |-> chi_R(y, x); pulling the membership mono back
    along g x id must give R up to isomorphism.
    """
    chi = classify(R, wp.props)
    g = {}
    for y in Y.carrier:
        lab = fn_label(X, {x: chi.graph[(y, x)] for x in X.carrier})
        if lab not in wp.PX.obj.existence:
            return {"verdict": "No", "reason": f"no point of PX for {label_str(y)}"}
        g[y] = lab
    # fibre of membership over (g y, x) is nonempty iff chi_R(y, x) is inhabited
    recovered = {(y, x) for y in Y.carrier for x in X.carrier
                 if ((g[y], x), chi.graph[(y, x)]) in wp.membership.source.existence}
    image = set(R.graph.values())
    inhabited_image = {yx for yx in image}
    ok = recovered == inhabited_image
    return {"verdict": "Yes" if ok else "No",
            "graph": {label_str(y): label_str(g[y]) for y in Y.carrier},
            "recovered": sorted(label_str(p) for p in recovered)}


__all__.append("weak_classify")


# --------------------------------------------------------------------------
# serialization

def assembly_to_json(X: Assembly) -> dict:
    return {"name": X.name, "carrier": [label_str(x) for x in X.carrier],
            "existence": {label_str(x): nested_to_json(X.E(x)) for x in X.carrier}}


def map_to_json(f: AsmMap) -> dict:
    return {"name": f.name, "graph": {label_str(x): label_str(y) for x, y in f.graph.items()},
            "tracker": format_term(f.tracker)}
