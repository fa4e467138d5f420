"""Seeded random generators for terms, propositions and predicates."""

from __future__ import annotations

import random

from .combinators import KBAR, I, normal, pair
from .lam import Const, LApp, Lam, Var
from .logic import NestedProp, Predicate, base, Inter, FULL_SUB, Conj, Disj
from .pca import App, K, Oracle, S, Term, enumerate_subpca

__all__ = [
    "witness_pool", "random_term", "random_normal_pure", "random_nested",
    "random_predicate", "random_lambda", "random_function",
]

_SMALL_PURE = None


def _small_pure():
    global _SMALL_PURE
    if _SMALL_PURE is None:
        _SMALL_PURE = tuple(t for t in enumerate_subpca(4) if t.normal)
    return _SMALL_PURE


def witness_pool(oracles=("c0", "c1", "c2")) -> tuple:
    """Normal-form witnesses used for random Base propositions."""
    cs = [Oracle(c) for c in oracles]
    pool = [K, S, I, KBAR, App(K, K), App(S, K)]
    pool += cs
    pool += [App(K, c) for c in cs]
    pool += [pair(cs[0], cs[1]), pair(K, cs[0]), pair(KBAR, K)]
    return tuple(pool)


def random_normal_pure(rng: random.Random) -> Term:
    return rng.choice(_small_pure())


def random_term(rng: random.Random, max_size: int = 6, oracles=("c0", "c1")) -> Term:
    """A random (not necessarily normal) term over K, S and oracles."""
    size = rng.randint(1, max_size)
    return _grow(rng, size, [Oracle(c) for c in oracles])


def _grow(rng, size, leaves):
    if size == 1:
        r = rng.random()
        if leaves and r < 0.2:
            return rng.choice(leaves)
        return K if r < 0.6 else S
    left = rng.randint(1, size - 1)
    return App(_grow(rng, left, leaves), _grow(rng, size - left, leaves))


def _base_nested(rng, pool, max_w):
    ws = rng.sample(pool, rng.randint(1, max_w))
    pot = base(*ws)
    act = Inter((FULL_SUB, pot))
    return NestedProp(pot, act)


def random_nested(rng: random.Random, max_witnesses: int = 3, pool=None,
                  allow_empty: bool = True, compound: float = 0.25) -> NestedProp:
    """A random nested proposition with at most ``max_witnesses`` witnesses
    per Base leaf; occasionally a conjunction or disjunction of two leaves."""
    pool = pool or witness_pool()
    if allow_empty and rng.random() < 0.1:
        return NestedProp(base(), base())
    if rng.random() < compound:
        a = _base_nested(rng, pool, max(1, max_witnesses - 1))
        b = _base_nested(rng, pool, max(1, max_witnesses - 1))
        if rng.random() < 0.5:
            return NestedProp(Conj(a.pot, b.pot), Conj(a.act, b.act))
        return NestedProp(Disj(a.pot, b.pot), Disj(a.act, b.act))
    return _base_nested(rng, pool, max_witnesses)


def random_predicate(rng: random.Random, max_index: int = 4, max_witnesses: int = 3,
                     index=None, **kw) -> Predicate:
    if index is None:
        index = tuple(range(rng.randint(1, max_index)))
    return Predicate(tuple(index), {i: random_nested(rng, max_witnesses, **kw) for i in index})


def random_function(rng: random.Random, dom, cod) -> dict:
    cod = tuple(cod)
    return {x: rng.choice(cod) for x in dom}


def random_lambda(rng: random.Random, depth: int = 5, bound=(), consts=None):
    """A random closed lambda term of depth at most ``depth``."""
    consts = consts or (K, S, I, Oracle("c0"), Oracle("c1"))
    return _lam(rng, depth, tuple(bound), consts, top=True)


def _lam(rng, depth, bound, consts, top=False):
    if depth <= 1:
        if bound and rng.random() < 0.7:
            return Var(rng.choice(bound))
        return Const(rng.choice(consts))
    r = rng.random()
    if top or r < 0.35:
        name = f"x{len(bound)}"
        return Lam(name, _lam(rng, depth - 1, bound + (name,), consts))
    if r < 0.75:
        return LApp(_lam(rng, depth - 1, bound, consts), _lam(rng, depth - 1, bound, consts))
    return _lam(rng, 1, bound, consts)


# --------------------------------------------------------------------------
# assemblies and maps

def random_assembly(rng: random.Random, size: int, max_witnesses: int = 2, labels=None,
                    name: str = "", pool=None):
    from .assemblies import Assembly
    labels = tuple(range(size)) if labels is None else tuple(labels)
    ex = {x: random_nested(rng, max_witnesses, pool=pool, allow_empty=False) for x in labels}
    return Assembly(labels, ex, name).validate()


def random_tracked_map(rng: random.Random, X, target_size: int, surjective: bool = False,
                       name: str = ""):
    """A random graph out of X into a fresh codomain whose existence
    propositions are fibre unions (plus noise), so that i tracks it."""
    from .assemblies import AsmMap, Assembly
    from .logic import NestedProp, Union
    if surjective and target_size > len(X.carrier):
        target_size = len(X.carrier)
    ys = tuple(range(target_size))
    while True:
        graph = {x: rng.choice(ys) for x in X.carrier}
        if not surjective or set(graph.values()) == set(ys):
            break
    ex = {}
    for y in ys:
        parts = [X.E(x) for x in X.carrier if graph[x] == y]
        if rng.random() < 0.3 or not parts:
            parts.append(random_nested(rng, 2, allow_empty=False))
        if len(parts) == 1:
            ex[y] = parts[0]
        else:
            ex[y] = NestedProp(Union(tuple(p.pot for p in parts)), Union(tuple(p.act for p in parts)))
    Y = Assembly(ys, ex, name).validate()
    return AsmMap(X, Y, graph, I, name)


def random_map_between(rng: random.Random, X, Y, tries: int = 20, max_size: int = 0):
    """A random tracked graph X -> Y found by tracker search, or None."""
    from .assemblies import AsmMap, find_tracker
    from .combinators import P0, P1
    for _ in range(tries):
        graph = {x: rng.choice(Y.carrier) for x in X.carrier}
        t = find_tracker(X, Y, graph, (I, P0, P1), max_size)
        if t is not None:
            return AsmMap(X, Y, graph, t)
    return None


__all__ += ["random_assembly", "random_tracked_map", "random_map_between"]
