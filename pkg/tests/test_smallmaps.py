import random

import pytest

from realtopos.assemblies import (
    TERMINAL, AsmMap, Assembly, compose, identity, is_cover, pullback, sum_, terminal_map,
)
from realtopos.combinators import I, KBAR, P0, compose as tcompose
from realtopos.logic import TOP, NestedProp, base
from realtopos.pca import App, K
from realtopos.smallmaps import (
    NotCommuting, SmallMapConfig, axiom_suite, bounded_numerals, collection_construct,
    exhibit_pullback, is_small, quasipullback_check, random_cover_into, random_small_map,
    random_universe, universal_family,
)

A = NestedProp(base(K), base(K))


@pytest.fixture
def cfg(rng):
    return SmallMapConfig(4, random_universe(rng, 4))


def test_is_small():
    X = Assembly(("a", "b"), {"a": A, "b": TOP})
    assert is_small(identity(X), SmallMapConfig(3))
    two = sum_(TERMINAL, TERMINAL).obj
    assert is_small(terminal_map(two), SmallMapConfig(3))
    four = Assembly(tuple(range(4)), {i: TOP for i in range(4)})
    assert not is_small(terminal_map(four), SmallMapConfig(3))


def test_bound_validation():
    with pytest.raises(ValueError):
        SmallMapConfig(2)


def test_pullback_square_classifies_as_pullback(rng, cfg):
    f = random_small_map(rng, cfg)
    X = f.target
    pb = pullback(f, identity(X))
    w = quasipullback_check(pb.fst, pb.snd, f, identity(X))
    assert w.classification == "Pullback"


def test_cover_on_top_gives_quasipullback(rng, cfg):
    f = random_small_map(rng, cfg)
    while not f.source.carrier:
        f = random_small_map(rng, cfg)
    p, lift = random_cover_into(rng, f.source, len(f.source) + 1)
    top = p
    left = compose(f, p)
    w = quasipullback_check(top, left, f, identity(f.target), hints=(tcompose(lift, P0),))
    assert w.classification in ("Quasipullback", "Pullback")


def test_non_surjective_mediator_is_neither():
    X = Assembly(("a", "b"), {"a": A, "b": A})
    inc = AsmMap(TERMINAL, X, {"*": "a"}, App(K, K))
    w = quasipullback_check(identity(TERMINAL), identity(TERMINAL), inc, inc)
    assert w.classification == "Pullback"
    # the square 1 -> X <- X over X misses b in the pullback X x_X X
    top = inc
    left = terminal_map(TERMINAL)
    sq = quasipullback_check(top, left, terminal_map(X), identity(TERMINAL))
    assert sq.classification == "Neither"


def test_not_commuting():
    X = Assembly(("a", "b"), {"a": A, "b": A})
    f = AsmMap(TERMINAL, X, {"*": "a"}, App(K, K))
    g = AsmMap(TERMINAL, X, {"*": "b"}, App(K, K))
    with pytest.raises(NotCommuting):
        quasipullback_check(identity(TERMINAL), identity(TERMINAL), f, g)


def test_collection(rng, cfg):
    f = random_small_map(rng, cfg)
    X = f.source
    Z, incl, sq = collection_construct(identity(X), f)
    assert len(Z) == len(X)
    for _ in range(5):
        f = random_small_map(rng, cfg, base_size=3)
        p, lift = random_cover_into(rng, f.source, len(f.source) + 2)
        Z, incl, sq = collection_construct(p, f, is_cover(p, 0, (lift,)))
        assert sq.classification in ("Quasipullback", "Pullback")


def test_universal_family(rng, cfg):
    fam = universal_family(cfg)
    assert is_small(fam.pi, cfg)
    for _ in range(5):
        f = random_small_map(rng, cfg)
        w = exhibit_pullback(f, fam)
        assert w.classification == "Pullback"
    X = next(U for U in cfg.universe if len(U) == 2)
    f = AsmMap(X, TERMINAL, {0: "*", 1: "*"}, I)
    chosen = exhibit_pullback(f, fam).bottom.graph["*"]
    assert chosen == X


def test_bounded_numerals():
    N = bounded_numerals(3)
    assert len(N) == 3


def test_axiom_suite_small_run(cfg):
    rep = axiom_suite(cfg, 7, count=12)
    assert rep["failures"] == 0
    assert rep["deviations"] == ["A8"]
    names = [a["axiom"] if isinstance(a, dict) and "axiom" in a else a for a in rep["axioms"]]
    assert len(names) == 10
