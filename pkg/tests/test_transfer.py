import random

import pytest

from realtopos.assemblies import TERMINAL, AsmMap, Assembly, identity, sum_, terminal_map, INITIAL
from realtopos.combinators import I
from realtopos.logic import TOP, NestedProp, base
from realtopos.pca import K
from realtopos.smallmaps import SmallMapConfig, random_small_map, random_universe
from realtopos.subtopos import CLOSED, OPEN
from realtopos.transfer import (
    QuotMap, SfPresentation, closing_realizer, epi_factorization_check, j_cover, quotient,
    canonical_presentation, random_j_epi, random_quotient_map, sbar_check, sf_axiom_suite, sf_check, sheafify_map,
)

A = NestedProp(base(K), base(K))


@pytest.fixture
def cfg(rng):
    return SmallMapConfig(4, random_universe(rng, 4))


def test_quotient_relation_is_equivalence():
    X = Assembly(("a", "b", "c"), {"a": A, "b": TOP, "c": A})
    Q = quotient(X, {"a": 0, "b": 1, "c": 0})
    assert Q.verify() == {"reflexive": "Yes", "symmetric": "Yes", "transitive": "Yes"}
    assert Q.classes == ("a", "b")


def test_sbar_identity_relation(rng, cfg):
    g = random_small_map(rng, cfg)
    f = QuotMap(quotient(g.source), quotient(g.target), g)
    w = sbar_check(f, cfg)
    assert w is not None and w.candidate == "representative"
    assert w.g is g


def test_sbar_quotients(rng, cfg):
    for _ in range(10):
        assert sbar_check(random_quotient_map(rng, cfg), cfg) is not None


def test_sbar_non_small_absent():
    cfg = SmallMapConfig(4)
    X = Assembly(tuple(range(5)), {i: TOP for i in range(5)})
    f = terminal_map(X)
    q = QuotMap(quotient(X), quotient(TERMINAL), f)
    assert sbar_check(q, cfg) is None


@pytest.mark.parametrize("j", [OPEN, CLOSED], ids=str)
def test_sf_of_sheafified_small(j, rng, cfg):
    for _ in range(5):
        g = random_small_map(rng, cfg)
        ag = sheafify_map(j, g)
        assert sf_check(j, ag, cfg, canonical_presentation(g, ag)) is not None


@pytest.mark.parametrize("j", [OPEN, CLOSED], ids=str)
def test_sf_a3_shapes(j):
    cfg = SmallMapConfig(3)
    two = sum_(TERMINAL, TERMINAL).obj
    for f in (AsmMap(INITIAL, TERMINAL, {}, I), identity(TERMINAL), terminal_map(two)):
        af = sheafify_map(j, f)
        top = AsmMap(af.source, af.source, {y: y for y in af.source.carrier}, I)
        e = AsmMap(af.target, af.target, {x: x for x in af.target.carrier}, I)
        assert sf_check(j, af, cfg, SfPresentation(f, top, e)) is not None


@pytest.mark.parametrize("j", [OPEN, CLOSED], ids=str)
def test_epi_factorization(j):
    rng = random.Random(5)
    n = 0
    for _ in range(15):
        got = random_j_epi(rng, j)
        if got is None:
            continue
        e, lifting = got
        assert epi_factorization_check(j, e, lifting)["ok"]
        n += 1
    assert n >= 10


def test_closing_realizer():
    X = Assembly(("a",), {"a": A})
    from realtopos.transfer import sheafify_assembly
    for j in (OPEN, CLOSED):
        assert closing_realizer(j, sheafify_assembly(j, X)) == j.realizers["mult"]


def test_j_cover_non_surjective():
    X = Assembly(("a", "b"), {"a": A, "b": A})
    inc = AsmMap(TERMINAL, X, {"*": "a"}, I)
    assert not j_cover(OPEN, inc)


@pytest.mark.parametrize("j", [OPEN, CLOSED], ids=str)
def test_sf_axioms_small_run(j, cfg):
    rep = sf_axiom_suite(j, cfg, 3, count=4)
    assert rep["failures"] == 0
    assert rep["operator"] == j.kind
