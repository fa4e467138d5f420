import random

import pytest
from hypothesis import given, settings, strategies as st

from realtopos.combinators import DEFAULT_CONTEXT, I, KBAR, P0, PAIR, standard_realizer
from realtopos.generators import random_predicate
from realtopos.logic import (
    BOT, EMPTY, FULL_A, NO, TOP, UNKNOWN, YES, Base, Conj, Disj, Imp, Inter, NestedProp,
    NotAPullback, Predicate, PullbackSquare, base, beck_chevalley_check, check_containment,
    const_pred, entails_search, entails_verify, eq_prop, equivalent, exists_along, forall_along,
    generic_decompose, generic_family, nconj, ndisj, nimp, pconj, pullback_square, reindex,
    witness_sample,
)
from realtopos.pca import App, K, Oracle, reduce
from realtopos.subtopos import U
from realtopos.logic import test as member


def nf(t):
    return reduce(t).term


def test_membership_examples(c0, c1):
    assert member(base(c0), c0) is YES
    assert member(Imp(base(c0), base(c0)), I) is YES
    d = Disj(base(c0), base(c1))
    assert member(d, nf(PAIR(K, c0))) is YES
    assert member(d, nf(PAIR(K, c1))) is NO
    assert member(d, nf(PAIR(KBAR, c1))) is YES


def test_membership_unknown_on_divergence():
    from realtopos.pca import S
    omega = App(App(S, I), I)
    loop = Imp(Base((omega,)), FULL_A)
    # applying K to omega is fine; applying omega to itself is not
    assert member(loop, omega, DEFAULT_CONTEXT.with_fuel(200)) is UNKNOWN


def test_samples(c0, c1):
    assert witness_sample(Conj(base(c0), base(c1))) == (nf(PAIR(c0, c1)),)
    assert witness_sample(EMPTY) == ()
    assert witness_sample(Disj(base(c0), EMPTY)) == (nf(PAIR(K, c0)),)


def test_empty_intersection_convention():
    assert all(member(Inter(()), t) is YES for t in DEFAULT_CONTEXT.full_sample)


def test_nested_connectives(c0, c1):
    x = NestedProp(base(K), base(K))
    assert member(nimp(x, x).act, I) is YES
    a = NestedProp(base(c0), EMPTY)
    b = NestedProp(base(c1), EMPTY)
    assert witness_sample(nconj(a, b).act) == ()
    cb = ndisj(U, BOT)
    pot = witness_sample(cb.pot)
    assert pot and all(nf(App(P0, w)) is K for w in pot)
    assert witness_sample(cb.act) == ()


def test_eq_prop(c0):
    assert eq_prop(0, 0).pot == FULL_A
    assert all(member(eq_prop(0, 1).pot, t) is NO for t in DEFAULT_CONTEXT.full_sample)
    assert member(eq_prop(0, 0).act, c0) is NO


def test_containment(c0):
    assert check_containment(NestedProp(base(K), base(K))) == []
    assert check_containment(NestedProp(base(K), base(c0))) == [c0]


def test_entailment_examples(rng, c0):
    for _ in range(10):
        phi = random_predicate(rng, 3)
        psi = random_predicate(rng, 3, index=phi.index)
        assert entails_verify(phi, phi, I).holds is YES
        assert entails_verify(pconj(phi, psi), phi, P0).holds is YES
        assert entails_verify(phi, psi, c0).holds is NO


def test_search_examples():
    phi = const_pred((0, 1), NestedProp(base(K, KBAR), base(K)))
    a = entails_search(phi, phi, 7)
    assert a is not None and a.size <= 3
    bot = const_pred((0,), BOT)
    assert entails_search(bot, const_pred((0,), TOP), 3) is not None
    assert entails_search(const_pred((0,), TOP), bot, 5) is None


def test_reindex():
    phi = Predicate((0, 1), {0: TOP, 1: BOT})
    assert reindex({0: 0, 1: 1}, phi) == phi
    c = reindex({"a": 1, "b": 1, "c": 1}, phi)
    assert len(set(c.at.values())) == 1
    psi = Predicate((0, 1), {0: BOT, 1: TOP})
    u = {"a": 0, "b": 1}
    assert reindex(u, pconj(phi, psi)) == pconj(reindex(u, phi), reindex(u, psi))


def test_quantifier_examples(rng):
    phi = random_predicate(rng, 2, index=(0, 1))
    ex = exists_along({0: "*", 1: "*"}, phi, ("*",))
    assert set(ex.at["*"].pot.parts) == {phi.at[0].pot, phi.at[1].pot}
    empty = Predicate((), {})
    assert exists_along({}, empty, ("x",)).at["x"] == BOT
    assert forall_along({}, empty, ("x",)).at["x"] == TOP
    u = {0: "*", 1: "*"}
    assert entails_search(phi, reindex(u, ex), 7) is not None
    ident = {0: 0, 1: 1}
    fa = forall_along(ident, phi, (0, 1))
    a, b = equivalent(fa, phi, 7)
    assert a is not None and b is not None
    assert entails_search(reindex(u, forall_along(u, phi, ("*",))), phi, 7) is not None


def test_generic_round_trip(rng):
    phi = random_predicate(rng, 3)
    fam = generic_family(phi.at.values())
    cls = generic_decompose(phi)
    back = reindex(cls, fam)
    assert back == phi
    assert entails_verify(back, phi, I).holds is YES
    bot = const_pred((0, 1), BOT)
    assert set(generic_decompose(bot).values()) == {BOT}


def test_beck_chevalley(rng):
    phi = random_predicate(rng, 2, max_witnesses=2, index=(0, 1))
    sq = pullback_square({"k": "i"}, {0: "i", 1: "i"}, ("k",), (0, 1), ("i",))
    res = beck_chevalley_check(sq, phi, 7)
    assert all(x is not None for x in res["exists"] + res["forall"])
    ident = pullback_square({0: 0, 1: 1}, {0: 0, 1: 1}, (0, 1), (0, 1), (0, 1))
    res = beck_chevalley_check(ident, phi, 7)
    assert all(x is not None and x.size <= 3 for x in res["exists"])


def test_not_a_pullback():
    # commuting square whose top-left corner double-counts a point
    sq = PullbackSquare(("x", "y"), ("k",), ("j",), ("i",), {"x": "k", "y": "k"},
                        {"x": "j", "y": "j"}, {"k": "i"}, {"j": "i"})
    with pytest.raises(NotAPullback):
        beck_chevalley_check(sq, const_pred(("j",), TOP))


def test_base_requires_normal_forms():
    with pytest.raises(ValueError):
        base(App(App(K, K), K))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_conjunction_projections(seed):
    rng = random.Random(seed)
    phi = random_predicate(rng, 3)
    psi = random_predicate(rng, 3, index=phi.index)
    conj = pconj(phi, psi)
    assert entails_verify(conj, psi, standard_realizer("snd")).holds is YES
    assert entails_verify(conj, conj, standard_realizer("id")).holds is YES
