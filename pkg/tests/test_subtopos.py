import random

from hypothesis import given, settings, strategies as st

from realtopos.combinators import DEFAULT_CONTEXT, I, P0, PAIR
from realtopos.generators import random_predicate
from realtopos.logic import (
    BOT, EMPTY, FULL_A, NO, TOP, YES, NestedProp, Predicate, base, const_pred, entails_verify,
    equivalent, nconj, witness_sample,
)
from realtopos.pca import App, K, Oracle, reduce
from realtopos.subtopos import (
    CLOSED, OPEN, U, RelPredicate, SubterminalU, apply_closure, complementarity_realizer,
    collapse_realizer, embed_relative, entails_rel, j_laws_check, mod_connect, mod_validate, sheafify,
)


def one(n):
    return const_pred(("*",), n)


def both_ways(a, b, size=7):
    x, y = equivalent(a, b, size)
    return x is not None and y is not None


def test_u_is_subterminal():
    assert SubterminalU().check()


def test_closed_bot_samples():
    cb = apply_closure(CLOSED, BOT)
    expected = {reduce(App(App(PAIR, K), w)).term for w in DEFAULT_CONTEXT.full_sample}
    assert set(witness_sample(cb.pot)) == expected
    assert witness_sample(cb.act) == ()


def test_classifying_behaviour():
    assert both_ways(one(OPEN(TOP)), one(TOP))
    assert both_ways(one(OPEN(U)), one(TOP))
    assert both_ways(one(CLOSED(BOT)), one(U))


def test_open_inflation_is_constant():
    r = OPEN.realizers["unit"]
    p = one(NestedProp(base(K), base(K)))
    assert entails_verify(p, sheafify(OPEN, p), r).holds is YES


def test_laws_random(rng):
    samples = []
    for _ in range(5):
        phi = random_predicate(rng, 3)
        samples.append((phi, random_predicate(rng, 3, index=phi.index)))
    for j in (OPEN, CLOSED):
        rep = j_laws_check(j, samples)
        assert rep["failures"] == [], rep["failures"][:2]


def test_closed_idempotence_by_search(rng):
    phi = random_predicate(rng, 2, max_witnesses=2)
    rep = j_laws_check(CLOSED, [(phi, phi)], max_size=7)
    assert rep["failures"] == []


def test_complementarity(rng):
    for _ in range(5):
        phi = random_predicate(rng, 3)
        lhs = OPEN and phi.map(OPEN).pointwise(phi.map(CLOSED), nconj)
        assert entails_verify(lhs, phi, complementarity_realizer()).holds is YES


def test_relative(c0):
    phi = RelPredicate(("a", "b"), {"a": base(K), "b": base(K, c0)})
    assert entails_rel(phi, phi, I).holds is YES
    assert entails_rel(phi, phi, App(K, c0)).holds is NO
    conj = RelPredicate(("a",), {"a": nconj(NestedProp(base(K), EMPTY), NestedProp(base(K), EMPTY)).pot})
    tgt = RelPredicate(("a",), {"a": base(K)})
    assert entails_rel(conj, tgt, P0).holds is YES


def test_embed(c0):
    e = embed_relative(RelPredicate(("*",), {"*": base(c0)}))
    assert witness_sample(e.at["*"].act) == ()
    e = embed_relative(RelPredicate(("*",), {"*": base(K)}))
    assert witness_sample(e.at["*"].act) == (K,)
    assert both_ways(sheafify(OPEN, e), e)


def test_mod_validate():
    phi = Predicate((0, 1), {0: NestedProp(base(K), base(K)), 1: TOP})
    assert mod_validate(phi).global_witness is K
    assert mod_validate(const_pred((0,), BOT)) is None


def test_mod_closed_images_validate(rng):
    for _ in range(10):
        phi = random_predicate(rng, 3)
        m = mod_validate(sheafify(CLOSED, phi))
        assert m is not None
        assert reduce(App(P0, m.global_witness)).term is K


def test_mod_connectives(rng):
    a = mod_validate(sheafify(CLOSED, random_predicate(rng, 2, index=(0, 1))))
    b = mod_validate(sheafify(CLOSED, random_predicate(rng, 2, index=(0, 1))))
    assert not mod_connect("or", a, b).closed_inserted
    conj = mod_connect("and", a, b)
    assert conj.global_witness == reduce(PAIR(a.global_witness, b.global_witness)).term
    for op in ("and", "or", "imp"):
        m = mod_connect(op, a, b)
        closed = sheafify(CLOSED, m.pred)
        assert entails_verify(m.pred, closed, CLOSED.realizers["unit"]).holds is YES
        assert entails_verify(closed, m.pred, collapse_realizer(m)).holds is YES


def test_sheafify_examples():
    bot = const_pred((0, 1), BOT)
    assert both_ways(sheafify(CLOSED, bot), const_pred((0, 1), U))
    p = const_pred((0,), NestedProp(base(K), base(K)))
    for j in (OPEN, CLOSED):
        jp = sheafify(j, p)
        jjp = sheafify(j, jp)
        assert entails_verify(jjp, jp, j.realizers["mult"]).holds is YES
        assert entails_verify(jp, jjp, j.realizers["unit"]).holds is YES


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([OPEN, CLOSED]))
def test_unit_and_mult_property(seed, j):
    phi = random_predicate(random.Random(seed), 3)
    jp = sheafify(j, phi)
    assert entails_verify(phi, jp, j.realizers["unit"]).holds is YES
    assert entails_verify(sheafify(j, jp), jp, j.realizers["mult"]).holds is YES
