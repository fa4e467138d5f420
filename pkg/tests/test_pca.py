import pytest
from hypothesis import given, settings, strategies as st

from realtopos.combinators import DEFAULT_CONTEXT, I, ISZERO, KBAR, P0, P1, PAIR, PRED, SUCC, numeral
from realtopos.pca import (
    App, FuelExhausted, K, NormalForm, Oracle, S, apply, enumerate_subpca, format_term, in_subpca,
    is_normal, reduce,
)


def test_k_rule(c0, c1):
    assert reduce(K(c0, c1), 10) == NormalForm(c0)


def test_identity(c0):
    assert reduce(S(K, K, c0), 50) == NormalForm(c0)
    assert apply(I, c0) == NormalForm(c0)


def test_omega_diverges():
    omega = S(I, I)
    r = reduce(App(omega, omega), 10_000)
    assert isinstance(r, FuelExhausted)
    assert not r


def test_kbar(c0, c1):
    step = apply(KBAR, c0)
    assert apply(step.term, c1) == NormalForm(c1)


def test_projections(c0, c1):
    pr = reduce(PAIR(c0, c1)).term
    assert apply(P0, pr) == NormalForm(c0)
    assert apply(P1, pr) == NormalForm(c1)


def test_subpca_membership():
    assert in_subpca(S(K, K))
    assert not in_subpca(Oracle("c0"))
    assert in_subpca(PAIR)
    assert in_subpca(numeral(5))
    assert not in_subpca(K(Oracle("c0")))


def test_numerals():
    assert reduce(ISZERO(numeral(0))).term is K
    assert reduce(ISZERO(numeral(3))).term == KBAR
    two = reduce(PRED(reduce(SUCC(numeral(2))).term)).term
    # probe equivalence: same answers under iszero/pred chains
    for n in range(4):
        x, y = two, numeral(2)
        for _ in range(n):
            x, y = reduce(PRED(x)).term, reduce(PRED(y)).term
        assert reduce(ISZERO(x)) == reduce(ISZERO(y))


def test_enumeration_counts():
    assert enumerate_subpca(1) == (K, S)
    assert len(enumerate_subpca(2)) == 6
    assert len(enumerate_subpca(3)) == 6 + 2 * 8
    assert S(K, K) in enumerate_subpca(3)
    with pytest.raises(ValueError):
        enumerate_subpca(0)


def test_enumeration_order_is_stable():
    ts = enumerate_subpca(4)
    assert list(ts) == sorted(ts)
    assert len(set(ts)) == len(ts)


def test_hash_consing(c0):
    assert App(K, c0) is App(K, c0)
    assert Oracle("c0") is c0


def test_format():
    assert format_term(S(K, K)) == "S K K"
    assert format_term(App(S, App(K, K))) == "S (K K)"


def test_pairing_laws_over_full_sample():
    assert DEFAULT_CONTEXT.check_laws() == []


def test_derived_are_pure():
    for name, t in DEFAULT_CONTEXT.derived.items():
        assert in_subpca(t), name


# --- properties

leaf = st.sampled_from([K, S, Oracle("c0"), Oracle("c1")])
terms = st.recursive(leaf, lambda sub: st.builds(App, sub, sub), max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(terms, terms)
def test_k_law_property(a, b):
    ra, rb = reduce(a, 2000), reduce(b, 2000)
    if ra and rb:
        assert reduce(K(ra.term, rb.term), 2000) == ra


@settings(max_examples=200, deadline=None)
@given(terms)
def test_fuel_monotone(t):
    small, big = reduce(t, 50), reduce(t, 500)
    if small:
        assert big == small
    if big:
        assert is_normal(big.term)
