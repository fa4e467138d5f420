import random

import pytest
from hypothesis import given, settings, strategies as st

from realtopos.combinators import CASE, I, K, P0, PAIR, standard_realizer
from realtopos.generators import random_lambda
from realtopos.lam import Const, FreeVariable, LApp, Var, compile, interpret, lam, lapp
from realtopos.pca import App, NormalForm, Oracle, in_subpca, reduce

v = Var


def run(e, *args):
    return reduce(App(compile(e), args[0]) if len(args) == 1 else compile(e)(*args))


def test_identity(c0):
    assert run(lam("x", v("x")), c0) == NormalForm(c0)


def test_const(c0, c1):
    assert run(lam("x y", v("x")), c0, c1) == NormalForm(c0)


def test_projection(c0, c1):
    e = lam("x", LApp(Const(P0), v("x")))
    assert run(e, reduce(PAIR(c0, c1)).term) == NormalForm(c0)


def test_free_variable():
    with pytest.raises(FreeVariable):
        compile(lam("x", v("y")))


def test_compiled_pure():
    assert in_subpca(compile(lam("x y z", lapp(v("x"), v("z"), LApp(v("y"), v("z"))))))


def test_standard_id_behaves_as_i(c0):
    t = standard_realizer("id")
    assert t == compile(lam("x", v("x")))
    assert reduce(t(c0)) == NormalForm(c0)


def test_case_left(c0):
    f, g = Oracle("f"), Oracle("g")
    lhs = reduce(CASE(reduce(PAIR(K, c0)).term, f, g))
    assert lhs == reduce(App(f, c0))


def test_fst(c0, c1):
    assert reduce(standard_realizer("fst")(PAIR(c0, c1))) == NormalForm(c0)


def test_unknown_standard():
    with pytest.raises(KeyError):
        standard_realizer("nope")


def test_interpreter_agrees_on_examples(c0, c1):
    e = lapp(lam("x y", LApp(v("y"), v("x"))), Const(c0), Const(K))
    assert interpret(e).term == reduce(compile(e)).term


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_compiler_matches_interpreter(seed):
    rng = random.Random(seed)
    e = random_lambda(rng)
    ref = interpret(e, 2000)
    got = reduce(compile(e), 20_000)
    if ref.term is not None and got:
        assert got.term == reduce(ref.term, 20_000).term
