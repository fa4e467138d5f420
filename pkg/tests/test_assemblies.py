import pytest

from realtopos.assemblies import (
    INITIAL, TERMINAL, AsmMap, Assembly, NotAMono, UniverseTooSmall, assembly, classify,
    classify_check, compose, copair, equalizer, evaluation, exponential, find_tracker, identity,
    image_factorization, is_cover, is_iso, map_to_json, pair_map, prop_objects, product, pullback,
    sub_logic, subobject, sum_, terminal_map, transpose, verify_map, weak_classify, weak_power,
    EmptyExistence,
)
from realtopos.combinators import I, KBAR, P0, P1, compose as tcomp, pairing
from realtopos.generators import random_assembly, random_map_between
from realtopos.logic import BOT, NO, TOP, UNKNOWN, YES, NestedProp, Predicate, base, entails_search
from realtopos.pca import App, K, Oracle

A = NestedProp(base(K), base(K))
B = NestedProp(base(K, KBAR), base(KBAR))


def two():
    return Assembly(("a", "b"), {"a": A, "b": B}, "X")


def test_identity_and_oracle_tracker(c0):
    X = two()
    assert verify_map(identity(X)).holds is YES
    bad = AsmMap(X, X, {"a": "a", "b": "b"}, App(K, c0))
    assert verify_map(bad).holds is NO


def test_composition_tracker(rng):
    for _ in range(5):
        X, Y, Z = (random_assembly(rng, 3) for _ in range(3))
        f = random_map_between(rng, X, Y)
        g = random_map_between(rng, Y, Z)
        if f is None or g is None:
            continue
        gf = compose(g, f)
        assert gf.tracker == tcomp(g.tracker, f.tracker)
        assert verify_map(gf).holds is YES


def test_empty_existence_rejected():
    with pytest.raises(EmptyExistence):
        assembly(("x",), {"x": BOT})


def test_product_with_terminal():
    X = two()
    P = product(X, TERMINAL)
    fst = P.fst
    assert verify_map(fst).holds is YES
    back = pair_map(identity(X), terminal_map(X), P)
    assert verify_map(back).holds is YES
    assert is_iso(fst) is not None


def test_projections_random(rng):
    for _ in range(5):
        P = product(random_assembly(rng, 3), random_assembly(rng, 3))
        assert verify_map(P.fst).holds is YES and verify_map(P.snd).holds is YES


def test_equalizer():
    X, Y = two(), Assembly(("y", "z"), {"y": TOP, "z": TOP})
    f = AsmMap(X, Y, {"a": "y", "b": "z"}, App(K, K))
    g = AsmMap(X, Y, {"a": "y", "b": "y"}, App(K, K))
    e = equalizer(f, g)
    assert e.source.carrier == ("a",) and e.tracker == I
    assert verify_map(e).holds is YES


def test_sum():
    s = sum_(TERMINAL, TERMINAL)
    assert len(s.obj) == 2
    assert s.obj.E(("inl", "*")) != s.obj.E(("inr", "*"))
    X = two()
    f = AsmMap(TERMINAL, X, {"*": "a"}, App(K, K))
    g = AsmMap(TERMINAL, X, {"*": "b"}, App(K, KBAR))
    assert verify_map(copair(f, g, s)).holds is YES
    assert len(pullback(s.inl, s.inr).obj) == 0


def test_exponentials():
    Y = two()
    E = exponential(TERMINAL, Y)
    assert len(E.obj) == len(Y) and not E.missing
    E = exponential(two(), Assembly(("p", "q"), {"p": TOP, "q": A}), max_size=4)
    ev = evaluation(E)
    assert verify_map(ev).holds is YES
    t = transpose(ev, E.obj, E)
    assert t is not None
    assert all(t.graph[f] == f for f in E.obj.carrier)


def test_sub_logic():
    X = two()
    L = sub_logic(X)
    phi = Predicate(X.carrier, {"a": A, "b": TOP})
    ident = identity(X)
    assert L.quantify(ident, phi, "exists") != phi  # a union of one part
    assert entails_search(L.quantify(ident, phi, "exists"), phi, 3) is not None
    assert L.quantify(terminal_map(X), L.top(), "forall").at["*"].pot is not None
    full = L.quantify(terminal_map(X), L.top(), "forall")
    assert entails_search(Predicate(("*",), {"*": TOP}), full, 7) is not None
    # Frobenius at carrier 2
    psi = Predicate(("*",), {"*": A})
    u = terminal_map(X)
    lhs = L.quantify(u, L.meet(phi, L.pull(u, psi)), "exists")
    from realtopos.logic import pconj
    rhs = pconj(L.quantify(u, phi, "exists"), psi)
    assert entails_search(lhs, rhs, 7) is not None and entails_search(rhs, lhs, 7) is not None


def test_covers():
    X = two()
    assert is_cover(identity(X)).lifting == I
    inc = AsmMap(TERMINAL, X, {"*": "a"}, App(K, K))
    assert is_cover(inc).verdict is NO
    Q = Assembly(("x", "y"), {"x": A, "y": A})
    quot = AsmMap(Q, Assembly(("*",), {"*": A}), {"x": "*", "y": "*"}, I)
    rep = is_cover(quot)
    assert rep.verdict is YES and rep.lifting == I


def test_image_factorization(rng):
    f = None
    while f is None:
        f = random_map_between(rng, random_assembly(rng, 3), random_assembly(rng, 2))
    e, m = image_factorization(f)
    assert verify_map(e).holds is YES and verify_map(m).holds is YES
    assert is_cover(e).verdict is YES
    assert compose(m, e).graph == f.graph


def test_prop_objects():
    U = prop_objects([TOP, BOT])
    assert U.Tr.carrier == (TOP,)
    U = prop_objects([TOP, BOT, A])
    assert all(U.Tr.E(a) == a for a in U.Tr.carrier)
    assert verify_map(U.top).holds is YES


def test_classify():
    X = two()
    U = prop_objects([TOP, BOT, A])
    chi = classify(identity(X), U)
    assert set(chi.graph.values()) == {TOP}
    empty = AsmMap(INITIAL, X, {}, I)
    assert set(classify(empty, U).graph.values()) == {BOT}
    sub = subobject(X, Predicate(X.carrier, {"a": TOP, "b": BOT}))
    assert classify_check(sub, prop_objects([TOP, BOT, sub.source.E("a")]))["verdict"] == "Yes"
    with pytest.raises(UniverseTooSmall):
        classify(sub, prop_objects([TOP]))
    non_mono = AsmMap(X, TERMINAL, {"a": "*", "b": "*"}, App(K, K))
    with pytest.raises(NotAMono):
        classify(non_mono, U)


def test_classify_random_monos(rng):
    for _ in range(10):
        X = random_assembly(rng, 3)
        keep = {x: rng.random() < 0.6 for x in X.carrier}
        phi = Predicate(X.carrier, {x: TOP if keep[x] else BOT for x in X.carrier})
        m = subobject(X, phi)
        U = prop_objects([TOP, BOT] + [m.source.E(s) for s in m.source.carrier])
        assert classify_check(m, U)["verdict"] == "Yes"


def test_weak_power_terminal():
    U = prop_objects([TOP, BOT])
    wp = weak_power(TERMINAL, U)
    assert len(wp.PX.obj) == len(U.Prop)
    assert len(wp.membership.source) == len(U.Tr)


def test_weak_power_diagonal():
    X = Assembly(("a", "b"), {"a": TOP, "b": TOP})
    U = prop_objects([TOP, BOT])
    wp = weak_power(X, U)
    P = product(X, X)
    diag = AsmMap(X, P.obj, {x: (x, x) for x in X.carrier}, pairing(I, I))
    assert verify_map(diag).holds is YES
    res = weak_classify(diag, X, X, wp)
    assert res["verdict"] == "Yes"
    assert res["recovered"] == ["(a, a)", "(b, b)"]


def test_find_tracker_hints():
    X = two()
    assert find_tracker(X, X, {"a": "a", "b": "b"}, (P0, I), 0) == I
    assert find_tracker(X, X, {"a": "a", "b": "b"}, (P0,), 0) is None


def test_json():
    d = map_to_json(identity(two()))
    assert d["graph"] == {"a": "a", "b": "b"} and d["tracker"] == "S K K"
