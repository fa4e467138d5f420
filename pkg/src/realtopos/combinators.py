"""Derived combinators, numerals, standard realizers and the nested-PCA context."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .lam import Const, LApp, Lam, Var, compile, lam, lapp
from .pca import DEFAULT_FUEL, App, K, NormalForm, Oracle, S, Term, reduce

__all__ = [
    "I", "KBAR", "PAIR", "P0", "P1", "SUCC", "PRED", "ISZERO", "CASE",
    "numeral", "standard_realizer", "STANDARD_NAMES", "UnknownName",
    "NestedPca", "DEFAULT_CONTEXT", "inl", "inr", "pair",
    "pairing", "compose", "normal",
]


def normal(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    out = reduce(t, fuel)
    if not isinstance(out, NormalForm):
        raise ValueError(f"no normal form within {fuel} steps")
    return out.term


def _c(e) -> Term:
    return normal(compile(e))


v = Var
I = App(App(S, K), K)
KBAR = App(K, I)
PAIR = _c(lam("x y z", lapp(v("z"), v("x"), v("y"))))
P0 = _c(lam("z", lapp(v("z"), Const(K))))
P1 = _c(lam("z", lapp(v("z"), Const(KBAR))))
SUCC = normal(App(PAIR, KBAR))
PRED = P1
ISZERO = P0
# branches sit behind a dummy binder so only the selected one is ever run
CASE = _c(lam("z f g", lapp(
    LApp(Const(P0), v("z")),
    Lam("d", LApp(v("f"), LApp(Const(P1), v("z")))),
    Lam("d", LApp(v("g"), LApp(Const(P1), v("z")))),
    Const(I),
)))


def pair(a: Term, b: Term) -> Term:
    return normal(App(App(PAIR, a), b))


def inl(a: Term) -> Term:
    return pair(K, a)


def inr(b: Term) -> Term:
    return pair(KBAR, b)


def numeral(n: int) -> Term:
    """Curry numerals: 0 = i, n+1 = p k̄ n.  iszero = p0 and pred = p1."""
    if n < 0:
        raise ValueError("numerals are defined for n >= 0")
    t = I
    for _ in range(n):
        t = pair(KBAR, t)
    return t


_COMP = _c(lam("b a x", LApp(v("b"), LApp(v("a"), v("x")))))
_PAIRING = _c(lam("a b w", lapp(Const(PAIR), LApp(v("a"), v("w")), LApp(v("b"), v("w")))))


def compose(b: Term, a: Term) -> Term:
    """Realizer of ``b . a``: first a, then b."""
    return normal(App(App(_COMP, b), a))


def pairing(a: Term, b: Term) -> Term:
    """Realizer ``\\w. p (a w) (b w)``."""
    return normal(App(App(_PAIRING, a), b))


_STANDARD = {
    "id": lambda: _c(lam("x", v("x"))),
    "comp": lambda: _COMP,
    "pair": lambda: PAIR,
    "fst": lambda: P0,
    "snd": lambda: P1,
    "case": lambda: CASE,
    "curry": lambda: _c(lam("a x y", LApp(v("a"), lapp(Const(PAIR), v("x"), v("y"))))),
    "uncurry": lambda: _c(lam("b z", lapp(v("b"), LApp(Const(P0), v("z")), LApp(Const(P1), v("z"))))),
    # any term realizes an entailment out of the empty proposition
    "exfalso": lambda: _c(lam("x", v("x"))),
    "const_k": lambda: _c(lam("x", Const(K))),
    "const_kbar": lambda: _c(lam("x", Const(KBAR))),
}
STANDARD_NAMES = tuple(_STANDARD)


class UnknownName(KeyError):
    pass


def standard_realizer(name: str) -> Term:
    try:
        return _STANDARD[name]()
    except KeyError:
        raise UnknownName(name) from None


DERIVED = {
    "i": I, "kbar": KBAR, "p": PAIR, "p0": P0, "p1": P1,
    "succ": SUCC, "pred": PRED, "iszero": ISZERO, "case_guard": CASE,
}


@dataclass(frozen=True)
class NestedPca:
    """Configuration of the desk-scale nested PCA.

    ``full_sample`` stands in for the whole algebra wherever a proposition
    quantifies over "everything".
    """

    oracles: tuple = ("c0", "c1", "c2")
    fuel: int = DEFAULT_FUEL
    full_sample: tuple = (I, K, KBAR)
    _hash: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        if not self.full_sample:
            raise ValueError("full_sample must be nonempty")
        for t in self.full_sample:
            if not t.normal:
                raise ValueError(f"full_sample member {t} is not a normal form")
        object.__setattr__(self, "_hash", hash((self.oracles, self.fuel, self.full_sample)))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def derived(self) -> dict:
        return dict(DERIVED)

    def oracle(self, name: str) -> Oracle:
        if name not in self.oracles:
            raise KeyError(f"oracle {name!r} not declared")
        return Oracle(name)

    def with_fuel(self, fuel: int) -> "NestedPca":
        return replace(self, fuel=fuel)

    def check_laws(self) -> list:
        """Pairing laws over the full sample; returns the list of failures."""
        bad = []
        for a in self.full_sample:
            for b in self.full_sample:
                pr = reduce(App(App(PAIR, a), b), self.fuel)
                if not isinstance(pr, NormalForm):
                    bad.append(("p", a, b))
                    continue
                if reduce(App(P0, pr.term), self.fuel) != NormalForm(a):
                    bad.append(("p0", a, b))
                if reduce(App(P1, pr.term), self.fuel) != NormalForm(b):
                    bad.append(("p1", a, b))
        return bad


DEFAULT_CONTEXT = NestedPca()
