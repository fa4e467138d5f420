"""Untyped lambda terms over term constants, bracket abstraction into S/K,
and an independent substitution interpreter used as a test oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .pca import App, Atom, K, Oracle, S, Term

__all__ = [
    "Var", "Lam", "LApp", "Const", "LambdaTerm", "FreeVariable",
    "compile", "free_vars", "lapp", "lam", "interpret", "InterpResult",
    "format_lambda",
]


class FreeVariable(Exception):
    def __init__(self, name: str):
        super().__init__(f"free variable {name!r}")
        self.name = name


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    name: str
    body: "LambdaTerm"


@dataclass(frozen=True)
class LApp:
    fun: "LambdaTerm"
    arg: "LambdaTerm"


@dataclass(frozen=True)
class Const:
    term: Term


LambdaTerm = Union[Var, Lam, LApp, Const]


def lapp(*es: LambdaTerm) -> LambdaTerm:
    e = es[0]
    for a in es[1:]:
        e = LApp(e, a)
    return e


def lam(names: str, body: LambdaTerm) -> LambdaTerm:
    """``lam("x y", body)`` is ``\\x. \\y. body``."""
    for n in reversed(names.split()):
        body = Lam(n, body)
    return body


def free_vars(e: LambdaTerm) -> frozenset:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Lam):
        return free_vars(e.body) - {e.name}
    if isinstance(e, LApp):
        return free_vars(e.fun) | free_vars(e.arg)
    return frozenset()


# --------------------------------------------------------------------------
# bracket abstraction
#
# Intermediate combinatory terms with variables: Term | str (a variable) |
# tuple (fun, arg).

_I = App(App(S, K), K)


def _fv(m) -> frozenset:
    if isinstance(m, str):
        return frozenset((m,))
    if isinstance(m, tuple):
        return _fv(m[0]) | _fv(m[1])
    return frozenset()


def _abstract(x: str, m):
    if m == x:
        return _I
    if x not in _fv(m):
        return (K, m)
    f, a = m
    return ((S, _abstract(x, f)), _abstract(x, a))


def _to_comb(e: LambdaTerm):
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return e.term
    if isinstance(e, LApp):
        return (_to_comb(e.fun), _to_comb(e.arg))
    return _abstract(e.name, _to_comb(e.body))


def _to_term(m) -> Term:
    if isinstance(m, str):
        raise FreeVariable(m)
    if isinstance(m, tuple):
        return App(_to_term(m[0]), _to_term(m[1]))
    return m


def compile(e: LambdaTerm) -> Term:  # noqa: A001 - domain name
    """Translate a closed lambda term into an S/K term.

    [x]x = S K K, [x]M = K M when x is not free in M, and
    [x](M N) = S ([x]M) ([x]N).
    """
    fv = free_vars(e)
    if fv:
        raise FreeVariable(sorted(fv)[0])
    return _to_term(_to_comb(e))


# --------------------------------------------------------------------------
# substitution interpreter

@dataclass(frozen=True)
class InterpResult:
    """``value`` is None when fuel ran out; ``term`` is None when the value
    still contains a lambda and so has no combinator counterpart."""

    value: LambdaTerm | None
    term: Term | None


def _subst(e: LambdaTerm, x: str, v: LambdaTerm) -> LambdaTerm:
    # v is closed, so no capture can occur
    if isinstance(e, Var):
        return v if e.name == x else e
    if isinstance(e, Lam):
        if e.name == x:
            return e
        return Lam(e.name, _subst(e.body, x, v))
    if isinstance(e, LApp):
        return LApp(_subst(e.fun, x, v), _subst(e.arg, x, v))
    return e


def _explode(t: Term) -> LambdaTerm:
    if isinstance(t, App):
        return LApp(_explode(t.fun), _explode(t.arg))
    return Const(t)


def _lspine(e: LambdaTerm):
    args = []
    while isinstance(e, LApp):
        args.append(e.arg)
        e = e.fun
    args.reverse()
    return e, args


class _OutOfFuel(Exception):
    pass


def _eval(e: LambdaTerm, fuel: list) -> LambdaTerm:
    while True:
        h, args = _lspine(e)
        if isinstance(h, Const) and isinstance(h.term, App):
            e = lapp(_explode(h.term), *args) if args else _explode(h.term)
            continue
        nxt = None
        if isinstance(h, Lam) and args:
            nxt = lapp(_subst(h.body, h.name, args[0]), *args[1:]) if len(args) > 1 \
                else _subst(h.body, h.name, args[0])
        elif isinstance(h, Const) and h.term is K and len(args) >= 2:
            nxt = lapp(args[0], *args[2:]) if len(args) > 2 else args[0]
        elif isinstance(h, Const) and h.term is S and len(args) >= 3:
            a, b, c = args[:3]
            core = LApp(LApp(a, c), LApp(b, c))
            nxt = lapp(core, *args[3:]) if len(args) > 3 else core
        if nxt is None:
            break
        fuel[0] -= 1
        if fuel[0] < 0:
            raise _OutOfFuel
        e = nxt
    if isinstance(h, Var):
        raise FreeVariable(h.name)
    return lapp(h, *[_eval(a, fuel) for a in args]) if args else h


def _as_term(e: LambdaTerm) -> Term | None:
    if isinstance(e, Const):
        return e.term
    if isinstance(e, LApp):
        f, a = _as_term(e.fun), _as_term(e.arg)
        if f is None or a is None:
            return None
        return App(f, a)
    return None


def interpret(e: LambdaTerm, fuel: int = 10_000) -> InterpResult:
    """Normal-order evaluation of a closed lambda term by substitution.

    K and S constants reduce by their combinator rules; lambdas are values
    (no reduction under a binder).  Independent of ``compile``.
    """
    budget = [fuel]
    try:
        v = _eval(e, budget)
    except _OutOfFuel:
        return InterpResult(None, None)
    except RecursionError:
        return InterpResult(None, None)
    return InterpResult(v, _as_term(v))


# --------------------------------------------------------------------------
# printing

def format_lambda(e: LambdaTerm) -> str:
    from .pca import format_term

    def atom(x: LambdaTerm) -> str:
        if isinstance(x, Var):
            return x.name
        if isinstance(x, Const):
            t = x.term
            if isinstance(t, App):
                return "(" + format_term(t) + ")"
            return format_term(t)
        return "(" + go(x) + ")"

    def go(x: LambdaTerm) -> str:
        if isinstance(x, Lam):
            return f"\\{x.name}. {go(x.body)}"
        if isinstance(x, LApp):
            h, args = _lspine(x)
            parts = [atom(h) if not isinstance(h, Lam) else "(" + go(h) + ")"]
            for i, a in enumerate(args):
                if isinstance(a, Lam) and i == len(args) - 1:
                    parts.append(go(a))
                else:
                    parts.append(atom(a))
            return " ".join(parts)
        return atom(x)

    return go(e)
