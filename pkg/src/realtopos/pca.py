"""Closed SK-terms with inert oracle constants, and fuel-bounded weak reduction.

Terms are hash-consed: two structurally equal terms are the same object, so
equality and hashing are O(1).  The pure-SK terms form the sub-algebra of
actual realizers; anything containing an oracle leaf is only potential.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Union

__all__ = [
    "Term", "Atom", "Oracle", "App", "K", "S",
    "NormalForm", "FuelExhausted", "ReductionOutcome",
    "reduce", "apply", "apply_many", "app", "in_subpca", "is_normal",
    "enumerate_subpca", "iter_subpca", "term_key", "DEFAULT_FUEL",
]

DEFAULT_FUEL = 10_000

_lock = threading.Lock()


class Term:
    """Base class of terms.  Instances are immutable and interned."""

    __slots__ = ("size", "pure", "normal", "head", "nargs", "__weakref__")

    def __call__(self, *args: "Term") -> "Term":
        t = self
        for a in args:
            t = App(t, a)
        return t

    def __str__(self) -> str:
        return format_term(self)

    def __lt__(self, other: "Term") -> bool:
        return term_key(self) < term_key(other)


class Atom(Term):
    __slots__ = ("name",)
    _table: dict = {}

    def __new__(cls, name: str):
        with _lock:
            existing = cls._table.get(name)
            if existing is not None:
                return existing
            self = object.__new__(cls)
            self.name = name
            self.size = 1
            self.pure = True
            self.normal = True
            self.head = self
            self.nargs = 0
            cls._table[name] = self
            return self

    def __reduce__(self):
        return (Atom, (self.name,))

    def __repr__(self) -> str:
        return self.name


class Oracle(Term):
    """An inert constant: it never reduces and never lies in the sub-algebra."""

    __slots__ = ("name",)
    _table: "weakref.WeakValueDictionary[str, Oracle]" = weakref.WeakValueDictionary()

    def __new__(cls, name: str):
        if not name or not (name[0].isalpha() or name[0] == "_"):
            raise ValueError(f"bad oracle name {name!r}")
        with _lock:
            existing = cls._table.get(name)
            if existing is not None:
                return existing
            self = object.__new__(cls)
            self.name = name
            self.size = 1
            self.pure = False
            self.normal = True
            self.head = self
            self.nargs = 0
            cls._table[name] = self
            return self

    def __reduce__(self):
        return (Oracle, (self.name,))

    def __repr__(self) -> str:
        return f"Oracle({self.name!r})"


class App(Term):
    __slots__ = ("fun", "arg")
    _table: "weakref.WeakValueDictionary[tuple[int, int], App]" = weakref.WeakValueDictionary()

    def __new__(cls, fun: Term, arg: Term):
        key = (id(fun), id(arg))
        table = cls._table
        self = table.get(key)
        if self is not None:
            return self
        with _lock:
            self = table.get(key)
            if self is not None:
                return self
            self = object.__new__(cls)
            self.fun = fun
            self.arg = arg
            self.size = fun.size + arg.size
            self.pure = fun.pure and arg.pure
            head = fun.head
            nargs = fun.nargs + 1
            self.head = head
            self.nargs = nargs
            self.normal = (
                fun.normal
                and arg.normal
                and not (head is K and nargs >= 2)
                and not (head is S and nargs >= 3)
            )
            table[key] = self
            return self

    def __reduce__(self):
        return (App, (self.fun, self.arg))

    def __repr__(self) -> str:
        return f"App({self.fun!r}, {self.arg!r})"


K = Atom("K")
S = Atom("S")


def app(*terms: Term) -> Term:
    """Left-associated application ``t0 t1 ... tn``."""
    t = terms[0]
    for a in terms[1:]:
        t = App(t, a)
    return t


def in_subpca(t: Term) -> bool:
    return t.pure


def is_normal(t: Term) -> bool:
    return t.normal


def format_term(t: Term) -> str:
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Oracle):
        return "#" + t.name
    parts = []
    while isinstance(t, App):
        parts.append(t.arg)
        t = t.fun
    out = [format_term(t)]
    for a in reversed(parts):
        s = format_term(a)
        out.append(f"({s})" if isinstance(a, App) else s)
    return " ".join(out)


@lru_cache(maxsize=1 << 16)
def term_key(t: Term) -> tuple:
    """Total order: by size, then by structure (K < S < oracles < App)."""
    if isinstance(t, Atom):
        return (1, 0 if t is K else 1)
    if isinstance(t, Oracle):
        return (1, 2, t.name)
    return (t.size, 3, term_key(t.fun), term_key(t.arg))


# --------------------------------------------------------------------------
# reduction

@dataclass(frozen=True)
class NormalForm:
    term: Term

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class FuelExhausted:
    steps_used: int

    def __bool__(self) -> bool:
        return False


ReductionOutcome = Union[NormalForm, FuelExhausted]

# term -> (normal form, exact number of contractions needed)
_NF: dict = {}
# term -> largest budget known to be insufficient
_DIV: dict = {}
_CACHE_LIMIT = 400_000


def _rebuild(h: Term, args) -> Term:
    for a in args:
        h = App(h, a)
    return h


def _normalize(t: Term, budget: int):
    """Leftmost-outermost normalization.  Returns (nf, steps) or (None, budget).

    The head is reduced on an argument stack (no spine rebuilding), and
    argument normalization uses an explicit frame stack so deep nesting
    cannot overflow the interpreter stack.  Step counts are exact and
    independent of caching.
    """
    if len(_NF) > _CACHE_LIMIT:
        _NF.clear()
        _DIV.clear()
    steps = 0
    # frame: [orig, orig_steps, head, args, index, done]
    frames: list = []
    cur = t
    while True:
        result = None
        if cur.normal:
            result = cur
        else:
            hit = _NF.get(cur)
            if hit is not None:
                if steps + hit[1] <= budget:
                    steps += hit[1]
                    result = hit[0]
                else:
                    _mark_divergent(frames, None, 0, budget)
                    return None, budget
            else:
                lb = _DIV.get(cur)
                if lb is not None and lb >= budget - steps:
                    _mark_divergent(frames, None, 0, budget)
                    return None, budget
        if result is None:
            orig, orig_steps = cur, steps
            h = cur
            stack = []  # arguments, first argument on top
            while type(h) is App:
                stack.append(h.arg)
                h = h.fun
            while True:
                n = len(stack)
                if h is K and n >= 2:
                    h = stack.pop()
                    stack.pop()
                elif h is S and n >= 3:
                    a = stack.pop()
                    b = stack.pop()
                    c = stack.pop()
                    stack.append(App(b, c))
                    stack.append(c)
                    h = a
                else:
                    break
                steps += 1
                if steps > budget:
                    _mark_divergent(frames, orig, orig_steps, budget)
                    return None, budget
                while type(h) is App:
                    stack.append(h.arg)
                    h = h.fun
            stack.reverse()
            if all(x.normal for x in stack):
                result = _rebuild(h, stack)
                if orig is not result:
                    _NF[orig] = (result, steps - orig_steps)
            else:
                frames.append([orig, orig_steps, h, stack, 0, []])
        # deliver results up the frame stack, descending into the next argument
        while True:
            if result is not None:
                if not frames:
                    return result, steps
                frame = frames[-1]
                frame[5].append(result)
                frame[4] += 1
                result = None
            frame = frames[-1]
            args, idx = frame[3], frame[4]
            while idx < len(args) and args[idx].normal:
                frame[5].append(args[idx])
                idx += 1
            frame[4] = idx
            if idx < len(args):
                cur = args[idx]
                break
            frames.pop()
            nf = _rebuild(frame[2], frame[5])
            _NF[frame[0]] = (nf, steps - frame[1])
            result = nf


def _mark_divergent(frames, orig, orig_steps, budget):
    entries = [(f[0], f[1]) for f in frames]
    if orig is not None:
        entries.append((orig, orig_steps))
    for term, start in entries:
        lb = budget - start
        if _DIV.get(term, -1) < lb:
            _DIV[term] = lb


def reduce(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    """Weak leftmost-outermost reduction with at most ``fuel`` contractions."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    nf, steps = _normalize(t, fuel)
    if nf is None:
        return FuelExhausted(fuel)
    return NormalForm(nf)


def apply(a: Term, b: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    return reduce(App(a, b), fuel)


def apply_many(f: Term, *args: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    return reduce(app(f, *args), fuel)


def steps_needed(t: Term, fuel: int = DEFAULT_FUEL) -> int | None:
    nf, steps = _normalize(t, fuel)
    return None if nf is None else steps


# --------------------------------------------------------------------------
# enumeration

@lru_cache(maxsize=None)
def _terms_of_size(n: int) -> tuple:
    if n == 1:
        return (K, S)
    out = []
    for left in range(1, n):
        for f, a in product(_terms_of_size(left), _terms_of_size(n - left)):
            out.append(App(f, a))
    out.sort(key=term_key)
    return tuple(out)


def iter_subpca(max_size: int) -> Iterator[Term]:
    for n in range(1, max_size + 1):
        yield from _terms_of_size(n)


def enumerate_subpca(max_size: int) -> tuple:
    """All pure-SK terms with at most ``max_size`` leaves, ordered by (size, structure)."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    return tuple(iter_subpca(max_size))
