"""The ``.rzk`` declaration language: lexer, AST, parser and pretty-printer.

Statements end with ``;`` and ``#`` starts a comment running to the end of
the line.  Comments are kept in the AST so that printing a parsed file
gives back the same token stream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

__all__ = [
    "DslError", "DslSyntaxError", "NameClash", "UnresolvedReference", "parse", "pretty",
    "tokenize", "token_stream", "Session", "CONSTANTS", "SUITE_PARAMS",
]


# --------------------------------------------------------------------------
# errors

class DslError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"{line}:{col}: {message}")


class DslSyntaxError(DslError):
    def __init__(self, message: str, line: int, col: int, expected=()):
        self.expected = tuple(sorted(set(expected)))
        if self.expected:
            message = f"{message}; expected one of {' '.join(repr(e) for e in self.expected)}"
        super().__init__(message, line, col)


class NameClash(DslError):
    pass


class UnresolvedReference(DslError):
    pass


# --------------------------------------------------------------------------
# lexer

@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, SYM, COMMENT, EOF
    text: str
    line: int
    col: int


_SYMBOLS = ("|-", "->", "/\\", "\\/", "\\", ".", "(", ")", "{", "}", ",", ";", ":", "=")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_INT = re.compile(r"[0-9]+")


def tokenize(src: str, keep_comments: bool = True) -> list:
    out = []
    line, col, i = 1, 1, 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            j = src.find("\n", i)
            j = n if j < 0 else j
            if keep_comments:
                out.append(Token("COMMENT", src[i + 1:j].strip(), line, col))
            col += j - i
            i = j
            continue
        m = _IDENT.match(src, i)
        if m:
            out.append(Token("IDENT", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _INT.match(src, i)
        if m:
            out.append(Token("INT", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        for s in _SYMBOLS:
            if src.startswith(s, i):
                out.append(Token("SYM", s, line, col))
                i += len(s)
                col += len(s)
                break
        else:
            raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
    out.append(Token("EOF", "", line, col))
    return out


# --------------------------------------------------------------------------
# AST

def _pos():
    return field(default=(0, 0), compare=False, repr=False)


# terms and lambda expressions
@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Ap:
    fun: object
    arg: object


@dataclass(frozen=True)
class Abs:
    params: tuple
    body: object


# Prop1 expressions
@dataclass(frozen=True)
class PBase:
    terms: tuple


@dataclass(frozen=True)
class PAtom:
    kind: str  # full | fullsub


@dataclass(frozen=True)
class PRef:
    name: str


@dataclass(frozen=True)
class PBin:
    op: str
    left: object
    right: object


# nested expressions
@dataclass(frozen=True)
class NPair:
    pot: object
    act: object


@dataclass(frozen=True)
class NAtom:
    kind: str  # top | bot | u


@dataclass(frozen=True)
class NRef:
    name: str


@dataclass(frozen=True)
class NBin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class NClose:
    kind: str  # open | closed | j
    arg: object


# statements
@dataclass(frozen=True)
class Comment:
    text: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class OracleDecl:
    names: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class PropDecl:
    name: str
    expr: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class NestedDecl:
    name: str
    expr: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class PredDecl:
    name: str
    index: tuple
    fibres: tuple  # ((label, nexpr), ...)
    pos: tuple = _pos()


@dataclass(frozen=True)
class AssemblyDecl:
    name: str
    fibres: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    graph: tuple  # ((x, y), ...)
    tracker: object  # lambda expression, or None for ``auto``
    pos: tuple = _pos()


@dataclass(frozen=True)
class UniverseDecl:
    name: str
    members: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class ClosureDecl:
    kind: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class SetDecl:
    key: str
    value: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class CheckQ:
    lhs: object
    rhs: object
    realizer: object = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class SearchQ:
    lhs: object
    rhs: object
    depth: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class MapQ:
    kind: str  # verify | cover
    map: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class SmallQ:
    map: str
    bound: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class ClassifyQ:
    map: str
    universe: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class SuiteQ:
    name: str
    operator: str | None
    params: tuple  # ((key, int), ...)
    pos: tuple = _pos()


QUERIES = (CheckQ, SearchQ, MapQ, SmallQ, ClassifyQ, SuiteQ)


@dataclass(frozen=True)
class Session:
    statements: tuple

    @property
    def queries(self) -> tuple:
        return tuple(s for s in self.statements if isinstance(s, QUERIES))


# names available in lambda bodies and SK terms
CONSTANTS = ("K", "S", "I", "i", "kbar", "p", "p0", "p1", "succ", "pred", "iszero", "case",
             "case_guard", "id", "comp", "pair", "fst", "snd", "curry", "uncurry", "exfalso",
             "const_k", "const_kbar")

SUITE_PARAMS = {
    "kernel": ("seed", "count", "fuel"),
    "compiler": ("seed", "count", "fuel"),
    "tripos": ("seed", "count"),
    "heyting": ("seed", "count"),
    "quantifier": ("seed", "max_index", "max_size", "bc_max_index"),
    "subtopos": ("seed", "count", "triples"),
    "assemblies": ("seed", "per_size", "big"),
    "small": ("seed", "bound", "count"),
    "transfer": ("seed", "bound", "count", "epis"),
}
_OPERATOR_SUITES = ("subtopos", "transfer")
_SETTINGS = ("fuel", "depth", "seed")
_KEYWORDS = {"oracle", "prop", "nested", "pred", "assembly", "map", "universe", "closure",
             "set", "check", "search", "verify", "cover", "small", "classify", "suite"}


# --------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0
        self.kinds = {k: {} for k in ("prop", "nested", "pred", "assembly", "map", "universe")}
        self.carriers = {}
        self.oracles = set()
        self._pair_memo = {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _skip_comments(self):
        while self.tok.kind == "COMMENT":
            self.i += 1

    def peek(self) -> Token:
        self._skip_comments()
        return self.tok

    def next(self) -> Token:
        self._skip_comments()
        t = self.tok
        self.i += 1
        return t

    def fail(self, msg, expected=(), tok=None):
        t = tok or self.peek()
        got = "end of input" if t.kind == "EOF" else repr(t.text)
        raise DslSyntaxError(f"{msg} (found {got})", t.line, t.col, expected)

    def sym(self, s) -> Token:
        t = self.peek()
        if t.kind == "SYM" and t.text == s:
            return self.next()
        self.fail(f"expected {s!r}", (s,))

    def accept(self, s) -> bool:
        t = self.peek()
        if t.kind == "SYM" and t.text == s:
            self.next()
            return True
        return False

    def ident(self, what="identifier") -> Token:
        t = self.peek()
        if t.kind == "IDENT":
            return self.next()
        self.fail(f"expected {what}", (what,))

    def keyword(self, *words) -> str:
        t = self.peek()
        if t.kind == "IDENT" and t.text in words:
            self.next()
            return t.text
        self.fail("unexpected token", words)

    def braced(self, item) -> list:
        """``{ item, ... }`` with a precise error for an unclosed brace."""
        open_tok = self.sym("{")
        items = []
        if self.accept("}"):
            return items
        while True:
            items.append(item())
            if self.accept("}"):
                return items
            if not self.accept(","):
                self.fail(f"unclosed '{{' opened at {open_tok.line}:{open_tok.col}", (",", "}"))

    def integer(self) -> int:
        t = self.peek()
        if t.kind == "INT":
            return int(self.next().text)
        self.fail("expected an integer", ("INT",))

    def label(self) -> str:
        t = self.peek()
        if t.kind in ("IDENT", "INT"):
            return self.next().text
        self.fail("expected a label", ("IDENT", "INT"))

    # declarations bookkeeping
    def declare(self, kind, tok: Token):
        if tok.text in self.kinds[kind]:
            line, col = self.kinds[kind][tok.text]
            raise NameClash(f"{kind} {tok.text!r} already declared at {line}:{col}", tok.line, tok.col)
        self.kinds[kind][tok.text] = (tok.line, tok.col)

    def resolve(self, kind, tok: Token, *alts):
        for k in (kind,) + alts:
            if tok.text in self.kinds[k]:
                return k
        raise UnresolvedReference(f"unknown {kind} {tok.text!r}", tok.line, tok.col)

    # top level
    def session(self) -> Session:
        out = []
        while True:
            t = self.tok
            if t.kind == "COMMENT":
                out.append(Comment(t.text, (t.line, t.col)))
                self.i += 1
                continue
            if t.kind == "EOF":
                break
            out.append(self.statement())
        return Session(tuple(out))

    def statement(self):
        t = self.peek()
        if t.kind != "IDENT" or t.text not in _KEYWORDS:
            self.fail("expected a statement", sorted(_KEYWORDS))
        pos = (t.line, t.col)
        self.next()
        st = getattr(self, "st_" + t.text)(pos)
        self.sym(";")
        return st

    def st_oracle(self, pos):
        names = []
        while self.peek().kind == "IDENT":
            tok = self.next()
            if tok.text in CONSTANTS or tok.text in self.oracles:
                raise NameClash(f"oracle {tok.text!r} clashes with an existing constant", tok.line, tok.col)
            self.oracles.add(tok.text)
            names.append(tok.text)
        if not names:
            self.fail("expected oracle names", ("IDENT",))
        return OracleDecl(tuple(names), pos)

    def st_prop(self, pos):
        name = self.ident("proposition name")
        self.sym("=")
        expr = self.pexpr()
        self.declare("prop", name)
        return PropDecl(name.text, expr, pos)

    def st_nested(self, pos):
        name = self.ident("nested proposition name")
        self.sym("=")
        expr = self.nexpr()
        self.declare("nested", name)
        return NestedDecl(name.text, expr, pos)

    def _labels(self):
        labels = self.braced(self.label)
        if len(set(labels)) != len(labels):
            self.fail("duplicate label in index set")
        return tuple(labels)

    def _fibres(self, allowed=None):
        seen = set()

        def item():
            t = self.peek()
            lab = self.label()
            if allowed is not None and lab not in allowed:
                raise UnresolvedReference(f"label {lab!r} is not in the index set", t.line, t.col)
            if lab in seen:
                raise NameClash(f"label {lab!r} given twice", t.line, t.col)
            seen.add(lab)
            self.sym(":")
            return lab, self.nexpr()
        return tuple(self.braced(item))

    def st_pred(self, pos):
        name = self.ident("predicate name")
        self.keyword("over")
        index = self._labels()
        self.sym("=")
        t = self.peek()
        fibres = self._fibres(index)
        if len(fibres) != len(index):
            missing = [i for i in index if i not in dict(fibres)]
            raise UnresolvedReference(f"no fibre given for {', '.join(missing)}", t.line, t.col)
        self.declare("pred", name)
        return PredDecl(name.text, index, fibres, pos)

    def st_assembly(self, pos):
        name = self.ident("assembly name")
        self.sym("=")
        fibres = self._fibres()
        self.declare("assembly", name)
        self.carriers[name.text] = tuple(x for x, _ in fibres)
        return AssemblyDecl(name.text, fibres, pos)

    def st_map(self, pos):
        name = self.ident("map name")
        self.sym(":")
        src = self.ident("assembly name")
        self.resolve("assembly", src)
        self.sym("->")
        tgt = self.ident("assembly name")
        self.resolve("assembly", tgt)
        self.sym("=")

        def item():
            t = self.peek()
            x = self.label()
            if x not in self.carriers[src.text]:
                raise UnresolvedReference(f"{x!r} is not in the carrier of {src.text}", t.line, t.col)
            self.sym("->")
            t = self.peek()
            y = self.label()
            if y not in self.carriers[tgt.text]:
                raise UnresolvedReference(f"{y!r} is not in the carrier of {tgt.text}", t.line, t.col)
            return x, y
        graph = self.braced(item)
        self.keyword("tracked")
        t = self.peek()
        if t.kind == "IDENT" and t.text == "auto":
            self.next()
            tracker = None
        else:
            tracker = self.lexpr(())
        self.declare("map", name)
        return MapDecl(name.text, src.text, tgt.text, tuple(graph), tracker, pos)

    def st_universe(self, pos):
        name = self.ident("universe name")
        self.sym("=")
        members = self.braced(self.nexpr)
        self.declare("universe", name)
        return UniverseDecl(name.text, tuple(members), pos)

    def st_closure(self, pos):
        return ClosureDecl(self.keyword("open", "closed"), pos)

    def st_set(self, pos):
        key = self.keyword(*_SETTINGS)
        return SetDecl(key, self.integer(), pos)

    def _entailment(self):
        lhs = self.nexpr(allow_pred=True)
        self.sym("|-")
        rhs = self.nexpr(allow_pred=True)
        return lhs, rhs

    def st_check(self, pos):
        lhs, rhs = self._entailment()
        realizer = None
        t = self.peek()
        if t.kind == "IDENT" and t.text == "with":
            self.next()
            realizer = self.lexpr(())
        return CheckQ(lhs, rhs, realizer, pos)

    def st_search(self, pos):
        lhs, rhs = self._entailment()
        self.keyword("depth")
        return SearchQ(lhs, rhs, self.integer(), pos)

    def _map_ref(self):
        t = self.ident("map name")
        self.resolve("map", t)
        return t.text

    def st_verify(self, pos):
        return MapQ("verify", self._map_ref(), pos)

    def st_cover(self, pos):
        return MapQ("cover", self._map_ref(), pos)

    def st_small(self, pos):
        m = self._map_ref()
        self.keyword("bound")
        return SmallQ(m, self.integer(), pos)

    def st_classify(self, pos):
        m = self._map_ref()
        self.keyword("in")
        u = self.ident("universe name")
        self.resolve("universe", u)
        return ClassifyQ(m, u.text, pos)

    def st_suite(self, pos):
        name = self.keyword(*SUITE_PARAMS)
        op = None
        t = self.peek()
        if name in _OPERATOR_SUITES and t.kind == "IDENT" and t.text in ("open", "closed"):
            op = self.next().text
        params = []
        while self.peek().kind == "IDENT":
            key = self.keyword(*SUITE_PARAMS[name])
            if any(k == key for k, _ in params):
                self.fail(f"parameter {key!r} given twice")
            params.append((key, self.integer()))
        return SuiteQ(name, op, tuple(params), pos)

    # Prop1 expressions: -> (right assoc) < \/ < /\
    def pexpr(self):
        left = self.pdisj()
        if self.accept("->"):
            return PBin("->", left, self.pexpr())
        return left

    def pdisj(self):
        left = self.pconj()
        while self.accept("\\/"):
            left = PBin("\\/", left, self.pconj())
        return left

    def pconj(self):
        left = self.patom()
        while self.accept("/\\"):
            left = PBin("/\\", left, self.patom())
        return left

    def patom(self):
        t = self.peek()
        if self.accept("("):
            e = self.pexpr()
            self.sym(")")
            return e
        if t.kind == "IDENT":
            if t.text == "base":
                self.next()
                terms = self.braced(lambda: self.lexpr((), allow_lambda=False))
                return PBase(tuple(terms))
            if t.text in ("full", "fullsub"):
                self.next()
                return PAtom(t.text)
            self.next()
            self.resolve("prop", t)
            return PRef(t.text)
        self.fail("expected a proposition", ("base", "full", "fullsub", "(", "IDENT"))

    # nested expressions, same precedence
    def nexpr(self, allow_pred=False):
        left = self.ndisj(allow_pred)
        if self.accept("->"):
            return NBin("->", left, self.nexpr(allow_pred))
        return left

    def ndisj(self, allow_pred):
        left = self.nconj(allow_pred)
        while self.accept("\\/"):
            left = NBin("\\/", left, self.nconj(allow_pred))
        return left

    def nconj(self, allow_pred):
        left = self.natom(allow_pred)
        while self.accept("/\\"):
            left = NBin("/\\", left, self.natom(allow_pred))
        return left

    def natom(self, allow_pred):
        t = self.peek()
        if t.kind == "SYM" and t.text == "(":
            save = self.i
            self.next()
            # '(' opens either a pair (P, P) or a grouped nested expression;
            # the pair attempt is memoized so nested groups stay linear
            if save not in self._pair_memo:
                try:
                    pot = self.pexpr()
                    self._pair_memo[save] = (pot, self.i, None) if self.accept(",") else (None, 0, None)
                except DslError as exc:
                    self._pair_memo[save] = (None, 0, exc)
            pot, after, perr = self._pair_memo[save]
            if pot is not None:
                self.i = after
                act = self.pexpr()
                self.sym(")")
                return NPair(pot, act)
            self.i = save
            self.next()
            try:
                inner = self.nexpr(allow_pred)
                self.sym(")")
            except DslError as exc:
                if perr is not None and (perr.line, perr.col) > (exc.line, exc.col):
                    raise perr from None
                raise
            return inner
        if t.kind == "IDENT":
            if t.text in ("top", "bot", "u"):
                self.next()
                return NAtom(t.text)
            if t.text in ("open", "closed", "j"):
                self.next()
                self.sym("(")
                arg = self.nexpr(allow_pred)
                self.sym(")")
                return NClose(t.text, arg)
            self.next()
            if allow_pred:
                self.resolve("nested", t, "pred")
            else:
                self.resolve("nested", t)
            return NRef(t.text)
        self.fail("expected a nested proposition", ("top", "bot", "u", "open", "closed", "j",
                                                    "(", "IDENT"))

    # lambda expressions and terms
    def lexpr(self, bound: tuple, allow_lambda=True):
        t = self.peek()
        if t.kind == "SYM" and t.text == "\\":
            if not allow_lambda:
                self.fail("lambda not allowed in a term")
            self.next()
            params = []
            while self.peek().kind == "IDENT":
                params.append(self.next().text)
            if not params:
                self.fail("expected a parameter", ("IDENT",))
            self.sym(".")
            body = self.lexpr(bound + tuple(params), allow_lambda)
            return Abs(tuple(params), body)
        head = self.lterm(bound, allow_lambda)
        while True:
            t = self.peek()
            if t.kind in ("IDENT", "INT") or (t.kind == "SYM" and t.text == "("):
                head = Ap(head, self.lterm(bound, allow_lambda))
            elif t.kind == "SYM" and t.text == "\\" and allow_lambda:
                head = Ap(head, self.lexpr(bound, allow_lambda))
                return head
            else:
                return head

    def lterm(self, bound, allow_lambda):
        t = self.peek()
        if self.accept("("):
            e = self.lexpr(bound, allow_lambda)
            self.sym(")")
            return e
        if t.kind == "INT":
            return Num(int(self.next().text))
        if t.kind == "IDENT":
            self.next()
            if t.text not in bound and t.text not in CONSTANTS and t.text not in self.oracles:
                raise UnresolvedReference(f"unknown name {t.text!r} in term", t.line, t.col)
            return Name(t.text)
        self.fail("expected a term", ("IDENT", "INT", "("))


def parse(src: str) -> Session:
    """Parse and resolve a session; raises DslSyntaxError, NameClash or
    UnresolvedReference with line and column."""
    return _Parser(src).session()


# --------------------------------------------------------------------------
# pretty-printer

_PREC = {"->": 0, "\\/": 1, "/\\": 2}


def _pp_bin(e, atom):
    def go(x, ctx_prec, side):
        if isinstance(x, (PBin, NBin)):
            p = _PREC[x.op]
            if x.op == "->":
                s = f"{go(x.left, p + 1, 'l')} -> {go(x.right, p, 'r')}"
            else:
                s = f"{go(x.left, p, 'l')} {x.op} {go(x.right, p + 1, 'r')}"
            return f"({s})" if p < ctx_prec else s
        return atom(x)
    return go(e, 0, "")


def pp_term(e) -> str:
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Abs):
        return "\\" + " ".join(e.params) + ". " + pp_term(e.body)
    # application spine
    spine = []
    while isinstance(e, Ap):
        spine.append(e.arg)
        e = e.fun
    spine.reverse()
    parts = [_pp_arg(e, head=True)]
    for k, a in enumerate(spine):
        last = k == len(spine) - 1
        parts.append(pp_term(a) if isinstance(a, Abs) and last else _pp_arg(a))
    return " ".join(parts)


def _pp_arg(e, head=False) -> str:
    if isinstance(e, (Name, Num)):
        return pp_term(e)
    if isinstance(e, Ap) and head:
        return pp_term(e)
    return f"({pp_term(e)})"


def pp_prop(e) -> str:
    def atom(x):
        if isinstance(x, PBase):
            return "base {" + ", ".join(pp_term(t) for t in x.terms) + "}"
        if isinstance(x, PAtom):
            return x.kind
        if isinstance(x, PRef):
            return x.name
        raise TypeError(x)
    return _pp_bin(e, atom)


def pp_nested(e) -> str:
    def atom(x):
        if isinstance(x, NAtom):
            return x.kind
        if isinstance(x, NRef):
            return x.name
        if isinstance(x, NClose):
            return f"{x.kind}({pp_nested(x.arg)})"
        if isinstance(x, NPair):
            return f"({pp_prop(x.pot)}, {pp_prop(x.act)})"
        raise TypeError(x)
    return _pp_bin(e, atom)


def _pp_fibres(fibres) -> str:
    return "{ " + ", ".join(f"{x}: {pp_nested(n)}" for x, n in fibres) + " }" if fibres else "{}"


def pp_statement(s) -> str:
    if isinstance(s, Comment):
        return f"# {s.text}" if s.text else "#"
    if isinstance(s, OracleDecl):
        body = "oracle " + " ".join(s.names)
    elif isinstance(s, PropDecl):
        body = f"prop {s.name} = {pp_prop(s.expr)}"
    elif isinstance(s, NestedDecl):
        body = f"nested {s.name} = {pp_nested(s.expr)}"
    elif isinstance(s, PredDecl):
        body = f"pred {s.name} over {{{', '.join(s.index)}}} = {_pp_fibres(s.fibres)}"
    elif isinstance(s, AssemblyDecl):
        body = f"assembly {s.name} = {_pp_fibres(s.fibres)}"
    elif isinstance(s, MapDecl):
        graph = "{ " + ", ".join(f"{x} -> {y}" for x, y in s.graph) + " }" if s.graph else "{}"
        tr = "auto" if s.tracker is None else pp_term(s.tracker)
        body = f"map {s.name} : {s.source} -> {s.target} = {graph} tracked {tr}"
    elif isinstance(s, UniverseDecl):
        body = f"universe {s.name} = {{{', '.join(pp_nested(m) for m in s.members)}}}"
    elif isinstance(s, ClosureDecl):
        body = f"closure {s.kind}"
    elif isinstance(s, SetDecl):
        body = f"set {s.key} {s.value}"
    elif isinstance(s, CheckQ):
        body = f"check {pp_nested(s.lhs)} |- {pp_nested(s.rhs)}"
        if s.realizer is not None:
            body += f" with {pp_term(s.realizer)}"
    elif isinstance(s, SearchQ):
        body = f"search {pp_nested(s.lhs)} |- {pp_nested(s.rhs)} depth {s.depth}"
    elif isinstance(s, MapQ):
        body = f"{s.kind} {s.map}"
    elif isinstance(s, SmallQ):
        body = f"small {s.map} bound {s.bound}"
    elif isinstance(s, ClassifyQ):
        body = f"classify {s.map} in {s.universe}"
    elif isinstance(s, SuiteQ):
        parts = ["suite", s.name] + ([s.operator] if s.operator else [])
        parts += [f"{k} {v}" for k, v in s.params]
        body = " ".join(parts)
    else:
        raise TypeError(s)
    return body + ";"


def pretty(session: Session) -> str:
    return "".join(pp_statement(s) + "\n" for s in session.statements)


def token_stream(src: str) -> Iterator[tuple]:
    """Tokens without positions, for whitespace-insensitive comparison."""
    return [(t.kind, t.text) for t in tokenize(src)]
