import pytest
from hypothesis import given, settings, strategies as st

from realtopos import dsl
from realtopos.dsl import (
    Abs, Ap, CheckQ, Comment, DslSyntaxError, NameClash, NAtom, NBin, NClose, NPair, NRef, Name,
    NestedDecl, Num, OracleDecl, PAtom, PBase, PBin, PRef, PropDecl, SearchQ, Session,
    UnresolvedReference, parse, pretty, token_stream, tokenize,
)


def test_prop_base():
    s = parse("prop T = base {K};")
    (d,) = s.statements
    assert isinstance(d, PropDecl) and d.name == "T"
    assert d.expr == PBase((Name("K"),))


def test_check_with_realizer():
    s = parse("prop P = full; nested A = (P, P); check A |- A with \\x. x;")
    q = s.queries[0]
    assert isinstance(q, CheckQ)
    assert q.realizer == Abs(("x",), Name("x"))


def test_unclosed_brace_position():
    with pytest.raises(DslSyntaxError) as exc:
        parse("prop X = base {K")
    e = exc.value
    assert (e.line, e.col) == (1, 17)
    assert "unclosed '{'" in str(e)
    assert {",", "}"} <= set(e.expected)


def test_name_clash_and_unresolved():
    with pytest.raises(NameClash):
        parse("prop A = full; prop A = fullsub;")
    with pytest.raises(UnresolvedReference):
        parse("prop A = B;")
    with pytest.raises(UnresolvedReference):
        parse("check top |- Q;")


def test_kinds_are_separate_namespaces():
    parse("prop A = full; nested A = (A, A); check A |- A;")


def test_comments_kept():
    s = parse("# hello\nprop A = full; # trailing\n")
    assert isinstance(s.statements[0], Comment)
    assert [type(x) for x in s.statements] == [Comment, PropDecl, Comment]


def test_precedence():
    s = parse("prop A = full; prop B = A -> A -> A /\\ A \\/ A;")
    e = s.statements[1].expr
    assert e.op == "->" and e.right.op == "->"
    assert e.right.right.op == "\\/" and e.right.right.left.op == "/\\"


def test_pretty_round_trip_demo():
    src = """
    # demo
    oracle c0 c1;
    prop T = base {K, S K, c0};
    prop F = T -> T /\\ full;
    nested A = (T, fullsub);
    nested B = j((F, F)) /\\ top -> u;
    pred P over {a, b} = { a: A, b: open(B) };
    assembly X = { x: A, y: top };
    map f : X -> X = { x -> y, y -> y } tracked \\w. K w (S K);
    universe V = {top, bot};
    closure open;
    set fuel 5000;
    check P |- P with \\x y. x (y 3);
    search A |- B depth 4;
    verify f; cover f; small f bound 4; classify f in V;
    suite subtopos closed seed 3 count 2;
    """
    s = parse(src)
    again = parse(pretty(s))
    assert again == s
    assert token_stream(pretty(again)) == token_stream(pretty(s))


def test_suite_params_checked():
    with pytest.raises(dsl.DslError):
        parse("suite small nonsense 3;")


def test_nested_parentheses_parse_quickly():
    e = "top"
    for _ in range(40):
        e = f"({e})"
    (q,) = parse(f"check {e} |- top;").queries
    assert q.lhs == NAtom("top")


def test_lambda_rejected_in_base():
    with pytest.raises(dsl.DslError, match="lambda"):
        parse("nested A = (base {\\x. x}, full);")


def test_tokens():
    kinds = [t.kind for t in tokenize("check A |- B; # c")]
    assert kinds == ["IDENT", "IDENT", "SYM", "IDENT", "SYM", "COMMENT", "EOF"]


# --- round-trip property over generated sessions

CONSTS = st.sampled_from(("K", "S", "I", "p", "p0", "succ", "c0")).map(Name)
NUMS = st.integers(0, 5).map(Num)


def _apps(leaf):
    return st.recursive(leaf, lambda c: st.builds(Ap, c, c), max_leaves=5)


OPEN_TERMS = _apps(st.one_of(CONSTS, NUMS, st.just(Name("x"))))
ABS = st.builds(lambda b: Abs(("x",), b), OPEN_TERMS)
TERMS = st.recursive(st.one_of(CONSTS, NUMS, ABS), lambda c: st.builds(Ap, c, c), max_leaves=4)
SK_TERMS = _apps(st.one_of(CONSTS, NUMS))
OPS = st.sampled_from(["->", "/\\", "\\/"])


def _props(refs):
    atoms = [st.sampled_from(["full", "fullsub"]).map(PAtom),
             st.lists(SK_TERMS, max_size=3).map(lambda ts: PBase(tuple(ts)))]
    if refs:
        atoms.append(st.sampled_from(refs).map(PRef))
    return st.recursive(st.one_of(*atoms), lambda c: st.builds(PBin, OPS, c, c), max_leaves=4)


PROPS0, PROPS = _props(()), _props(("P0", "P1"))


def _nested(props, refs):
    atoms = [st.sampled_from(["top", "bot", "u"]).map(NAtom), st.builds(NPair, props, props)]
    if refs:
        atoms.append(st.sampled_from(refs).map(NRef))
    return st.recursive(
        st.one_of(*atoms),
        lambda c: st.one_of(st.builds(NBin, OPS, c, c),
                            st.builds(NClose, st.sampled_from(["open", "closed", "j"]), c)),
        max_leaves=4)


NESTED0, NESTED = _nested(PROPS, ()), _nested(PROPS, ("N0", "N1"))


@st.composite
def sessions(draw):
    out = [OracleDecl(("c0",)),
           PropDecl("P0", draw(PROPS0)), PropDecl("P1", draw(PROPS0)),
           NestedDecl("N0", draw(NESTED0)), NestedDecl("N1", draw(NESTED0))]
    for _ in range(draw(st.integers(0, 3))):
        lhs, rhs = draw(NESTED), draw(NESTED)
        if draw(st.booleans()):
            out.append(CheckQ(lhs, rhs, draw(st.none() | TERMS)))
        else:
            out.append(SearchQ(lhs, rhs, draw(st.integers(1, 7))))
    if draw(st.booleans()):
        out.append(Comment("note"))
    return Session(tuple(out))


@settings(max_examples=200, deadline=None)
@given(sessions())
def test_parse_pretty_round_trip(s):
    text = pretty(s)
    assert parse(text) == s
    assert pretty(parse(text)) == text
