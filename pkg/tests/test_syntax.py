import pytest
from hypothesis import given, settings

from hydranav.syntax import (
    At, Bang, HdtSyntaxError, LinPi, LinTensor, ListOf, ParamPi, Safe, See,
    Sum, Unit, Var, classify, parse_module, parse_term, parse_type,
    print_module, print_term, print_type, shape,
)
from hydranav.syntax.ast import Decl, NatLit, TypeAlias

from conftest import term_exprs, type_exprs


def test_parse_single_declaration():
    decls = parse_module("f : (x : See(2)) -o At(<0.0, 0.0>) ;\nf = \\x. x ;")
    assert len(decls) == 1
    d = decls[0]
    assert isinstance(d, Decl) and d.name == "f"
    assert isinstance(d.signature, LinPi)
    assert d.body is not None


def test_parse_empty_module():
    assert parse_module("") == []
    assert parse_module("-- only a comment\n") == []


def test_parse_unbalanced_input_reports_position():
    with pytest.raises(HdtSyntaxError) as e:
        parse_module("f : (x :")
    assert e.value.loc is not None


def test_reserved_word_misuse():
    with pytest.raises(HdtSyntaxError, match="reserved"):
        parse_module("let : Unit ;")


def test_type_alias_resolution():
    decls = parse_module("type T = Unit * Unit ;\nf : T -o Unit ;")
    assert isinstance(decls[0], TypeAlias)
    sig = decls[1].signature
    assert isinstance(sig, LinPi) and isinstance(sig.domain, LinTensor)


def test_precedence_arrow_vs_tensor():
    # (x:A) -o B * C groups the tensor under the arrow
    t = parse_type("(x : Unit) -o Unit * Unit")
    assert isinstance(t, LinPi) and isinstance(t.codomain, LinTensor)
    # the other association needs explicit parens
    t2 = parse_type("((x : Unit) -o Unit) * Unit")
    assert isinstance(t2, LinTensor) and isinstance(t2.left, LinPi)
    assert print_type(t) == "(x : Unit) -o Unit * Unit"
    assert print_type(t2) == "((x : Unit) -o Unit) * Unit"
    assert parse_type(print_type(t2)) == t2


def test_telescope_sugar():
    t = parse_type("(g : Point, n : Nat) -> Unit")
    assert isinstance(t, ParamPi) and isinstance(t.codomain, ParamPi)
    t2 = parse_type("(x, y : Nat) -> Unit")
    assert t2.binder == "x" and t2.codomain.binder == "y"
    assert t2.domain == t2.codomain.domain


def test_print_unit():
    assert print_type(Unit()) == "Unit"


@settings(max_examples=300, deadline=None)
@given(type_exprs())
def test_type_roundtrip(t):
    assert parse_type(print_type(t)) == t


@settings(max_examples=300, deadline=None)
@given(term_exprs())
def test_term_roundtrip(m):
    assert parse_term(print_term(m)) == m


def test_module_roundtrip_on_corpus():
    src = open("corpus/navigation.hdt").read()
    decls = parse_module(src)
    reprinted = print_module(decls)
    again = parse_module(reprinted)
    assert [type(d) for d in again] == [type(d) for d in decls]
    for a, b in zip(decls, again):
        if isinstance(a, Decl):
            assert a.signature == b.signature and a.body == b.body
        else:
            assert a.body == b.body


# ---------------------------------------------------------------------------
# shape
# ---------------------------------------------------------------------------

def test_shape_erases_simple_types():
    assert shape(See(NatLit(3))) == Unit()
    assert shape(Unit()) == Unit()
    t = parse_type("(x : See(2)) * At(<0.0, 0.0>)")
    assert shape(t) == LinTensor("x", Unit(), Unit())


def test_shape_maps_linear_arrow_to_parameter_arrow():
    t = parse_type("(x : See(1)) -o Safe(x)")
    s = shape(t)
    assert isinstance(s, ParamPi) and s.domain == Unit() and s.codomain == Unit()


@settings(max_examples=200, deadline=None)
@given(type_exprs())
def test_shape_idempotent(t):
    assert shape(shape(t)) == shape(t)


@settings(max_examples=200, deadline=None)
@given(type_exprs())
def test_shape_lands_in_parameter_types(t):
    assert classify(shape(t)) == "parameter"


def _no_simple(t):
    if isinstance(t, (See, At, Safe)):
        return False
    for sub in (getattr(t, "left", None), getattr(t, "right", None),
                getattr(t, "domain", None), getattr(t, "codomain", None),
                getattr(t, "body", None), getattr(t, "elem", None)):
        if sub is not None and not _no_simple(sub):
            return False
    return True


@settings(max_examples=200, deadline=None)
@given(type_exprs())
def test_shape_removes_every_simple_node(t):
    assert _no_simple(shape(t))


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("src,expected", [
    ("!At(<0.0, 0.0>)", "parameter"),
    ("See(3)", "linear"),
    ("(x : Unit) -> !See(3)", "parameter"),
    ("Unit", "parameter"),
    ("Nat", "parameter"),
    ("List(Nat)", "parameter"),
    ("List(See(1))", "linear"),
    ("Unit * Unit", "parameter"),
    ("Unit * See(1)", "linear"),
    ("Unit (+) Unit", "parameter"),
    ("(x : Unit) -o Unit", "linear"),
    ("(n : Nat) -> See(n) -o Unit", "linear"),
])
def test_classify(src, expected):
    assert classify(parse_type(src)) == expected


def test_corpus_types_parse_and_classify():
    decls = parse_module(open("corpus/navigation.hdt").read())
    for d in decls:
        t = d.signature if isinstance(d, Decl) else d.body
        assert classify(t) in ("parameter", "linear")
