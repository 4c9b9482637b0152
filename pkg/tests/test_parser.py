import pytest
from hypothesis import given

from abdual.dual import attach_query, dual_unfold
from abdual.errors import AbducibleHeadError, NonGroundError, ParseError, QueryShapeError, ReservedSymbolError
from abdual.model import AbductiveFramework, Program, literal
from abdual.parser import parse_document, parse_framework, parse_program, parse_query, serialize, serialize_framework

from .conftest import frameworks, programs

P1 = "p :- not q.\np :- not r.\nq :- not p.\n"


def test_p1_framework():
    fw = parse_framework(P1)
    assert [str(r) for r in fw.program] == ["p :- not q.", "p :- not r.", "q :- not p."]
    assert fw.abducibles == frozenset() and fw.integrity == ()


def test_empty_text():
    assert parse_framework("") == AbductiveFramework()


def test_p3_inline_constraints():
    text = "p :- not q*.\nq :- not p*.\nabducible p*.\nabducible q*.\n:- p, -p*.\n:- q, -q*."
    fw = parse_framework(text)
    assert {str(a) for a in fw.abducibles} == {"p*", "q*", "-p*", "-q*"}
    assert [str(r) for r in fw.integrity] == ["bottom :- p, -p*.", "bottom :- q, -q*."]


def test_comments_and_explicit_negation():
    fw = parse_framework("% comment\n-p :- not -q, r.  % trailing\n")
    assert str(fw.program.rules[0]) == "-p :- not -q, r."


@pytest.mark.parametrize(
    "text, error, pos",
    [
        ("p :- X.", NonGroundError, (1, 6)),
        ("abducible a.\na :- b.", AbducibleHeadError, (2, 1)),
        ("bottom :- a.", ReservedSymbolError, (1, 1)),
        ("p :- t.", ReservedSymbolError, (1, 6)),
        ("fold_a_1_x.", ReservedSymbolError, (1, 1)),
        ("p :- q", ParseError, (1, 7)),
        ("not p :- q.", ParseError, (1, 1)),
    ],
)
def test_errors_carry_positions(text, error, pos):
    with pytest.raises(error) as exc:
        parse_framework(text)
    assert (exc.value.line, exc.value.column) == pos


def test_queries():
    assert parse_query("q") == literal("q")
    assert parse_query("not -p") == literal("not -p")
    assert parse_query("?- s.") == literal("s")
    with pytest.raises(QueryShapeError):
        parse_query("p, q")
    with pytest.raises(ParseError):
        parse_query("not")


def test_document_keeps_positions():
    doc = parse_document("a.\n\nb :- a.\n")
    assert [doc.positions[r][0] for r in doc.rules] == [1, 3]


def test_serialize_p1_and_empty():
    fw = parse_framework(P1)
    assert serialize(fw.program) == P1
    assert serialize(Program()) == ""


def test_dual_text_listing():
    fw = parse_framework(P1)
    text = serialize(dual_unfold(attach_query(fw, literal("q"))).rules)
    rules = set(text.splitlines())
    for line in ("not p :- q, r.", "not q :- p.", "not r :- t.", "not query :- not q.", "not query :- bottom.", "not bottom :- t."):
        assert line in rules
    assert parse_program(text, dual=True) == dual_unfold(attach_query(fw, literal("q"))).rules


def test_plain_program_rejects_declarations():
    with pytest.raises(ParseError):
        parse_program("abducible a.")


@given(frameworks())
def test_framework_round_trip(fw):
    assert parse_framework(serialize_framework(fw)) == fw


@given(programs())
def test_program_round_trip(p):
    assert parse_program(serialize(p)) == p
