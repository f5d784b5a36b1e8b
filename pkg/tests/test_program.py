import pytest
from hypothesis import given

from rasq import fixtures
from rasq.program import (
    GroundingError,
    Literal,
    ParseError,
    format_program,
    ground,
    normalize_constraint,
    parse,
    parse_literal,
    parse_query,
)

from .strategies import programs


def names(atoms):
    return sorted(a.name for a in atoms)


def test_parse_single_rule():
    p = parse("old :- not old.")
    assert len(p.rules) == 1
    r = p.rules[0]
    assert r.head.name == "old"
    assert [(l.negated, l.atom.name) for l in r.body] == [(True, "old")]


def test_parse_empty_document():
    p = parse("")
    assert len(p.rules) == 0 and not p.atoms


def test_parse_atoms_and_heads():
    p = parse("e.\nd :- e, not f.")
    assert len(p.rules) == 2
    assert names(p.atoms) == ["d", "e", "f"]
    assert names(p.heads) == ["d", "e"]


def test_body_order_is_kept():
    p = parse("f :- not g, e, not a.")
    assert [str(l) for l in p.rules[0].body] == ["not g", "e", "not a"]


def test_comments_and_layout():
    p = parse("% a comment\na :- b, % trailing\n  not c.\nb.")
    assert [str(r) for r in p.rules] == ["a :- b, not c.", "b."]


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("a :- b", 1, 7),
        ("a :- .", 1, 6),
        ("a.\nb :- c d.", 2, 8),
        ("a :- b ; c.", 1, 8),
    ],
)
def test_syntax_errors_report_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_arity_clash_rejected():
    with pytest.raises(ParseError):
        parse("p(a). q :- p.")


def test_function_symbols_rejected():
    with pytest.raises(ParseError):
        parse("p(f(a)).")


def test_guard_prefix_is_not_user_syntax():
    with pytest.raises(ParseError):
        parse("_c1 :- a.")


def test_constraint_gets_guard_rule():
    p = parse("a.\n:- a, not b.")
    (c,) = p.constraints
    assert c.guard.is_guard
    assert c.guard in p.heads
    guard_rules = p.rules_for(c.guard)
    assert len(guard_rules) == 1
    assert [str(l) for l in guard_rules[0].body] == ["a", "not b"]


def test_identical_constraints_get_distinct_guards():
    p = parse("a. :- a. :- a.")
    g1, g2 = (c.guard for c in p.constraints)
    assert g1 != g2
    assert (g1.name, g2.name) == ("_c1", "_c2")


def test_normalize_constraint_appends_rule():
    p = parse("a.")
    body = (Literal(p.atom("a")), Literal(p.symbols.intern("b"), True))
    p2, c = normalize_constraint(body, p)
    assert p2.rules[-1].head == c.guard
    assert c.guard in p2.heads and c.guard in p2.atoms
    assert p2.rules[:-1] == p.rules
    with pytest.raises(ValueError):
        normalize_constraint((), p)


def test_recommender_preference_constraint():
    p = fixtures.load("george_pref")
    (c,) = p.constraints
    assert [str(l) for l in c.body] == ["not preference(george)"]
    assert [str(l) for l in p.rules_for(c.guard)[0].body] == ["not preference(george)"]


def test_ground_recommender_with_george():
    p = fixtures.load("george")
    assert p.is_ground
    # 20 schemata instantiated once each, plus the fact
    assert len(p.rules) == 21
    assert all("george" in r.head.name for r in p.rules)


def test_ground_expands_over_constants():
    p = ground(parse("p(X) :- q(X). q(a). q(b)."))
    assert [str(r) for r in p.rules] == ["p(a) :- q(a).", "p(b) :- q(b).", "q(a).", "q(b)."]


def test_ground_is_identity_on_ground_programs():
    p = parse("a :- not b. b.")
    assert ground(p) is p


def test_unsafe_rule_rejected():
    with pytest.raises(GroundingError):
        ground(parse("p(X) :- not q(X). q(a)."))


def test_ground_constraints_get_one_guard_per_instance():
    p = ground(parse("q(a). q(b). :- q(X), not r(X)."))
    assert len(p.constraints) == 2
    assert len({c.guard for c in p.constraints}) == 2


def test_parse_literal_and_query():
    p = parse("a :- not b.")
    assert parse_literal("not b", p) == Literal(p.atom("b"), True)
    assert parse_query("?- a, not b.", p) == (Literal(p.atom("a")), Literal(p.atom("b"), True))
    # atoms the program never mentions can still be asked about
    (lit,) = parse_query("zz", p)
    assert lit.atom not in p.atoms
    with pytest.raises(ParseError):
        parse_query("p(X)", p)
    with pytest.raises(ParseError):
        parse_literal("a b", p)


def test_format_program_prints_constraints():
    p = parse("a. :- not a.")
    assert format_program(p) == "a.\n:- not a.\n"


@given(programs(atoms=6, max_rules=10))
def test_round_trip(p):
    again = parse(format_program(p))
    assert again.structure() == p.structure()


@given(programs())
def test_atoms_and_heads_invariant(p):
    body_atoms = {l.atom for r in p.rules for l in r.body}
    assert p.heads == {r.head for r in p.rules}
    assert p.atoms == p.heads | body_atoms
