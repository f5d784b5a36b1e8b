from hypothesis import given

from rasq import fixtures, oracle
from rasq.graph import classify, rel_rul
from rasq.program import parse
from rasq.wfs import Status, definite_status, wfs

from .strategies import programs


def names(atoms):
    return sorted(a.name for a in atoms)


def test_ex8():
    m = wfs(fixtures.load("ex8"))
    assert names(m.w_plus) == ["e"] and names(m.w_minus) == ["d"]


def test_positive_loop_is_false():
    m = wfs(parse("p :- p."))
    assert names(m.w_plus) == [] and names(m.w_minus) == ["p"]


def test_even_cycle_is_undefined():
    p = parse(fixtures.EVEN)
    m = wfs(p)
    assert not m.w_plus and not m.w_minus
    assert names(m.undefined(p.atoms)) == ["a", "b"]


def test_definite_status():
    ex8 = fixtures.load("ex8")
    assert definite_status(ex8, ex8.atom("e")) is Status.TRUE
    assert definite_status(ex8, ex8.atom("d")) is Status.FALSE
    assert definite_status(ex8, ex8.atom("h")) is Status.UNDEFINED
    p = parse("a :- not b.")
    assert definite_status(p, p.atom("b")) is Status.FALSE
    assert definite_status(p, p.atom("a")) is Status.TRUE


@given(programs())
def test_agrees_with_reduct_alternating_fixpoint(p):
    m = wfs(p)
    assert (m.w_plus, m.w_minus) == oracle.well_founded_by_reduct(p)
    assert not (m.w_plus & m.w_minus)


@given(programs())
def test_true_part_is_consistently_supported(p):
    assert oracle.is_cs_set(p, wfs(p).w_plus)


@given(programs())
def test_relevance(p):
    for a in p.atoms:
        assert definite_status(p, a) is definite_status(rel_rul(p, [a]), a)
        assert definite_status(p, a) is wfs(p).value(a)


@given(programs())
def test_acyclic_programs_are_two_valued(p):
    if classify(p) == "acyclic":
        m = wfs(p)
        assert m.w_plus | m.w_minus == p.atoms
        assert oracle.answer_sets(p) == [m.w_plus]
