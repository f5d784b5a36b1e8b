from hypothesis import given

from rasq import fixtures
from rasq.graph import (
    build_graph,
    classify,
    components,
    decompose,
    dependencies_of,
    format_edges,
    rel_rul,
    relevant_constraints,
    stratified_atoms,
)
from rasq.program import parse

from .strategies import programs


def names(atoms):
    return sorted(a.name for a in atoms)


def labels(prog):
    return sorted(r.label for r in prog.rules)


def edges(p):
    return {(u.name, v.name, s) for u, v, s in build_graph(p).edges}


def test_ex8_edges():
    e = edges(fixtures.load("ex8"))
    assert {("a", "g", "-"), ("g", "a", "-")} <= e
    assert ("h", "p", "-") in e and ("p", "h", "+") in e


def test_fact_has_no_edges():
    assert edges(parse("e.")) == set()


def test_force_edges():
    assert edges(parse(fixtures.FORCE)) == {("p", "a", "+"), ("a", "p", "-")}


def test_dependencies():
    ex8 = fixtures.load("ex8")
    g = build_graph(ex8)
    assert names(dependencies_of(g, ex8.atom("f"))) == ["a", "d", "e", "g"]
    assert names(dependencies_of(g, ex8.atom("e"))) == []
    p = parse("a :- not a.")
    assert names(dependencies_of(build_graph(p), p.atom("a"))) == ["a"]


def test_rel_rul():
    ex8 = fixtures.load("ex8")
    assert labels(rel_rul(ex8, [ex8.atom("f")])) == ["r1", "r2", "r6", "r7", "r8"]
    assert len(rel_rul(ex8, [])) == 0
    p1 = parse(fixtures.P1)
    assert rel_rul(p1, [p1.atom("old")]).rules == p1.rules


def test_classify():
    assert classify(parse("a :- not b. b :- not a.")) == "negatively-cyclic"
    assert classify(parse("e. d :- e.")) == "acyclic"
    assert classify(parse("p :- p.")) == "positively-cyclic"
    assert classify(fixtures.load("ex8")) == "jigsaw"


def test_decompose_ex8():
    layers = decompose(fixtures.load("ex8"))
    assert [labels(l.program) for l in layers] == [
        ["r1", "r2", "r4", "r5", "r8"],
        ["r3", "r6", "r7"],
    ]


def test_decompose_single_even_cycle():
    layers = decompose(parse(fixtures.EVEN))
    assert len(layers) == 1 and layers.layers[0].tag == "negatively-cyclic"


def test_decompose_stratified():
    layers = decompose(parse("e. d :- e."))
    assert [labels(l.program) for l in layers] == [["r1"], ["r2"]]


def test_relevant_constraints():
    p = fixtures.load("george_pref")
    q = p.atom("go_disco(george)")
    assert relevant_constraints(p, p.constraints, q) == list(p.constraints)
    p = parse("a. b. :- not b.")
    assert relevant_constraints(p, p.constraints, p.atom("a")) == []
    p = parse("b. :- not b.")
    # an atom with no rules has nothing relevant, so every constraint applies
    assert relevant_constraints(p, p.constraints, p.symbols.intern("zz")) == list(p.constraints)


def test_format_edges():
    assert format_edges(build_graph(parse(fixtures.FORCE))) == "a --not-> p\np -+-> a"


def test_stratified_atoms():
    p = parse(fixtures.EVEN3)
    assert names(stratified_atoms(p)) == ["e"]
    ex8 = fixtures.load("ex8")
    assert names(stratified_atoms(ex8)) == ["d", "e"]


@given(programs())
def test_rel_rul_idempotent(p):
    for a in p.atoms:
        once = rel_rul(p, [a])
        assert rel_rul(once, [a]).rules == once.rules


@given(programs())
def test_layers_partition_rules_and_sit_on_top(p):
    for strategy in ("merged", "fine"):
        layers = decompose(p, strategy).layers
        seen = [r for l in layers for r in l.rules]
        assert sorted(r.index for r in seen) == list(range(len(p.rules)))
        below = set()
        for layer in layers:
            for a in layer.heads:
                assert {r.index for r in rel_rul(p, [a]).rules} <= below | {r.index for r in layer.rules}
            below |= {r.index for r in layer.rules}


@given(programs())
def test_positively_cyclic_has_no_negative_cycle_edge(p):
    if classify(p) == "positively-cyclic":
        g = build_graph(p)
        for u, v, s in g.edges:
            if s == "-":
                assert u not in dependencies_of(g, v)


@given(programs())
def test_components_are_bottom_up(p):
    comps = components(p)
    seen = set()
    g = build_graph(p)
    for comp, _h in comps:
        for a in comp:
            for b in dependencies_of(g, a):
                if p.rules_for(b) and b not in comp:
                    assert b in seen
        seen |= comp
