import pytest
from hypothesis import given, strategies as st

from rasq import fixtures, oracle
from rasq.graph import classify, decompose
from rasq.program import parse
from rasq.wfs import wfs

from .strategies import programs


def names(atoms):
    return sorted(a.name for a in atoms)


def families(models):
    return oracle.model_names(models)


def atoms(p, *ns):
    return p.atoms_named(*ns)


P1 = parse(fixtures.P1)
P2 = parse(fixtures.P2)
P3 = parse(fixtures.P3)
EVEN = parse(fixtures.EVEN)
FORCE = parse(fixtures.FORCE)
EX8 = fixtures.load("ex8")


def rule_texts(p):
    return [str(r) for r in p.rules]


def test_gl_reduct():
    assert rule_texts(oracle.gl_reduct(P1, atoms(P1, "old"))) == []
    assert rule_texts(oracle.gl_reduct(P1, ())) == ["old."]
    p = parse("a :- not b.")
    assert rule_texts(oracle.gl_reduct(p, atoms(p, "a"))) == ["a."]


def test_least_model():
    assert names(oracle.least_model(parse("a. p :- a."))) == ["a", "p"]
    assert names(oracle.least_model(parse(""))) == []
    assert names(oracle.least_model(parse("p :- p."))) == []
    with pytest.raises(ValueError):
        oracle.least_model(P1)


def test_answer_sets():
    assert oracle.answer_sets(parse(fixtures.VACATION)) == []
    assert families(oracle.answer_sets(P2)) == [["old"]]
    assert families(oracle.answer_sets(EVEN)) == [["a"], ["b"]]


def test_modified_reduct():
    assert rule_texts(oracle.modified_reduct(FORCE, atoms(FORCE, "a", "p"))) == ["p :- a."]
    assert rule_texts(oracle.modified_reduct(FORCE, atoms(FORCE, "a"))) == rule_texts(FORCE)
    assert rule_texts(oracle.modified_reduct(P1, ())) == rule_texts(P1)


def test_modified_tp_fixpoint():
    guarded, hat = oracle.modified_tp_fixpoint(oracle.modified_reduct(FORCE, atoms(FORCE, "a")))
    assert sorted(map(str, guarded)) == ["a||{not p}"]
    assert names(hat) == ["a"]
    guarded, hat = oracle.modified_tp_fixpoint(parse("e."))
    assert sorted(map(str, guarded)) == ["e||{}"] and names(hat) == ["e"]
    guarded, hat = oracle.modified_tp_fixpoint(oracle.modified_reduct(P3, atoms(P3, "old")))
    assert names(hat) == ["old"]
    assert "old||{not young}" in map(str, guarded)


def test_gamma_hat():
    assert names(oracle.gamma_hat(P1, ())) == []
    assert names(oracle.gamma_hat(P2, atoms(P2, "old"))) == ["old"]


def test_is_supported():
    assert oracle.is_supported(EVEN, atoms(EVEN, "a"))
    assert not oracle.is_supported(EVEN, atoms(EVEN, "a", "b"))
    assert oracle.is_supported(EX8, ())


def test_is_consistently_supported():
    ok, _ = oracle.is_consistently_supported(FORCE, atoms(FORCE, "a", "p"), FORCE.atom("p"))
    assert not ok
    m1 = atoms(EX8, "a", "e", "f", "h", "s")
    ok, witness = oracle.is_consistently_supported(EX8, m1, EX8.atom("f"))
    assert ok
    assert sorted(r.label for r in witness) == ["r7", "r8"]
    p = parse("e.")
    ok, witness = oracle.is_consistently_supported(p, atoms(p, "e"), p.atom("e"))
    assert ok and [r.label for r in witness] == ["r1"]


def test_is_mcs():
    assert oracle.is_mcs(EX8, atoms(EX8, "a", "e", "f", "h", "s"))
    assert not oracle.is_mcs(EX8, atoms(EX8, "e"))
    assert oracle.is_mcs(P1, ())
    assert oracle.is_mcs(EVEN, atoms(EVEN, "a"))


def test_ras_standalone():
    assert families(oracle.ras_standalone(parse(fixtures.VACATION))) == [["beach"], ["mountain"], ["travel"]]
    assert families(oracle.ras_standalone(P1)) == [[]]
    assert families(oracle.ras_standalone(FORCE)) == [["a"]]


def test_ras_sets():
    assert families(oracle.ras_sets(EX8)) == [["a", "e", "f", "h", "s"], ["e", "g", "h", "s"]]
    assert families(oracle.ras_sets(P3)) == [["old"]]
    assert families(oracle.ras_sets(parse(fixtures.QABC))) == [["a", "q"], ["b"]]


def test_simplify_component_ex8_upper_layer():
    upper = decompose(EX8).layers[1].program
    simple = oracle.simplify_component(upper, atoms(EX8, "a", "e"))
    by_label = {r.label: str(r) for r in simple.rules}
    assert "r6" not in by_label  # not a with a true below
    assert by_label["r7"] == "f."


def test_simplify_component_trivial_cases():
    p = parse("a :- not b. b :- not a.")
    assert rule_texts(oracle.simplify_component(p, ())) == rule_texts(p)
    p = parse("c :- x, not y.")
    assert rule_texts(oracle.simplify_component(p, atoms(p, "x"))) == ["c."]


def test_admissible():
    p = fixtures.load("george_pref")
    disco = [m for m in oracle.ras_sets(p) if p.atom("go_disco(george)") in m]
    assert disco and all(oracle.admissible(p, p.constraints, m) for m in disco)
    q = parse("a. :- a.")
    (m,) = oracle.ras_sets(q)
    assert not oracle.admissible(q, q.constraints, m)
    assert oracle.admissible(EX8, (), atoms(EX8, "e"))


def test_size_guard():
    text = " ".join(f"a{i} :- not b{i}. b{i} :- not a{i}." for i in range(11))
    with pytest.raises(oracle.SizeGuardError):
        oracle.answer_sets(parse(text))
    assert oracle.answer_sets(parse("a."), max_candidates=2) != []


def test_retraction_example_with_fact_q():
    # "p :- a. a :- not p, not q." with the fact q added
    p = parse("p :- a. a :- not p, not q. q.")
    assert families(oracle.ras_sets(p)) == [["q"]]


def test_mcs_and_ras_part_ways_on_a_fact_blocking_a_rule():
    # {c} and {d} are both maximal consistently supported, but d is a fact
    # and every resource-based answer set contains the well-founded truths
    p = parse("c :- not d. d.")
    assert families(oracle.mcs_sets(p)) == [["c"], ["d"]]
    assert families(oracle.ras_sets(p)) == [["d"]]


# ------------------------------------------------------------ properties

@given(programs(), st.randoms(use_true_random=False))
def test_gamma_hat_antimonotone(p, rnd):
    heads = sorted(p.heads, key=lambda a: a.id)
    i2 = frozenset(a for a in heads if rnd.random() < 0.5)
    i1 = frozenset(a for a in i2 if rnd.random() < 0.5)
    assert oracle.gamma_hat(p, i2) <= oracle.gamma_hat(p, i1)


@given(programs(), st.randoms(use_true_random=False))
def test_gamma_hat_matches_guarded_fixpoint(p, rnd):
    i = frozenset(a for a in p.heads if rnd.random() < 0.5)
    _, hat = oracle.modified_tp_fixpoint(oracle.modified_reduct(p, i))
    assert oracle.gamma_hat(p, i) == hat


@given(programs(atoms=4, max_rules=6), st.randoms(use_true_random=False))
def test_consistent_support_search_matches_definition(p, rnd):
    i = frozenset(a for a in p.heads if rnd.random() < 0.6)
    for a in i:
        ok, witness = oracle.is_consistently_supported(p, i, a)
        assert ok == oracle.consistent_support_by_subsets(p, i, a)
        if ok:
            assert all(r.pos <= i and not (r.neg & i) for r in witness)


@given(programs())
def test_semantic_invariants(p):
    models = oracle.ras_sets(p)
    assert models
    for m1 in models:
        for m2 in models:
            assert not m1 < m2
    if frozenset() in models:
        assert models == [frozenset()]
    assert set(oracle.answer_sets(p)) <= set(models)
    w_plus = wfs(p).w_plus
    assert all(w_plus <= m for m in models)
    if classify(p) == "acyclic":
        assert models == oracle.answer_sets(p) == [w_plus]


@given(programs())
def test_layering_invariance(p):
    assert oracle.ras_sets(p, "merged") == oracle.ras_sets(p, "fine")
    assert oracle.ras_sets(p, "merged", False) == oracle.ras_sets(p, "fine", False)


@given(programs())
def test_every_ras_is_consistently_supported(p):
    for m in oracle.ras_sets(p):
        assert oracle.is_cs_set(p, m)


@given(programs())
def test_answer_sets_are_mcs(p):
    for m in oracle.answer_sets(p):
        assert oracle.is_mcs(p, m)
