"""Hypothesis strategies for small ground programs."""

from hypothesis import strategies as st

from rasq.harness import rules_text
from rasq.program import parse

NAMES = "abcdef"


@st.composite
def raw_rules(draw, atoms=5, max_rules=8, max_body=3):
    names = NAMES[: draw(st.integers(1, atoms))]
    atom = st.sampled_from(names)
    rules = []
    for _ in range(draw(st.integers(0, max_rules))):
        head = draw(atom)
        pos = draw(st.sets(atom, max_size=max_body))
        neg = draw(st.sets(atom, max_size=max_body - len(pos)))
        rules.append((head, tuple(sorted(pos)), tuple(sorted(neg))))
    return rules


@st.composite
def programs(draw, **kw):
    return parse(rules_text(draw(raw_rules(**kw))))
