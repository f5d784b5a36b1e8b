"""Small named programs used by the tests, the harness and the CLI (``--example``)."""

from __future__ import annotations

from .program import Program, ground, parse

P1 = "old :- not old."

P2 = """
old :- not old.
old :- not young.
"""

P3 = """
old :- not old.
old :- not young.
young :- old.
"""

VACATION = """
beach :- not mountain.
mountain :- not travel.
travel :- not beach.
"""

EX8 = """
a :- not g.
g :- not a.
s :- not p.
p :- h.
h :- not p.
f :- not a, d.
f :- not g, e.
e.
"""

FORCE = """
p :- a.
a :- not p.
"""

EVEN = """
a :- not b.
b :- not a.
"""

EVEN3 = """
a :- not b, not e.
b :- not a.
e.
"""

QABC = """
q :- not a, c.
q :- not b.
a :- not b.
b :- not a.
"""

RECOMMENDER = """
formal_dress(P) :- person(P), not normal_dress(P), old_fashioned(P).
normal_dress(P) :- person(P), not eccentric_dress(P).
eccentric_dress(P) :- person(P), not formal_dress(P), young_mind(P).
old(P) :- person(P), not middleaged(P).
middleaged(P) :- person(P), not young(P).
young(P) :- person(P), not old(P).
old_fashioned(P) :- person(P), not young_mind(P), not noof(P).
noof(P) :- person(P), not old_fashioned(P).
young_mind(P) :- person(P), not old_fashioned(P), not noym(P).
noym(P) :- person(P), not young_mind(P).
admitted_elegant_restaurant(P) :- person(P), formal_dress(P).
admitted_disco(P) :- person(P), eccentric_dress(P).
go_disco(P) :- person(P), young(P), admitted_disco(P).
go_elegant_restaurant(P) :- person(P), admitted_elegant_restaurant(P).
go_elegant_restaurant(P) :- person(P), middleaged(P), admitted_elegant_restaurant(P).
go_sightseeing(P) :- person(P).
go_out(P) :- middleaged(P), go_elegant_restaurant(P).
go_out(P) :- old(P), go_elegant_restaurant(P).
go_out(P) :- young(P), go_disco(P).
go_out(P) :- go_sightseeing(P).
"""

GEORGE = "person(george)."

PREFERENCE = """
preference(P) :- person(P), go_disco(P).
:- not preference(george).
"""

SOURCES = {
    "p1": P1,
    "p2": P2,
    "p3": P3,
    "vacation": VACATION,
    "ex8": EX8,
    "force": FORCE,
    "even": EVEN,
    "even3": EVEN3,
    "qabc": QABC,
    "recommender": RECOMMENDER,
    "george": RECOMMENDER + GEORGE,
    "george_pref": RECOMMENDER + GEORGE + PREFERENCE,
}


def load(name: str) -> Program:
    """Parse and ground the named example."""
    return ground(parse(SOURCES[name]))
