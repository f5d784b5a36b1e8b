"""Signed dependency graph, relevant rules, and the layered decomposition.

Edges run from a rule head to each atom in its body, marked positive or
negative.  Strongly connected components come from networkx; everything
built on top of them (relevance, cycle classification, layering) is here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal as Tag

import networkx as nx

from .program import Atom, Constraint, Program, Rule

__all__ = [
    "DepGraph",
    "Layer",
    "Layering",
    "build_graph",
    "dependencies_of",
    "rel_rul",
    "classify",
    "components",
    "decompose",
    "relevant_constraints",
    "stratified_atoms",
    "format_edges",
]

POS, NEG = "+", "-"

ProgramTag = Tag["acyclic", "positively-cyclic", "negatively-cyclic", "jigsaw"]


class DepGraph:
    def __init__(self, vertices: Iterable[Atom], edges: Iterable[tuple[Atom, Atom, str]]):
        self.vertices = frozenset(vertices)
        self.edges = frozenset(edges)
        self._g = nx.DiGraph()
        self._g.add_nodes_from(self.vertices)
        for u, v, s in self.edges:
            if self._g.has_edge(u, v):
                self._g[u][v]["signs"].add(s)
            else:
                self._g.add_edge(u, v, signs={s})

    @property
    def nx(self) -> nx.DiGraph:
        return self._g

    def successors(self, a: Atom):
        return self._g.successors(a) if a in self._g else iter(())

    def signs(self, u: Atom, v: Atom) -> set[str]:
        return self._g[u][v]["signs"]


def build_graph(prog: Program) -> DepGraph:
    edges = set()
    for r in prog.rules:
        for lit in r.body:
            edges.add((r.head, lit.atom, NEG if lit.negated else POS))
    return DepGraph(prog.atoms, edges)


def dependencies_of(g: DepGraph, a: Atom | Iterable[Atom]) -> frozenset[Atom]:
    """Atoms reachable from ``a`` (or from any atom of a set) along a nonempty path."""
    start = [a] if isinstance(a, Atom) else list(a)
    seen: set[Atom] = set()
    stack = [s for x in start for s in g.successors(x)]
    while stack:
        b = stack.pop()
        if b in seen:
            continue
        seen.add(b)
        stack.extend(g.successors(b))
    return frozenset(seen)


def rel_rul(prog: Program, atoms: Iterable[Atom], graph: DepGraph | None = None) -> Program:
    """Sub-program of the rules whose head is in ``atoms`` or one of their dependencies."""
    atoms = frozenset(atoms)
    if not atoms:
        return prog.subprogram(())
    g = graph if graph is not None else build_graph(prog)
    cone = atoms | dependencies_of(g, atoms)
    return prog.subprogram(r for r in prog.rules if r.head in cone)


def _sccs(g: DepGraph) -> list[frozenset[Atom]]:
    return [frozenset(c) for c in nx.strongly_connected_components(g.nx)]


def _is_cyclic_scc(g: DepGraph, comp: frozenset[Atom]) -> bool:
    if len(comp) > 1:
        return True
    (a,) = comp
    return g.nx.has_edge(a, a)


def _has_negative_cycle_edge(g: DepGraph, comp: frozenset[Atom]) -> bool:
    return any(
        NEG in g.signs(u, v) for u in comp for v in g.nx.successors(u) if v in comp
    )


def stratified_atoms(prog: Program, graph: DepGraph | None = None) -> frozenset[Atom]:
    """Atoms whose dependency cone contains no cycle through negation."""
    g = graph if graph is not None else build_graph(prog)
    cond = nx.condensation(g.nx)
    members = cond.graph["mapping"]
    comps = {c: frozenset(cond.nodes[c]["members"]) for c in cond.nodes}
    bad = {c for c, comp in comps.items() if _has_negative_cycle_edge(g, comp)}
    tainted: set[int] = set()
    for c in reversed(list(nx.topological_sort(cond))):
        if c in bad or any(d in tainted for d in cond.successors(c)):
            tainted.add(c)
    return frozenset(a for a, c in members.items() if c not in tainted)


def classify(prog: Program) -> ProgramTag:
    g = build_graph(prog)
    heads = prog.heads
    if not heads:
        return "acyclic"
    comp_of = {}
    for comp in _sccs(g):
        for a in comp:
            comp_of[a] = comp
    cyclic = [a for a in heads if _is_cyclic_scc(g, comp_of[a])]
    if not cyclic:
        return "acyclic"
    if len(cyclic) < len(heads):
        return "jigsaw"
    comps = {comp_of[a] for a in heads}
    if any(_has_negative_cycle_edge(g, c) for c in comps):
        return "negatively-cyclic"
    return "positively-cyclic"


@dataclass(frozen=True)
class Layer:
    program: Program
    tag: ProgramTag

    @property
    def rules(self) -> tuple[Rule, ...]:
        return self.program.rules

    @property
    def heads(self) -> frozenset[Atom]:
        return self.program.heads


@dataclass(frozen=True)
class Layering:
    layers: tuple[Layer, ...]

    def __iter__(self):
        return iter(self.layers)

    def __len__(self) -> int:
        return len(self.layers)


def components(prog: Program, graph: DepGraph | None = None) -> list[tuple[frozenset[Atom], int]]:
    """Strongly connected components that head at least one rule, with their height.

    Height 0 means the component depends on no other component with rules.
    The list is ordered bottom-up, ties broken by first rule position.
    """
    g = graph if graph is not None else build_graph(prog)
    cond = nx.condensation(g.nx)
    members = cond.graph["mapping"]
    first_rule = {}
    for r in prog.rules:
        first_rule.setdefault(members[r.head], r.index)
    height: dict[int, int] = {}
    for c in reversed(list(nx.topological_sort(cond))):
        below = [height[d] for d in cond.successors(c) if d in height]
        if c in first_rule:
            height[c] = 1 + max(below) if below else 0
        elif below:
            # a component with no rules passes its height through unchanged
            height[c] = max(below)
    out = [
        (frozenset(cond.nodes[c]["members"]), height[c])
        for c in first_rule
    ]
    out.sort(key=lambda item: (item[1], first_rule[members[next(iter(item[0]))]]))
    return out


def decompose(prog: Program, strategy: str = "merged") -> Layering:
    """Split ``prog`` into layers C1..Cn, each on top of the ones below.

    ``merged`` puts every component of the same height into one layer;
    ``fine`` gives each component its own layer in bottom-up order.  Both are
    valid decompositions.
    """
    if strategy not in ("merged", "fine"):
        raise ValueError(f"unknown layering strategy {strategy!r}")
    comps = components(prog)
    groups: list[set[Atom]] = []
    if strategy == "fine":
        groups = [set(c) for c, _ in comps]
    else:
        by_height: dict[int, set[Atom]] = {}
        for c, h in comps:
            by_height.setdefault(h, set()).update(c)
        groups = [by_height[h] for h in sorted(by_height)]
    layers = []
    for heads in groups:
        sub = prog.subprogram(r for r in prog.rules if r.head in heads)
        layers.append(Layer(sub, classify(sub)))
    return Layering(tuple(layers))


def relevant_constraints(
    prog: Program, constraints: Iterable[Constraint], q: Atom
) -> list[Constraint]:
    g = build_graph(prog)
    mine = set(rel_rul(prog, [q], g).rules)
    return [c for c in constraints if mine <= set(rel_rul(prog, [c.guard], g).rules)]


def format_edges(g: DepGraph) -> str:
    lines = []
    for u, v, s in sorted(g.edges, key=lambda e: (e[0].name, e[1].name, e[2])):
        arrow = "-+->" if s == POS else "--not->"
        lines.append(f"{u} {arrow} {v}")
    return "\n".join(lines)
