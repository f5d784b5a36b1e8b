"""Top-down resolution with negation as a consumable resource.

A query is proved depth-first: rules in program order, body literals left
to right.  Positive subgoals are looked up in the table, then (for atoms
no negative cycle reaches) in the well-founded model, then resolved
against their rules.  A negative subgoal
``not B`` on an undecided ``B`` first explores ``B`` with ``not B`` pushed on
a negative context; meeting a context literal again classifies the loop
(directly, or through further negations), and ``not B`` is then assumed and
recorded as a hypothesis of the current rule instance.  Backtracking out of
that rule instance retracts the hypothesis.

A derivation only counts once the components it touched can be completed:
every strongly connected component below the query is assigned a set of
true atoms that has a well-founded support extending the derivation, does
not let any false atom be derived from the negations that support consumes
(unless that derivation would consume the atom's own negation), and cannot
be enlarged.  If no completion exists the search backtracks.
"""

from __future__ import annotations

import enum
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .graph import components, relevant_constraints, stratified_atoms
from .program import Atom, Constraint, Literal, Program, Rule
from .tabling import NegKind, ProgramTable, Status as TabStatus
from .wfs import Status, wfs

__all__ = [
    "LoopClass",
    "NegativeContext",
    "TraceLine",
    "Verdict",
    "Outcome",
    "ResolverBudgetExceeded",
    "Resolver",
    "classify_loop",
    "solve",
    "query",
    "query_sequence",
    "check_constraints",
    "format_trace",
]

DEFAULT_STEP_LIMIT = 2_000_000


class LoopClass(enum.Enum):
    DIRECT = "direct"
    THROUGH_NEGATION = "through-negation"


@dataclass(frozen=True)
class NegativeContext:
    stack: tuple[Atom, ...] = ()

    def push(self, a: Atom) -> "NegativeContext":
        if a in self.stack:
            raise ValueError(f"not {a} is already in the negative context")
        return NegativeContext(self.stack + (a,))

    def __contains__(self, a: Atom) -> bool:
        return a in self.stack

    def __len__(self) -> int:
        return len(self.stack)


def classify_loop(ctx: NegativeContext, a: Atom) -> LoopClass:
    """How ``not a`` was met again: with nothing pushed since, or through other negations."""
    i = ctx.stack.index(a)
    return LoopClass.DIRECT if i == len(ctx.stack) - 1 else LoopClass.THROUGH_NEGATION


_LOOP_KIND = {
    LoopClass.DIRECT: NegKind.HYPOTHESIS_3D,
    LoopClass.THROUGH_NEGATION: NegKind.HYPOTHESIS_3C,
}


@dataclass(frozen=True)
class TraceLine:
    depth: int
    goal: str
    rule: str | None = None
    case: str | None = None
    note: str | None = None

    def render(self) -> str:
        left = "  " * self.depth + (self.goal if self.goal.startswith("retract") else f"?- {self.goal}")
        tags = []
        if self.rule:
            tags.append(f"via {self.rule}")
        if self.case:
            tags.append(f"case {self.case}")
        if self.note:
            tags.append(self.note)
        if not tags:
            return left
        return f"{left:<28} % " + " / ".join(tags)


def format_trace(lines: Iterable[TraceLine]) -> str:
    return "\n".join(l.render() for l in lines)


class Verdict(enum.Enum):
    SUCCESS = "yes"
    FAILURE = "no"


@dataclass
class Outcome:
    literal: Literal
    verdict: Verdict
    trace: tuple[TraceLine, ...] = ()
    added: tuple[str, ...] = ()
    removed: tuple[str, ...] = ()

    @property
    def success(self) -> bool:
        return self.verdict is Verdict.SUCCESS

    def __bool__(self) -> bool:
        return self.success


class ResolverBudgetExceeded(RuntimeError):
    pass


# ----------------------------------------------------------- completion

class _Component:
    __slots__ = ("atoms", "index", "rules", "outside")

    def __init__(self, atoms: Sequence[Atom], rules: Sequence[Rule]):
        self.atoms = tuple(sorted(atoms, key=lambda a: a.id))
        self.index = {a: i for i, a in enumerate(self.atoms)}
        self.rules = tuple(rules)
        self.outside = frozenset(
            l.atom for r in self.rules for l in r.body if l.atom not in self.index
        )


class _Analysis:
    """Per-program data shared by every session over the same program."""

    def __init__(self, prog: Program):
        self.prog = prog
        self.wf = wfs(prog)
        decided = self.wf.w_plus | self.wf.w_minus
        residual = []
        for r in prog.rules:
            if r.head in decided:
                continue
            if r.pos & self.wf.w_minus or r.neg & self.wf.w_plus:
                continue
            body = tuple(l for l in r.body if l.atom not in decided)
            residual.append(Rule(r.head, body, r.index))
        res_prog = Program(residual, (), prog.symbols)
        self.comps: list[_Component] = []
        self.comp_of: dict[Atom, int] = {}
        for atoms, _height in components(res_prog):
            k = len(self.comps)
            self.comps.append(_Component(atoms, [r for r in residual if r.head in atoms]))
            for a in atoms:
                self.comp_of[a] = k
        self.below: list[frozenset[int]] = []
        for k, c in enumerate(self.comps):
            acc = set()
            for a in c.outside:
                j = self.comp_of[a]
                acc.add(j)
                acc |= self.below[j]
            self.below.append(frozenset(acc))
        self.stratified = stratified_atoms(prog)
        self._models: dict = {}

    def status(self, a: Atom) -> Status:
        """Truth of ``a`` when it is settled without any loop through negation."""
        if a not in self.stratified:
            return Status.UNDEFINED
        return self.wf.value(a)

    def undefined(self, a: Atom) -> bool:
        return a in self.comp_of

    # The component's possible true atoms, as local bitmasks, given which of
    # the atoms it reads from below are true.
    def models(self, k: int, lower_true: frozenset[Atom]) -> list[int]:
        key = (k, lower_true)
        hit = self._models.get(key)
        if hit is not None:
            return hit
        comp = self.comps[k]
        n = len(comp.atoms)
        rules = []
        for r in comp.rules:
            if any(b not in comp.index and b in lower_true for b in r.neg):
                continue
            if any(b not in comp.index and b not in lower_true for b in r.pos):
                continue
            pos = neg = 0
            for b in r.pos:
                if b in comp.index:
                    pos |= 1 << comp.index[b]
            for b in r.neg:
                if b in comp.index:
                    neg |= 1 << comp.index[b]
            rules.append((comp.index[r.head], pos, neg, r.index))
        heads = 0
        for h, _, _, _ in rules:
            heads |= 1 << h
        out = _component_models(n, rules, heads)
        self._models[key] = out
        return out

    def complete(self, truth: dict[Atom, bool]) -> dict[Atom, bool] | None:
        """Find one assignment of the relevant components meeting ``truth``."""
        for a, v in truth.items():
            if (a in self.wf.w_plus and not v) or (a in self.wf.w_minus and v):
                return None
        need = set()
        for a in truth:
            k = self.comp_of.get(a)
            if k is not None:
                need.add(k)
                need |= self.below[k]
        order = sorted(need)
        by_comp: dict[int, list[tuple[int, bool]]] = {}
        for a, v in truth.items():
            k = self.comp_of.get(a)
            if k is not None:
                by_comp.setdefault(k, []).append((self.comps[k].index[a], v))

        def search(i: int, true: frozenset[Atom]):
            if i == len(order):
                return true
            k = order[i]
            comp = self.comps[k]
            lower = frozenset(a for a in comp.outside if a in true)
            want_true = want_false = 0
            for j, v in by_comp.get(k, ()):
                if v:
                    want_true |= 1 << j
                else:
                    want_false |= 1 << j
            for m in self.models(k, lower):
                if m & want_true != want_true or m & want_false:
                    continue
                got = search(i + 1, true | {comp.atoms[j] for j in range(len(comp.atoms)) if m >> j & 1})
                if got is not None:
                    return got
            return None

        found = search(0, frozenset())
        if found is None:
            return None
        result = {}
        for k in order:
            for a in self.comps[k].atoms:
                result[a] = a in found
        return result


def _subsets(mask: int) -> Iterator[int]:
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def _supported_closure(rules, m: int) -> int:
    out = 0
    changed = True
    while changed:
        changed = False
        for h, pos, neg, _ in rules:
            if neg & m or pos & m != pos:
                continue
            if not out >> h & 1 and pos & out == pos:
                out |= 1 << h
                changed = True
    return out


def _component_models(n: int, rules, heads: int) -> list[int]:
    """Maximal consistently supported sets that are also guarded consequences.

    A set qualifies when it cannot be enlarged while every member keeps a
    supporting rule whose positive atoms are derivable inside it, and when
    it is exactly what the guarded derivation yields once the rules denied
    by some set of heads are removed.
    """
    consistent = [m for m in _subsets(heads) if m & ~_supported_closure(rules, m) == 0]
    cs_set = set(consistent)
    maximal = [
        m for m in consistent
        if not any(s and (m | s) in cs_set for s in _subsets(heads & ~m))
    ]
    images = {_guarded_consequences(n, rules, i) for i in _subsets(heads)}
    return [m for m in maximal if m in images]


def _guarded_consequences(n: int, rules, denied: int) -> int:
    """Atoms derivable without consuming their own negation.

    Derivations are built bottom-up from rules none of whose negated atoms
    is in ``denied``.  Each derived atom carries the negations consumed by
    its derivation; only inclusion-minimal sets are kept, and an atom is
    not derivable from a derivation whose set contains the atom itself.
    """
    live = [(h, pos, neg) for h, pos, neg, _ in rules if not neg & denied]
    guards: list[list[int]] = [[] for _ in range(n)]
    changed = True
    while changed:
        changed = False
        for h, pos, neg in live:
            partial = [neg]
            for b in range(n):
                if pos >> b & 1:
                    partial = [g | gb for g in partial for gb in guards[b]]
                    if not partial:
                        break
            for g in partial:
                if g >> h & 1:
                    continue
                known = guards[h]
                if any(k & g == k for k in known):
                    continue
                guards[h] = [k for k in known if k & g != g] + [g]
                changed = True
    out = 0
    for a in range(n):
        if guards[a]:
            out |= 1 << a
    return out


_analyses: "weakref.WeakKeyDictionary[Program, _Analysis]" = weakref.WeakKeyDictionary()


def _analysis(prog: Program) -> _Analysis:
    an = _analyses.get(prog)
    if an is None:
        an = _analysis_cache_put(prog)
    return an


def _analysis_cache_put(prog: Program) -> _Analysis:
    an = _Analysis(prog)
    _analyses[prog] = an
    return an


# ------------------------------------------------------------- resolver

class Resolver:
    """A query session: a program, its table, and the resolution procedure."""

    def __init__(self, prog: Program, table: ProgramTable | None = None, step_limit: int = DEFAULT_STEP_LIMIT):
        self.prog = prog
        self.table = table if table is not None else ProgramTable(prog)
        self.step_limit = step_limit
        self._an = _analysis(prog)
        self._frames = 0
        self._steps = 0
        self._trace: list[TraceLine] = []
        self._probed: list[Atom] = []
        self._last = None

    # -- public
    def reset(self) -> None:
        self.table.reset()

    def solve(self, lit: Literal) -> Outcome:
        """Answer ``lit`` in the current context, updating the table."""
        before = self.table.snapshot()
        self._last = (lit, before, set())
        return self._run(lit, before, self._last[2])

    def next(self) -> Outcome | None:
        """Ask the last query again for a different committed context.

        The table is put back to its state before that query and the search
        skips every success whose resulting table was already returned.
        Best effort: ``None`` when there was no query to repeat, and a
        failure (with the table as before the query) when no other
        derivation is found.
        """
        if self._last is None:
            return None
        lit, before, seen = self._last
        self.table.entries = dict(before)
        self.table.undo_log = []
        out = self._run(lit, before, seen, record_failure=False)
        if not out.success:
            self.table.entries = dict(before)
            out.added = out.removed = ()
        return out

    def _run(self, lit: Literal, before, seen: set, record_failure: bool = True) -> Outcome:
        self._trace = []
        self._steps = 0
        self._probed = []
        if lit.atom not in self.prog.atoms:
            ok = lit.negated
            self._line(0, str(lit), case="3.b" if ok else "2.b", note="atom not in program")
            return self._outcome(lit, ok, before)
        mark = self.table.mark()
        goal = self._neg(lit.atom, 0, None) if lit.negated else self._pos(lit.atom, 0, frozenset())
        ok = False
        for _ in goal:
            truth = {a: t for a, t in ((a, _truth(e)) for a, e in self.table.entries.items()) if t is not None}
            model = self._an.complete(truth)
            if model is None:
                self._line(0, str(lit), note="no completion, backtrack")
                continue
            for a in self._probed:
                if a in model and a not in truth:
                    truth[a] = model[a]
            key = frozenset(truth.items())
            if key in seen:
                continue
            seen.add(key)
            ok = True
            self.table.promote()
            for a in self._probed:
                if a in model and (self.table.get(a) is None or self.table.has_yes(a)):
                    (self.table.on_success if model[a] else self.table.on_failure)(a)
            break
        goal.close()
        if not ok:
            self.table.undo_to(mark)
            if record_failure:
                # every context extending the table decides the literal the other way
                (self.table.on_success if lit.negated else self.table.on_failure)(lit.atom)
        return self._outcome(lit, ok, before)

    def query(self, a: Atom) -> Outcome:
        return self.solve(Literal(a, False))

    # -- bookkeeping
    def _outcome(self, lit: Literal, ok: bool, before) -> Outcome:
        after = self.table.entries
        added, removed = [], []
        for a in set(before) | set(after):
            b, c = before.get(a), after.get(a)
            if b == c:
                continue
            if b is not None:
                removed.append(_entry_text(a, b))
            if c is not None:
                added.append(_entry_text(a, c))
        return Outcome(
            lit,
            Verdict.SUCCESS if ok else Verdict.FAILURE,
            tuple(self._trace),
            tuple(sorted(added)),
            tuple(sorted(removed)),
        )

    def _line(self, depth, goal, rule=None, case=None, note=None) -> None:
        self._trace.append(TraceLine(depth, goal, rule, case, note))

    def _tick(self) -> None:
        self._steps += 1
        if self._steps > self.step_limit:
            raise ResolverBudgetExceeded(f"more than {self.step_limit} resolution steps")

    def _status(self, a: Atom) -> Status:
        return self._an.status(a)

    # -- positive subgoals
    def _pos(self, a: Atom, depth: int, path: frozenset[Atom]) -> Iterator[None]:
        self._tick()
        tab = self.table
        e = tab.get(a)
        if e is not None and e.status is TabStatus.TRUE:
            self._line(depth, str(a), case="1.a")
            yield
            return
        if e is not None and e.status is not TabStatus.YES:
            self._line(depth, str(a), case="2.a")
            return
        st = self._status(a)
        if st is Status.TRUE:
            tab.on_success(a)
            self._line(depth, str(a), case="1.a")
            yield
            return
        if st is Status.FALSE:
            tab.on_failure(a)
            self._line(depth, str(a), case="2.b")
            return
        if a in path:
            self._line(depth, str(a), case="2.c", note="positive loop")
            return
        inner = path | {a}
        self._line(depth, str(a))
        for r in self.prog.rules_for(a):
            if a in r.pos or a in r.neg:
                continue
            self._frames += 1
            frame = self._frames
            mark, probed = tab.mark(), len(self._probed)
            self._line(depth, ", ".join(map(str, r.body)) if r.body else "true", rule=r.label)
            for _ in self._body(r.body, 0, depth + 1, inner, frame):
                if tab.is_false(a):
                    self._line(depth, str(a), rule=r.label, note="forced to failure")
                    continue
                m2 = tab.mark()
                tab.on_success(a, frame)
                yield
                tab.undo_to(m2)
            tab.undo_to(mark)
            del self._probed[probed:]
        self._line(depth, str(a), case="2.c")

    def _body(self, body, i, depth, path, frame) -> Iterator[None]:
        if i == len(body):
            yield
            return
        lit = body[i]
        sub = self._neg(lit.atom, depth, frame) if lit.negated else self._pos(lit.atom, depth, path)
        for _ in sub:
            yield from self._body(body, i + 1, depth, path, frame)

    # -- negative subgoals
    def _neg(self, b: Atom, depth: int, frame: int | None) -> Iterator[None]:
        self._tick()
        tab = self.table
        goal = f"not {b}"
        e = tab.get(b)
        if e is not None and e.status in (TabStatus.FALSE, TabStatus.ASSUMED):
            self._line(depth, goal, case="3.a")
            yield
            return
        if e is not None and e.status is TabStatus.TRUE:
            self._line(depth, goal, case="4")
            return
        st = self._status(b)
        if st is Status.FALSE:
            tab.on_neg_success(b, NegKind.BY_FAILURE)
            self._line(depth, goal, case="3.b")
            yield
            return
        if st is Status.TRUE:
            tab.on_success(b)
            self._line(depth, goal, case="4")
            return
        if frame is None:
            self._frames += 1
            frame = self._frames
        lines: list[TraceLine] = []
        seen: list[Atom] = []
        loop = self._probe_atom(b, NegativeContext((b,)), frozenset(), depth + 1, lines, seen)
        kind = _LOOP_KIND[loop] if loop is not None else NegKind.BY_FAILURE
        self._line(depth, goal)
        self._trace.extend(lines)
        mark = tab.mark()
        if kind is NegKind.BY_FAILURE:
            tab.on_failure(b, frame)
        else:
            tab.on_neg_success(b, kind, frame)
        self._line(depth, goal, case=kind.value, note="assumed" if kind is not NegKind.BY_FAILURE else None)
        probed = len(self._probed)
        self._probed.extend(seen)
        yield
        del self._probed[probed:]
        tab.undo_to(mark)
        if kind is not NegKind.BY_FAILURE:
            self._line(depth, f"retract not {b}")

    def _decided(self, a: Atom) -> bool | None:
        e = self.table.get(a)
        if e is not None:
            if e.status is TabStatus.TRUE:
                return True
            if e.status is not TabStatus.YES:
                return False
        st = self._status(a)
        if st is Status.TRUE:
            return True
        if st is Status.FALSE:
            return False
        return None

    def _probe_atom(self, a, ctx, path, depth, lines, seen) -> LoopClass | None:
        """Explore ``a`` under ``ctx`` until some context literal is met again."""
        self._tick()
        for r in self.prog.rules_for(a):
            if a in r.pos or a in r.neg:
                continue
            start = len(lines)
            lines.append(TraceLine(depth, str(a)))
            seen.append(a)
            for lit in r.body:
                c = lit.atom
                v = self._decided(c)
                if lit.negated:
                    if c in ctx:
                        loop = classify_loop(ctx, c)
                        lines.append(TraceLine(depth + 1, str(lit), r.label, _LOOP_KIND[loop].value))
                        return loop
                    lines.append(TraceLine(depth + 1, str(lit), r.label))
                    if v is True:
                        break
                    if v is False:
                        continue
                    found = self._probe_atom(c, ctx.push(c), frozenset(), depth + 2, lines, seen)
                else:
                    lines.append(TraceLine(depth + 1, str(lit), r.label))
                    if v is False:
                        break
                    if v is True:
                        continue
                    if c in path or c == a:
                        break
                    found = self._probe_atom(c, ctx, path | {a}, depth + 2, lines, seen)
                if found is not None:
                    return found
            del lines[start:]
            seen.pop()
        return None


def _truth(e) -> bool | None:
    if e.status is TabStatus.YES:
        return None
    return e.status is TabStatus.TRUE


def _entry_text(a: Atom, e) -> str:
    s = e.status
    if s is TabStatus.YES:
        return f"yes_{a}"
    if s is TabStatus.TRUE:
        return a.name
    return f"not {a}"


# ------------------------------------------------------ module-level API

def solve(prog: Program, tab: ProgramTable, lit: Literal) -> Outcome:
    return Resolver(prog, tab).solve(lit)


def query(prog: Program, tab: ProgramTable, a: Atom) -> Outcome:
    return Resolver(prog, tab).query(a)


def query_sequence(prog: Program, atoms: Sequence[Atom | Literal]) -> list[Outcome]:
    """Answer ``atoms`` in order, each in the context left by the previous ones."""
    res = Resolver(prog)
    out = []
    for x in atoms:
        lit = x if isinstance(x, Literal) else Literal(x, False)
        out.append(res.solve(lit))
    return out


@dataclass
class ConstraintReport:
    admissible: bool
    verdicts: dict[str, bool] = field(default_factory=dict)


def check_constraints(
    prog: Program,
    tab: ProgramTable,
    constraints: Iterable[Constraint],
    q: Atom | None = None,
) -> ConstraintReport:
    """Probe ``not H`` for each relevant constraint guard ``H`` in the current context.

    The probes do not change ``tab``.
    """
    constraints = list(constraints)
    if q is not None:
        constraints = relevant_constraints(prog, constraints, q)
    verdicts = {}
    saved_entries = tab.snapshot()
    saved_log = list(tab.undo_log)
    try:
        for c in constraints:
            res = Resolver(prog, tab)
            verdicts[str(c)] = res.solve(Literal(c.guard, True)).success
            tab.entries = dict(saved_entries)
            tab.undo_log = list(saved_log)
    finally:
        tab.entries = saved_entries
        tab.undo_log = saved_log
    return ConstraintReport(all(verdicts.values()), verdicts)
