"""Programs: atoms, literals, rules, constraints, the text front end and grounding.

A program is a sequence of normal rules ``h :- l1, ..., ln.`` where each
``li`` is an atom or ``not`` an atom.  Constraints ``:- body.`` are kept apart
from the rules: each one gets a fresh guard atom ``H`` together with the rule
``H :- body.``, so the rest of the engine only ever sees ordinary rules and
can test a model against the guards afterwards.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Atom",
    "Literal",
    "Rule",
    "Constraint",
    "SymbolTable",
    "Program",
    "ParseError",
    "GroundingError",
    "GUARD_PREFIX",
    "parse",
    "parse_literal",
    "normalize_constraint",
    "ground",
    "format_program",
    "format_rule",
]

# User identifiers start with a lowercase letter, so this prefix can never
# clash with an atom written in a source file.
GUARD_PREFIX = "_c"


@dataclass(frozen=True)
class Atom:
    id: int
    pred: str
    args: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(self.args)})"

    @property
    def is_ground(self) -> bool:
        return not any(_is_var(a) for a in self.args)

    @property
    def is_guard(self) -> bool:
        return self.pred.startswith(GUARD_PREFIX)

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Atom({self.name})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Literal, ...]
    index: int
    pos: frozenset = field(init=False, repr=False, compare=False)
    neg: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pos", frozenset(l.atom for l in self.body if not l.negated))
        object.__setattr__(self, "neg", frozenset(l.atom for l in self.body if l.negated))

    @property
    def label(self) -> str:
        return f"r{self.index + 1}"

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __str__(self) -> str:
        return format_rule(self)


@dataclass(frozen=True)
class Constraint:
    guard: Atom
    body: tuple[Literal, ...]

    def __str__(self) -> str:
        return ":- " + ", ".join(map(str, self.body)) + "."


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class GroundingError(ValueError):
    pass


def _is_var(term: str) -> bool:
    return term[:1].isupper()


class SymbolTable:
    """Append-only interning of atoms.

    Sub-programs derived from a program (relevant rules, simplified layers)
    share its table, so the same atom keeps the same id everywhere.
    """

    def __init__(self):
        self._atoms: list[Atom] = []
        self._index: dict[tuple[str, tuple[str, ...]], Atom] = {}
        self._arity: dict[str, int] = {}
        self._guards = 0

    def intern(self, pred: str, args: Sequence[str] = ()) -> Atom:
        key = (pred, tuple(args))
        atom = self._index.get(key)
        if atom is None:
            known = self._arity.setdefault(pred, len(args))
            if known != len(args):
                raise ValueError(f"predicate {pred} used with arity {known} and {len(args)}")
            atom = Atom(len(self._atoms), pred, tuple(args))
            self._atoms.append(atom)
            self._index[key] = atom
        return atom

    def fresh_guard(self) -> Atom:
        self._guards += 1
        return self.intern(f"{GUARD_PREFIX}{self._guards}")

    def lookup(self, name: str) -> Atom | None:
        pred, args = _split_name(name)
        return self._index.get((pred, args))

    def __len__(self) -> int:
        return len(self._atoms)

    def __getitem__(self, i: int) -> Atom:
        return self._atoms[i]


def _split_name(name: str) -> tuple[str, tuple[str, ...]]:
    name = name.replace(" ", "")
    if "(" in name and name.endswith(")"):
        pred, rest = name[:-1].split("(", 1)
        return pred, tuple(rest.split(",")) if rest else ()
    return name, ()


class Program:
    """An ordered rule list plus separately held constraints.

    Instances are treated as immutable once built.
    """

    def __init__(
        self,
        rules: Iterable[Rule],
        constraints: Iterable[Constraint] = (),
        symbols: SymbolTable | None = None,
    ):
        self.rules: tuple[Rule, ...] = tuple(rules)
        self.constraints: tuple[Constraint, ...] = tuple(constraints)
        self.symbols = symbols if symbols is not None else SymbolTable()
        atoms = set()
        heads = set()
        by_head: dict[Atom, list[Rule]] = {}
        for r in self.rules:
            heads.add(r.head)
            atoms.add(r.head)
            atoms.update(l.atom for l in r.body)
            by_head.setdefault(r.head, []).append(r)
        for c in self.constraints:
            atoms.add(c.guard)
            atoms.update(l.atom for l in c.body)
        self.atoms: frozenset[Atom] = frozenset(atoms)
        self.heads: frozenset[Atom] = frozenset(heads)
        self._by_head = {a: tuple(rs) for a, rs in by_head.items()}

    def rules_for(self, atom: Atom) -> tuple[Rule, ...]:
        return self._by_head.get(atom, ())

    def atom(self, name: str) -> Atom:
        """Look up an atom by its printed name, e.g. ``"person(george)"``."""
        a = self.symbols.lookup(name)
        if a is None:
            raise KeyError(name)
        return a

    def atoms_named(self, *names: str) -> frozenset[Atom]:
        return frozenset(self.atom(n) for n in names)

    def subprogram(self, rules: Iterable[Rule]) -> "Program":
        rules = tuple(rules)
        kept = {r.head for r in rules}
        return Program(rules, [c for c in self.constraints if c.guard in kept], self.symbols)

    @property
    def is_ground(self) -> bool:
        return all(a.is_ground for a in self.atoms)

    @property
    def user_rules(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if not r.head.is_guard)

    def sorted_atoms(self) -> list[Atom]:
        return sorted(self.atoms, key=lambda a: a.name)

    def structure(self):
        """Name-level view used for structural equality across parses."""
        rules = tuple(
            (r.head.name, tuple((l.negated, l.atom.name) for l in r.body)) for r in self.rules
        )
        cons = tuple(
            (c.guard.name, tuple((l.negated, l.atom.name) for l in c.body)) for c in self.constraints
        )
        return rules, cons

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __str__(self) -> str:
        return format_program(self)

    def __repr__(self) -> str:
        return f"Program({len(self.rules)} rules, {len(self.constraints)} constraints)"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<int>-?[0-9]+)
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            value = m.group()
            if kind == "punct":
                kind = value
            yield kind, value, line, m.start() - start + 1
        pos = m.end()
    yield "eof", "", line, pos - start + 1


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str | None = None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = {"ident": "an atom", ".": "'.'", ")": "')'"}.get(kind, repr(kind))
            shown = tok[1] or "end of input"
            raise ParseError(f"expected {want}, found {shown!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def clauses(self):
        while self.peek()[0] != "eof":
            yield self.clause()

    def clause(self):
        tok = self.peek()
        if tok[0] == "if":
            self.take()
            body = self.body()
            self.take(".")
            return None, body, tok[2]
        head = self.atom()
        if head[0] == "not":
            raise ParseError("'not' cannot head a rule", tok[2], tok[3])
        body = ()
        if self.peek()[0] == "if":
            self.take()
            body = self.body()
        self.take(".")
        return head, body, tok[2]

    def body(self):
        lits = [self.literal()]
        while self.peek()[0] == ",":
            self.take()
            lits.append(self.literal())
        return tuple(lits)

    def literal(self):
        tok = self.peek()
        if tok[0] == "ident" and tok[1] == "not":
            nxt = self.tokens[self.i + 1]
            if nxt[0] == "ident":
                self.take()
                return True, self.atom()
        return False, self.atom()

    def atom(self):
        tok = self.take("ident")
        args: list[str] = []
        if self.peek()[0] == "(":
            self.take()
            args.append(self.term())
            while self.peek()[0] == ",":
                self.take()
                args.append(self.term())
            self.take(")")
        return tok[1], tuple(args), tok[2], tok[3]

    def term(self):
        tok = self.peek()
        if tok[0] not in ("ident", "var", "int"):
            raise ParseError(f"expected a term, found {tok[1] or 'end of input'!r}", tok[2], tok[3])
        self.take()
        if self.peek()[0] == "(":
            t = self.peek()
            raise ParseError("function symbols are not supported", t[2], t[3])
        return tok[1]


def parse(text: str) -> Program:
    """Parse a program.  Variables are allowed; see :func:`ground`."""
    symbols = SymbolTable()
    rules: list[Rule] = []
    constraints: list[Constraint] = []

    def intern(a):
        pred, args, line, col = a
        try:
            return symbols.intern(pred, args)
        except ValueError as exc:
            raise ParseError(str(exc), line, col) from None

    for head, body, _line in _Parser(text).clauses():
        lits = tuple(Literal(intern(a), neg) for neg, a in body)
        if head is None:
            guard = symbols.fresh_guard()
            rules.append(Rule(guard, lits, len(rules)))
            constraints.append(Constraint(guard, lits))
        else:
            h = intern(head)
            rules.append(Rule(h, tuple(Literal(intern(a), neg) for neg, a in body), len(rules)))
    return Program(rules, constraints, symbols)


def parse_literal(text: str, prog: Program) -> Literal:
    """Parse a single query literal such as ``not p`` against ``prog``'s atoms.

    Atoms the program never mentions are interned, so they can still be asked
    about (they are simply false).
    """
    p = _Parser(text.strip().rstrip("."))
    neg, (pred, args, line, col) = p.literal()
    if p.peek()[0] != "eof":
        t = p.peek()
        raise ParseError(f"unexpected {t[1]!r} after literal", t[2], t[3])
    try:
        atom = prog.symbols.intern(pred, args)
    except ValueError as exc:
        raise ParseError(str(exc), line, col) from None
    return Literal(atom, neg)


def parse_query(text: str, prog: Program) -> tuple[Literal, ...]:
    """Parse a ground conjunctive query such as ``f, not g`` (a final ``.`` is optional)."""
    text = text.strip()
    if text.startswith("?-"):
        text = text[2:]
    p = _Parser(text.strip().rstrip("."))
    out = []
    for neg, (pred, args, line, col) in p.body():
        if any(_is_var(t) for t in args):
            raise ParseError("queries must be ground", line, col)
        try:
            out.append(Literal(prog.symbols.intern(pred, args), neg))
        except ValueError as exc:
            raise ParseError(str(exc), line, col) from None
    if p.peek()[0] != "eof":
        t = p.peek()
        raise ParseError(f"unexpected {t[1]!r} in query", t[2], t[3])
    return tuple(out)


def normalize_constraint(body: Sequence[Literal], prog: Program) -> tuple[Program, Constraint]:
    """Attach the constraint ``:- body`` to ``prog``.

    Returns the extended program and the new constraint.  The guard atom is
    fresh and its rule ``guard :- body`` is appended after the existing rules.
    """
    if not body:
        raise ValueError("a constraint needs a nonempty body")
    guard = prog.symbols.fresh_guard()
    rule = Rule(guard, tuple(body), len(prog.rules))
    con = Constraint(guard, tuple(body))
    return Program(prog.rules + (rule,), prog.constraints + (con,), prog.symbols), con


# --------------------------------------------------------------- grounding

def ground(prog: Program) -> Program:
    """Instantiate every rule over the constants occurring in ``prog``.

    Ground rules pass through unchanged, so grounding a ground program is the
    identity up to structure.
    """
    if prog.is_ground:
        return prog
    universe = sorted(
        {t for a in prog.atoms for t in a.args if not _is_var(t)},
        key=lambda t: (not t.lstrip("-").isdigit(), int(t) if t.lstrip("-").isdigit() else 0, t),
    )
    guard_of = {c.guard: c for c in prog.constraints}
    symbols = SymbolTable()
    rules: list[Rule] = []
    constraints: list[Constraint] = []

    def inst(atom: Atom, env: dict[str, str]) -> Atom:
        return symbols.intern(atom.pred, tuple(env.get(t, t) for t in atom.args))

    for r in prog.rules:
        is_con = r.head in guard_of
        head_vars = [] if is_con else [t for t in r.head.args if _is_var(t)]
        pos_vars = {t for a in r.pos for t in a.args if _is_var(t)}
        missing = [v for v in head_vars if v not in pos_vars]
        if missing:
            raise GroundingError(f"unsafe rule {format_rule(r)}: {', '.join(missing)} not bound by a positive body atom")
        names = []
        for a in ([r.head] if not is_con else []) + [l.atom for l in r.body]:
            for t in a.args:
                if _is_var(t) and t not in names:
                    names.append(t)
        for values in itertools.product(universe, repeat=len(names)):
            env = dict(zip(names, values))
            body = tuple(Literal(inst(l.atom, env), l.negated) for l in r.body)
            if is_con:
                guard = symbols.fresh_guard()
                rules.append(Rule(guard, body, len(rules)))
                constraints.append(Constraint(guard, body))
            else:
                rules.append(Rule(inst(r.head, env), body, len(rules)))
    return Program(rules, constraints, symbols)


# ---------------------------------------------------------------- printing

def format_rule(r: Rule) -> str:
    if not r.body:
        return f"{r.head}."
    return f"{r.head} :- {', '.join(map(str, r.body))}."


def format_program(prog: Program) -> str:
    guards = {c.guard: c for c in prog.constraints}
    lines = []
    for r in prog.rules:
        c = guards.get(r.head)
        lines.append(str(c) if c is not None else format_rule(r))
    return "\n".join(lines) + ("\n" if lines else "")
