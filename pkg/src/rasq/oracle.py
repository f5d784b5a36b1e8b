"""Brute-force, definition-level semantics.

Everything here enumerates candidate sets directly: answer sets via the
Gelfond-Lifschitz reduct, consistently supported sets and their maximal
elements, the guarded operator ``gamma_hat`` over the modified reduct, and
resource-based answer sets built layer by layer.  It is exponential on
purpose and guarded by a size limit.  The resolver is checked against it.

Resource-based answer sets are computed on the program after partial
evaluation by its well-founded model (true atoms become facts, false ones
disappear), then layer by layer with ``gamma_hat`` filtered by maximal
consistent support.  The partial evaluation uses this module's own
alternating fixpoint of the reduct operator, not the ``wfs`` module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from ._accel import kernel
from .graph import decompose
from .program import Atom, Constraint, Program, Rule

__all__ = [
    "SizeGuardError",
    "DEFAULT_MAX_CANDIDATES",
    "GuardedAtom",
    "gl_reduct",
    "least_model",
    "answer_sets",
    "modified_reduct",
    "modified_tp_fixpoint",
    "gamma_hat",
    "is_supported",
    "is_consistently_supported",
    "consistent_support_by_subsets",
    "is_cs_set",
    "is_mcs",
    "mcs_sets",
    "ras_standalone",
    "simplify_component",
    "wfs_partial_evaluation",
    "well_founded_by_reduct",
    "ras_sets",
    "admissible",
    "sort_models",
    "model_names",
]

DEFAULT_MAX_CANDIDATES = 1 << 20


class SizeGuardError(RuntimeError):
    """Raised instead of enumerating more candidate sets than allowed."""


@dataclass(frozen=True)
class GuardedAtom:
    atom: Atom
    guard: frozenset[Atom]  # atoms whose negation the derivation consumed

    def __str__(self) -> str:
        g = ", ".join(f"not {a}" for a in sorted(self.guard, key=lambda a: a.name))
        return f"{self.atom}||{{{g}}}"


def sort_models(models: Iterable[frozenset[Atom]]) -> list[frozenset[Atom]]:
    """Deterministic order: lexicographic on the sorted atom names."""
    return sorted(set(models), key=lambda m: sorted(a.name for a in m))


def model_names(models: Iterable[frozenset[Atom]]) -> list[list[str]]:
    return [sorted(a.name for a in m) for m in sort_models(models)]


class _Compiled:
    """Bitmask view of a program over the atoms it mentions."""

    def __init__(self, prog: Program, extra: Iterable[Atom] = ()):
        atoms = sorted(set(prog.atoms) | set(extra), key=lambda a: a.id)
        self.atoms = atoms
        self.index = {a: i for i, a in enumerate(atoms)}
        self.n = len(atoms)
        self.heads = [self.index[r.head] for r in prog.rules]
        self.pos = [self.mask(r.pos) for r in prog.rules]
        self.neg = [self.mask(r.neg) for r in prog.rules]
        self.head_mask = self.mask(prog.heads)

    def mask(self, atoms: Iterable[Atom]) -> int:
        m = 0
        for a in atoms:
            i = self.index.get(a)
            if i is not None:
                m |= 1 << i
        return m

    def unmask(self, m: int) -> frozenset[Atom]:
        out = []
        while m:
            low = m & -m
            out.append(self.atoms[low.bit_length() - 1])
            m ^= low
        return frozenset(out)

    def args(self):
        return self.heads, self.pos, self.neg


def _guard(count_bits: int, limit: int | None, what: str):
    limit = DEFAULT_MAX_CANDIDATES if limit is None else limit
    if count_bits >= 63 or (1 << count_bits) > limit:
        raise SizeGuardError(
            f"{what}: 2^{count_bits} candidate sets exceed the limit of {limit}"
        )


# ------------------------------------------------------------ answer sets

def gl_reduct(prog: Program, i: Iterable[Atom]) -> Program:
    i = frozenset(i)
    rules = [
        Rule(r.head, tuple(l for l in r.body if not l.negated), r.index)
        for r in prog.rules
        if not (r.neg & i)
    ]
    return Program(rules, (), prog.symbols)


def least_model(pos: Program) -> frozenset[Atom]:
    if any(r.neg for r in pos.rules):
        raise ValueError("least_model expects a program without negation")
    c = _Compiled(pos)
    return c.unmask(kernel.gl_least_model(*c.args(), 0))


def answer_sets(prog: Program, max_candidates: int | None = None) -> list[frozenset[Atom]]:
    c = _Compiled(prog)
    _guard(bin(c.head_mask).count("1"), max_candidates, "answer_sets")
    return sort_models(c.unmask(m) for m in kernel.answer_set_masks(*c.args(), c.head_mask))


# ---------------------------------------------- guarded consequence, gamma

def modified_reduct(prog: Program, i: Iterable[Atom]) -> Program:
    i = frozenset(i)
    return prog.subprogram(r for r in prog.rules if not (r.neg & i))


def modified_tp_fixpoint(prog: Program) -> tuple[frozenset[GuardedAtom], frozenset[Atom]]:
    """Iterate the guarded immediate-consequence operator from the facts.

    Only guards that are minimal for their atom are kept: a larger guard can
    never unblock anything a smaller one blocks.  ``hat_t`` is the set of
    atoms that appear with some guard.
    """
    guards: dict[Atom, set[frozenset[Atom]]] = {}
    for r in prog.rules:
        if not r.body:
            guards.setdefault(r.head, set()).add(frozenset())

    def add(a: Atom, g: frozenset[Atom]) -> bool:
        current = guards.setdefault(a, set())
        if any(h <= g for h in current):
            return False
        current.difference_update([h for h in current if g <= h])
        current.add(g)
        return True

    changed = True
    while changed:
        changed = False
        for r in prog.rules:
            if r.head in r.neg:
                continue
            options = [sorted(guards.get(b, ()), key=len) for b in sorted(r.pos, key=lambda a: a.id)]
            if any(not o for o in options):
                continue
            for combo in itertools.product(*options):
                g = frozenset(r.neg).union(*combo)
                if r.head in g:
                    continue
                if add(r.head, g):
                    changed = True
    guarded = frozenset(GuardedAtom(a, g) for a, gs in guards.items() for g in gs)
    return guarded, frozenset(a for a, gs in guards.items() if gs)


def gamma_hat(prog: Program, i: Iterable[Atom]) -> frozenset[Atom]:
    c = _Compiled(prog)
    return c.unmask(kernel.gamma_hat_mask(*c.args(), c.n, c.mask(i)))


# ------------------------------------------------------ consistent support

def is_supported(prog: Program, i: Iterable[Atom]) -> bool:
    i = frozenset(i)
    return all(
        any(r.pos <= i and not (r.neg & i) for r in prog.rules_for(a)) for a in i
    )


def is_consistently_supported(
    prog: Program, i: Iterable[Atom], a: Atom
) -> tuple[bool, tuple[Rule, ...]]:
    """Search for a consistent support set of ``a`` w.r.t. ``i``.

    Returns the verdict and a witness rule set (empty when there is none).
    The search picks one rule per atom top-down; the atoms on the current
    path may not occur in the positive body of any rule below them.
    """
    i = frozenset(i)
    if a not in i:
        return False, ()
    supported = {
        b: [r for r in prog.rules_for(b) if r.pos <= i and not (r.neg & i)] for b in i
    }
    failed: set[tuple[Atom, frozenset[Atom]]] = set()

    def support(b: Atom, path: frozenset[Atom]):
        if (b, path) in failed:
            return None
        for r in supported[b]:
            if r.pos & path:
                continue
            chosen = [r]
            for c in sorted(r.pos, key=lambda x: x.id):
                sub = support(c, path | {c})
                if sub is None:
                    break
                chosen.extend(sub)
            else:
                return chosen
        failed.add((b, path))
        return None

    found = support(a, frozenset([a]))
    if found is None:
        return False, ()
    return True, tuple(sorted(set(found), key=lambda r: r.index))


def consistent_support_by_subsets(
    prog: Program, i: Iterable[Atom], a: Atom, max_rules: int = 10
) -> bool:
    """Slow check of consistent support straight from the definition.

    Tries every set ``S`` of rules supported in ``i``: ``S`` has exactly one
    rule for ``a``, ``a`` occurs in no positive body of ``S``, and every
    positive body atom of that rule has a consistent support set inside
    ``S``.  Only meant for cross-checking on tiny programs.
    """
    i = frozenset(i)
    if a not in i:
        return False
    rules = [r for r in prog.rules if r.head in i and r.pos <= i and not (r.neg & i)]
    _guard(len(rules), 1 << max_rules, "consistent_support_by_subsets")

    def subsets(pool):
        for k in range(len(pool) + 1):
            yield from (frozenset(c) for c in itertools.combinations(pool, k))

    memo: dict[tuple[Atom, frozenset[Rule]], bool] = {}

    def cs(b: Atom, s: frozenset[Rule]) -> bool:
        key = (b, s)
        if key not in memo:
            mine = [r for r in s if r.head == b]
            ok = len(mine) == 1 and not any(b in r.pos for r in s)
            if ok:
                ok = all(any(cs(c, sub) for sub in subsets(sorted(s, key=lambda r: r.index))) for c in mine[0].pos)
            memo[key] = ok
        return memo[key]

    return any(cs(a, s) for s in subsets(rules))


def is_cs_set(prog: Program, i: Iterable[Atom]) -> bool:
    """Every member of ``i`` is consistently supported w.r.t. ``prog`` and ``i``."""
    c = _Compiled(prog, i)
    return kernel.is_cs_mask(*c.args(), c.mask(i))


def mcs_sets(prog: Program, max_candidates: int | None = None) -> list[frozenset[Atom]]:
    """All maximal consistently supported sets."""
    c = _Compiled(prog)
    _guard(bin(c.head_mask).count("1"), max_candidates, "mcs_sets")
    return sort_models(c.unmask(m) for m in _maximal(kernel.cs_subsets(*c.args(), c.head_mask)))


def _maximal(masks: Sequence[int]) -> list[int]:
    masks = sorted(set(masks), key=lambda m: -bin(m).count("1"))
    out: list[int] = []
    for m in masks:
        if not any(m & o == m for o in out):
            out.append(m)
    return out


def is_mcs(prog: Program, i: Iterable[Atom], max_candidates: int | None = None) -> bool:
    i = frozenset(i)
    c = _Compiled(prog, i)
    m = c.mask(i)
    if not kernel.is_cs_mask(*c.args(), m):
        return False
    free = c.head_mask & ~m
    _guard(bin(free).count("1"), max_candidates, "is_mcs")
    sub = free
    while sub:
        if kernel.is_cs_mask(*c.args(), m | sub):
            return False
        sub = (sub - 1) & free
    return True


# -------------------------------------------------- resource-based models

def ras_standalone(prog: Program, max_candidates: int | None = None) -> list[frozenset[Atom]]:
    """``gamma_hat(I)`` over program-based ``I`` that are maximal consistently supported."""
    c = _Compiled(prog)
    k = bin(c.head_mask).count("1")
    _guard(k, max_candidates, "ras_standalone")
    args = c.args()
    cs = set(kernel.cs_subsets(*args, c.head_mask))
    mcs = set(_maximal(list(cs)))
    images = kernel.gamma_images(*args, c.n, c.head_mask)
    return sort_models(c.unmask(m) for m in images if m in mcs)


def simplify_component(
    comp: Program, lower: Iterable[Atom], heads: Iterable[Atom] | None = None
) -> Program:
    """Simplify a layer w.r.t. the union ``lower`` of the models chosen below it.

    Rules with ``not B`` for a true lower ``B`` go, as do rules needing a
    lower atom that is false.  Satisfied literals over lower atoms are
    dropped from the remaining bodies.
    """
    lower = frozenset(lower)
    own = frozenset(heads) if heads is not None else comp.heads
    out = []
    for r in comp.rules:
        if r.neg & lower:
            continue
        if (r.pos - own) - lower:
            continue
        body = tuple(l for l in r.body if l.atom in own)
        out.append(Rule(r.head, body, r.index))
    return Program(out, (), comp.symbols)


def well_founded_by_reduct(prog: Program) -> tuple[frozenset[Atom], frozenset[Atom]]:
    """Well-founded model via the alternating fixpoint of the reduct operator."""
    c = _Compiled(prog)
    args = c.args()
    true = 0
    while True:
        over = kernel.gl_least_model(*args, true)
        nxt = kernel.gl_least_model(*args, over)
        if nxt == true:
            break
        true = nxt
    all_atoms = (1 << c.n) - 1
    return c.unmask(true), c.unmask(all_atoms & ~over)


def wfs_partial_evaluation(prog: Program) -> tuple[Program, frozenset[Atom]]:
    """Drop what the well-founded model settles; return the residue and its true atoms."""
    true, false = well_founded_by_reduct(prog)
    out = []
    for r in prog.rules:
        if r.head in true or r.head in false:
            continue
        if r.pos & false or r.neg & true:
            continue
        body = tuple(l for l in r.body if l.atom not in true and l.atom not in false)
        out.append(Rule(r.head, body, r.index))
    return Program(out, (), prog.symbols), true


def ras_sets(
    prog: Program,
    strategy: str = "merged",
    partial_evaluation: bool = True,
    max_candidates: int | None = None,
) -> list[frozenset[Atom]]:
    """Resource-based answer sets, composed bottom-up over a layering.

    With ``partial_evaluation=False`` the layering is applied to the program
    as written, which is the unrestricted construction.
    """
    if partial_evaluation:
        residue, base = wfs_partial_evaluation(prog)
    else:
        residue, base = Program(prog.rules, (), prog.symbols), frozenset()
    models = [base]
    if residue.rules:
        for layer in decompose(residue, strategy):
            grown = []
            for below in models:
                simple = simplify_component(layer.program, below)
                for m in ras_standalone(simple, max_candidates):
                    grown.append(below | m)
            models = grown
    return sort_models(models)


def admissible(prog: Program, constraints: Iterable[Constraint], m: Iterable[Atom]) -> bool:
    m = frozenset(m)
    return all(c.guard not in m for c in constraints)
