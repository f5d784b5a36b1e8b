"""Well-founded model by iterating immediate consequences and greatest unfounded sets.

Starting from nothing known, each round adds the atoms some rule derives
from the current true and false sets, and marks as false the greatest set
of atoms that cannot be supported without using one of them.  Both sets only
grow, so the loop stops after at most ``|atoms|`` rounds.
"""

from __future__ import annotations

import enum
import weakref
from dataclasses import dataclass

from .graph import rel_rul
from .program import Atom, Program

__all__ = ["WellFoundedModel", "Status", "wfs", "definite_status"]


@dataclass(frozen=True)
class WellFoundedModel:
    w_plus: frozenset[Atom]
    w_minus: frozenset[Atom]

    def undefined(self, atoms) -> frozenset[Atom]:
        return frozenset(atoms) - self.w_plus - self.w_minus

    def value(self, a: Atom) -> "Status":
        if a in self.w_plus:
            return Status.TRUE
        if a in self.w_minus:
            return Status.FALSE
        return Status.UNDEFINED


class Status(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNDEFINED = "undefined"


_cache: "weakref.WeakKeyDictionary[Program, WellFoundedModel]" = weakref.WeakKeyDictionary()


def wfs(prog: Program) -> WellFoundedModel:
    cached = _cache.get(prog)
    if cached is not None:
        return cached
    true: set[Atom] = set()
    false: set[Atom] = set()
    rules = prog.rules
    while True:
        new_true = {
            r.head for r in rules if r.pos <= true and r.neg <= false
        }
        # atoms that could still be supported given what is already known
        possible: set[Atom] = set()
        changed = True
        live = [r for r in rules if not (r.pos & false) and not (r.neg & true)]
        while changed:
            changed = False
            for r in live:
                if r.head not in possible and r.pos <= possible:
                    possible.add(r.head)
                    changed = True
        new_false = set(prog.atoms) - possible
        if new_true == true and new_false == false:
            break
        true, false = new_true | true, new_false | false
    model = WellFoundedModel(frozenset(true), frozenset(false))
    _cache[prog] = model
    return model


_status_cache: "weakref.WeakKeyDictionary[Program, dict[Atom, Status]]" = weakref.WeakKeyDictionary()


def definite_status(prog: Program, a: Atom) -> Status:
    """Truth of ``a`` in the well-founded model of its relevant rules."""
    memo = _status_cache.setdefault(prog, {})
    s = memo.get(a)
    if s is None:
        if not prog.rules_for(a):
            s = Status.FALSE
        else:
            s = wfs(rel_rul(prog, [a])).value(a)
        memo[a] = s
    return s
