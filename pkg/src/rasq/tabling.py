"""The program table: which atoms may still be used, proved, refuted or assumed false.

Every atom heading a rule starts with a ``yes`` entry meaning its negation
has not been committed.  Proving the atom, refuting it, or assuming its
negation replaces that entry.  Entries are either permanent or tied to a
frame (the rule instance whose body consumed a hypothesis); hypothetical
changes are logged so a frame, or everything after a mark, can be undone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

from .program import Atom, Program

__all__ = [
    "Status",
    "NegKind",
    "TableEntry",
    "TableConflict",
    "ProgramTable",
    "init_table",
    "on_success",
    "on_failure",
    "on_neg_success",
    "retract_frame",
    "reset",
]


class Status(enum.Enum):
    YES = "yes"
    TRUE = "true"
    FALSE = "false"
    ASSUMED = "assumed"


class NegKind(enum.Enum):
    BY_FAILURE = "3.b"
    HYPOTHESIS_3C = "3.c"
    HYPOTHESIS_3D = "3.d"


@dataclass(frozen=True)
class TableEntry:
    status: Status
    frame: int | None = None  # None: permanent

    @property
    def permanent(self) -> bool:
        return self.frame is None


class TableConflict(RuntimeError):
    """A permanent entry was contradicted; indicates a resolver bug."""


_YES = TableEntry(Status.YES)


class ProgramTable:
    def __init__(self, prog: Program):
        self.prog = prog
        self.entries: dict[Atom, TableEntry] = {}
        self.undo_log: list[tuple[int | None, Atom, TableEntry | None]] = []
        self.reset()

    # -- queries
    def get(self, a: Atom) -> TableEntry | None:
        return self.entries.get(a)

    def has_yes(self, a: Atom) -> bool:
        e = self.entries.get(a)
        return e is not None and e.status is Status.YES

    def is_true(self, a: Atom) -> bool:
        e = self.entries.get(a)
        return e is not None and e.status is Status.TRUE

    def is_false(self, a: Atom) -> bool:
        e = self.entries.get(a)
        return e is not None and e.status in (Status.FALSE, Status.ASSUMED)

    def hypothetical(self) -> Iterator[tuple[Atom, TableEntry]]:
        return ((a, e) for a, e in self.entries.items() if not e.permanent)

    def snapshot(self) -> dict[Atom, TableEntry]:
        return dict(self.entries)

    # -- updates
    def _set(self, a: Atom, entry: TableEntry) -> None:
        prior = self.entries.get(a)
        if prior == entry:
            return
        if prior is not None and prior.permanent and prior.status is not Status.YES:
            if _truth(prior) != _truth(entry):
                raise TableConflict(
                    f"{a}: permanent {prior.status.value} entry cannot become {entry.status.value}"
                )
            return
        if not entry.permanent:
            self.undo_log.append((entry.frame, a, prior))
        self.entries[a] = entry

    def on_success(self, a: Atom, frame: int | None = None) -> None:
        self._set(a, TableEntry(Status.TRUE, frame))

    def on_failure(self, a: Atom, frame: int | None = None) -> None:
        self._set(a, TableEntry(Status.FALSE, frame))

    def on_neg_success(self, a: Atom, kind: NegKind, frame: int | None = None) -> None:
        if kind is NegKind.BY_FAILURE:
            self._set(a, TableEntry(Status.FALSE, frame))
        else:
            if frame is None:
                raise ValueError("a hypothesis needs a frame")
            self._set(a, TableEntry(Status.ASSUMED, frame))

    def mark(self) -> int:
        return len(self.undo_log)

    def undo_to(self, mark: int) -> None:
        """Roll back every logged change made after ``mark``."""
        while len(self.undo_log) > mark:
            _frame, a, prior = self.undo_log.pop()
            self._restore(a, prior)

    def _restore(self, a: Atom, prior: TableEntry | None) -> None:
        cur = self.entries.get(a)
        if cur is not None and cur.permanent and cur.status is not Status.YES:
            return  # permanent lemmas are never rolled back
        if prior is None:
            self.entries.pop(a, None)
        else:
            self.entries[a] = prior

    def retract_frame(self, frame: int) -> None:
        """Undo the hypothetical entries of ``frame``, newest first."""
        keep = []
        for item in reversed(self.undo_log):
            f, a, prior = item
            if f == frame:
                cur = self.entries.get(a)
                if cur is not None and cur.frame == frame:
                    self._restore(a, prior)
            else:
                keep.append(item)
        self.undo_log = keep[::-1]

    def promote(self) -> None:
        """Make every hypothetical entry permanent; assumptions become refutations."""
        for a, e in list(self.entries.items()):
            if not e.permanent:
                status = Status.FALSE if e.status is Status.ASSUMED else e.status
                self.entries[a] = TableEntry(status)
        self.undo_log.clear()

    def reset(self) -> None:
        self.entries = {a: _YES for a in self.prog.heads}
        self.undo_log = []

    # -- display
    def groups(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {"yes": [], "proven": [], "refuted": [], "hypothetical": []}
        for a, e in self.entries.items():
            if not e.permanent:
                out["hypothetical"].append(f"not {a}" if e.status is not Status.TRUE else a.name)
            elif e.status is Status.YES:
                out["yes"].append(a.name)
            elif e.status is Status.TRUE:
                out["proven"].append(a.name)
            else:
                out["refuted"].append(a.name)
        return {k: sorted(v) for k, v in out.items()}

    def __contains__(self, a: Atom) -> bool:
        return self.is_true(a)


def _truth(e: TableEntry) -> bool | None:
    if e.status is Status.TRUE:
        return True
    if e.status in (Status.FALSE, Status.ASSUMED):
        return False
    return None


def init_table(prog: Program) -> ProgramTable:
    return ProgramTable(prog)


def on_success(tab: ProgramTable, a: Atom, frame: int | None = None) -> ProgramTable:
    tab.on_success(a, frame)
    return tab


def on_failure(tab: ProgramTable, a: Atom, frame: int | None = None) -> ProgramTable:
    tab.on_failure(a, frame)
    return tab


def on_neg_success(tab: ProgramTable, a: Atom, kind: NegKind, frame: int | None = None) -> ProgramTable:
    tab.on_neg_success(a, kind, frame)
    return tab


def retract_frame(tab: ProgramTable, frame: int) -> ProgramTable:
    tab.retract_frame(frame)
    return tab


def reset(tab: ProgramTable, prog: Program | None = None) -> ProgramTable:
    if prog is not None:
        tab.prog = prog
    tab.reset()
    return tab
