"""Differential testing of the resolver against the oracle on random programs.

Programs are generated from a seed, checked against the declarative
semantics, and any failing program is shrunk (rules first, then body
literals) before it is reported.  Program ``i`` of a batch depends only on
the batch seed and ``i``, so batches can be split across workers freely.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from . import oracle
from .graph import classify
from .program import Atom, Literal, Program, parse
from .resolver import Resolver
from .wfs import wfs

ATOM_NAMES = "abcdefghijklmnopqrstuvwxyz"

# A generated rule: head name, positive body names, negative body names.
RawRule = tuple[str, tuple[str, ...], tuple[str, ...]]

THEOREM_CHECKS = ("free_query", "free_negative", "contextual", "wfs_conformance")
INVARIANT_CHECKS = (
    "antichain",
    "answer_sets_in_ras",
    "nonempty",
    "empty_unique",
    "wfs_in_ras",
    "acyclic_collapse",
    "mcs_equivalence",
    "layering",
    "gamma_antimonotone",
)
ALL_CHECKS = THEOREM_CHECKS + INVARIANT_CHECKS


@dataclass(frozen=True)
class GenConfig:
    max_atoms: int = 8
    max_rules: int = 16
    max_body: int = 3
    negation_probability: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.max_atoms < 0 or self.max_rules < 0 or self.max_body < 0:
            raise ValueError("generator bounds must be non-negative")
        if self.max_atoms > len(ATOM_NAMES):
            raise ValueError(f"at most {len(ATOM_NAMES)} atoms")
        if not 0.0 <= self.negation_probability <= 1.0:
            raise ValueError("negation_probability must be in [0, 1]")


def program_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"rasq:{seed}:{index}")


def gen_rules(cfg: GenConfig, rng: random.Random) -> list[RawRule]:
    if cfg.max_atoms == 0 or cfg.max_rules == 0:
        return []
    names = ATOM_NAMES[: rng.randint(1, cfg.max_atoms)]
    rules = []
    for _ in range(rng.randint(1, cfg.max_rules)):
        head = rng.choice(names)
        pos, neg = set(), set()
        for _ in range(rng.randint(0, cfg.max_body)):
            b = rng.choice(names)
            (neg if rng.random() < cfg.negation_probability else pos).add(b)
        rules.append((head, tuple(sorted(pos)), tuple(sorted(neg))))
    return rules


def rules_text(rules: Iterable[RawRule]) -> str:
    lines = []
    for head, pos, neg in rules:
        body = list(pos) + [f"not {b}" for b in neg]
        lines.append(f"{head} :- {', '.join(body)}." if body else f"{head}.")
    return "\n".join(lines)


def gen_program(cfg: GenConfig, rng: random.Random | None = None) -> Program:
    """A ground program within the bounds of ``cfg``; same seed, same program."""
    rng = rng if rng is not None else random.Random(cfg.seed)
    return parse(rules_text(gen_rules(cfg, rng)))


# ------------------------------------------------------------- checks

@dataclass
class Violation:
    check: str
    detail: str


def _realizable(models, succeeded, failed) -> bool:
    return any(succeeded <= m and not (failed & m) for m in models)


def _sequences(atoms: Sequence[Atom], rng: random.Random, exhaustive_upto: int, samples: int):
    if len(atoms) <= exhaustive_upto:
        for k in (1, 2, 3):
            yield from itertools.permutations(atoms, k)
        return
    for _ in range(samples):
        k = rng.randint(1, min(3, len(atoms)))
        yield tuple(rng.sample(list(atoms), k))


def _check_contextual(prog: Program, models, rng, exhaustive_upto, samples) -> list[Violation]:
    out = []
    atoms = prog.sorted_atoms()
    if len(atoms) <= exhaustive_upto:
        # share prefixes: the table after a prefix is restored, not replayed
        res = Resolver(prog)

        def walk(prefix, succeeded, failed):
            if len(prefix) == 3:
                return
            saved = dict(res.table.entries)
            for a in atoms:
                if a in prefix:
                    continue
                ok = res.query(a).success
                s2 = succeeded | {a} if ok else succeeded
                f2 = failed if ok else failed | {a}
                seq = prefix + (a,)
                if not _realizable(models, s2, f2):
                    out.append(Violation("contextual", _seq_text(seq, s2)))
                else:
                    walk(seq, s2, f2)
                res.table.entries = dict(saved)
                res.table.undo_log = []

        walk((), frozenset(), frozenset())
        return out
    for seq in _sequences(atoms, rng, exhaustive_upto, samples):
        res = Resolver(prog)
        succeeded = frozenset(a for a in seq if res.query(a).success)
        if not _realizable(models, succeeded, frozenset(seq) - succeeded):
            out.append(Violation("contextual", _seq_text(seq, succeeded)))
    return out


def _seq_text(seq, succeeded) -> str:
    return " ".join(f"{a}:{'yes' if a in succeeded else 'no'}" for a in seq)


def check_program(
    prog: Program,
    checks: Iterable[str] = ALL_CHECKS,
    rng: random.Random | None = None,
    exhaustive_upto: int = 6,
    samples: int = 20,
    gamma_pairs: int = 1,
) -> list[Violation]:
    """Run the selected checks on ``prog``; an empty list means all passed."""
    checks = set(checks)
    unknown = checks - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    rng = rng if rng is not None else random.Random(0)
    out: list[Violation] = []
    models = oracle.ras_sets(prog)
    atoms = prog.sorted_atoms()
    wf = wfs(prog)

    if "free_query" in checks or "free_negative" in checks:
        for a in atoms:
            if "free_query" in checks:
                want = any(a in m for m in models)
                got = Resolver(prog).solve(Literal(a, False)).success
                if got != want:
                    out.append(Violation("free_query", f"?- {a} answered {_yn(got)}, expected {_yn(want)}"))
            if "free_negative" in checks:
                want = any(a not in m for m in models)
                got = Resolver(prog).solve(Literal(a, True)).success
                if got != want:
                    out.append(Violation("free_negative", f"?- not {a} answered {_yn(got)}, expected {_yn(want)}"))
    if "contextual" in checks:
        out += _check_contextual(prog, models, rng, exhaustive_upto, samples)
    if "wfs_conformance" in checks:
        for a in sorted(wf.w_plus | wf.w_minus, key=lambda x: x.id):
            got = Resolver(prog).query(a).success
            if got != (a in wf.w_plus):
                out.append(Violation("wfs_conformance", f"?- {a} answered {_yn(got)}"))

    if "antichain" in checks:
        for m1, m2 in itertools.permutations(models, 2):
            if m1 < m2:
                out.append(Violation("antichain", f"{_set(m1)} inside {_set(m2)}"))
    if "answer_sets_in_ras" in checks:
        for m in oracle.answer_sets(prog):
            if m not in models:
                out.append(Violation("answer_sets_in_ras", f"answer set {_set(m)} is not a RAS"))
    if "nonempty" in checks and not models:
        out.append(Violation("nonempty", "no resource-based answer set"))
    if "empty_unique" in checks and frozenset() in models and len(models) > 1:
        out.append(Violation("empty_unique", "the empty set is a RAS next to others"))
    if "wfs_in_ras" in checks:
        for m in models:
            if not wf.w_plus <= m:
                out.append(Violation("wfs_in_ras", f"{_set(m)} misses {_set(wf.w_plus - m)}"))
    if "acyclic_collapse" in checks and classify(prog) == "acyclic":
        want = [wf.w_plus]
        if models != want or oracle.answer_sets(prog) != want:
            out.append(Violation("acyclic_collapse", "acyclic program without a single model W+"))
    if "mcs_equivalence" in checks:
        mcs = oracle.mcs_sets(prog)
        if mcs != models:
            out.append(Violation(
                "mcs_equivalence",
                f"MCS {[_set(m) for m in mcs]} vs RAS {[_set(m) for m in models]}",
            ))
    if "layering" in checks:
        fine = oracle.ras_sets(prog, strategy="fine")
        if fine != models:
            out.append(Violation("layering", "merged and fine layerings disagree"))
    if "gamma_antimonotone" in checks:
        heads = sorted(prog.heads, key=lambda x: x.id)
        for _ in range(gamma_pairs):
            i2 = frozenset(a for a in heads if rng.random() < 0.5)
            i1 = frozenset(a for a in i2 if rng.random() < 0.5)
            g1, g2 = oracle.gamma_hat(prog, i1), oracle.gamma_hat(prog, i2)
            if not g2 <= g1:
                out.append(Violation(
                    "gamma_antimonotone",
                    f"I1={_set(i1)} I2={_set(i2)} gave {_set(g1)} and {_set(g2)}",
                ))
    return out


def _yn(ok: bool) -> str:
    return "yes" if ok else "no"


def _set(m) -> str:
    return "{" + ",".join(sorted(a.name for a in m)) + "}"


# ------------------------------------------------------------ shrinking

def shrink(rules: list[RawRule], failing: Callable[[list[RawRule]], bool]) -> list[RawRule]:
    """Greedy minimization: drop whole rules, then single body literals."""
    if not failing(rules):
        raise ValueError("shrink needs a failing input")
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(rules):
            cand = rules[:i] + rules[i + 1:]
            if failing(cand):
                rules = cand
                changed = True
            else:
                i += 1
    changed = True
    while changed:
        changed = False
        for i, (head, pos, neg) in enumerate(rules):
            variants = [(head, pos[:j] + pos[j + 1:], neg) for j in range(len(pos))]
            variants += [(head, pos, neg[:j] + neg[j + 1:]) for j in range(len(neg))]
            for v in variants:
                cand = rules[:i] + [v] + rules[i + 1:]
                if failing(cand):
                    rules = cand
                    changed = True
                    break
            if changed:
                break
    return rules


def _fails(check: str, rng_seed: str) -> Callable[[list[RawRule]], bool]:
    def pred(rules):
        prog = parse(rules_text(rules))
        return any(
            v.check == check
            for v in check_program(prog, [check], rng=random.Random(rng_seed))
        )
    return pred


# -------------------------------------------------------------- batches

@dataclass
class Report:
    config: dict
    programs: int = 0
    checked: dict[str, int] = field(default_factory=dict)
    violations: dict[str, int] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


def run_batch(
    n: int,
    cfg: GenConfig,
    checks: Iterable[str] = ALL_CHECKS,
    start: int = 0,
    max_counterexamples: int = 5,
    do_shrink: bool = True,
) -> Report:
    """Generate and check ``n`` programs; programs ``start .. start+n-1`` of ``cfg.seed``."""
    checks = tuple(c for c in ALL_CHECKS if c in set(checks))
    report = Report(config=asdict(cfg), checked={c: 0 for c in checks}, violations={c: 0 for c in checks})
    for i in range(start, start + n):
        rng = program_rng(cfg.seed, i)
        rules = gen_rules(cfg, rng)
        prog = parse(rules_text(rules))
        check_seed = f"check:{cfg.seed}:{i}"
        found = check_program(prog, checks, rng=random.Random(check_seed))
        report.programs += 1
        for c in checks:
            report.checked[c] += 1
        seen = set()
        for v in found:
            report.violations[v.check] += 1
            if v.check in seen or len(report.counterexamples) >= max_counterexamples:
                continue
            seen.add(v.check)
            entry = {"index": i, "check": v.check, "detail": v.detail, "program": rules_text(rules)}
            if do_shrink:
                entry["shrunk"] = rules_text(shrink(rules, _fails(v.check, check_seed)))
            report.counterexamples.append(entry)
    return report
