"""Command line tool and REPL.

One-shot use answers ``--query`` (a literal or a conjunction, asked as a
contextual sequence), prints models with ``--models``, or runs the random
differential suite with ``--fuzz``.  Without any of these it reads REPL
commands from standard input.

Exit status: 0 on success, 1 on a failed query, an inadmissible context or
fuzz violations, 2 on errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import TextIO

from . import oracle
from .fixtures import SOURCES
from .graph import build_graph, format_edges
from .harness import ALL_CHECKS, GenConfig, run_batch
from .program import GroundingError, ParseError, Program, ground, parse, parse_query
from .resolver import (
    Outcome,
    Resolver,
    ResolverBudgetExceeded,
    check_constraints,
    format_trace,
)
from .wfs import wfs

PROMPT = "?- "

HELP = """\
?- lit, ..., lit.     ask literals in order, in the current context
:next                 ask the last query again for another context
:reset                forget the context (free queries again)
:table                show the program table
:models ras|as|wfs    show models
:check                check constraints in the current context
:trace on|off         show derivations
:graph                show the dependency graph
:load FILE            load a program (resets the context)
:help                 this text
:quit                 leave"""


class CliError(Exception):
    pass


def load_program(path: str) -> Program:
    if path.startswith("example:"):
        name = path.split(":", 1)[1]
        if name not in SOURCES:
            raise CliError(f"unknown example {name!r}; known: {', '.join(sorted(SOURCES))}")
        text = SOURCES[name]
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return ground(parse(text))
    except (ParseError, GroundingError) as exc:
        raise CliError(f"{path}: {exc}") from None



def _guard_size(prog: Program, max_atoms: int | None) -> int | None:
    if max_atoms is None:
        return None
    n = len(prog.atoms)
    if n > max_atoms:
        raise CliError(f"program has {n} atoms, above the limit of {max_atoms}")
    return 2 ** max_atoms


def models_data(prog: Program, which: str, max_atoms: int | None = None) -> dict:
    limit = _guard_size(prog, max_atoms)
    try:
        if which == "wfs":
            m = wfs(prog)
            undef = prog.atoms - m.w_plus - m.w_minus
            return {
                "true": sorted(a.name for a in m.w_plus),
                "false": sorted(a.name for a in m.w_minus),
                "undefined": sorted(a.name for a in undef),
            }
        if which == "as":
            models = oracle.answer_sets(prog, max_candidates=limit)
        elif which == "ras":
            models = oracle.ras_sets(prog, max_candidates=limit)
        else:
            raise CliError(f"unknown model kind {which!r}; use ras, as or wfs")
    except oracle.SizeGuardError as exc:
        raise CliError(str(exc)) from None
    out = {"models": oracle.model_names(models)}
    if prog.constraints:
        out["admissible"] = [oracle.admissible(prog, prog.constraints, m) for m in models]
    return out


def models_text(prog: Program, which: str, max_atoms: int | None = None) -> str:
    data = models_data(prog, which, max_atoms)
    if which == "wfs":
        return "\n".join(f"{k}: {{{', '.join(data[k])}}}" for k in ("true", "false", "undefined"))
    if not data["models"]:
        return "no answer sets"
    lines = []
    for i, m in enumerate(data["models"]):
        line = "[" + ", ".join(m) + "]"
        if "admissible" in data and not data["admissible"][i]:
            line += "   % inadmissible"
        lines.append(line)
    return "\n".join(lines)


def table_text(res: Resolver) -> str:
    groups = res.table.groups()
    return "\n".join(f"{k}: {{{', '.join(v)}}}" for k, v in groups.items())


def check_text(res: Resolver) -> tuple[bool, str]:
    rep = check_constraints(res.prog, res.table, res.prog.constraints)
    if not rep.verdicts:
        return True, "admissible (no constraints)"
    lines = [f"{c}  {'ok' if ok else 'violated'}" for c, ok in sorted(rep.verdicts.items())]
    lines.append("admissible" if rep.admissible else "inadmissible")
    return rep.admissible, "\n".join(lines)


def _outcome_data(o: Outcome, trace: bool) -> dict:
    d = {
        "query": str(o.literal),
        "verdict": o.verdict.value,
        "added": list(o.added),
        "removed": list(o.removed),
    }
    if trace:
        d["trace"] = [l.render() for l in o.trace]
    return d


class Repl:
    def __init__(self, prog: Program | None, out: TextIO, trace: bool = False, max_atoms: int | None = None):
        self.out = out
        self.trace = trace
        self.max_atoms = max_atoms
        self.res = Resolver(prog) if prog is not None else None
        self.history: list[tuple[str, str]] = []

    def say(self, text: str) -> None:
        print(text, file=self.out)

    def _need(self) -> Resolver:
        if self.res is None:
            raise CliError("no program loaded; use :load FILE")
        return self.res

    def ask(self, text: str) -> bool:
        res = self._need()
        lits = parse_query(text, res.prog)
        ok = True
        for lit in lits:
            o = res.solve(lit)
            self._report(o, len(lits) > 1)
            ok = ok and o.success
        if len(lits) > 1:
            self.say("yes." if ok else "no.")
        return ok

    def _report(self, o: Outcome, labelled: bool) -> None:
        if self.trace:
            self.say(format_trace(o.trace))
        self.history.append((str(o.literal), o.verdict.value))
        self.say(f"{o.literal}: {o.verdict.value}." if labelled else f"{o.verdict.value}.")

    def command(self, line: str) -> bool:
        """Run one input line; returns False when the session should end."""
        line = line.strip()
        if not line or line.startswith("%"):
            return True
        try:
            if line.startswith(":"):
                return self._colon(line[1:].split())
            self.ask(line)
        except (CliError, ParseError, oracle.SizeGuardError, ResolverBudgetExceeded) as exc:
            self.say(f"error: {exc}")
        return True

    def _colon(self, words: list[str]) -> bool:
        cmd, args = (words[0], words[1:]) if words else ("", [])
        if cmd in ("quit", "q", "exit"):
            return False
        if cmd == "help":
            self.say(HELP)
        elif cmd == "reset":
            self._need().reset()
            self.history.clear()
            self.say("context reset.")
        elif cmd == "table":
            self.say(table_text(self._need()))
        elif cmd == "models":
            self.say(models_text(self._need().prog, args[0] if args else "ras", self.max_atoms))
        elif cmd == "check":
            self.say(check_text(self._need())[1])
        elif cmd == "next":
            o = self._need().next()
            if o is None:
                self.say("no previous query.")
            else:
                self._report(o, False)
        elif cmd == "trace":
            self.trace = (args[0] if args else "on") != "off"
            self.say(f"trace {'on' if self.trace else 'off'}.")
        elif cmd == "graph":
            self.say(format_edges(build_graph(self._need().prog)))
        elif cmd == "load":
            if not args:
                raise CliError(":load needs a file name")
            self.res = Resolver(load_program(args[0]))
            self.history.clear()
            self.say(f"loaded {args[0]}: {len(self.res.prog.rules)} rules.")
        else:
            raise CliError(f"unknown command :{cmd}; try :help")
        return True

    def loop(self, inp: TextIO, interactive: bool) -> None:
        while True:
            if interactive:
                self.out.write(PROMPT)
                self.out.flush()
            line = inp.readline()
            if not line:
                break
            if not interactive:
                # echo input so that a piped session reads as a transcript
                shown = line.strip()
                if shown and not shown.startswith((":", "?-", "%")):
                    shown = PROMPT + shown
                self.say(shown)
            if not self.command(line):
                break


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rasq",
        description="Query ground logic programs under resource-based answer set semantics.",
    )
    p.add_argument("file", nargs="?", help="program file, or example:NAME for a built-in example")
    p.add_argument("--query", "-q", help="literal or conjunction to ask, e.g. 'f, not g'")
    p.add_argument("--models", choices=("ras", "as", "wfs"), help="print models instead of querying")
    p.add_argument("--check", action="store_true", help="after --query, check constraints in its context")
    p.add_argument("--trace", action="store_true", help="print derivations")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--graph", action="store_true", help="print the dependency graph")
    p.add_argument("--max-atoms", type=int, metavar="N", help="refuse brute-force models above N atoms")
    p.add_argument("--fuzz", type=int, metavar="N", help="run the differential suite on N random programs")
    p.add_argument("--seed", type=int, help="fuzz seed (default: $RASQ_SEED or 0)")
    p.add_argument("--gen-atoms", type=int, default=8)
    p.add_argument("--gen-rules", type=int, default=16)
    p.add_argument("--gen-body", type=int, default=3)
    p.add_argument("--gen-neg", type=float, default=0.5)
    p.add_argument("--checks", default=",".join(ALL_CHECKS), help="comma-separated checks for --fuzz")
    p.add_argument("--no-shrink", action="store_true", help="report counterexamples without shrinking")
    return p


def _fuzz(args, out: TextIO) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("RASQ_SEED", "0"))
    cfg = GenConfig(args.gen_atoms, args.gen_rules, args.gen_body, args.gen_neg, seed)
    checks = [c for c in args.checks.split(",") if c]
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise CliError(f"unknown checks: {', '.join(sorted(unknown))}")
    report = run_batch(args.fuzz, cfg, checks, do_shrink=not args.no_shrink)
    if args.json:
        print(report.to_json(), file=out)
    else:
        print(f"programs: {report.programs}", file=out)
        for c in report.checked:
            print(f"{c}: {report.violations[c]} violations", file=out)
        for ce in report.counterexamples:
            print(f"\n[{ce['check']}] program {ce['index']}: {ce['detail']}", file=out)
            print(ce.get("shrunk", ce["program"]), file=out)
    return 0 if report.ok else 1


def _oneshot(args, prog: Program, out: TextIO) -> int:
    status = 0
    data: dict = {}
    text: list[str] = []
    if args.graph:
        edges = format_edges(build_graph(prog))
        data["graph"] = edges.splitlines()
        text.append(edges)
    if args.models:
        md = models_data(prog, args.models, args.max_atoms)
        if args.models == "wfs":
            data["wfs"] = md
        else:
            # an array of models, each a sorted array of atom names
            data["models"] = md["models"]
            if "admissible" in md:
                data["models_admissible"] = md["admissible"]
        text.append(models_text(prog, args.models, args.max_atoms))
    if args.query:
        res = Resolver(prog)
        lits = parse_query(args.query, prog)
        results = []
        for lit in lits:
            o = res.solve(lit)
            results.append(_outcome_data(o, args.trace))
            if args.trace:
                text.append(format_trace(o.trace))
            text.append(f"{o.literal}: {o.verdict.value}." if len(lits) > 1 else f"{o.verdict.value}.")
            if not o.success:
                status = 1
        data["answers"] = results
        if args.check:
            ok, msg = check_text(res)
            data["admissible"] = ok
            text.append(msg)
            if not ok:
                status = 1
    elif args.check:
        raise CliError("--check needs --query")
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=2), file=out)
    else:
        for t in text:
            print(t, file=out)
    return status


def main(argv: list[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None) -> int:
    out = stdout if stdout is not None else sys.stdout
    inp = stdin if stdin is not None else sys.stdin
    args = build_parser().parse_args(argv)
    try:
        if args.fuzz is not None:
            return _fuzz(args, out)
        prog = load_program(args.file) if args.file else None
        if args.query or args.models or args.graph or args.check:
            if prog is None:
                raise CliError("a program file is needed")
            return _oneshot(args, prog, out)
        repl = Repl(prog, out, trace=args.trace, max_atoms=args.max_atoms)
        repl.loop(inp, interactive=inp.isatty())
        return 0
    except (CliError, ParseError, oracle.SizeGuardError, ResolverBudgetExceeded, ValueError) as exc:
        print(f"rasq: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
