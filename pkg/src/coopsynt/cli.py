"""Command line interface: hierarchy inspection, synthesis, checking,
classification, and simulation.

Exit codes: 0 on success, 1 on usage or input errors, 2 when no cooperation
level is realizable.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from .automata import SpecError
from .checker import check_level_detailed, classify
from .formats import parse_dra, parse_mealy
from .games import UnrealizableError, game_to_dot
from .hierarchy import (
    BASE,
    FULL_E,
    OR_EXTENDED,
    BaseProp,
    enumerate_levels,
    hasse_dot,
    is_graylevel,
    parse_level,
)
from .maxcoop import assemble, build_bases, extract_max_coop, synthesis_report

RULESET_NAMES = {"base": BASE, "or": OR_EXTENDED, "full-e": FULL_E}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _color_enabled():
    if os.environ.get("COOPSYNT_COLOR", "") == "0":
        return False
    return sys.stdout.isatty()


def _paint(text, code):
    if _color_enabled():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _read_dra(path):
    try:
        return parse_dra(Path(path).read_text())
    except OSError as err:
        raise CliError(f"cannot read {path}: {err}") from err


def _read_mealy(path):
    try:
        return parse_mealy(Path(path).read_text())
    except OSError as err:
        raise CliError(f"cannot read {path}: {err}") from err


def _read_preference(path):
    if path is None:
        return None
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as err:
        raise CliError(f"cannot read {path}: {err}") from err
    return [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]


def _overrides(args):
    out = {}
    for prop, attr in ((BaseProp.IMPLIES, "implies_dra"),
                       (BaseProp.AND, "and_dra"),
                       (BaseProp.OR, "or_dra")):
        path = getattr(args, attr, None)
        if path:
            out[prop] = _read_dra(path)
    return out


def cmd_hierarchy(args):
    lattice = enumerate_levels(args.ruleset, _read_preference(args.preference))
    if args.count:
        print(len(lattice) + (1 if args.include_true else 0))
        return 0
    for k, level in enumerate(lattice.levels):
        tag = "gray" if is_graylevel(level) else "    "
        line = f"{k:3d}  {tag}  {level.name}"
        print(_paint(line, "1") if is_graylevel(level) else line)
    if args.include_true:
        print(f"{len(lattice):3d}        true")
    if args.dot:
        Path(args.dot).write_text(hasse_dot(lattice))
        print(f"wrote {args.dot}")
    if args.plot:
        from .report import hasse_figure

        hasse_figure(lattice, args.plot)
        print(f"wrote {args.plot}")
    return 0


def cmd_synthesize(args):
    a = _read_dra(args.assumption)
    g = _read_dra(args.guarantee)
    bases = build_bases(a, g, args.ruleset, _overrides(args))
    lattice = enumerate_levels(args.ruleset, _read_preference(args.preference))
    ix = assemble(lattice, bases, args.acceptance)
    machine = extract_max_coop(ix, name=args.name)
    report = synthesis_report(ix, machine)

    if args.games_dot:
        dot_dir = Path(args.games_dot)
        dot_dir.mkdir(parents=True, exist_ok=True)
        for j, solve in enumerate(ix.solves):
            safe = solve.level.name.replace(" ", "").replace("/", "_")
            (dot_dir / f"level_{j:02d}_{safe}.dot").write_text(
                game_to_dot(solve.solution.game, solve.solution.cert)
            )

    from .report import write_synthesis_outputs

    paths = write_synthesis_outputs(report, machine, args.out_dir,
                                    plot=not args.no_plot)
    print(f"initial level: {_paint(report['initial_level'], '1;32')}")
    print(f"machine states: {report['machine_states']}")
    print(f"level switch edges: {len(report['switch_edges'])}")
    for edge in report["switch_edges"]:
        print(f"  {edge['from_level']} -> {edge['to_level']} on {edge['input']}")
    if args.stats:
        print(json.dumps({l["name"]: l["stats"] for l in report["levels"]},
                         indent=2))
    for label, path in paths.items():
        print(f"wrote {label}: {path}")
    return 0


def cmd_check(args):
    machine = _read_mealy(args.machine)
    a = _read_dra(args.assumption)
    g = _read_dra(args.guarantee)
    bases = build_bases(a, g, args.ruleset, _overrides(args))
    level = parse_level(args.level, args.ruleset)
    satisfied, records = check_level_detailed(machine, level, bases)
    for rec in records:
        if rec["witness_lasso"] is not None:
            prefix, cycle = rec["witness_lasso"]
            rec["witness_lasso"] = {
                "prefix": [list(letter) for letter in prefix],
                "cycle": [list(letter) for letter in cycle],
            }
    print(json.dumps({
        "machine": machine.name,
        "level": level.name,
        "satisfied": satisfied,
        "conjuncts": records,
    }, indent=2))
    return 0


def cmd_classify(args):
    machine = _read_mealy(args.machine)
    a = _read_dra(args.assumption)
    g = _read_dra(args.guarantee)
    bases = build_bases(a, g, args.ruleset, _overrides(args))
    lattice = enumerate_levels(args.ruleset, _read_preference(args.preference))
    maximal = classify(machine, lattice, bases)
    print(json.dumps({
        "machine": machine.name,
        "maximal_levels": [lv.name for lv in maximal],
    }, indent=2))
    return 0


def cmd_simulate(args):
    machine = _read_mealy(args.machine)
    if args.random is not None:
        rng = random.Random(args.seed)
        inputs = [rng.choice(machine.alphabet.inputs) for _ in range(args.random)]
    elif args.inputs:
        inputs = [tok for tok in args.inputs.split(",") if tok]
    else:
        inputs = []
    for i in inputs:
        if i not in machine.alphabet.inputs:
            raise CliError(f"unknown input letter {i!r}")

    def level_of(state):
        if machine.level_of and state in machine.level_of:
            return machine.level_of[state]
        return "-"

    state = machine.initial
    print(f"state {state}  output {machine.output_of[state]}  "
          f"level {level_of(state)}")
    switches = 0
    prev_level = level_of(state)
    for step, i in enumerate(inputs):
        out = machine.output_of[state]
        state = machine.step(state, i)
        level = level_of(state)
        line = (f"step {step:3d}  input {i}  output {out}  level {level}")
        if level != prev_level:
            switches += 1
            line = _paint(line + "   << level switch", "1;33")
        print(line)
        prev_level = level
    print(f"switches: {switches}")
    return 0


def build_parser():
    parser = _Parser(prog="coopsynt",
                     description="cooperation-level synthesis and checking "
                                 "for Rabin word automaton specifications")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_ruleset(p, choices=("base", "or", "full-e")):
        p.add_argument("--set", dest="ruleset", choices=choices,
                       default="base", help="conjunct rule set")
        p.add_argument("--preference", metavar="FILE",
                       help="file listing level names, most preferred first")

    def add_overrides(p):
        p.add_argument("--implies-dra", metavar="FILE",
                       help="explicit automaton for A->G")
        p.add_argument("--and-dra", metavar="FILE",
                       help="explicit automaton for A*G")
        p.add_argument("--or-dra", metavar="FILE",
                       help="explicit automaton for A+G")

    p = sub.add_parser("hierarchy", help="list or count cooperation levels")
    add_ruleset(p)
    p.add_argument("--count", action="store_true", help="print only the level count")
    p.add_argument("--include-true", action="store_true",
                   help="include the trivially satisfied level")
    p.add_argument("--dot", metavar="FILE", help="write the Hasse diagram as DOT")
    p.add_argument("--plot", metavar="FILE", help="render the Hasse diagram to an image")
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("synthesize",
                       help="maximally cooperative synthesis from A and G")
    p.add_argument("assumption", help="DRA file for the assumption A")
    p.add_argument("guarantee", help="DRA file for the guarantee G")
    add_ruleset(p, choices=("base", "or"))
    add_overrides(p)
    p.add_argument("--acceptance", choices=("latched", "literal"),
                   default="latched", help="product acceptance construction")
    p.add_argument("--out-dir", default="coopsynt-report",
                   help="directory for machine, report, table, and figure")
    p.add_argument("--name", default="max_coop", help="machine name")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the rendered levels figure")
    p.add_argument("--stats", action="store_true",
                   help="print per-level solver statistics")
    p.add_argument("--games-dot", metavar="DIR",
                   help="dump the per-level membership games as DOT files")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("check", help="model-check a machine against one level")
    p.add_argument("machine", help="Mealy machine file")
    p.add_argument("assumption")
    p.add_argument("guarantee")
    p.add_argument("--level", required=True,
                   help="level string, e.g. 'A->G & GE(A)'")
    add_ruleset(p)
    add_overrides(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify",
                       help="maximal satisfied cooperation levels of a machine")
    p.add_argument("machine")
    p.add_argument("assumption")
    p.add_argument("guarantee")
    add_ruleset(p)
    add_overrides(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="step a machine on an input script")
    p.add_argument("machine")
    p.add_argument("--inputs", help="comma separated input letters")
    p.add_argument("--random", type=int, metavar="N",
                   help="draw N inputs uniformly at random")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except UnrealizableError as err:
        print(f"unrealizable: {err}", file=sys.stderr)
        return 2
    except SpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
