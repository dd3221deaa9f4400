"""Headless command-line driver.

Four subcommands: `simulate` runs a system file to a budget, breakpoint
or terminality and writes the final assembly plus a run report;
`generate` emits counter and Turing-machine systems; `slice` prints a
character-grid view of an assembly region or 3-D plane; `validate`
parses a system and checks its seed's stability.

Reports are deterministic key: value text with no timestamps, so a
repeated run with the same seed produces byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections import Counter

from . import analysis
from .engine import Breakpoint, RunKind, RunOutcome, Simulation
from .formats import (
    FormatError, parse_assembly, parse_system, serialize_assembly,
    serialize_system,
)
from .generators import CounterSpec, TmSpecError, gen_counter, gen_turing, parse_tm_file
from .model import StepMode, Tas


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TmSpecError as exc:
        for p in exc.problems:
            print(f"error: {p}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tilesim", description="tile self-assembly workbench")
    sub = parser.add_subparsers(required=True)

    sim = sub.add_parser("simulate", help="run a system headless")
    sim.add_argument("--system", required=True, help="system file")
    sim.add_argument("--steps", type=int, default=0, help="step budget (0: report only)")
    sim.add_argument("--rng-seed", type=int, default=None)
    sim.add_argument("--mode", choices=["single", "parallel"], default=None)
    sim.add_argument("--out", default=None, help="write the final assembly here")
    sim.add_argument("--report", default=None, help="report path (default stdout)")
    sim.add_argument("--report-every", type=int, default=None, metavar="N",
                     help="write an assembly snapshot every N steps (needs --out)")
    sim.add_argument("--break-at-step", type=int, action="append", default=[])
    sim.add_argument("--break-at-location", action="append", default=[],
                     metavar="X,Y[,Z]")
    sim.add_argument("--break-at-type", action="append", default=[], metavar="NAME")
    sim.set_defaults(func=cmd_simulate)

    gen = sub.add_parser("generate", help="emit a generated system file")
    gensub = gen.add_subparsers(required=True)
    genc = gensub.add_parser("counter", help="wrapping binary counter")
    genc.add_argument("--width", type=int, required=True)
    genc.add_argument("--out", default=None, help="output path (default stdout)")
    genc.set_defaults(func=cmd_generate_counter)
    gent = gensub.add_parser("tm", help="Turing machine compiler")
    gent.add_argument("--spec", required=True, help="machine description file")
    gent.add_argument("--input", default=None, help="override the input word")
    gent.add_argument("--out", default=None, help="output path (default stdout)")
    gent.set_defaults(func=cmd_generate_tm)

    slc = sub.add_parser("slice", help="print an assembly region as a grid")
    slc.add_argument("--system", required=True)
    slc.add_argument("--assembly", default=None,
                     help="assembly file (default: the system's seed)")
    slc.add_argument("--plane", default=None, metavar="AXIS=INDEX",
                     help="fix one axis, e.g. z=0 (required for 3-D)")
    slc.add_argument("--box", default=None, metavar="X0,Y0,X1,Y1",
                     help="restrict to a rectangle in the remaining axes")
    slc.set_defaults(func=cmd_slice)

    val = sub.add_parser("validate", help="parse a system and check its seed")
    val.add_argument("--system", required=True)
    val.set_defaults(func=cmd_validate)
    return parser


def _load_system(path: str) -> Tas:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_system(text, base_dir=os.path.dirname(os.path.abspath(path)))
    except FormatError as exc:
        raise FormatError(exc.line, f"{path}: {exc.reason}") from None


def cmd_simulate(args) -> int:
    tas = _load_system(args.system)
    if args.mode:
        tas.step_mode = StepMode(args.mode)
    if args.steps < 0:
        raise ValueError("--steps must be nonnegative")
    if args.report_every is not None:
        if args.report_every < 1:
            raise ValueError("--report-every must be positive")
        if args.out is None:
            raise ValueError("--report-every needs --out for snapshot paths")
    breakpoints = []
    for n in args.break_at_step:
        breakpoints.append(Breakpoint.at_step(n))
    for spec in args.break_at_location:
        parts = spec.split(",")
        if len(parts) != tas.tile_set.dim:
            raise ValueError(f"breakpoint location {spec!r} has wrong arity")
        breakpoints.append(Breakpoint.at_location(tuple(int(c) for c in parts)))
    for name in args.break_at_type:
        if name not in tas.tile_set:
            raise ValueError(f"breakpoint type {name!r} not in the tile set")
        breakpoints.append(Breakpoint.at_type(name))

    sim = Simulation(tas, rng_seed=args.rng_seed)
    taken = 0
    outcome: RunOutcome | None = None
    while taken < args.steps:
        chunk = args.steps - taken
        if args.report_every is not None:
            chunk = min(chunk, args.report_every)
        outcome = sim.run(chunk, tuple(breakpoints))
        taken += outcome.steps_taken
        if args.report_every is not None and outcome.steps_taken:
            _write(f"{args.out}.step{taken:08d}",
                   serialize_assembly(sim.assembly, tas.tile_set))
        if outcome.kind is not RunKind.BUDGET or outcome.steps_taken < chunk:
            break
    if args.out is not None:
        _write(args.out, serialize_assembly(sim.assembly, tas.tile_set))
    report = _run_report(args, sim, taken, outcome)
    if args.report is not None:
        _write(args.report, report)
    else:
        sys.stdout.write(report)
    return 0


def _run_report(args, sim: Simulation, taken: int, outcome: RunOutcome | None) -> str:
    counts = Counter(d.kind.value for d in sim.diagnostics)
    status = analysis.terminal_status(sim)
    lines = [
        f"system: {args.system}",
        f"temperature: {sim.tau}",
        f"mode: {sim.tas.step_mode.value}",
        f"rng-seed: {sim.rng_seed}",
        f"budget: {args.steps}",
        f"steps: {taken}",
        f"placements: {len(sim.assembly) - len(sim.tas.seed)}",
        f"tiles: {len(sim.assembly)}",
        f"outcome: {outcome.kind.value if outcome else 'none'}",
    ]
    if outcome is not None and outcome.breakpoint is not None:
        lines.append(f"breakpoint: {outcome.breakpoint.describe()}")
    for kind in ("nondeterminism", "over-strength", "dead-frontier", "unstable-seed"):
        lines.append(f"diagnostics-{kind}: {counts.get(kind, 0)}")
    lines.append(f"status: {status.value}")
    lines.append(f"digest: {sim.state_digest()}")
    return "\n".join(lines) + "\n"


def cmd_generate_counter(args) -> int:
    tas = gen_counter(CounterSpec(width=args.width))
    return _emit(serialize_system(tas), args.out)


def cmd_generate_tm(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = parse_tm_file(fh.read())
    if args.input is not None:
        spec = spec.with_input(args.input)
    tas = gen_turing(spec)
    return _emit(serialize_system(tas), args.out)


def _emit(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
    else:
        _write(out, text)
    return 0


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


_AXES = {"x": 0, "y": 1, "z": 2}


def cmd_slice(args) -> int:
    tas = _load_system(args.system)
    if args.assembly is not None:
        with open(args.assembly, "r", encoding="utf-8") as fh:
            assembly = parse_assembly(fh.read(), tas.tile_set)
    else:
        assembly = tas.seed
    dim = assembly.dim
    plane = None
    if args.plane is not None:
        axis_name, _, idx = args.plane.partition("=")
        if axis_name not in _AXES or _AXES[axis_name] >= dim or not _is_int(idx):
            raise ValueError(f"bad plane {args.plane!r}, expected e.g. z=0")
        plane = (_AXES[axis_name], int(idx))
    if dim == 3 and plane is None:
        raise ValueError("3-D assemblies need --plane")
    cells = {}
    for pos, pl in assembly.occupancy.items():
        if plane is not None:
            if pos[plane[0]] != plane[1]:
                continue
            flat = tuple(c for a, c in enumerate(pos) if a != plane[0])
        else:
            flat = pos
        cells[flat] = pl.type_index
    if args.box is not None:
        parts = args.box.split(",")
        if len(parts) != 4 or not all(_is_int(p) for p in parts):
            raise ValueError(f"bad box {args.box!r}, expected X0,Y0,X1,Y1")
        x0, y0, x1, y1 = (int(p) for p in parts)
        x0, x1 = min(x0, x1), max(x0, x1)
        y0, y1 = min(y0, y1), max(y0, y1)
        cells = {p: i for p, i in cells.items()
                 if x0 <= p[0] <= x1 and y0 <= p[1] <= y1}
    if not cells:
        where = f"plane {args.plane}" if args.plane else "box"
        print(f"warning: {where} contains no tiles")
        return 0
    xs = [p[0] for p in cells]
    ys = [p[1] for p in cells]
    palette = ("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"
               "0123456789")
    legend: dict[int, str] = {}
    out = []
    for y in range(max(ys), min(ys) - 1, -1):
        row = []
        for x in range(min(xs), max(xs) + 1):
            ti = cells.get((x, y))
            if ti is None:
                row.append(".")
            else:
                ch = legend.get(ti)
                if ch is None:
                    ch = palette[len(legend)] if len(legend) < len(palette) else "?"
                    legend[ti] = ch
                row.append(ch)
        out.append("".join(row))
    out.append("")
    for ti, ch in legend.items():
        out.append(f"{ch}: {tas.tile_set[ti].name}")
    print("\n".join(out))
    return 0


def _is_int(s: str) -> bool:
    try:
        int(s)
        return True
    except ValueError:
        return False


def cmd_validate(args) -> int:
    tas = _load_system(args.system)
    stable = analysis.is_tau_stable(tas.seed, tas.tile_set, tas.temperature)
    dups = analysis.duplicate_glue_groups(tas.tile_set)
    lines = [
        "parse: ok",
        f"types: {len(tas.tile_set)}",
        f"temperature: {tas.temperature}",
        f"mode: {tas.step_mode.value}",
        f"seed-tiles: {len(tas.seed)}",
        f"seed-tau-stable: {str(stable).lower()}",
        f"duplicate-glue-groups: {len(dups)}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0
