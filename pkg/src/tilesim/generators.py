"""Programmatic tile-system builders: binary counters and Turing machines.

Both constructions are temperature-2, cooperative, and directed: along
any run, every attachable location admits exactly one tile type, so the
grown assembly is unique regardless of the random seed.

Counter layout. Rows stack northward; row y reads as y mod 2^width in
binary, most significant bit at the west end. The seed row encodes 0 and
is chained with strength-2 glues so it is itself tau-stable. The east
(least significant) column bootstraps each new row through a strength-2
north glue; every other cell attaches cooperatively from its south bit
glue plus the carry glue of its east neighbor, so carries ripple east to
west and the overflow carry falls off the west end. Labels come from
{0, 1, 0c, 1c}: first character the bit, a trailing c marking cells that
absorbed a carry.

Turing machine layout. Row y is the machine configuration after y steps,
written as edge marker, tape cells, edge marker. The head cell presents
a strength-2 north glue naming (state, symbol); the action tile that
attaches above it writes the new symbol and emits the new state sideways
toward the move direction, plus a copy signal the other way. Copy
signals ripple outward, reproducing every untouched cell, until they hit
the edge markers. The westward and eastward copy signals are distinct
glues: a shared symmetric signal would let a head tile for the opposite
move direction borrow a copy signal plus a tape glue and steal a copy
cell, breaking directedness. A head that lands on an edge marker extends the next
row by one cell through a strength-2 growth glue, so the tape window
widens exactly when the machine needs it. When the head enters a halting
state a single marker tile caps the head column and nothing else can
attach: the assembly is terminal exactly when the machine halts. Labels
carry the decoding: symbols verbatim, `#` for edges, `[state symbol]`
for the head, `!` for the halt cap.

decode_row turns a completed row back into its configuration string and
is the inverse the tests lean on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import Assembly, Placement, Pos, Tas, TileSet, TileType, make_tile


class RowIncomplete(ValueError):
    """A decoded row is missing cells (or its halt cap is all there is)."""

    def __init__(self, row_index: int, reason: str) -> None:
        self.row_index = row_index
        super().__init__(f"row {row_index}: {reason}")


class TmSpecError(ValueError):
    """Invalid machine description; collects every violation at once."""

    def __init__(self, problems: list[str]) -> None:
        self.problems = list(problems)
        super().__init__("; ".join(problems))


# ---------------------------------------------------------------------------
# binary counter

@dataclass(frozen=True)
class CounterSpec:
    width: int
    base: int = 2

    def __post_init__(self) -> None:
        if not isinstance(self.width, int) or self.width < 1:
            raise ValueError("counter width must be a positive integer")
        if self.base != 2:
            raise ValueError("only base-2 counters are generated")


_BIT_COLORS = {
    "0": (240, 240, 240),
    "1": (70, 70, 70),
    "0c": (255, 214, 140),
    "1c": (224, 110, 60),
}
_SEED_COLOR = (150, 170, 220)


def gen_counter(spec: CounterSpec) -> Tas:
    """Width-w wrapping binary counter as a temperature-2 tile system."""
    w = spec.width
    types: list[TileType] = []
    if w == 1:
        # a single column needs no chaining and no carry plumbing
        types.append(make_tile("seed_bit", label="0", color=_SEED_COLOR,
                               n=("l0", 2)))
    else:
        types.append(make_tile("seed_west", label="0", color=_SEED_COLOR,
                               n=("b0", 1), e=("sk", 2)))
        if w > 2:
            types.append(make_tile("seed_mid", label="0", color=_SEED_COLOR,
                                   n=("b0", 1), e=("sk", 2), w=("sk", 2)))
        types.append(make_tile("seed_lsb", label="0", color=_SEED_COLOR,
                               n=("l0", 2), w=("sk", 2)))
    # least significant column: carry-in is always 1, bootstrap via strength 2
    types.append(make_tile("lsb_read_0", label="1c", color=_BIT_COLORS["1c"],
                           s=("l0", 2), n=("l1", 2), w=("c0", 1)))
    types.append(make_tile("lsb_read_1", label="0c", color=_BIT_COLORS["0c"],
                           s=("l1", 2), n=("l0", 2), w=("c1", 1)))
    if w > 1:
        for b in (0, 1):
            for c in (0, 1):
                nb = b ^ c
                co = b & c
                label = f"{nb}c" if c else f"{nb}"
                types.append(make_tile(
                    f"bit_{b}_carry_{c}", label=label, color=_BIT_COLORS[label],
                    s=(f"b{b}", 1), e=(f"c{c}", 1),
                    n=(f"b{nb}", 1), w=(f"c{co}", 1)))
    tile_set = TileSet(2, types)
    occ = {}
    if w == 1:
        occ[(0, 0)] = _pl(tile_set, "seed_bit")
    else:
        occ[(0, 0)] = _pl(tile_set, "seed_west")
        for x in range(1, w - 1):
            occ[(x, 0)] = _pl(tile_set, "seed_mid")
        occ[(w - 1, 0)] = _pl(tile_set, "seed_lsb")
    return Tas(tile_set=tile_set, seed=Assembly(2, occ), temperature=2)


def _pl(tile_set: TileSet, name: str) -> Placement:
    return Placement(tile_set.index_of(name), 0)


# ---------------------------------------------------------------------------
# Turing machines

_NAME_RE = re.compile(r"[A-Za-z0-9_+-]+")


def _ident_ok(s: str) -> bool:
    return bool(_NAME_RE.fullmatch(s))


@dataclass(frozen=True)
class TmSpec:
    """A deterministic single-tape machine with explicit halting states.

    Transitions must be total on (non-halting state, symbol) pairs; the
    head move is L or R. State names match [A-Za-z0-9_+-]+ and tape
    symbols are single characters from the same class, so they can be
    embedded verbatim in glue colors and labels.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    blank: str
    start: str
    halting: frozenset[str]
    transitions: dict[tuple[str, str], tuple[str, str, str]]
    input: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "halting", frozenset(self.halting))
        problems = self.problems()
        if problems:
            raise TmSpecError(problems)

    def problems(self) -> list[str]:
        out = []
        if not self.states:
            out.append("no states")
        for q in self.states:
            if not _ident_ok(q):
                out.append(f"state name {q!r} outside [A-Za-z0-9_+-]+")
        if len(set(self.states)) != len(self.states):
            out.append("duplicate state names")
        for s in self.alphabet:
            if len(s) != 1 or not _ident_ok(s):
                out.append(f"symbol {s!r} is not a single [A-Za-z0-9_+-] character")
        if len(set(self.alphabet)) != len(self.alphabet):
            out.append("duplicate symbols")
        if self.blank not in self.alphabet:
            out.append(f"blank {self.blank!r} missing from the alphabet")
        if self.start not in self.states:
            out.append(f"start state {self.start!r} missing from the states")
        for q in self.halting:
            if q not in self.states:
                out.append(f"halting state {q!r} missing from the states")
        for (q, s), (q2, s2, m) in self.transitions.items():
            where = f"rule ({q},{s})"
            if q not in self.states:
                out.append(f"{where}: unknown state {q!r}")
            elif q in self.halting:
                out.append(f"{where}: halting states take no rules")
            if s not in self.alphabet:
                out.append(f"{where}: unknown symbol {s!r}")
            if q2 not in self.states:
                out.append(f"{where}: unknown target state {q2!r}")
            if s2 not in self.alphabet:
                out.append(f"{where}: unknown written symbol {s2!r}")
            if m not in ("L", "R"):
                out.append(f"{where}: move must be L or R, got {m!r}")
        for q in self.states:
            if q in self.halting:
                continue
            for s in self.alphabet:
                if (q, s) not in self.transitions:
                    out.append(f"no rule for non-halting pair ({q},{s})")
        for ch in self.input:
            if ch not in self.alphabet:
                out.append(f"input symbol {ch!r} missing from the alphabet")
        return out

    def with_input(self, word: str) -> "TmSpec":
        return TmSpec(self.states, self.alphabet, self.blank, self.start,
                      self.halting, self.transitions, word)


def parse_tm_file(text: str) -> TmSpec:
    """Parse the machine description format.

        tm v1
        states r c h
        alphabet 0 1 _
        blank _
        start r
        halt h
        input 0101        (optional)
        rule r 0 r 0 R    (one per transition: q s -> q' s' move)

    Blank lines and lines starting with `;` are ignored. Errors raise
    TmSpecError listing every problem found.
    """
    problems: list[str] = []
    header_seen = False
    fields: dict[str, object] = {"input": ""}
    transitions: dict[tuple[str, str], tuple[str, str, str]] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if not header_seen:
            if line != "tm v1":
                problems.append(f"line {lineno}: expected 'tm v1', got {line!r}")
            header_seen = True
            if line == "tm v1":
                continue
        parts = line.split()
        key = parts[0]
        if key == "states":
            fields["states"] = tuple(parts[1:])
        elif key == "alphabet":
            fields["alphabet"] = tuple(parts[1:])
        elif key == "blank":
            if len(parts) != 2:
                problems.append(f"line {lineno}: blank takes one symbol")
            else:
                fields["blank"] = parts[1]
        elif key == "start":
            if len(parts) != 2:
                problems.append(f"line {lineno}: start takes one state")
            else:
                fields["start"] = parts[1]
        elif key == "halt":
            fields["halting"] = frozenset(parts[1:])
        elif key == "input":
            fields["input"] = parts[1] if len(parts) == 2 else ""
            if len(parts) > 2:
                problems.append(f"line {lineno}: input takes one word")
        elif key == "rule":
            if len(parts) != 6:
                problems.append(
                    f"line {lineno}: rule takes 'rule <q> <s> <q'> <s'> <L|R>'")
                continue
            _, q, s, q2, s2, m = parts
            if (q, s) in transitions:
                problems.append(f"line {lineno}: duplicate rule for ({q},{s})")
            transitions[(q, s)] = (q2, s2, m)
        else:
            problems.append(f"line {lineno}: unknown directive {key!r}")
    if not header_seen:
        problems.append("line 1: empty file, expected 'tm v1'")
    for need in ("states", "alphabet", "blank", "start", "halting"):
        if need not in fields:
            problems.append(f"missing '{need if need != 'halting' else 'halt'}' line")
    if problems:
        raise TmSpecError(problems)
    return TmSpec(states=fields["states"], alphabet=fields["alphabet"],
                  blank=fields["blank"], start=fields["start"],
                  halting=fields["halting"], transitions=transitions,
                  input=fields["input"])


_TM_COLORS = {
    "edge": (60, 60, 70),
    "copy": (235, 235, 235),
    "head": (230, 140, 50),
    "action": (150, 190, 240),
    "halt": (220, 60, 60),
}


def _head_glue(spec: TmSpec, q: str, s: str) -> tuple[str, int]:
    # all halting heads share one color so a single cap tile serves them
    if q in spec.halting:
        return ("halted", 2)
    return (f"h:{q}:{s}", 2)


def gen_turing(spec: TmSpec) -> Tas:
    """Compile a machine into a temperature-2 row-per-step tile system."""
    types: list[TileType] = []
    seen: set[str] = set()

    def add(t: TileType) -> None:
        if t.name not in seen:
            seen.add(t.name)
            types.append(t)

    # copy tiles come per symbol and per chain direction; cpL rides the
    # westward chain left of the head, cpR the eastward one
    for t in spec.alphabet:
        add(make_tile(f"copy_l_{t}", label=t, color=_TM_COLORS["copy"],
                      s=(f"t:{t}", 1), n=(f"t:{t}", 1),
                      e=("cpL", 1), w=("cpL", 1)))
        add(make_tile(f"copy_r_{t}", label=t, color=_TM_COLORS["copy"],
                      s=(f"t:{t}", 1), n=(f"t:{t}", 1),
                      e=("cpR", 1), w=("cpR", 1)))
    add(make_tile("edge_copy_l", label="#", color=_TM_COLORS["edge"],
                  s=("e:L", 1), n=("e:L", 1), e=("cpL", 1)))
    add(make_tile("edge_copy_r", label="#", color=_TM_COLORS["edge"],
                  s=("e:R", 1), n=("e:R", 1), w=("cpR", 1)))
    add(make_tile("edge_l", label="#", color=_TM_COLORS["edge"],
                  n=("e:L", 1), e=("gL", 2)))
    add(make_tile("edge_r", label="#", color=_TM_COLORS["edge"],
                  n=("e:R", 1), w=("gR", 2)))
    add(make_tile("halt", label="!", color=_TM_COLORS["halt"],
                  s=("halted", 2), n=("done", 1)))

    for (q, s), (q2, s2, m) in sorted(spec.transitions.items()):
        if m == "L":
            add(make_tile(f"{q}_read_{s}", label=s2, color=_TM_COLORS["action"],
                          s=_head_glue(spec, q, s), n=(f"t:{s2}", 1),
                          w=(f"mL:{q2}", 1), e=("cpR", 1)))
            for t in spec.alphabet:
                add(make_tile(f"{q2}_head_{t}_l", label=f"[{q2} {t}]",
                              color=_TM_COLORS["head"],
                              s=(f"t:{t}", 1), e=(f"mL:{q2}", 1),
                              n=_head_glue(spec, q2, t), w=("cpL", 1)))
            add(make_tile(f"{q2}_grow_l", label=f"[{q2} {spec.blank}]",
                          color=_TM_COLORS["head"],
                          s=("e:L", 1), e=(f"mL:{q2}", 1),
                          n=_head_glue(spec, q2, spec.blank), w=("gL", 2)))
        else:
            add(make_tile(f"{q}_read_{s}", label=s2, color=_TM_COLORS["action"],
                          s=_head_glue(spec, q, s), n=(f"t:{s2}", 1),
                          e=(f"mR:{q2}", 1), w=("cpL", 1)))
            for t in spec.alphabet:
                add(make_tile(f"{q2}_head_{t}_r", label=f"[{q2} {t}]",
                              color=_TM_COLORS["head"],
                              s=(f"t:{t}", 1), w=(f"mR:{q2}", 1),
                              n=_head_glue(spec, q2, t), e=("cpR", 1)))
            add(make_tile(f"{q2}_grow_r", label=f"[{q2} {spec.blank}]",
                          color=_TM_COLORS["head"],
                          s=("e:R", 1), w=(f"mR:{q2}", 1),
                          n=_head_glue(spec, q2, spec.blank), e=("gR", 2)))

    # seed row: # head tape... # with strength-2 in-row chaining
    word = spec.input if spec.input else spec.blank
    cells = list(word)
    head_sym = cells[0]
    ncells = len(cells)
    seed_types: list[TileType] = []
    seed_types.append(make_tile("seed_edge_l", label="#", color=_TM_COLORS["edge"],
                                n=("e:L", 1), e=("sk", 2)))
    for x, sym in enumerate(cells):
        if x == 0:
            seed_types.append(make_tile(
                "seed_head", label=f"[{spec.start} {head_sym}]",
                color=_TM_COLORS["head"],
                n=_head_glue(spec, spec.start, head_sym),
                w=("sk", 2), e=("sk", 2)))
        else:
            seed_types.append(make_tile(
                f"seed_{x}", label=sym, color=_TM_COLORS["copy"],
                n=(f"t:{sym}", 1), w=("sk", 2), e=("sk", 2)))
    seed_types.append(make_tile("seed_edge_r", label="#", color=_TM_COLORS["edge"],
                                n=("e:R", 1), w=("sk", 2)))
    for t in seed_types:
        add(t)
    tile_set = TileSet(2, types)

    occ: dict[Pos, Placement] = {}
    occ[(-1, 0)] = Placement(tile_set.index_of("seed_edge_l"), 0)
    occ[(0, 0)] = Placement(tile_set.index_of("seed_head"), 0)
    for x in range(1, ncells):
        occ[(x, 0)] = Placement(tile_set.index_of(f"seed_{x}"), 0)
    occ[(ncells, 0)] = Placement(tile_set.index_of("seed_edge_r"), 0)
    return Tas(tile_set=tile_set, seed=Assembly(2, occ), temperature=2)


# ---------------------------------------------------------------------------
# row decoding

def decode_row(assembly: Assembly, tile_set: TileSet, row_index: int,
               convention: str = "counter") -> str:
    """Read one completed row back as its configuration string.

    counter: the bit characters across the seed's columns, west to east.
    turing: cell labels joined with spaces, "# ... #" with one head cell.
    """
    if convention == "counter":
        return _decode_counter_row(assembly, tile_set, row_index)
    if convention == "turing":
        return _decode_tm_row(assembly, tile_set, row_index)
    raise ValueError(f"unknown decode convention {convention!r}")


def _row_labels(assembly: Assembly, tile_set: TileSet, row_index: int) -> dict[int, str]:
    return {p[0]: tile_set[pl.type_index].label
            for p, pl in assembly.occupancy.items() if p[1] == row_index}


def _decode_counter_row(assembly: Assembly, tile_set: TileSet, row_index: int) -> str:
    base = _row_labels(assembly, tile_set, 0)
    if not base:
        raise RowIncomplete(row_index, "no seed row to take the column window from")
    xs = sorted(base)
    labels = _row_labels(assembly, tile_set, row_index)
    missing = [x for x in xs if x not in labels]
    if missing:
        raise RowIncomplete(row_index, f"missing columns {missing}")
    return "".join(labels[x][0] for x in xs)


def _decode_tm_row(assembly: Assembly, tile_set: TileSet, row_index: int) -> str:
    labels = _row_labels(assembly, tile_set, row_index)
    if not labels:
        raise RowIncomplete(row_index, "empty row")
    xs = sorted(labels)
    if xs != list(range(xs[0], xs[-1] + 1)):
        raise RowIncomplete(row_index, "row has gaps")
    cells = [labels[x] for x in xs]
    if cells[0] != "#" or cells[-1] != "#":
        raise RowIncomplete(row_index, "row not closed by edge markers")
    heads = [c for c in cells if c.startswith("[")]
    if len(heads) != 1:
        raise RowIncomplete(row_index, f"expected one head cell, found {len(heads)}")
    return " ".join(cells)
