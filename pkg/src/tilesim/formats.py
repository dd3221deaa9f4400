"""Line-oriented text formats for tile sets, assemblies and systems.

Three document kinds, all versioned and plain-text:

  tileset v1 dim=<2|3>
  tile <name>
  label <text>              (optional)
  color #rrggbb             (optional, display only)
  conc <decimal or p/q>     (optional, default 1)
  glue <n|e|s|w|u|d> <strength> <color>
  end

  assembly v1 dim=<2|3>
  at <x> <y> [<z>] <tile-name>

  system v1
  temperature <int>
  mode <single|parallel>    (optional, default single)
  conc <on|off>             (optional, default off)
  tileset { ... }           (inline document, or: tileset file <relpath>)
  seed { ... }              (inline document, or: seed file <relpath>)

Omitted sides carry the null glue. Glue colors containing whitespace,
quotes or backslashes are double-quoted with backslash escapes; anything
else may appear bare (the rest of the line is taken verbatim). Tile
names and labels run to the end of the line and are stripped, so they
cannot start or end with spaces. Concentrations are written as decimals
when the value terminates and as p/q otherwise. Attachment steps are not
part of the assembly format; parsed placements carry step 0.

Serialization is canonical: fixed key order, defaults omitted, sorted
placements, minimal quoting. parse(serialize(x)) == x for every valid
value, and serialize(parse(text)) is a fixed point. All parse errors are
FormatError carrying a 1-based line number.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction

from .model import (
    Assembly, DEFAULT_COLOR, Direction, Glue, Placement, StepMode, Tas,
    TileSet, TileType, check_position,
)


class FormatError(ValueError):
    def __init__(self, line: int, reason: str) -> None:
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


# ---------------------------------------------------------------------------
# small lexical helpers

def _quote_color(color: str) -> str:
    if color and not any(c in color for c in ' \t"\\'):
        return color
    out = color.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{out}"'


def _parse_color_field(raw: str, line: int) -> str:
    raw = raw.strip()
    if not raw:
        raise FormatError(line, "glue color missing")
    if raw[0] != '"':
        return raw
    out = []
    i = 1
    while i < len(raw):
        c = raw[i]
        if c == "\\":
            if i + 1 >= len(raw):
                raise FormatError(line, "dangling escape in quoted color")
            nxt = raw[i + 1]
            if nxt not in ('"', "\\"):
                raise FormatError(line, f"unknown escape \\{nxt} in quoted color")
            out.append(nxt)
            i += 2
        elif c == '"':
            if raw[i + 1:].strip():
                raise FormatError(line, "trailing text after quoted color")
            return "".join(out)
        else:
            out.append(c)
            i += 1
    raise FormatError(line, "unterminated quoted color")


def _format_conc(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    d = c.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        # terminating decimal
        digits = max(_pow_count(c.denominator, 2), _pow_count(c.denominator, 5))
        scaled = c.numerator * 10**digits // c.denominator
        s = str(scaled).rjust(digits + 1, "0")
        return f"{s[:-digits]}.{s[-digits:]}"
    return f"{c.numerator}/{c.denominator}"


def _pow_count(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _parse_conc(raw: str, line: int) -> Fraction:
    raw = raw.strip()
    try:
        if "/" in raw:
            num, den = raw.split("/", 1)
            c = Fraction(int(num), int(den))
        elif re.fullmatch(r"-?\d+(\.\d+)?", raw):
            c = Fraction(raw)
        else:
            raise ValueError
    except (ValueError, ZeroDivisionError):
        raise FormatError(line, f"bad concentration {raw!r}") from None
    if c <= 0:
        raise FormatError(line, "concentration must be positive")
    return c


def _parse_int(tok: str, line: int, what: str) -> int:
    if not re.fullmatch(r"-?\d+", tok):
        raise FormatError(line, f"bad {what} {tok!r}")
    return int(tok)


class _Lines:
    """Nonblank lines with original 1-based numbers."""

    def __init__(self, text: str, base: int = 0) -> None:
        self.items = [(i + 1 + base, ln.strip())
                      for i, ln in enumerate(text.split("\n"))
                      if ln.strip()]
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self):
        item = self.peek()
        if item is not None:
            self.pos += 1
        return item

    @property
    def last_line(self) -> int:
        return self.items[-1][0] if self.items else 1


# ---------------------------------------------------------------------------
# tile sets

def serialize_tileset(ts: TileSet) -> str:
    out = [f"tileset v1 dim={ts.dim}"]
    for t in ts:
        out.append(f"tile {t.name}")
        if t.label:
            out.append(f"label {t.label}")
        if t.color != DEFAULT_COLOR:
            out.append("color #%02x%02x%02x" % t.color)
        if t.concentration != 1:
            out.append(f"conc {_format_conc(t.concentration)}")
        for d in Direction.for_dim(ts.dim):
            g = t.glue(d)
            if g.strength >= 1:
                out.append(f"glue {d.letter} {g.strength} {_quote_color(g.color)}")
        out.append("end")
    return "\n".join(out) + "\n"


def _parse_header(lines: _Lines, kind: str) -> int:
    item = lines.next()
    if item is None:
        raise FormatError(1, f"empty document, expected a {kind} header")
    line, text = item
    m = re.fullmatch(rf"{kind} v(\d+) dim=(\d+)", text)
    if not m:
        raise FormatError(line, f"expected '{kind} v1 dim=<2|3>', got {text!r}")
    if m.group(1) != "1":
        raise FormatError(line, f"unsupported {kind} version {m.group(1)}")
    dim = int(m.group(2))
    if dim not in (2, 3):
        raise FormatError(line, f"dim must be 2 or 3, got {dim}")
    return dim


def parse_tileset(text: str, base_line: int = 0) -> TileSet:
    lines = _Lines(text, base_line)
    dim = _parse_header(lines, "tileset")
    types: list[TileType] = []
    names: set[str] = set()
    while True:
        item = lines.next()
        if item is None:
            break
        line, text_ = item
        if not text_.startswith("tile ") and text_ != "tile":
            raise FormatError(line, f"expected 'tile <name>', got {text_!r}")
        name = text_[5:].strip()
        if not name:
            raise FormatError(line, "tile name missing")
        if name in names:
            raise FormatError(line, f"duplicate tile name {name!r}")
        names.add(name)
        label = ""
        color = DEFAULT_COLOR
        conc = Fraction(1)
        glues: dict[Direction, Glue] = {}
        closed = False
        while not closed:
            item = lines.next()
            if item is None:
                raise FormatError(lines.last_line, f"tile {name!r} missing 'end'")
            gline, gtext = item
            key = gtext.split(None, 1)[0]
            rest = gtext[len(key):].strip()
            if key == "end":
                if rest:
                    raise FormatError(gline, "'end' takes no argument")
                closed = True
            elif key == "label":
                label = rest
            elif key == "color":
                m = re.fullmatch(r"#([0-9a-fA-F]{6})", rest)
                if not m:
                    raise FormatError(gline, f"bad color {rest!r}, expected #rrggbb")
                h = m.group(1)
                color = tuple(int(h[i:i + 2], 16) for i in (0, 2, 4))
            elif key == "conc":
                conc = _parse_conc(rest, gline)
            elif key == "glue":
                parts = rest.split(None, 2)
                if len(parts) < 3:
                    raise FormatError(gline, "glue needs '<side> <strength> <color>'")
                side, strength_tok, color_raw = parts
                try:
                    d = Direction.from_letter(side, dim)
                except ValueError:
                    raise FormatError(
                        gline, f"no side {side!r} in {dim}-D") from None
                strength = _parse_int(strength_tok, gline, "glue strength")
                if strength < 1:
                    raise FormatError(gline, "explicit glues need strength >= 1")
                if d in glues:
                    raise FormatError(gline, f"side {side!r} given twice")
                glues[d] = Glue(_parse_color_field(color_raw, gline), strength)
            else:
                raise FormatError(gline, f"unknown tile attribute {key!r}")
        glue_tuple = tuple(glues.get(d, Glue()) for d in Direction.for_dim(dim))
        try:
            types.append(TileType(name=name, dim=dim, glues=glue_tuple, label=label,
                                  color=color, concentration=conc))
        except ValueError as exc:
            raise FormatError(line, str(exc)) from None
    return TileSet(dim, types)


# ---------------------------------------------------------------------------
# assemblies

def serialize_assembly(assembly: Assembly, tile_set: TileSet) -> str:
    out = [f"assembly v1 dim={assembly.dim}"]
    for pos in sorted(assembly.occupancy):
        pl = assembly.occupancy[pos]
        coords = " ".join(str(c) for c in pos)
        out.append(f"at {coords} {tile_set[pl.type_index].name}")
    return "\n".join(out) + "\n"


def parse_assembly(text: str, tile_set: TileSet, base_line: int = 0) -> Assembly:
    lines = _Lines(text, base_line)
    dim = _parse_header(lines, "assembly")
    if dim != tile_set.dim:
        line = lines.items[0][0]
        raise FormatError(line, f"assembly is {dim}-D but the tile set is {tile_set.dim}-D")
    occ: dict[tuple, Placement] = {}
    while True:
        item = lines.next()
        if item is None:
            break
        line, text_ = item
        parts = text_.split(None, dim + 1)
        if parts[0] != "at":
            raise FormatError(line, f"expected 'at <coords> <tile>', got {text_!r}")
        if len(parts) < dim + 2:
            raise FormatError(line, f"'at' needs {dim} coordinates and a tile name")
        coords = tuple(_parse_int(tok, line, "coordinate") for tok in parts[1:dim + 1])
        try:
            check_position(coords, dim)
        except ValueError as exc:
            raise FormatError(line, str(exc)) from None
        name = parts[dim + 1].strip()
        try:
            idx = tile_set.index_of(name)
        except ValueError as exc:
            raise FormatError(line, str(exc)) from None
        if coords in occ:
            raise FormatError(line, f"position {coords} placed twice")
        occ[coords] = Placement(idx, 0)
    return Assembly(dim, occ)


# ---------------------------------------------------------------------------
# systems

def serialize_system(tas: Tas) -> str:
    out = [
        "system v1",
        f"temperature {tas.temperature}",
        f"mode {tas.step_mode.value}",
        "conc on" if tas.concentrations_enabled else "conc off",
        "tileset {",
        serialize_tileset(tas.tile_set).rstrip("\n"),
        "}",
        "seed {",
        serialize_assembly(tas.seed, tas.tile_set).rstrip("\n"),
        "}",
    ]
    return "\n".join(out) + "\n"


def parse_system(text: str, base_dir: str | None = None) -> Tas:
    raw_lines = text.split("\n")
    numbered = [(i + 1, ln) for i, ln in enumerate(raw_lines)]
    pos = 0

    def next_nonblank():
        nonlocal pos
        while pos < len(numbered):
            line, ln = numbered[pos]
            pos += 1
            if ln.strip():
                return line, ln.strip()
        return None

    item = next_nonblank()
    if item is None or item[1] != "system v1":
        line = item[0] if item else 1
        got = item[1] if item else "end of file"
        raise FormatError(line, f"expected 'system v1', got {got!r}")

    temperature = None
    mode = StepMode.SINGLE
    conc_enabled = False
    tileset: TileSet | None = None
    seed_block: tuple[int, str] | None = None

    def read_block(start_line: int) -> tuple[int, str]:
        """Collect raw lines until a line that is exactly '}'."""
        nonlocal pos
        collected = []
        first = None
        while pos < len(numbered):
            line, ln = numbered[pos]
            pos += 1
            if ln.strip() == "}":
                return (first if first is not None else line, "\n".join(collected))
            if first is None:
                first = line
            collected.append(ln)
        raise FormatError(start_line, "unterminated '{' block")

    def resolve_file(rel: str, line: int) -> str:
        if base_dir is None:
            raise FormatError(line, "file references need a base directory")
        path = os.path.join(base_dir, rel)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise FormatError(line, f"cannot read {rel!r}: {exc}") from None

    while True:
        item = next_nonblank()
        if item is None:
            break
        line, text_ = item
        key = text_.split(None, 1)[0]
        rest = text_[len(key):].strip()
        if key == "temperature":
            temperature = _parse_int(rest, line, "temperature")
            if temperature < 1:
                raise FormatError(line, "temperature must be >= 1")
        elif key == "mode":
            if rest not in ("single", "parallel"):
                raise FormatError(line, f"mode must be single or parallel, got {rest!r}")
            mode = StepMode(rest)
        elif key == "conc":
            if rest not in ("on", "off"):
                raise FormatError(line, f"conc must be on or off, got {rest!r}")
            conc_enabled = rest == "on"
        elif key == "tileset":
            if rest == "{":
                block_line, block = read_block(line)
                tileset = parse_tileset(block, base_line=block_line - 1)
            elif rest.startswith("file "):
                tileset = parse_tileset(resolve_file(rest[5:].strip(), line))
            else:
                raise FormatError(line, "expected 'tileset {' or 'tileset file <path>'")
        elif key == "seed":
            if rest == "{":
                seed_block = read_block(line)
            elif rest.startswith("file "):
                seed_block = (0, resolve_file(rest[5:].strip(), line))
            else:
                raise FormatError(line, "expected 'seed {' or 'seed file <path>'")
        else:
            raise FormatError(line, f"unknown system attribute {key!r}")

    if temperature is None:
        raise FormatError(len(raw_lines), "system is missing 'temperature'")
    if tileset is None:
        raise FormatError(len(raw_lines), "system is missing its tileset")
    if seed_block is None:
        raise FormatError(len(raw_lines), "system is missing its seed")
    block_line, block = seed_block
    seed = parse_assembly(block, tileset,
                          base_line=block_line - 1 if block_line else 0)
    try:
        return Tas(tile_set=tileset, seed=seed, temperature=temperature,
                   step_mode=mode, concentrations_enabled=conc_enabled)
    except ValueError as exc:
        raise FormatError(len(raw_lines), str(exc)) from None
