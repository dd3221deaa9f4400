"""Core value types for square/cubic tile self-assembly.

Tiles are unit squares (2-D) or unit cubes (3-D) on the integer lattice.
Each side carries a glue: a color string plus a nonnegative integer
strength. Two abutting glues form a bond only when color and strength
both match exactly. A tile system is a tile set plus a seed assembly and
an integer temperature; a tile may attach to an assembly wherever its
matched bonds sum to at least the temperature.

Everything in this module is a plain value. Operations derive new
objects instead of mutating, so states can be snapshotted and compared
structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

Pos = tuple[int, ...]

COORD_MIN = -(2**31)
COORD_MAX = 2**31 - 1

DEFAULT_COLOR = (204, 204, 204)


class Direction(Enum):
    """A lattice direction: an axis (0=x, 1=y, 2=z) and a sign."""

    NORTH = ("n", 1, 1)
    EAST = ("e", 0, 1)
    SOUTH = ("s", 1, -1)
    WEST = ("w", 0, -1)
    UP = ("u", 2, 1)
    DOWN = ("d", 2, -1)

    @property
    def letter(self) -> str:
        return self.value[0]

    @property
    def axis(self) -> int:
        return self.value[1]

    @property
    def sign(self) -> int:
        return self.value[2]

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]

    def offset(self, dim: int) -> Pos:
        off = [0] * dim
        off[self.axis] = self.sign
        return tuple(off)

    @classmethod
    def for_dim(cls, dim: int) -> tuple["Direction", ...]:
        return _DIM_DIRS[dim]

    @classmethod
    def from_letter(cls, letter: str, dim: int) -> "Direction":
        for d in _DIM_DIRS[dim]:
            if d.letter == letter:
                return d
        raise ValueError(f"no direction {letter!r} in {dim}-D")


_OPPOSITE = {
    Direction.NORTH: Direction.SOUTH,
    Direction.SOUTH: Direction.NORTH,
    Direction.EAST: Direction.WEST,
    Direction.WEST: Direction.EAST,
    Direction.UP: Direction.DOWN,
    Direction.DOWN: Direction.UP,
}

_DIM_DIRS = {
    2: (Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST),
    3: (Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST,
        Direction.UP, Direction.DOWN),
}

_DIR_INDEX = {dim: {d: i for i, d in enumerate(dirs)} for dim, dirs in _DIM_DIRS.items()}


def neighbor(pos: Pos, d: Direction) -> Pos:
    off = d.offset(len(pos))
    return tuple(a + b for a, b in zip(pos, off))


def check_position(pos: Pos, dim: int) -> None:
    if len(pos) != dim:
        raise ValueError(f"position {pos} is not {dim}-D")
    for c in pos:
        if not isinstance(c, int) or not (COORD_MIN <= c <= COORD_MAX):
            raise ValueError(f"coordinate {c} outside signed 32-bit range")


@dataclass(frozen=True)
class Glue:
    """A side decoration. strength 0 with empty color is the null glue.

    A strength-0 glue never bonds with anything, including another
    strength-0 glue, so the color of a strength-0 glue carries no
    information and is normalized away.
    """

    color: str = ""
    strength: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.strength, int) or self.strength < 0:
            raise ValueError("glue strength must be a nonnegative integer")
        if self.strength == 0 and self.color:
            object.__setattr__(self, "color", "")
        if self.strength >= 1 and not self.color:
            raise ValueError("a glue with strength >= 1 needs a nonempty color")
        if self.color and not self.color.isprintable():
            raise ValueError("glue colors must be printable with no newlines")


NULL_GLUE = Glue()


@dataclass(frozen=True)
class TileType:
    """One tile type. Types never rotate during assembly.

    glues holds one Glue per direction in the canonical order given by
    Direction.for_dim(dim); use make_tile or glue() instead of touching
    the tuple by index.
    """

    name: str
    dim: int
    glues: tuple[Glue, ...]
    label: str = ""
    color: tuple[int, int, int] = DEFAULT_COLOR
    concentration: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if len(self.glues) != len(_DIM_DIRS[self.dim]):
            raise ValueError("wrong glue count for dimensionality")
        if not isinstance(self.name, str) or not self.name or self.name != self.name.strip():
            raise ValueError("tile names must be nonempty with no surrounding whitespace")
        if not self.name.isprintable():
            raise ValueError("tile names must be printable with no newlines")
        if self.label and not self.label.isprintable():
            raise ValueError("labels must be printable with no newlines")
        if self.label != self.label.strip():
            object.__setattr__(self, "label", self.label.strip())
        if len(self.color) != 3 or any(not (0 <= c <= 255) for c in self.color):
            raise ValueError("display color must be an (r, g, b) triple in 0..255")
        if not isinstance(self.concentration, Fraction):
            object.__setattr__(self, "concentration", Fraction(self.concentration))
        if self.concentration <= 0:
            raise ValueError("concentration must be positive")

    def glue(self, d: Direction) -> Glue:
        idx = _DIR_INDEX[self.dim].get(d)
        if idx is None:
            raise ValueError(f"direction {d.name} does not exist in {self.dim}-D")
        return self.glues[idx]

    @property
    def glue_map(self) -> dict[Direction, Glue]:
        return {d: g for d, g in zip(_DIM_DIRS[self.dim], self.glues)}


GlueLike = "Glue | tuple[str, int] | None"


def _as_glue(g) -> Glue:
    if g is None:
        return NULL_GLUE
    if isinstance(g, Glue):
        return g
    return Glue(*g)


def make_tile(name, dim=2, *, label="", color=DEFAULT_COLOR, conc=1,
              n=None, e=None, s=None, w=None, u=None, d=None) -> TileType:
    """Build a TileType from per-side glues; omitted sides are null."""
    by_dir = {
        Direction.NORTH: n, Direction.EAST: e, Direction.SOUTH: s,
        Direction.WEST: w, Direction.UP: u, Direction.DOWN: d,
    }
    if dim == 2 and (u is not None or d is not None):
        raise ValueError("up/down glues only exist in 3-D")
    glues = tuple(_as_glue(by_dir[dd]) for dd in _DIM_DIRS[dim])
    return TileType(name=name, dim=dim, glues=glues, label=label,
                    color=tuple(color), concentration=Fraction(conc))


@dataclass
class TileSet:
    """An ordered collection of uniquely named tile types."""

    dim: int
    types: list[TileType] = field(default_factory=list)
    _by_name: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        self._by_name = {}
        for i, t in enumerate(self.types):
            if t.dim != self.dim:
                raise ValueError(f"tile {t.name!r} is {t.dim}-D in a {self.dim}-D set")
            if t.name in self._by_name:
                raise ValueError(f"duplicate tile name {t.name!r}")
            self._by_name[t.name] = i

    def index_of(self, name: str) -> int:
        idx = self._by_name.get(name)
        if idx is None:
            raise ValueError(f"unknown tile type {name!r}")
        return idx

    def get(self, name: str) -> TileType:
        return self.types[self.index_of(name)]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self.types)

    def __iter__(self):
        return iter(self.types)

    def __getitem__(self, i: int) -> TileType:
        return self.types[i]

    @property
    def names(self) -> list[str]:
        return [t.name for t in self.types]


@dataclass(frozen=True)
class Placement:
    type_index: int
    attached_at_step: int = 0


@dataclass
class Assembly:
    """A sparse occupancy map from positions to placements."""

    dim: int
    occupancy: dict[Pos, Placement] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.occupancy)

    def positions(self) -> list[Pos]:
        return sorted(self.occupancy)

    def copy(self) -> "Assembly":
        return Assembly(self.dim, dict(self.occupancy))

    def bounding_box(self) -> tuple[Pos, Pos] | None:
        if not self.occupancy:
            return None
        axes = range(self.dim)
        mins = tuple(min(p[a] for p in self.occupancy) for a in axes)
        maxs = tuple(max(p[a] for p in self.occupancy) for a in axes)
        return mins, maxs

    def validate(self, tile_set: TileSet) -> None:
        if self.dim != tile_set.dim:
            raise ValueError("assembly and tile set dimensionality differ")
        for pos, pl in self.occupancy.items():
            check_position(pos, self.dim)
            if not (0 <= pl.type_index < len(tile_set)):
                raise ValueError(f"placement at {pos} references missing type index {pl.type_index}")
            if pl.attached_at_step < 0:
                raise ValueError("attachment steps must be nonnegative")


def assembly_from_names(tile_set: TileSet, entries, step: int = 0) -> Assembly:
    """Build an assembly from (position, type name) pairs."""
    occ: dict[Pos, Placement] = {}
    for pos, name in entries:
        pos = tuple(pos)
        check_position(pos, tile_set.dim)
        if pos in occ:
            raise ValueError(f"duplicate placement at {pos}")
        occ[pos] = Placement(tile_set.index_of(name), step)
    return Assembly(tile_set.dim, occ)


class StepMode(Enum):
    SINGLE = "single"
    PARALLEL = "parallel"


@dataclass
class Tas:
    """A tile system: tile set, seed assembly, temperature, plus run options."""

    tile_set: TileSet
    seed: Assembly
    temperature: int
    step_mode: StepMode = StepMode.SINGLE
    concentrations_enabled: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.temperature, int) or self.temperature < 1:
            raise ValueError("temperature must be a positive integer")
        if not self.seed.occupancy:
            raise ValueError("seed assembly must not be empty")
        self.seed.validate(self.tile_set)
        for pos, pl in self.seed.occupancy.items():
            if pl.attached_at_step != 0:
                raise ValueError(f"seed placement at {pos} must carry step 0")


# ---------------------------------------------------------------------------
# glue and tile arithmetic

def bond_strength(a: TileType, d: Direction, b: TileType) -> int:
    """Strength of the bond formed when b sits on a's d side, else 0.

    The bond forms only when a's glue on d and b's glue on the opposite
    side agree on both color and strength, and that strength is >= 1.
    """
    ga = a.glue(d)
    if ga.strength < 1:
        return 0
    return ga.strength if ga == b.glue(d.opposite) else 0


def incident_strength(assembly: Assembly, tile_set: TileSet, pos: Pos, t: TileType) -> int:
    """Total bond strength t would form if placed at the empty position pos."""
    occ = assembly.occupancy
    if pos in occ:
        raise ValueError(f"position {pos} is occupied")
    total = 0
    for d in _DIM_DIRS[assembly.dim]:
        pl = occ.get(neighbor(pos, d))
        if pl is not None:
            total += bond_strength(t, d, tile_set[pl.type_index])
    return total


_ROTATION = {
    # new side <- old side, one positive quarter turn about each axis.
    # About z: north -> east -> south -> west -> north (up/down fixed).
    # About x and y: right-hand rule.
    2: {Direction.NORTH: Direction.EAST, Direction.EAST: Direction.SOUTH,
        Direction.SOUTH: Direction.WEST, Direction.WEST: Direction.NORTH,
        Direction.UP: Direction.UP, Direction.DOWN: Direction.DOWN},
    0: {Direction.NORTH: Direction.UP, Direction.UP: Direction.SOUTH,
        Direction.SOUTH: Direction.DOWN, Direction.DOWN: Direction.NORTH,
        Direction.EAST: Direction.EAST, Direction.WEST: Direction.WEST},
    1: {Direction.UP: Direction.EAST, Direction.EAST: Direction.DOWN,
        Direction.DOWN: Direction.WEST, Direction.WEST: Direction.UP,
        Direction.NORTH: Direction.NORTH, Direction.SOUTH: Direction.SOUTH},
}


def rotate_tile(t: TileType, quarter_turns: int, axis: int = 2) -> TileType:
    """Return t with its glues rotated by quarter turns about an axis.

    Rotation is an editor convenience for deriving variants; nothing in
    the attachment rules ever rotates a tile.
    """
    if t.dim == 2 and axis != 2:
        raise ValueError("2-D tiles only rotate about the z axis")
    if axis not in (0, 1, 2):
        raise ValueError("axis must be 0 (x), 1 (y) or 2 (z)")
    perm = _ROTATION[axis]
    mapping = {d: d for d in _DIM_DIRS[t.dim]}
    for _ in range(quarter_turns % 4):
        mapping = {d: perm[mapping[d]] for d in mapping}
    new_glues = [NULL_GLUE] * len(t.glues)
    for d in _DIM_DIRS[t.dim]:
        new_glues[_DIR_INDEX[t.dim][mapping[d]]] = t.glue(d)
    return TileType(name=t.name, dim=t.dim, glues=tuple(new_glues), label=t.label,
                    color=t.color, concentration=t.concentration)


def functionally_equivalent(a: TileType, b: TileType) -> bool:
    """True when a and b expose identical glues on every side."""
    if a.dim != b.dim:
        raise ValueError("tiles of different dimensionality are not comparable")
    return a.glues == b.glues


def binders_for_side(tile_set: TileSet, t: TileType, d: Direction) -> list[TileType]:
    """Tile types that can form a bond against t's d side, in set order."""
    return [u for u in tile_set if bond_strength(t, d, u) >= 1]


def search_types(tile_set: TileSet, query: str) -> list[TileType]:
    """Types whose name, label or any glue color contains query (case-sensitive)."""
    out = []
    for t in tile_set:
        if query in t.name or query in t.label or any(query in g.color for g in t.glues):
            out.append(t)
    return out
