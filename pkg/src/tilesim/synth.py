"""Synthetic tile systems for benchmarks and property tests.

glue_grid_system builds the large directed system used to exercise the
engine at the >=10^4-type scale: an (n+1)^2-type set that tiles the
first quadrant with period n in both axes. Two strength-2 arms grow
north and east from a single corner seed and feed strength-1 glues
inward; every interior cell then attaches cooperatively from its west
and south neighbors, and each (x mod n, y mod n) phase pair names
exactly one fitting type. Growth never stops, so arbitrarily long runs
are available, and every attachable location admits exactly one type.

random_system and random_growing_system produce small arbitrary systems
for fuzzing. They draw from Python's stdlib generator seeded explicitly;
they build test inputs, so nothing here touches the simulation's own
PCG stream.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .model import (
    Assembly, Direction, Glue, Placement, StepMode, Tas, TileSet, TileType,
    make_tile,
)


def glue_grid_system(n: int = 100) -> Tas:
    """Periodic quadrant filler with (n+1)^2 distinct tile types."""
    if n < 1:
        raise ValueError("n must be positive")
    types: list[TileType] = []
    types.append(make_tile("corner", color=(40, 40, 40),
                           n=("va:0", 2), e=("ha:0", 2)))
    for j in range(n):
        types.append(make_tile(f"arm_n_{j}", color=(90, 90, 140),
                               s=(f"va:{j}", 2), n=(f"va:{(j + 1) % n}", 2),
                               e=(f"h:0:{j}", 1)))
    for i in range(n):
        types.append(make_tile(f"arm_e_{i}", color=(90, 140, 90),
                               w=(f"ha:{i}", 2), e=(f"ha:{(i + 1) % n}", 2),
                               n=(f"v:{i}:0", 1)))
    for i in range(n):
        for j in range(n):
            shade = 200 + ((i + j) % 2) * 30
            types.append(make_tile(
                f"cell_{i}_{j}", color=(shade, shade, 255 - (i + j) % 50),
                w=(f"h:{i}:{j}", 1), e=(f"h:{(i + 1) % n}:{j}", 1),
                s=(f"v:{i}:{j}", 1), n=(f"v:{i}:{(j + 1) % n}", 1)))
    tile_set = TileSet(2, types)
    seed = Assembly(2, {(-1, -1): Placement(tile_set.index_of("corner"), 0)})
    return Tas(tile_set=tile_set, seed=seed, temperature=2)


def random_system(seed: int, *, dim: int = 2, tau: int | None = None,
                  n_types: int | None = None, mode: StepMode | None = None,
                  concentrations: bool | None = None) -> Tas:
    """An arbitrary small system; most are boring, some grow, some stall."""
    rng = random.Random(seed)
    if tau is None:
        tau = rng.randint(1, 3)
    if n_types is None:
        n_types = rng.randint(3, 10)
    if mode is None:
        mode = rng.choice([StepMode.SINGLE, StepMode.PARALLEL])
    if concentrations is None:
        concentrations = rng.random() < 0.3
    colors = [f"g{i}" for i in range(rng.randint(2, 5))]
    dirs = Direction.for_dim(dim)
    types = []
    for i in range(n_types):
        glues = []
        for _ in dirs:
            if rng.random() < 0.55:
                glues.append(Glue(rng.choice(colors), rng.randint(1, tau)))
            else:
                glues.append(Glue())
        conc = Fraction(rng.randint(1, 4), rng.randint(1, 3)) \
            if concentrations else Fraction(1)
        types.append(TileType(name=f"t{i}", dim=dim, glues=tuple(glues),
                              label=str(i), concentration=conc))
    tile_set = TileSet(dim, types)
    origin = (0,) * dim
    seed_asm = Assembly(dim, {origin: Placement(rng.randrange(n_types), 0)})
    return Tas(tile_set=tile_set, seed=seed_asm, temperature=tau,
               step_mode=mode, concentrations_enabled=concentrations)


def random_growing_system(seed: int, *, dim: int = 2, tau: int | None = None,
                          mode: StepMode | None = None) -> Tas:
    """Like random_system, but resampled until the first step can place.

    Sub-seeds are derived deterministically, so the result is still a
    pure function of the seed.
    """
    # a str seed hashes deterministically across processes; a tuple would not
    rng = random.Random(f"grow:{seed}")
    for _ in range(200):
        tas = random_system(rng.getrandbits(48), dim=dim, tau=tau, mode=mode)
        if _can_grow(tas):
            return tas
    # fall back to a guaranteed grower: an infinite strength-tau ray
    t = tau if tau is not None else 2
    ray = make_tile("ray", dim=dim, e=("r", t), w=("r", t))
    tile_set = TileSet(dim, [ray])
    origin = (0,) * dim
    seed_asm = Assembly(dim, {origin: Placement(0, 0)})
    return Tas(tile_set=tile_set, seed=seed_asm, temperature=t,
               step_mode=mode if mode is not None else StepMode.SINGLE)


def _can_grow(tas: Tas) -> bool:
    from .engine import Simulation
    sim = Simulation(tas, rng_seed=0)
    for p in sim.frontier_positions:
        if sim.fitting_indices(p):
            return True
    return False
