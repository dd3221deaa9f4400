"""Release gates: every headline property of the workbench in one sweep.

The per-module suites pin fine-grained behavior; each test here states
one property the finished tool must hold at full scale and checks it
end to end: throughput on a ten-thousand-type system, the two reference
constructions row by row, byte-identical replay, deep undo, frontier
coherence across temperatures and modes, stability against exhaustive
cuts, concentration bias, over-strength reporting, parallel wavefront
discipline, and text format round-trips.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import replace
from fractions import Fraction

import pytest

from oracles import counter_row, machine_trace, stable_by_enumeration
from tilesim.analysis import is_tau_stable
from tilesim.cli import main as cli_main
from tilesim.engine import DiagnosticKind, Outcome, RunKind, Simulation
from tilesim.formats import (
    FormatError, parse_assembly, parse_system, parse_tileset,
    serialize_assembly, serialize_system, serialize_tileset,
)
from tilesim.generators import (
    CounterSpec, RowIncomplete, TmSpec, decode_row, gen_counter, gen_turing,
)
from tilesim.model import (
    Assembly, Direction, Glue, Placement, StepMode, Tas, TileSet, TileType,
    assembly_from_names, make_tile,
)
from tilesim.synth import glue_grid_system, random_growing_system


# -- scale -------------------------------------------------------------------

def test_hundred_thousand_steps_on_ten_thousand_types_within_a_minute() -> None:
    tas = glue_grid_system(100)
    assert len(tas.tile_set) >= 10_000
    sim = Simulation(tas, rng_seed=1, history_limit=4)
    start = time.perf_counter()
    for k in range(1, 100_001):
        r = sim.step()
        assert r.stepped and r.outcome is Outcome.PLACED
        if k % 10_000 == 0:
            sim.check_frontier_coherence()
    elapsed = time.perf_counter() - start
    assert len(sim.assembly) == 100_001
    assert sim.diagnostics == []
    assert elapsed < 60.0, f"100000 steps took {elapsed:.1f}s"
    print(f"\nscale: 100000 steps over {len(tas.tile_set)} types "
          f"in {elapsed:.1f}s ({100_000 / elapsed:,.0f} steps/s)")


# -- reference constructions -------------------------------------------------

def test_width_eight_counter_counts_through_every_eight_bit_value() -> None:
    tas = replace(gen_counter(CounterSpec(8)), step_mode=StepMode.PARALLEL)
    sim = Simulation(tas, rng_seed=3)
    # Row y completes after parallel wave y + width - 1, so 263 waves
    # close rows 0..256 and the count wraps once.
    out = sim.run(263)
    assert out.kind is RunKind.BUDGET and out.steps_taken == 263
    rows = [decode_row(sim.assembly, tas.tile_set, y) for y in range(257)]
    assert rows == [counter_row(8, y) for y in range(257)]
    assert len(set(rows[:256])) == 256
    assert rows[256] == rows[0] == "00000000"
    assert sim.diagnostics == []


_SUCC = TmSpec(
    states=("r", "c", "h"), alphabet=("0", "1", "_"), blank="_",
    start="r", halting=frozenset({"h"}),
    transitions={
        ("r", "0"): ("r", "0", "R"), ("r", "1"): ("r", "1", "R"),
        ("r", "_"): ("c", "_", "L"), ("c", "0"): ("h", "1", "L"),
        ("c", "1"): ("c", "0", "L"), ("c", "_"): ("h", "1", "L"),
    })


def test_machine_rows_replay_the_interpreter_for_every_four_bit_input() -> None:
    for bits in itertools.product("01", repeat=4):
        spec = _SUCC.with_input("".join(bits))
        trace = machine_trace(spec, 1000)
        assert "[h " in trace[-1]
        tas = gen_turing(spec)
        sim = Simulation(tas, rng_seed=11)
        out = sim.run(1000)
        assert out.kind is RunKind.TERMINAL
        got = [decode_row(sim.assembly, tas.tile_set, y, convention="turing")
               for y in range(len(trace))]
        assert got == trace
        with pytest.raises(RowIncomplete):
            decode_row(sim.assembly, tas.tile_set, len(trace), convention="turing")
        assert sim.diagnostics == []


# -- replay and reversibility ------------------------------------------------

def test_cli_replay_is_byte_identical_for_twenty_random_systems(tmp_path) -> None:
    for i in range(20):
        sys_path = tmp_path / f"s{i}.system"
        sys_path.write_text(serialize_system(random_growing_system(4000 + i)),
                            encoding="utf-8")
        artifacts = []
        for tag in ("a", "b"):
            out = tmp_path / f"{i}{tag}.asm"
            rep = tmp_path / f"{i}{tag}.txt"
            code = cli_main(["simulate", "--system", str(sys_path),
                             "--steps", "50", "--rng-seed", str(i),
                             "--out", str(out), "--report", str(rep)])
            assert code == 0
            artifacts.append((out.read_bytes(), rep.read_bytes()))
        assert artifacts[0] == artifacts[1]


def test_ten_thousand_steps_undo_back_to_the_starting_digest() -> None:
    deepest = 0
    for i in range(10):
        # Depth is counted in attachments, so force single mode; a parallel
        # wavefront would grow the assembly quadratically in the step count.
        tas = random_growing_system(500 + i, mode=StepMode.SINGLE)
        sim = Simulation(tas, rng_seed=9000 + i)
        before = sim.state_digest()
        first = sim.step()
        assert first.stepped and first.outcome is Outcome.PLACED
        taken = 1
        while taken < 10_000 and sim.step().stepped:
            taken += 1
        deepest = max(deepest, taken)
        for _ in range(taken):
            sim.step_back()
        assert sim.step_counter == 0
        assert sim.state_digest() == before
        assert sim.step().placements == first.placements
    assert deepest == 10_000


# -- frontier coherence ------------------------------------------------------

def test_frontier_coherence_holds_across_temperatures_and_modes() -> None:
    for tau in (1, 2, 3):
        for mode in (StepMode.SINGLE, StepMode.PARALLEL):
            parallel = mode is StepMode.PARALLEL
            # Sampled systems only guarantee their first attachment, so any
            # one may die early; accumulate progress across instances until
            # the combination has seen a thousand attachments.  A parallel
            # step is a whole wave, so progress counts placements there.
            progress = sub = 0
            while progress < 1000:
                sub += 1
                tas = random_growing_system(1000 * tau + 2 * sub + parallel,
                                            tau=tau, mode=mode)
                sim = Simulation(tas, rng_seed=sub)
                while progress < 1000:
                    r = sim.step()
                    if not r.stepped:
                        break
                    progress += len(r.placements) if parallel else 1
                    sim.check_frontier_coherence()
                sim.check_frontier_coherence()


# -- stability against exhaustive cuts ---------------------------------------

def _random_bonded_animal(rng: random.Random, dim: int, max_size: int = 8):
    """Seeded twin of the hypothesis strategy: drawn weights ARE the bond graph."""
    dirs = Direction.for_dim(dim)
    cells = [tuple([0] * dim)]
    seen = {cells[0]}
    size = rng.randint(1, max_size)
    while len(cells) < size:
        base = cells[rng.randrange(len(cells))]
        d = dirs[rng.randrange(len(dirs))]
        q = tuple(a + b for a, b in zip(base, d.offset(dim)))
        if q not in seen:
            seen.add(q)
            cells.append(q)
    pair_weight: dict[tuple, int] = {}
    for p in cells:
        for d in dirs:
            if d.sign < 0:
                continue
            q = tuple(a + b for a, b in zip(p, d.offset(dim)))
            if q in seen:
                pair_weight[(p, q, d)] = rng.randint(0, 4)
    types = []
    for i, p in enumerate(cells):
        glue_list = []
        for d in dirs:
            q = tuple(a + b for a, b in zip(p, d.offset(dim)))
            key = (p, q, d) if d.sign > 0 else (q, p, d.opposite)
            w = pair_weight.get(key, 0)
            glue_list.append(Glue(f"b{key[0]}{key[1]}", w) if w else Glue())
        types.append(TileType(name=f"p{i}", dim=dim, glues=tuple(glue_list)))
    tile_set = TileSet(dim, types)
    assembly = Assembly(dim, {p: Placement(i, 0) for i, p in enumerate(cells)})
    edges = [(p, q, w) for (p, q, _), w in pair_weight.items() if w >= 1]
    return tile_set, assembly, edges


def test_stability_matches_exhaustive_min_cuts_on_five_hundred_animals() -> None:
    rng = random.Random(174)
    checked = 0
    for case in range(500):
        dim = 3 if case % 5 == 0 else 2
        ts, assembly, edges = _random_bonded_animal(rng, dim)
        for tau in (1, 2, 3):
            expected = stable_by_enumeration(list(assembly.occupancy), edges, tau)
            assert is_tau_stable(assembly, ts, tau) == expected, (
                f"case {case} tau={tau}: want {expected}")
            checked += 1
    assert checked == 1500


# -- concentrations ----------------------------------------------------------

def test_three_to_one_concentration_shows_in_pick_frequency() -> None:
    ts = TileSet(2, [
        make_tile("feed", e=("g", 1)),
        make_tile("heavy", w=("g", 1), conc=3),
        make_tile("light", w=("g", 1), conc=1),
    ])
    tas = Tas(tile_set=ts, seed=assembly_from_names(ts, [((0, 0), "feed")]),
              temperature=1, concentrations_enabled=True)
    sim = Simulation(tas, report_nondeterminism=False)
    trials = 100_000
    heavy = 0
    for i in range(trials):
        sim.reset(rng_seed=i)
        r = sim.step()
        heavy += ts[r.placements[0][1]].name == "heavy"
    freq = heavy / trials
    assert 0.73 <= freq <= 0.77, f"heavy frequency {freq:.4f} not near 0.75"
    print(f"\nconcentrations: heavy picked {freq:.4f} of {trials} trials")


# -- over-strength reporting -------------------------------------------------

def _pocket(filler: TileType) -> Tas:
    """A U of strength-2 seed tiles exposing three strength-1 glues at (1, 1)."""
    ts = TileSet(2, [
        make_tile("s0", e=("k", 2), n=("m", 2)),
        make_tile("s1", w=("k", 2), e=("k2", 2), n=("b", 1)),
        make_tile("s2", w=("k2", 2), n=("m2", 2)),
        make_tile("w0", s=("m", 2), e=("d", 1)),
        make_tile("w2", s=("m2", 2), w=("e", 1)),
        filler,
    ])
    seed = assembly_from_names(ts, [
        ((0, 0), "s0"), ((1, 0), "s1"), ((2, 0), "s2"),
        ((0, 1), "w0"), ((2, 1), "w2"),
    ])
    return Tas(tile_set=ts, seed=seed, temperature=2)


def test_three_glue_pocket_reports_exactly_one_over_strength() -> None:
    greedy = Simulation(_pocket(make_tile("fill", s=("b", 1), w=("d", 1), e=("e", 1))),
                        rng_seed=0)
    out = greedy.run(10)
    assert out.kind is RunKind.TERMINAL and out.steps_taken == 1
    over = [d for d in greedy.diagnostics
            if d.kind is DiagnosticKind.OVER_STRENGTH]
    assert [(d.step, d.pos, d.strength) for d in over] == [(1, (1, 1), 3)]

    exact = Simulation(_pocket(make_tile("fill", s=("b", 1), w=("d", 1))),
                       rng_seed=0)
    out = exact.run(10)
    assert out.kind is RunKind.TERMINAL and out.steps_taken == 1
    assert all(d.kind is not DiagnosticKind.OVER_STRENGTH
               for d in exact.diagnostics)


# -- parallel wavefront discipline -------------------------------------------

def test_parallel_wave_places_the_plus_and_corners_wait_their_turn() -> None:
    # Per-direction hub colors keep the hub from fitting next to itself.
    ts = TileSet(2, [
        make_tile("hub", n=("pn", 1), e=("pe", 1), s=("ps", 1), w=("pw", 1)),
        make_tile("north", s=("pn", 1)),
        make_tile("south", n=("ps", 1)),
        make_tile("east", w=("pe", 1), n=("en", 1), s=("es", 1)),
        make_tile("west", e=("pw", 1), n=("wn", 1), s=("ws", 1)),
        make_tile("c_ne", s=("en", 1)),
        make_tile("c_se", n=("es", 1)),
        make_tile("c_nw", s=("wn", 1)),
        make_tile("c_sw", n=("ws", 1)),
    ])
    tas = Tas(tile_set=ts, seed=assembly_from_names(ts, [((0, 0), "hub")]),
              temperature=1, step_mode=StepMode.PARALLEL)
    sim = Simulation(tas, rng_seed=5)

    first = sim.step()
    corners = {(-1, -1), (-1, 1), (1, -1), (1, 1)}
    assert sorted(p for p, _ in first.placements) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    # The arms expose the corner glues mid-wave, but a wave only fills
    # positions eligible in its opening snapshot.
    assert not corners & {p for p, _ in first.placements}
    assert set(sim.frontier_positions) == corners

    second = sim.step()
    assert {p: ts[i].name for p, i in second.placements} == {
        (1, 1): "c_ne", (1, -1): "c_se", (-1, 1): "c_nw", (-1, -1): "c_sw"}
    assert not sim.step().stepped
    assert sim.diagnostics == []


# -- format round-trips ------------------------------------------------------

_COLORS = ("plain", "two words", "  padded  ", 'quo"te', "back\\slash", "g1", "g2")
_LABELS = ("", "A", "1c", "x y")


def _random_tile_set(rng: random.Random, dim: int | None = None) -> TileSet:
    dim = dim or rng.choice((2, 3))
    dirs = Direction.for_dim(dim)
    types = []
    for i in range(rng.randint(1, 6)):
        glues = tuple(
            Glue(rng.choice(_COLORS), rng.randint(1, 3))
            if rng.random() < 0.6 else Glue()
            for _ in dirs)
        name = f"t {i}" if rng.random() < 0.15 else f"t{i}"
        types.append(TileType(
            name=name, dim=dim, glues=glues, label=rng.choice(_LABELS),
            color=(rng.randrange(256), rng.randrange(256), rng.randrange(256)),
            concentration=Fraction(rng.randint(1, 40), rng.randint(1, 8))))
    return TileSet(dim, types)


def _random_assembly(rng: random.Random, ts: TileSet) -> Assembly:
    occupancy: dict[tuple, Placement] = {}
    target = rng.randint(1, 12)
    while len(occupancy) < target:
        pos = tuple(rng.randint(-40, 40) for _ in range(ts.dim))
        occupancy[pos] = Placement(rng.randrange(len(ts)), 0)
    return Assembly(ts.dim, occupancy)


def test_formats_round_trip_a_thousand_random_documents_per_kind() -> None:
    rng = random.Random(2861)
    for _ in range(1000):
        ts = _random_tile_set(rng)
        text = serialize_tileset(ts)
        assert parse_tileset(text) == ts
        assert serialize_tileset(parse_tileset(text)) == text
    for _ in range(1000):
        ts = _random_tile_set(rng)
        assembly = _random_assembly(rng, ts)
        text = serialize_assembly(assembly, ts)
        assert parse_assembly(text, ts) == assembly
        assert serialize_assembly(parse_assembly(text, ts), ts) == text
    for _ in range(1000):
        ts = _random_tile_set(rng)
        tas = Tas(tile_set=ts, seed=_random_assembly(rng, ts),
                  temperature=rng.randint(1, 3),
                  step_mode=rng.choice((StepMode.SINGLE, StepMode.PARALLEL)),
                  concentrations_enabled=rng.random() < 0.5)
        text = serialize_system(tas)
        assert parse_system(text) == tas
        assert serialize_system(parse_system(text)) == text


def test_format_errors_come_back_with_line_numbers() -> None:
    cases = [
        (lambda t: parse_tileset(t),
         "tileset v1 dim=2\ntile a\nglue n 0 x\nend\n", 3),
        (lambda t: parse_assembly(t, TileSet(2, [make_tile("a")])),
         "assembly v1 dim=2\nat 0 zz a\n", 2),
        (lambda t: parse_system(t),
         "system v1\ntemperature 2\ntileset {\ntileset v1 dim=2\n"
         "tile a\nglue n 0 x\nend\n}\n", 6),
    ]
    for parse, text, line in cases:
        with pytest.raises(FormatError) as err:
            parse(text)
        assert err.value.line == line
