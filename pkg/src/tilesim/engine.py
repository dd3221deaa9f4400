"""Sparse-lattice assembly engine with reversible, seeded stepping.

One Simulation object owns the whole run state: the growing assembly,
the attachable frontier, dead and masked locations, a step history that
can be unwound exactly, and a PCG32 generator whose pre-step state is
captured in every history entry so undo also rewinds randomness.

Frontier bookkeeping is incremental. For every empty position adjacent
to at least one tile we track the total glue strength presented toward
it by occupied neighbors (its exposure). A position belongs to the
relaxed frontier when exposure reaches the temperature, whether or not
any type in the set actually fits there. Locations examined and found
unfillable are parked in `dead` (drawn red by clients) and come back
whenever a new neighbor attaches beside them. `frontier` always holds
exactly the relaxed frontier minus dead minus masked-off positions, and
check_frontier_coherence() re-derives everything from scratch to prove
it.
"""

from __future__ import annotations

import hashlib
import secrets
from bisect import bisect_left as _bisect_left, insort as _insort
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from math import gcd

from . import analysis
from .model import (
    Assembly, Direction, Placement, Pos, StepMode, Tas, TileSet, TileType,
    incident_strength, neighbor,
)
from .prng import Pcg32


class NothingToUndo(RuntimeError):
    pass


class SeedEditError(RuntimeError):
    pass


class FrontierIncoherent(RuntimeError):
    pass


class DiagnosticKind(Enum):
    NONDETERMINISM = "nondeterminism"
    OVER_STRENGTH = "over-strength"
    DEAD_FRONTIER = "dead-frontier"
    UNSTABLE_SEED = "unstable-seed"


@dataclass(frozen=True)
class Diagnostic:
    kind: DiagnosticKind
    step: int
    pos: Pos | None = None
    type_name: str | None = None
    candidates: tuple[str, ...] = ()
    strength: int = 0


class Outcome(Enum):
    PLACED = "placed"
    NO_ELIGIBLE = "no-eligible-frontier"
    TERMINAL = "terminal"
    UNDONE = "undone"


@dataclass
class StepResult:
    outcome: Outcome
    placements: list[tuple[Pos, int]] = field(default_factory=list)
    removed: list[tuple[Pos, int]] = field(default_factory=list)
    new_diagnostics: list[Diagnostic] = field(default_factory=list)
    stepped: bool = False


@dataclass
class HistoryEntry:
    """Everything needed to undo one forward step exactly."""

    step_index: int
    placements: list[tuple[Pos, int]]
    frontier_added: tuple[Pos, ...]
    frontier_removed: tuple[Pos, ...]
    dead_added: tuple[Pos, ...]
    dead_removed: tuple[Pos, ...]
    rng_state_before: int
    diagnostics_emitted: int


class BreakpointKind(Enum):
    STEP_COUNT = "step"
    LOCATION = "location"
    TYPE = "type"


@dataclass(frozen=True)
class Breakpoint:
    kind: BreakpointKind
    value: object

    @classmethod
    def at_step(cls, n: int) -> "Breakpoint":
        return cls(BreakpointKind.STEP_COUNT, int(n))

    @classmethod
    def at_location(cls, pos) -> "Breakpoint":
        return cls(BreakpointKind.LOCATION, tuple(pos))

    @classmethod
    def at_type(cls, name: str) -> "Breakpoint":
        return cls(BreakpointKind.TYPE, name)

    def matches(self, result: StepResult, step_counter: int, tile_set: TileSet) -> bool:
        if self.kind is BreakpointKind.STEP_COUNT:
            return step_counter >= self.value
        if self.kind is BreakpointKind.LOCATION:
            return any(p == self.value for p, _ in result.placements)
        return any(tile_set[i].name == self.value for _, i in result.placements)

    def describe(self) -> str:
        if self.kind is BreakpointKind.LOCATION:
            return "location=" + ",".join(str(c) for c in self.value)
        return f"{self.kind.value}={self.value}"


class RunKind(Enum):
    TERMINAL = "terminal"
    BUDGET = "budget"
    BREAKPOINT = "breakpoint"
    HALTED = "halted"


@dataclass
class RunOutcome:
    kind: RunKind
    steps_taken: int
    breakpoint: Breakpoint | None = None
    reason: str = ""


class _SortedSet:
    """Sorted positions with O(log n) membership and nth-element access.

    Selection draws the k-th position in lexicographic order, so the
    outcome of a random draw depends only on the set's contents, never
    on insertion history. That is what makes undo + redo reproduce the
    original step exactly.
    """

    __slots__ = ("_list", "_set")

    def __init__(self) -> None:
        self._list: list[Pos] = []
        self._set: set[Pos] = set()

    def add(self, p: Pos) -> None:
        if p not in self._set:
            self._set.add(p)
            _insort(self._list, p)

    def discard(self, p: Pos) -> None:
        if p in self._set:
            self._set.remove(p)
            i = _bisect_left(self._list, p)
            self._list.pop(i)

    def nth(self, i: int) -> Pos:
        return self._list[i]

    def __contains__(self, p: Pos) -> bool:
        return p in self._set

    def __len__(self) -> int:
        return len(self._list)

    def __iter__(self):
        return iter(self._list)

    def as_tuple(self) -> tuple[Pos, ...]:
        return tuple(self._list)


class _Recorder:
    """Captures pre-step membership of every touched position plus RNG state."""

    __slots__ = ("sim", "prior", "rng_before")

    def __init__(self, sim: "Simulation") -> None:
        self.sim = sim
        self.prior: dict[Pos, tuple[bool, bool]] = {}
        self.rng_before = sim.rng.state

    def touch(self, p: Pos) -> None:
        if p not in self.prior:
            self.prior[p] = (p in self.sim._frontier, p in self.sim.dead)

    def entry(self, step_index: int, placements: list[tuple[Pos, int]],
              diagnostics_emitted: int) -> HistoryEntry:
        fa, fr, da, dr = [], [], [], []
        sim = self.sim
        for p, (was_front, was_dead) in self.prior.items():
            now_front = p in sim._frontier
            now_dead = p in sim.dead
            if now_front and not was_front:
                fa.append(p)
            if was_front and not now_front:
                fr.append(p)
            if now_dead and not was_dead:
                da.append(p)
            if was_dead and not now_dead:
                dr.append(p)
        return HistoryEntry(step_index, placements,
                            tuple(sorted(fa)), tuple(sorted(fr)),
                            tuple(sorted(da)), tuple(sorted(dr)),
                            self.rng_before, diagnostics_emitted)


class Simulation:
    """A running tile system. See the module docstring for the state model."""

    def __init__(self, tas: Tas, rng_seed: int | None = None, *,
                 history_limit: int | None = None,
                 report_nondeterminism: bool = True,
                 report_overstrength: bool = True) -> None:
        self.tas = tas
        self.dim = tas.tile_set.dim
        self.tau = tas.temperature
        self.history_limit = history_limit
        self.report_nondeterminism = report_nondeterminism
        self.report_overstrength = report_overstrength
        self._dirs = [(d, d.offset(self.dim)) for d in Direction.for_dim(self.dim)]
        if self.dim == 2:
            self._add = lambda p, o: (p[0] + o[0], p[1] + o[1])
        else:
            self._add = lambda p, o: (p[0] + o[0], p[1] + o[1], p[2] + o[2])
        self._build_type_tables()
        self.reset(rng_seed)

    # -- setup ---------------------------------------------------------------

    def _build_type_tables(self) -> None:
        ts = self.tas.tile_set
        dirs = Direction.for_dim(self.dim)
        # (side, color, strength) -> indices of types carrying that glue on side
        self._match: dict[tuple[Direction, str, int], list[int]] = {}
        self._own: list[dict[Direction, int]] = []
        self._facing: list[dict[Direction, tuple[str, int]]] = []
        for i, t in enumerate(ts.types):
            own: dict[Direction, int] = {}
            facing: dict[Direction, tuple[str, int]] = {}
            for d in dirs:
                g = t.glue(d)
                own[d] = g.strength
                if g.strength >= 1:
                    self._match.setdefault((d, g.color, g.strength), []).append(i)
                go = t.glue(d.opposite)
                facing[d] = (go.color, go.strength)
            self._own.append(own)
            self._facing.append(facing)
        denom_lcm = 1
        for t in ts.types:
            denom_lcm = _lcm(denom_lcm, t.concentration.denominator)
        self._weights = [int(t.concentration * denom_lcm) for t in ts.types]

    def reset(self, rng_seed: int | None = None) -> None:
        """Drop everything back to the seed configuration.

        Every reset takes a seed for the generator; passing None draws a
        fresh one, which stays retrievable as `rng_seed`. History,
        diagnostics, dead locations and masks are all cleared.
        """
        if rng_seed is None:
            rng_seed = secrets.randbits(64)
        self.rng_seed = rng_seed & ((1 << 64) - 1)
        self.rng = Pcg32(self.rng_seed)
        ts = self.tas.tile_set
        self.assembly = Assembly(self.dim, dict(self.tas.seed.occupancy))
        self.step_counter = 0
        self.history: deque[HistoryEntry] = deque(maxlen=self.history_limit)
        self.diagnostics: list[Diagnostic] = []
        self.dead: set[Pos] = set()
        self.mask_off: set[Pos] = set()
        self.exposure: dict[Pos, int] = {}
        self._frontier = _SortedSet()
        occ = self.assembly.occupancy
        for p, pl in occ.items():
            own = self._own[pl.type_index]
            for d, off in self._dirs:
                q = self._add(p, off)
                if q not in occ:
                    self.exposure[q] = self.exposure.get(q, 0) + own[d]
        for q, e in self.exposure.items():
            if e >= self.tau:
                self._frontier.add(q)
        if not analysis.is_tau_stable(self.assembly, ts, self.tau):
            self.diagnostics.append(Diagnostic(DiagnosticKind.UNSTABLE_SEED, step=0))

    # -- views ---------------------------------------------------------------

    @property
    def tile_set(self) -> TileSet:
        return self.tas.tile_set

    def type_name(self, i: int) -> str:
        return self.tas.tile_set[i].name

    @property
    def frontier_positions(self) -> tuple[Pos, ...]:
        return self._frontier.as_tuple()

    @property
    def dead_positions(self) -> tuple[Pos, ...]:
        return tuple(sorted(self.dead))

    @property
    def masked_positions(self) -> tuple[Pos, ...]:
        return tuple(sorted(self.mask_off))

    def relaxed_frontier(self) -> set[Pos]:
        """All attachable-by-exposure positions, ignoring dead and mask status."""
        return {p for p, e in self.exposure.items() if e >= self.tau}

    def masked_frontier(self) -> set[Pos]:
        occ = self.assembly.occupancy
        return {p for p in self.mask_off
                if p not in occ and self.exposure.get(p, 0) >= self.tau}

    def fitting_indices(self, p: Pos) -> dict[int, int]:
        """Type index -> bound strength for every type that fits at p."""
        occ = self.assembly.occupancy
        acc: dict[int, int] = {}
        for d, off in self._dirs:
            pl = occ.get(self._add(p, off))
            if pl is None:
                continue
            color, strength = self._facing[pl.type_index][d]
            if strength < 1:
                continue
            hits = self._match.get((d, color, strength))
            if hits:
                for i in hits:
                    acc[i] = acc.get(i, 0) + strength
        tau = self.tau
        return {i: s for i, s in acc.items() if s >= tau}

    def surfaced_diagnostics(self) -> list[Diagnostic]:
        """Diagnostics filtered by the reporting toggles; all are always recorded."""
        out = []
        for d in self.diagnostics:
            if d.kind is DiagnosticKind.NONDETERMINISM and not self.report_nondeterminism:
                continue
            if d.kind is DiagnosticKind.OVER_STRENGTH and not self.report_overstrength:
                continue
            out.append(d)
        return out

    # -- stepping ------------------------------------------------------------

    def step(self) -> StepResult:
        if self.tas.step_mode is StepMode.PARALLEL:
            return self.step_parallel()
        return self.step_single()

    def step_single(self) -> StepResult:
        """Attach one tile at a uniformly random eligible frontier location.

        Locations drawn but found unfillable are marked dead and redrawn
        within the same step; the step only counts once something is
        placed or the eligible set runs out.
        """
        rec = _Recorder(self)
        diag_start = len(self.diagnostics)
        placements: list[tuple[Pos, int]] = []
        while len(self._frontier) > 0:
            p = self._frontier.nth(self.rng.randrange(len(self._frontier)))
            fits = self.fitting_indices(p)
            if not fits:
                self._mark_dead(p, rec)
                continue
            placements.append((p, self._attach(p, fits, rec)))
            break
        return self._finish_step(rec, placements, diag_start)

    def step_parallel(self) -> StepResult:
        """Fill every location eligible at the start of the step.

        The snapshot is processed in lexicographic order; locations that
        first become eligible during the step wait for the next one.
        Fits are evaluated against the assembly as it stands when each
        location's turn comes, so randomness only enters through type
        choice.
        """
        rec = _Recorder(self)
        diag_start = len(self.diagnostics)
        placements: list[tuple[Pos, int]] = []
        for p in self._frontier.as_tuple():
            fits = self.fitting_indices(p)
            if not fits:
                self._mark_dead(p, rec)
                continue
            placements.append((p, self._attach(p, fits, rec)))
        return self._finish_step(rec, placements, diag_start)

    def _attach(self, p: Pos, fits: dict[int, int], rec: _Recorder) -> int:
        idxs = sorted(fits)
        if len(idxs) > 1:
            self._diag(DiagnosticKind.NONDETERMINISM, pos=p,
                       candidates=tuple(self.type_name(i) for i in idxs))
        if len(idxs) == 1:
            ti = idxs[0]
        elif self.tas.concentrations_enabled:
            ti = idxs[self.rng.weighted_index([self._weights[i] for i in idxs])]
        else:
            ti = idxs[self.rng.randrange(len(idxs))]
        self._place(p, ti, rec)
        if fits[ti] > self.tau:
            self._diag(DiagnosticKind.OVER_STRENGTH, pos=p,
                       type_name=self.type_name(ti), strength=fits[ti])
        return ti

    def _diag(self, kind: DiagnosticKind, **kw) -> None:
        self.diagnostics.append(Diagnostic(kind, step=self.step_counter + 1, **kw))

    def _mark_dead(self, p: Pos, rec: _Recorder) -> None:
        rec.touch(p)
        self._frontier.discard(p)
        self.dead.add(p)
        self._diag(DiagnosticKind.DEAD_FRONTIER, pos=p)

    def _place(self, p: Pos, ti: int, rec: _Recorder) -> None:
        rec.touch(p)
        self._frontier.discard(p)
        del self.exposure[p]
        occ = self.assembly.occupancy
        occ[p] = Placement(ti, self.step_counter + 1)
        own = self._own[ti]
        for d, off in self._dirs:
            q = self._add(p, off)
            if q in occ:
                continue
            e = self.exposure.get(q, 0) + own[d]
            self.exposure[q] = e
            if q in self.dead:
                # any new neighbor revives a dead location for re-examination
                rec.touch(q)
                self.dead.discard(q)
                if q not in self.mask_off:
                    self._frontier.add(q)
            elif e >= self.tau and q not in self.mask_off and q not in self._frontier:
                rec.touch(q)
                self._frontier.add(q)

    def _finish_step(self, rec: _Recorder, placements: list[tuple[Pos, int]],
                     diag_start: int) -> StepResult:
        if not rec.prior:
            # frontier was empty on entry; nothing moved, nothing to record
            return StepResult(self._exhausted_outcome(), stepped=False)
        self.step_counter += 1
        self.history.append(rec.entry(self.step_counter, placements,
                                      len(self.diagnostics) - diag_start))
        outcome = Outcome.PLACED if placements else self._exhausted_outcome()
        return StepResult(outcome, placements=placements,
                          new_diagnostics=self.diagnostics[diag_start:], stepped=True)

    def _exhausted_outcome(self) -> Outcome:
        # Dead locations stay dead, but a masked spot that still fits a
        # tile means the system is paused rather than finished.
        occ = self.assembly.occupancy
        for p in self.mask_off:
            if p in self.dead or p in occ:
                continue
            if self.exposure.get(p, 0) >= self.tau and self.fitting_indices(p):
                return Outcome.NO_ELIGIBLE
        return Outcome.TERMINAL

    def step_back(self) -> StepResult:
        """Undo the most recent step: placements, frontier, diagnostics, RNG."""
        if not self.history:
            raise NothingToUndo("no steps to undo")
        entry = self.history.pop()
        occ = self.assembly.occupancy
        for p, ti in reversed(entry.placements):
            del occ[p]
            own = self._own[ti]
            for d, off in self._dirs:
                q = self._add(p, off)
                if q in occ:
                    continue
                e = self.exposure.get(q, 0) - own[d]
                if e == 0 and not self._has_occupied_neighbor(q):
                    self.exposure.pop(q, None)
                else:
                    self.exposure[q] = e
            e = 0
            adjacent = False
            for d, off in self._dirs:
                pl = occ.get(self._add(p, off))
                if pl is not None:
                    adjacent = True
                    e += self._facing[pl.type_index][d][1]
            if adjacent:
                self.exposure[p] = e
        for p in entry.frontier_added:
            self._frontier.discard(p)
        for p in entry.frontier_removed:
            self._frontier.add(p)
        self.dead.difference_update(entry.dead_added)
        self.dead.update(entry.dead_removed)
        if entry.diagnostics_emitted:
            del self.diagnostics[-entry.diagnostics_emitted:]
        self.rng.state = entry.rng_state_before
        self.step_counter -= 1
        return StepResult(Outcome.UNDONE, removed=list(entry.placements))

    def _has_occupied_neighbor(self, q: Pos) -> bool:
        occ = self.assembly.occupancy
        return any(self._add(q, off) in occ for _, off in self._dirs)

    def run(self, max_steps: int, breakpoints: tuple[Breakpoint, ...] = ()) -> RunOutcome:
        """Step repeatedly until terminal, a breakpoint, a stall, or the budget."""
        if max_steps < 0:
            raise ValueError("budget must be nonnegative")
        steps = 0
        while steps < max_steps:
            r = self.step()
            if r.stepped:
                steps += 1
                for bp in breakpoints:
                    if bp.matches(r, self.step_counter, self.tas.tile_set):
                        return RunOutcome(RunKind.BREAKPOINT, steps, breakpoint=bp)
            if r.outcome is Outcome.TERMINAL:
                return RunOutcome(RunKind.TERMINAL, steps)
            if r.outcome is Outcome.NO_ELIGIBLE:
                return RunOutcome(RunKind.HALTED, steps,
                                  reason="masked locations still admit tiles")
        return RunOutcome(RunKind.BUDGET, steps)

    # -- masks and seed editing ----------------------------------------------

    def set_mask(self, region, off: bool = True) -> None:
        """Exclude (off=True) or readmit (off=False) positions from growth.

        Masking is a user tool, not a simulation step: it writes no
        history and survives until reset.
        """
        if off:
            for p in region:
                p = tuple(p)
                self.mask_off.add(p)
                self._frontier.discard(p)
        else:
            occ = self.assembly.occupancy
            for p in region:
                p = tuple(p)
                self.mask_off.discard(p)
                if (p not in occ and p not in self.dead
                        and self.exposure.get(p, 0) >= self.tau):
                    self._frontier.add(p)

    def edit_seed_place(self, pos: Pos, name: str) -> None:
        """Add a tile to the seed. Only legal before any steps exist."""
        self._require_editable()
        pos = tuple(pos)
        if pos in self.tas.seed.occupancy:
            raise SeedEditError(f"seed position {pos} already occupied")
        idx = self.tas.tile_set.index_of(name)
        self.tas.seed.occupancy[pos] = Placement(idx, 0)
        self.tas.seed.validate(self.tas.tile_set)
        self._reseed_in_place()

    def edit_seed_remove(self, pos: Pos) -> None:
        self._require_editable()
        pos = tuple(pos)
        if pos not in self.tas.seed.occupancy:
            raise SeedEditError(f"no seed tile at {pos}")
        if len(self.tas.seed.occupancy) == 1:
            raise SeedEditError("cannot remove the last seed tile")
        del self.tas.seed.occupancy[pos]
        self._reseed_in_place()

    def _require_editable(self) -> None:
        if self.step_counter != 0 or self.history:
            raise SeedEditError("seed edits require step 0; reset the simulation first")

    def _reseed_in_place(self) -> None:
        mask = set(self.mask_off)
        self.reset(self.rng_seed)
        self.set_mask(mask, off=True)

    # -- verification and digests --------------------------------------------

    def check_frontier_coherence(self) -> None:
        """Re-derive the frontier from scratch and compare with the live sets."""
        fresh = compute_frontier(self.assembly, self.tas.tile_set, self.tau)
        maintained = self.relaxed_frontier()
        if maintained != fresh:
            raise FrontierIncoherent(
                f"exposure map drifted: {sorted(maintained ^ fresh)[:5]} ...")
        active = set(self._frontier.as_tuple())
        expected_active = fresh - self.dead - self.mask_off
        if active != expected_active:
            raise FrontierIncoherent(
                f"frontier set drifted: {sorted(active ^ expected_active)[:5]} ...")
        if not self.dead <= fresh:
            raise FrontierIncoherent("dead locations outside the relaxed frontier")
        occ = self.assembly.occupancy
        if any(p in occ for p in active) or any(p in occ for p in self.dead):
            raise FrontierIncoherent("occupied position marked frontier or dead")

    def state_digest(self) -> str:
        """Canonical digest of the complete observable state."""
        occ = self.assembly.occupancy
        payload = (
            self.dim, self.tau, self.tas.step_mode.value,
            self.tas.concentrations_enabled,
            tuple(sorted((p, pl.type_index, pl.attached_at_step)
                         for p, pl in occ.items())),
            self._frontier.as_tuple(),
            tuple(sorted(self.dead)),
            tuple(sorted(self.mask_off)),
            self.step_counter,
            self.rng.state,
            tuple((d.kind.value, d.step, d.pos, d.type_name, d.candidates, d.strength)
                  for d in self.diagnostics),
            len(self.history),
        )
        return hashlib.sha256(repr(payload).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# reference implementations, kept deliberately naive

def compute_frontier(assembly: Assembly, tile_set: TileSet, tau: int) -> set[Pos]:
    """From-scratch relaxed frontier: empty positions whose neighbors present
    glue strength summing to at least tau, fillable or not."""
    occ = assembly.occupancy
    exposure: dict[Pos, int] = {}
    for p, pl in occ.items():
        t = tile_set[pl.type_index]
        for d in Direction.for_dim(assembly.dim):
            q = neighbor(p, d)
            if q not in occ:
                exposure[q] = exposure.get(q, 0) + t.glue(d).strength
    return {q for q, e in exposure.items() if e >= tau}


def fitting_types(assembly: Assembly, tile_set: TileSet, pos: Pos, tau: int) -> list[TileType]:
    """Types that can attach at pos with total bond strength >= tau, set order."""
    if pos in assembly.occupancy:
        raise ValueError(f"position {pos} is occupied")
    return [t for t in tile_set
            if incident_strength(assembly, tile_set, pos, t) >= tau]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
