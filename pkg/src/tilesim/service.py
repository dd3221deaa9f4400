"""HTTP session service driving the browser workbench.

Each session pairs one live Simulation with an independent editor copy
of its tile set. Edits accumulate in the editor copy and touch the
simulation only on explicit commit, which swaps the set in by name and
resets the run to the seed. All mutating calls on a session are
serialized through a per-session lock, and every mutation appends to an
ordered event log that clients replay over the `/events` stream; a
snapshot (region query) plus all later events reconstructs the server
state exactly. The `epoch` counter bumps whenever the assembly history
is invalidated wholesale (reset, system load, tileset commit), telling
clients to drop their cache and resnapshot.

Sessions live in memory only and expire after an idle timeout; the text
formats are the durable layer.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from . import analysis
from .engine import (
    Breakpoint, NothingToUndo, Outcome, RunKind, SeedEditError, Simulation,
    StepResult,
)
from .formats import FormatError, parse_system, serialize_system
from .model import (
    Assembly, Direction, Glue, Placement, StepMode, Tas, TileSet, TileType,
    rotate_tile,
)

API = "/api/v1"


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str) -> None:
        self.status = status
        self.code = code
        self.detail = detail
        super().__init__(detail)


@dataclass
class _Session:
    id: str
    sim: Simulation
    editor: list[TileType]
    epoch: int = 0
    events: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_active: float = field(default_factory=time.monotonic)
    dirty: bool = False

    def log(self, kind: str, **payload) -> None:
        payload["kind"] = kind
        payload["id"] = len(self.events)
        self.events.append(payload)


def create_app(idle_ttl: float = 3600.0, region_cap: int = 10**6) -> FastAPI:
    app = FastAPI(title="tilesim session service")
    # The browser client is usually served from a different static origin.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()

    # -- plumbing ------------------------------------------------------------

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.status,
                            content={"error": exc.code, "detail": exc.detail})

    def sweep() -> None:
        now = time.monotonic()
        with registry_lock:
            for sid in [s for s, ses in sessions.items()
                        if now - ses.last_active > idle_ttl]:
                del sessions[sid]

    def get_session(sid: str) -> _Session:
        sweep()
        ses = sessions.get(sid)
        if ses is None:
            raise ApiError(404, "unknown-session", f"no session {sid!r}")
        ses.last_active = time.monotonic()
        return ses

    async def body_of(request: Request) -> dict:
        try:
            data = await request.json()
        except json.JSONDecodeError:
            raise ApiError(400, "bad-json", "request body is not valid JSON") from None
        if not isinstance(data, dict):
            raise ApiError(400, "bad-json", "request body must be a JSON object")
        return data

    # -- state snapshots feeding events and responses ------------------------

    def set_snapshot(sim: Simulation):
        return (set(sim.frontier_positions), set(sim.dead), set(sim.mask_off))

    def log_set_deltas(ses: _Session, before, after) -> None:
        (f0, d0, m0), (f1, d1, m1) = before, after
        if (f0, d0, m0) == (f1, d1, m1):
            return
        ses.log("frontier-delta",
                from_step=ses.sim.step_counter, to_step=ses.sim.step_counter,
                added=sorted(f1 - f0), removed=sorted(f0 - f1),
                dead_added=sorted(d1 - d0), dead_removed=sorted(d0 - d1),
                masked_added=sorted(m1 - m0), masked_removed=sorted(m0 - m1))

    def cell_json(ses: _Session, pos, pl: Placement) -> dict:
        t = ses.sim.tile_set[pl.type_index]
        return {"pos": list(pos), "name": t.name, "label": t.label,
                "color": list(t.color), "step": pl.attached_at_step}

    def diag_json(d) -> dict:
        return {"kind": d.kind.value, "step": d.step,
                "pos": list(d.pos) if d.pos is not None else None,
                "type": d.type_name, "candidates": list(d.candidates),
                "strength": d.strength}

    def log_step_result(ses: _Session, r: StepResult) -> None:
        sim = ses.sim
        if r.placements:
            ses.log("placed", step=sim.step_counter,
                    cells=[cell_json(ses, p, sim.assembly.occupancy[p])
                           for p, _ in r.placements])
        if r.removed:
            ses.log("removed", step=sim.step_counter,
                    cells=[{"pos": list(p)} for p, _ in r.removed])
        for d in r.new_diagnostics:
            ses.log("diagnostic", step=d.step, diagnostic=diag_json(d))

    def status_json(ses: _Session) -> dict:
        sim = ses.sim
        return {
            "session": ses.id,
            "epoch": ses.epoch,
            "step_counter": sim.step_counter,
            "tiles": len(sim.assembly),
            "seed_tiles": len(sim.tas.seed),
            "frontier": len(sim.frontier_positions),
            "dead": len(sim.dead),
            "masked": len(sim.mask_off),
            "temperature": sim.tau,
            "mode": sim.tas.step_mode.value,
            "concentrations": sim.tas.concentrations_enabled,
            "dim": sim.dim,
            "rng_seed": sim.rng_seed,
            "status": analysis.terminal_status(sim).value,
            "diagnostics": len(sim.surfaced_diagnostics()),
            "history": len(sim.history),
            "dirty_tileset": ses.dirty,
            "digest": sim.state_digest(),
        }

    def step_result_json(ses: _Session, r: StepResult) -> dict:
        sim = ses.sim
        return {
            "outcome": r.outcome.value,
            "stepped": r.stepped,
            "placements": [cell_json(ses, p, sim.assembly.occupancy[p])
                           for p, _ in r.placements],
            "removed": [{"pos": list(p)} for p, _ in r.removed],
            "diagnostics": [diag_json(d) for d in r.new_diagnostics],
            "status": status_json(ses),
        }

    # -- tile JSON <-> model -------------------------------------------------

    def tile_json(t: TileType) -> dict:
        glues = {}
        for d in Direction.for_dim(t.dim):
            g = t.glue(d)
            if g.strength >= 1:
                glues[d.letter] = {"color": g.color, "strength": g.strength}
        return {"name": t.name, "label": t.label, "color": list(t.color),
                "conc": str(t.concentration), "glues": glues, "dim": t.dim}

    def tile_from_json(data: dict, dim: int) -> TileType:
        if not isinstance(data, dict) or not isinstance(data.get("name"), str):
            raise ApiError(400, "bad-tile", "tile needs at least a string name")
        glues = {}
        for letter, g in (data.get("glues") or {}).items():
            try:
                d = Direction.from_letter(letter, dim)
                glues[d] = Glue(str(g["color"]), int(g["strength"]))
            except (ValueError, KeyError, TypeError) as exc:
                raise ApiError(400, "bad-tile",
                               f"glue {letter!r}: {exc}") from None
        conc = data.get("conc", "1")
        try:
            conc = Fraction(conc)
        except (ValueError, ZeroDivisionError) as exc:
            raise ApiError(400, "bad-tile", f"conc: {exc}") from None
        color = data.get("color", [204, 204, 204])
        try:
            return TileType(
                name=data["name"], dim=dim,
                glues=tuple(glues.get(d, Glue()) for d in Direction.for_dim(dim)),
                label=str(data.get("label", "")),
                color=tuple(int(c) for c in color),
                concentration=conc)
        except (ValueError, TypeError) as exc:
            raise ApiError(400, "bad-tile", str(exc)) from None

    # -- sessions ------------------------------------------------------------

    def build_session(doc: str, rng_seed) -> _Session:
        try:
            tas = parse_system(doc)
        except FormatError as exc:
            raise ApiError(400, "bad-system",
                           f"line {exc.line}: {exc.reason}") from None
        if rng_seed is not None and not isinstance(rng_seed, int):
            raise ApiError(400, "bad-seed", "rng_seed must be an integer")
        sid = secrets.token_urlsafe(12)
        sim = Simulation(tas, rng_seed=rng_seed)
        return _Session(id=sid, sim=sim, editor=list(tas.tile_set.types))

    @app.post(API + "/sessions", status_code=201)
    async def create_session(request: Request):
        data = await body_of(request)
        doc = data.get("system")
        if not isinstance(doc, str):
            raise ApiError(400, "bad-system", "body needs a 'system' document string")
        ses = build_session(doc, data.get("rng_seed"))
        with registry_lock:
            sessions[ses.id] = ses
        sweep()
        return status_json(ses)

    @app.get(API + "/sessions/{sid}")
    def session_status(sid: str):
        ses = get_session(sid)
        with ses.lock:
            return status_json(ses)

    @app.delete(API + "/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        get_session(sid)
        with registry_lock:
            sessions.pop(sid, None)
        return Response(status_code=204)

    @app.put(API + "/sessions/{sid}/system")
    async def load_system(sid: str, request: Request):
        ses = get_session(sid)
        data = await body_of(request)
        doc = data.get("system")
        if not isinstance(doc, str):
            raise ApiError(400, "bad-system", "body needs a 'system' document string")
        try:
            tas = parse_system(doc)
        except FormatError as exc:
            raise ApiError(400, "bad-system",
                           f"line {exc.line}: {exc.reason}") from None
        rng_seed = data.get("rng_seed")
        if rng_seed is not None and not isinstance(rng_seed, int):
            raise ApiError(400, "bad-seed", "rng_seed must be an integer")
        with ses.lock:
            ses.sim = Simulation(tas, rng_seed=rng_seed)
            ses.editor = list(tas.tile_set.types)
            ses.dirty = False
            ses.epoch += 1
            ses.log("reset", epoch=ses.epoch)
            return status_json(ses)

    @app.get(API + "/sessions/{sid}/system")
    def get_system(sid: str):
        ses = get_session(sid)
        with ses.lock:
            return {"system": serialize_system(ses.sim.tas)}

    # -- control -------------------------------------------------------------

    def parse_breakpoints(specs) -> tuple[Breakpoint, ...]:
        if specs is None:
            return ()
        out = []
        for spec in specs:
            kind = spec.get("kind") if isinstance(spec, dict) else None
            try:
                if kind == "step-count":
                    n = int(spec["n"])
                    if n < 1:
                        raise ValueError("step-count needs n >= 1")
                    out.append(Breakpoint.at_step(n))
                elif kind == "location":
                    out.append(Breakpoint.at_location([int(c) for c in spec["pos"]]))
                elif kind == "type":
                    out.append(Breakpoint.at_type(str(spec["name"])))
                else:
                    raise ValueError(f"unknown breakpoint kind {kind!r}")
            except (KeyError, TypeError, ValueError) as exc:
                raise ApiError(400, "bad-breakpoint", str(exc)) from None
        return tuple(out)

    def region_cells(data) -> list:
        if not isinstance(data, list):
            raise ApiError(400, "bad-mask", "mask needs 'cells' or 'box'")
        try:
            return [tuple(int(c) for c in p) for p in data]
        except (TypeError, ValueError) as exc:
            raise ApiError(400, "bad-mask", str(exc)) from None

    def box_cells(box, dim: int) -> list:
        try:
            (a, b) = box
            lo = [min(int(a[i]), int(b[i])) for i in range(dim)]
            hi = [max(int(a[i]), int(b[i])) for i in range(dim)]
        except (TypeError, ValueError, IndexError) as exc:
            raise ApiError(400, "bad-mask", str(exc)) from None
        vol = 1
        for l, h in zip(lo, hi):
            vol *= h - l + 1
        if vol > region_cap:
            raise ApiError(400, "region-too-large",
                           f"box holds {vol} cells, cap is {region_cap}")
        out = []

        def rec(i, prefix):
            if i == dim:
                out.append(tuple(prefix))
                return
            for c in range(lo[i], hi[i] + 1):
                rec(i + 1, prefix + [c])

        rec(0, [])
        return out

    @app.post(API + "/sessions/{sid}/control")
    async def control(sid: str, request: Request):
        ses = get_session(sid)
        data = await body_of(request)
        action = data.get("action")
        with ses.lock:
            sim = ses.sim
            before = set_snapshot(sim)
            try:
                if action == "step":
                    r = sim.step()
                    log_step_result(ses, r)
                    log_set_deltas(ses, before, set_snapshot(sim))
                    return step_result_json(ses, r)
                if action == "step_back":
                    r = sim.step_back()
                    log_step_result(ses, r)
                    log_set_deltas(ses, before, set_snapshot(sim))
                    return step_result_json(ses, r)
                if action == "run":
                    budget = data.get("budget", 0)
                    if not isinstance(budget, int) or budget < 0:
                        raise ApiError(400, "bad-budget",
                                       "run needs a nonnegative integer budget")
                    bps = parse_breakpoints(data.get("breakpoints"))
                    outcome = None
                    taken = 0
                    # One engine step per iteration so the event log sees
                    # every placement, not just the run summary.
                    while taken < budget:
                        pre = set_snapshot(sim)
                        n_diag = len(sim.diagnostics)
                        step_outcome = sim.run(1, bps)
                        if step_outcome.steps_taken:
                            taken += 1
                            r = StepResult(Outcome.PLACED,
                                           placements=list(sim.history[-1].placements),
                                           new_diagnostics=sim.diagnostics[n_diag:],
                                           stepped=True)
                            log_step_result(ses, r)
                            log_set_deltas(ses, pre, set_snapshot(sim))
                        outcome = step_outcome
                        if step_outcome.kind is not RunKind.BUDGET:
                            break
                    kind = outcome.kind.value if outcome else "budget"
                    ses.log("run-ended", step=sim.step_counter, outcome=kind,
                            steps=taken,
                            breakpoint=(outcome.breakpoint.describe()
                                        if outcome and outcome.breakpoint else None),
                            reason=outcome.reason if outcome else "")
                    return {"outcome": kind, "steps": taken,
                            "breakpoint": (outcome.breakpoint.describe()
                                           if outcome and outcome.breakpoint else None),
                            "reason": outcome.reason if outcome else "",
                            "status": status_json(ses)}
                if action == "reset":
                    rng_seed = data.get("rng_seed")
                    if rng_seed is not None and not isinstance(rng_seed, int):
                        raise ApiError(400, "bad-seed", "rng_seed must be an integer")
                    sim.reset(rng_seed)
                    ses.epoch += 1
                    ses.log("reset", epoch=ses.epoch)
                    return status_json(ses)
                if action == "mode":
                    value = data.get("value")
                    try:
                        sim.tas.step_mode = StepMode(value)
                    except ValueError:
                        raise ApiError(400, "bad-mode",
                                       "mode must be single or parallel") from None
                    return status_json(ses)
                if action == "mask":
                    off = data.get("off", True)
                    if not isinstance(off, bool):
                        raise ApiError(400, "bad-mask", "'off' must be a boolean")
                    if "box" in data:
                        cells = box_cells(data["box"], sim.dim)
                    else:
                        cells = region_cells(data.get("cells"))
                    sim.set_mask(cells, off=off)
                    log_set_deltas(ses, before, set_snapshot(sim))
                    return status_json(ses)
                if action == "place_seed_tile":
                    pos = data.get("pos")
                    name = data.get("type")
                    if not isinstance(name, str) or name not in sim.tile_set:
                        raise ApiError(404, "unknown-type",
                                       f"no tile type {name!r}")
                    try:
                        p = tuple(int(c) for c in pos)
                    except (TypeError, ValueError) as exc:
                        raise ApiError(400, "bad-pos", str(exc)) from None
                    sim.edit_seed_place(p, name)
                    ses.log("placed", step=0,
                            cells=[cell_json(ses, p, sim.assembly.occupancy[p])])
                    log_set_deltas(ses, before, set_snapshot(sim))
                    return status_json(ses)
                if action == "remove_seed_tile":
                    pos = data.get("pos")
                    try:
                        p = tuple(int(c) for c in pos)
                    except (TypeError, ValueError) as exc:
                        raise ApiError(400, "bad-pos", str(exc)) from None
                    sim.edit_seed_remove(p)
                    ses.log("removed", step=0, cells=[{"pos": list(p)}])
                    log_set_deltas(ses, before, set_snapshot(sim))
                    return status_json(ses)
            except NothingToUndo as exc:
                raise ApiError(409, "nothing-to-undo", str(exc)) from None
            except SeedEditError as exc:
                raise ApiError(409, "seed-locked", str(exc)) from None
            raise ApiError(400, "bad-action", f"unknown action {action!r}")

    # -- region and overview -------------------------------------------------

    @app.get(API + "/sessions/{sid}/region")
    def get_region(sid: str, x0: int, y0: int, x1: int, y1: int,
                   z: int | None = None, z0: int | None = None,
                   z1: int | None = None):
        ses = get_session(sid)
        with ses.lock:
            sim = ses.sim
            lo = [min(x0, x1), min(y0, y1)]
            hi = [max(x0, x1), max(y0, y1)]
            if sim.dim == 3:
                if z is not None:
                    z0 = z1 = z
                if z0 is None or z1 is None:
                    raise ApiError(400, "bad-region",
                                   "3-D regions need z or z0/z1 bounds")
                lo.append(min(z0, z1))
                hi.append(max(z0, z1))
            vol = 1
            for l, h in zip(lo, hi):
                vol *= h - l + 1
            if vol > region_cap:
                raise ApiError(400, "region-too-large",
                               f"box holds {vol} cells, cap is {region_cap}; "
                               "page or decimate the query")

            def inside(p) -> bool:
                return all(l <= c <= h for c, l, h in zip(p, lo, hi))

            cells = [cell_json(ses, p, pl)
                     for p, pl in sorted(sim.assembly.occupancy.items())
                     if inside(p)]
            frontier = [{"pos": list(p), "state": "active"}
                        for p in sim.frontier_positions if inside(p)]
            frontier += [{"pos": list(p), "state": "dead"}
                         for p in sim.dead_positions if inside(p)]
            frontier += [{"pos": list(p), "state": "masked"}
                         for p in sorted(sim.masked_frontier()) if inside(p)]
            return {"box": [lo, hi], "cells": cells, "frontier": frontier,
                    "epoch": ses.epoch, "step_counter": sim.step_counter}

    @app.get(API + "/sessions/{sid}/overview")
    def get_overview(sid: str, max_size: int = 64):
        ses = get_session(sid)
        if max_size < 1 or max_size > 512:
            raise ApiError(400, "bad-overview", "max_size must be in 1..512")
        with ses.lock:
            sim = ses.sim
            bbox = sim.assembly.bounding_box()
            mins, maxs = bbox
            w = maxs[0] - mins[0] + 1
            h = maxs[1] - mins[1] + 1
            cell = max(1, (max(w, h) + max_size - 1) // max_size)
            gw = (w + cell - 1) // cell
            gh = (h + cell - 1) // cell
            grid = [[0] * gw for _ in range(gh)]
            for p in sim.assembly.occupancy:
                gx = (p[0] - mins[0]) // cell
                gy = (p[1] - mins[1]) // cell
                grid[gy][gx] += 1
            return {"box": [list(mins), list(maxs)], "cell": cell,
                    "width": gw, "height": gh, "grid": grid,
                    "tiles": len(sim.assembly)}

    # -- tile-set editing ----------------------------------------------------

    @app.get(API + "/sessions/{sid}/tileset")
    def get_tileset(sid: str):
        ses = get_session(sid)
        with ses.lock:
            return {"dim": ses.sim.dim,
                    "editor": [tile_json(t) for t in ses.editor],
                    "simulator": [tile_json(t) for t in ses.sim.tile_set],
                    "dirty": ses.dirty}

    @app.post(API + "/sessions/{sid}/tileset/edits")
    async def edit_tileset(sid: str, request: Request):
        ses = get_session(sid)
        data = await body_of(request)
        ops = data.get("ops")
        if not isinstance(ops, list):
            raise ApiError(400, "bad-edit", "body needs an 'ops' list")
        with ses.lock:
            sim = ses.sim
            working = list(ses.editor)
            names = lambda: {t.name: i for i, t in enumerate(working)}
            seed_names = {sim.tile_set[pl.type_index].name
                          for pl in sim.tas.seed.occupancy.values()}
            for op in ops:
                kind = op.get("op") if isinstance(op, dict) else None
                if kind == "add":
                    t = tile_from_json(op.get("tile"), sim.dim)
                    if t.name in names():
                        raise ApiError(409, "duplicate-name",
                                       f"tile {t.name!r} already exists")
                    working.append(t)
                elif kind == "remove":
                    name = op.get("name")
                    idx = names().get(name)
                    if idx is None:
                        raise ApiError(404, "unknown-type", f"no tile {name!r}")
                    if name in seed_names:
                        raise ApiError(409, "seed-in-use",
                                       f"tile {name!r} anchors the seed; "
                                       "edit the seed first")
                    working.pop(idx)
                elif kind == "modify":
                    name = op.get("name")
                    idx = names().get(name)
                    if idx is None:
                        raise ApiError(404, "unknown-type", f"no tile {name!r}")
                    body = dict(op.get("tile") or {})
                    body["name"] = name
                    working[idx] = tile_from_json(body, sim.dim)
                elif kind == "reorder":
                    name = op.get("name")
                    idx = names().get(name)
                    if idx is None:
                        raise ApiError(404, "unknown-type", f"no tile {name!r}")
                    try:
                        target = int(op.get("index"))
                    except (TypeError, ValueError):
                        raise ApiError(400, "bad-edit",
                                       "reorder needs an integer index") from None
                    t = working.pop(idx)
                    working.insert(max(0, min(target, len(working))), t)
                else:
                    raise ApiError(400, "bad-edit", f"unknown op {kind!r}")
            ses.editor = working
            ses.dirty = True
            return {"dirty": True, "editor": [tile_json(t) for t in working]}

    @app.post(API + "/sessions/{sid}/tileset/commit")
    def commit_tileset(sid: str):
        ses = get_session(sid)
        with ses.lock:
            sim = ses.sim
            try:
                new_set = TileSet(sim.dim, list(ses.editor))
            except ValueError as exc:
                raise ApiError(409, "bad-tileset", str(exc)) from None
            remapped = {}
            for pos, pl in sim.tas.seed.occupancy.items():
                name = sim.tile_set[pl.type_index].name
                if name not in new_set:
                    raise ApiError(409, "seed-in-use",
                                   f"seed tile {name!r} missing from the edited set")
                remapped[pos] = Placement(new_set.index_of(name), 0)
            tas = Tas(tile_set=new_set,
                      seed=Assembly(sim.dim, remapped),
                      temperature=sim.tas.temperature,
                      step_mode=sim.tas.step_mode,
                      concentrations_enabled=sim.tas.concentrations_enabled)
            ses.sim = Simulation(tas, rng_seed=sim.rng_seed,
                                 history_limit=sim.history_limit,
                                 report_nondeterminism=sim.report_nondeterminism,
                                 report_overstrength=sim.report_overstrength)
            ses.dirty = False
            ses.epoch += 1
            ses.log("tileset-committed", epoch=ses.epoch)
            return status_json(ses)

    @app.get(API + "/sessions/{sid}/tileset/query")
    def query_tileset(sid: str, op: str, q: str | None = None,
                      type: str | None = None, side: str | None = None,
                      turns: int = 1, axis: str = "z"):
        ses = get_session(sid)
        with ses.lock:
            working = TileSet(ses.sim.dim, list(ses.editor))

            def named(name) -> TileType:
                if name is None or name not in working:
                    raise ApiError(404, "unknown-type", f"no tile {name!r}")
                return working.get(name)

            if op == "search":
                from .model import search_types
                hits = search_types(working, q if q is not None else "")
                return {"types": [t.name for t in hits]}
            if op == "binders":
                from .model import binders_for_side
                t = named(type)
                try:
                    d = Direction.from_letter(side or "", ses.sim.dim)
                except ValueError as exc:
                    raise ApiError(400, "bad-side", str(exc)) from None
                return {"types": [u.name for u in binders_for_side(working, t, d)]}
            if op == "usage":
                counts = {t.name: 0 for t in working}
                for pl in ses.sim.assembly.occupancy.values():
                    name = ses.sim.tile_set[pl.type_index].name
                    if name in counts:
                        counts[name] += 1
                return {"counts": counts, "tiles": len(ses.sim.assembly)}
            if op == "duplicates":
                groups = analysis.duplicate_glue_groups(working)
                return {"groups": groups}
            if op == "rotate":
                t = named(type)
                if axis not in ("x", "y", "z"):
                    raise ApiError(400, "bad-axis", "axis must be x, y or z")
                try:
                    rotated = rotate_tile(t, turns, {"x": 0, "y": 1, "z": 2}[axis])
                except ValueError as exc:
                    raise ApiError(400, "bad-axis", str(exc)) from None
                return {"tile": tile_json(rotated)}
            raise ApiError(400, "bad-query", f"unknown op {op!r}")

    # -- event stream --------------------------------------------------------

    @app.get(API + "/sessions/{sid}/events")
    def events(sid: str, after: int = 0, coalesce: int = 1):
        ses = get_session(sid)
        if coalesce < 1:
            raise ApiError(400, "bad-coalesce", "coalesce must be >= 1")

        def merge_window(window: list[dict]) -> dict:
            fa: set = set()
            fr: set = set()
            da: set = set()
            dr: set = set()
            ma: set = set()
            mr: set = set()

            def fold(adds, removes, added, removed):
                for p in added:
                    p = tuple(p)
                    if p in removes:
                        removes.discard(p)
                    else:
                        adds.add(p)
                for p in removed:
                    p = tuple(p)
                    if p in adds:
                        adds.discard(p)
                    else:
                        removes.add(p)

            for ev in window:
                fold(fa, fr, ev["added"], ev["removed"])
                fold(da, dr, ev["dead_added"], ev["dead_removed"])
                fold(ma, mr, ev["masked_added"], ev["masked_removed"])
            return {"kind": "frontier-delta", "id": window[-1]["id"],
                    "from_step": window[0]["from_step"],
                    "to_step": window[-1]["to_step"],
                    "added": sorted(map(list, fa)), "removed": sorted(map(list, fr)),
                    "dead_added": sorted(map(list, da)),
                    "dead_removed": sorted(map(list, dr)),
                    "masked_added": sorted(map(list, ma)),
                    "masked_removed": sorted(map(list, mr))}

        def stream():
            with ses.lock:
                log = list(ses.events[after:])
                epoch = ses.epoch
                next_id = len(ses.events)
            hello = {"kind": "hello", "epoch": epoch, "next": next_id}
            yield f"data: {json.dumps(hello)}\n\n"
            window: list[dict] = []
            for ev in log:
                if ev["kind"] == "frontier-delta":
                    window.append(ev)
                    boundary = (ev["to_step"] // coalesce !=
                                window[0]["from_step"] // coalesce)
                    if len(window) > 1 and boundary:
                        last = window.pop()
                        merged = merge_window(window)
                        yield f"id: {merged['id']}\ndata: {json.dumps(merged)}\n\n"
                        window = [last]
                    continue
                if window:
                    merged = merge_window(window)
                    window = []
                    yield f"id: {merged['id']}\ndata: {json.dumps(merged)}\n\n"
                yield f"id: {ev['id']}\ndata: {json.dumps(ev)}\n\n"
            if window:
                merged = merge_window(window)
                yield f"id: {merged['id']}\ndata: {json.dumps(merged)}\n\n"

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app


app = create_app()
