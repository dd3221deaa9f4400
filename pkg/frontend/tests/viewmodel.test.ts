import { describe, expect, it } from "vitest";

import type { CellJson, RegionJson, SessionEvent, StatusJson } from "../src/types.js";
import {
    MAX_ZOOM,
    MIN_ZOOM,
    applyEvent,
    applyRegion,
    applyStatus,
    cellAt,
    clampZoom,
    createViewModel,
    fitCamera,
    frontierStateAt,
    pan,
    posKey,
    screenToWorld,
    visibleBox,
    worldToScreen,
    zoomAt,
} from "../src/viewmodel.js";

function cell(pos: number[], name = "t", step = 0): CellJson {
    return { pos, name, label: "", color: [100, 100, 100], step };
}

function region(cells: CellJson[], frontier: RegionJson["frontier"] = []): RegionJson {
    return {
        epoch: 0,
        step_counter: 0,
        box: [
            [-10, -10],
            [10, 10],
        ],
        cells,
        frontier,
    };
}

function status(overrides: Partial<StatusJson> = {}): StatusJson {
    return {
        session: "s",
        epoch: 0,
        step_counter: 0,
        tiles: 1,
        seed_tiles: 1,
        frontier: 0,
        dead: 0,
        masked: 0,
        temperature: 2,
        mode: "single",
        concentrations: false,
        dim: 2,
        rng_seed: 1,
        status: "idle",
        diagnostics: 0,
        history: 0,
        dirty_tileset: false,
        digest: "d",
        ...overrides,
    };
}

describe("snapshot plus deltas", () => {
    it("folds placed and removed events into the cell cache", () => {
        const vm = createViewModel();
        applyRegion(vm, region([cell([0, 0], "seed")]));
        applyEvent(vm, {
            kind: "placed",
            id: 0,
            step: 1,
            cells: [cell([1, 0], "a", 1)],
        });
        expect(vm.cells.get("1,0")?.name).toBe("a");
        expect(vm.stepCounter).toBe(1);
        applyEvent(vm, { kind: "removed", id: 1, step: 0, cells: [{ pos: [1, 0] }] });
        expect(vm.cells.has("1,0")).toBe(false);
        expect(vm.needsResync).toBe(false);
    });

    it("applies frontier deltas to the three mark sets", () => {
        const vm = createViewModel();
        applyRegion(vm, region([], [{ pos: [0, 1], state: "active" }]));
        expect(frontierStateAt(vm, "0,1")).toBe("active");
        applyEvent(vm, {
            kind: "frontier-delta",
            id: 0,
            from_step: 0,
            to_step: 0,
            added: [[2, 2]],
            removed: [[0, 1]],
            dead_added: [[3, 3]],
            dead_removed: [],
            masked_added: [[0, 1]],
            masked_removed: [],
        });
        expect(frontierStateAt(vm, "0,1")).toBe("masked");
        expect(frontierStateAt(vm, "2,2")).toBe("active");
        expect(frontierStateAt(vm, "3,3")).toBe("dead");
    });

    it("treats an id regression as a gap needing resync", () => {
        const vm = createViewModel();
        applyRegion(vm, region([]));
        applyEvent(vm, { kind: "placed", id: 4, step: 1, cells: [] });
        expect(vm.needsResync).toBe(false);
        applyEvent(vm, { kind: "placed", id: 4, step: 2, cells: [cell([5, 5])] });
        expect(vm.needsResync).toBe(true);
        expect(vm.cells.has("5,5")).toBe(false);
    });

    it("drops caches on reset and tileset-committed events", () => {
        const vm = createViewModel();
        applyRegion(vm, region([cell([0, 0])], [{ pos: [0, 1], state: "active" }]));
        applyEvent(vm, {
            kind: "diagnostic",
            id: 0,
            step: 1,
            diagnostic: { kind: "nondeterminism", step: 1, pos: [0, 1], type: null, candidates: ["a", "b"], strength: 0 },
        });
        expect(vm.diagnostics).toHaveLength(1);
        applyEvent(vm, { kind: "reset", id: 1, epoch: 1 });
        expect(vm.cells.size).toBe(0);
        expect(vm.active.size).toBe(0);
        expect(vm.diagnostics).toHaveLength(0);
        expect(vm.stepCounter).toBe(0);
        expect(vm.epoch).toBe(1);
        expect(vm.needsResync).toBe(true);
    });

    it("flags resync when hello reports a different epoch", () => {
        const vm = createViewModel();
        applyStatus(vm, status());
        applyRegion(vm, region([]));
        applyEvent(vm, { kind: "hello", epoch: 0, next: 0 } as SessionEvent);
        expect(vm.needsResync).toBe(false);
        applyEvent(vm, { kind: "hello", epoch: 3, next: 0 } as SessionEvent);
        expect(vm.needsResync).toBe(true);
    });

    it("records the last run outcome for the message line", () => {
        const vm = createViewModel();
        applyEvent(vm, {
            kind: "run-ended",
            id: 0,
            step: 9,
            outcome: "halted",
            steps: 0,
            breakpoint: null,
            reason: "every eligible location is masked",
        });
        expect(vm.lastRun?.outcome).toBe("halted");
        expect(vm.lastRun?.reason).toContain("masked");
    });

    it("lets occupied cells shadow stale frontier marks", () => {
        const vm = createViewModel();
        applyRegion(vm, region([cell([1, 1])], [{ pos: [1, 1], state: "active" }]));
        expect(frontierStateAt(vm, posKey([1, 1]))).toBeNull();
    });
});

describe("camera", () => {
    const vp = { width: 800, height: 600 };

    it("clamps zoom to the documented range", () => {
        expect(clampZoom(0.01)).toBe(MIN_ZOOM);
        expect(clampZoom(1e6)).toBe(MAX_ZOOM);
        expect(clampZoom(24)).toBe(24);
    });

    it("round-trips world and screen coordinates", () => {
        const cam = { x: 3, y: -2, zoom: 16 };
        const [sx, sy] = worldToScreen(cam, vp, 7.25, 4.5);
        const [wx, wy] = screenToWorld(cam, vp, sx, sy);
        expect(wx).toBeCloseTo(7.25);
        expect(wy).toBeCloseTo(4.5);
    });

    it("keeps the pivot fixed while zooming", () => {
        const cam = { x: 0, y: 0, zoom: 20 };
        const [wx, wy] = screenToWorld(cam, vp, 100, 100);
        zoomAt(cam, vp, 100, 100, 1.5);
        const [nx, ny] = screenToWorld(cam, vp, 100, 100);
        expect(nx).toBeCloseTo(wx);
        expect(ny).toBeCloseTo(wy);
        expect(cam.zoom).toBe(30);
    });

    it("pans in screen pixels against the world axes", () => {
        const cam = { x: 0, y: 0, zoom: 10 };
        pan(cam, 50, -30);
        expect(cam.x).toBeCloseTo(-5);
        expect(cam.y).toBeCloseTo(-3);
    });

    it("maps screen points to the lattice cell under them", () => {
        const cam = { x: 0, y: 0, zoom: 10 };
        expect(cellAt(cam, vp, vp.width / 2, vp.height / 2)).toEqual([0, 0]);
        expect(cellAt(cam, vp, vp.width / 2 + 10, vp.height / 2 - 20)).toEqual([1, 2]);
    });

    it("fits the cached cells inside the viewport", () => {
        const vm = createViewModel();
        applyRegion(vm, region([cell([0, 0]), cell([9, 4])]));
        fitCamera(vm, vp);
        expect(vm.camera.x).toBeCloseTo(4.5);
        expect(vm.camera.y).toBeCloseTo(2);
        const [sx0, sy0] = worldToScreen(vm.camera, vp, 0, 0);
        const [sx1, sy1] = worldToScreen(vm.camera, vp, 9, 4);
        for (const v of [sx0, sx1]) {
            expect(v).toBeGreaterThan(0);
            expect(v).toBeLessThan(vp.width);
        }
        for (const v of [sy0, sy1]) {
            expect(v).toBeGreaterThan(0);
            expect(v).toBeLessThan(vp.height);
        }
    });

    it("asks the region endpoint for a box covering the viewport", () => {
        const cam = { x: 0, y: 0, zoom: 10 };
        const [lo, hi] = visibleBox(cam, vp, 2);
        expect(lo[0]).toBeLessThanOrEqual(-40);
        expect(hi[0]).toBeGreaterThanOrEqual(40);
        expect(lo[1]).toBeLessThanOrEqual(-30);
        expect(hi[1]).toBeGreaterThanOrEqual(30);
        const [lo3, hi3] = visibleBox(cam, vp, 3, 5);
        expect(lo3[2]).toBe(5);
        expect(hi3[2]).toBe(5);
    });
});
