/** Client-side session state: snapshot caches, stream folding, camera.
 *
 * Rendered cells always derive from the last region snapshot plus the
 * stream deltas applied since; nothing here decides model semantics. Any
 * gap in the event feed or epoch change flips needsResync so the next
 * loop iteration replaces the caches with a fresh snapshot.
 */

import type {
    CellJson,
    DiagnosticJson,
    Pos,
    RegionJson,
    SessionEvent,
    StatusJson,
} from "./types.js";

/** Camera zoom bounds, in screen pixels per lattice cell. */
export const MIN_ZOOM = 2;
export const MAX_ZOOM = 96;

export interface Camera {
    /** World coordinates at the viewport center. */
    x: number;
    y: number;
    /** Pixels per cell, clamped to [MIN_ZOOM, MAX_ZOOM]. */
    zoom: number;
}

export interface RunControls {
    budget: number;
    breakStep: number | null;
    breakType: string;
    running: boolean;
}

export interface LastRun {
    outcome: string;
    steps: number;
    breakpoint: string | null;
    reason: string;
}

export interface ViewModel {
    epoch: number;
    stepCounter: number;
    /** Occupied cells keyed by posKey. */
    cells: Map<string, CellJson>;
    /** Eligible frontier positions, keyed by posKey. */
    active: Set<string>;
    /** Frontier positions where nothing fits. */
    dead: Set<string>;
    /** Positions suppressed by the mask tool. */
    masked: Set<string>;
    diagnostics: DiagnosticJson[];
    camera: Camera;
    /** Highest event id folded in, for gap detection. */
    lastEventId: number;
    /** Box covered by the last region snapshot. */
    snapshotBox: [Pos, Pos] | null;
    needsResync: boolean;
    status: StatusJson | null;
    lastRun: LastRun | null;
    selectedType: string | null;
    hover: Pos | null;
    controls: RunControls;
    /** Plane shown for 3-D sessions; ignored in 2-D. */
    slice: number;
}

export function posKey(p: Pos): string {
    return p.join(",");
}

export function keyPos(key: string): Pos {
    return key.split(",").map(Number);
}

export function createViewModel(): ViewModel {
    return {
        epoch: 0,
        stepCounter: 0,
        cells: new Map(),
        active: new Set(),
        dead: new Set(),
        masked: new Set(),
        diagnostics: [],
        camera: { x: 0, y: 0, zoom: 24 },
        lastEventId: -1,
        snapshotBox: null,
        needsResync: true,
        status: null,
        lastRun: null,
        selectedType: null,
        hover: null,
        controls: { budget: 50, breakStep: null, breakType: "", running: false },
        slice: 0,
    };
}

/** Replace the caches with a fresh region snapshot. */
export function applyRegion(vm: ViewModel, region: RegionJson): void {
    vm.cells.clear();
    vm.active.clear();
    vm.dead.clear();
    vm.masked.clear();
    for (const c of region.cells) {
        vm.cells.set(posKey(c.pos), c);
    }
    for (const mark of region.frontier) {
        const key = posKey(mark.pos);
        if (mark.state === "active") {
            vm.active.add(key);
        } else if (mark.state === "dead") {
            vm.dead.add(key);
        } else {
            vm.masked.add(key);
        }
    }
    vm.epoch = region.epoch;
    vm.stepCounter = region.step_counter;
    vm.snapshotBox = region.box;
    vm.needsResync = false;
}

export function applyStatus(vm: ViewModel, status: StatusJson): void {
    if (vm.status !== null && status.epoch !== vm.epoch) {
        vm.needsResync = true;
    }
    vm.status = status;
    vm.epoch = status.epoch;
    vm.stepCounter = status.step_counter;
}

function applyDelta(target: Set<string>, added: Pos[], removed: Pos[]): void {
    for (const p of added) {
        target.add(posKey(p));
    }
    for (const p of removed) {
        target.delete(posKey(p));
    }
}

/** Fold one stream event into the caches.
 *
 * Events must arrive in id order; a gap or a regression marks the model
 * stale instead of guessing, and the caller resyncs from a snapshot.
 */
export function applyEvent(vm: ViewModel, ev: SessionEvent): void {
    if (ev.kind === "hello") {
        if (vm.status !== null && ev.epoch !== vm.epoch) {
            vm.needsResync = true;
            vm.epoch = ev.epoch;
        }
        return;
    }
    if (ev.id <= vm.lastEventId) {
        vm.needsResync = true;
        return;
    }
    vm.lastEventId = ev.id;
    switch (ev.kind) {
        case "placed":
            for (const c of ev.cells) {
                vm.cells.set(posKey(c.pos), c);
            }
            vm.stepCounter = ev.step;
            break;
        case "removed":
            for (const c of ev.cells) {
                vm.cells.delete(posKey(c.pos));
            }
            vm.stepCounter = ev.step;
            break;
        case "frontier-delta":
            applyDelta(vm.active, ev.added, ev.removed);
            applyDelta(vm.dead, ev.dead_added, ev.dead_removed);
            applyDelta(vm.masked, ev.masked_added, ev.masked_removed);
            break;
        case "diagnostic":
            vm.diagnostics.push(ev.diagnostic);
            break;
        case "run-ended":
            vm.lastRun = {
                outcome: ev.outcome,
                steps: ev.steps,
                breakpoint: ev.breakpoint,
                reason: ev.reason,
            };
            break;
        case "reset":
        case "tileset-committed":
            // The new assembly is not in the stream; pull a snapshot.
            vm.epoch = ev.epoch;
            vm.cells.clear();
            vm.active.clear();
            vm.dead.clear();
            vm.masked.clear();
            vm.diagnostics = [];
            vm.stepCounter = 0;
            vm.needsResync = true;
            break;
    }
}

/** Paint state of a frontier position; occupied cells win over marks. */
export function frontierStateAt(vm: ViewModel, key: string): "active" | "dead" | "masked" | null {
    if (vm.cells.has(key)) {
        return null;
    }
    if (vm.active.has(key)) {
        return "active";
    }
    if (vm.dead.has(key)) {
        return "dead";
    }
    if (vm.masked.has(key)) {
        return "masked";
    }
    return null;
}

// -- camera ------------------------------------------------------------------

export interface Viewport {
    width: number;
    height: number;
}

export function clampZoom(zoom: number): number {
    return Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, zoom));
}

/** World position -> screen pixels; world y grows upward, screen y down. */
export function worldToScreen(cam: Camera, vp: Viewport, wx: number, wy: number): [number, number] {
    return [
        vp.width / 2 + (wx - cam.x) * cam.zoom,
        vp.height / 2 - (wy - cam.y) * cam.zoom,
    ];
}

export function screenToWorld(cam: Camera, vp: Viewport, sx: number, sy: number): [number, number] {
    return [
        cam.x + (sx - vp.width / 2) / cam.zoom,
        cam.y - (sy - vp.height / 2) / cam.zoom,
    ];
}

/** Lattice cell under a screen position. */
export function cellAt(cam: Camera, vp: Viewport, sx: number, sy: number): [number, number] {
    const [wx, wy] = screenToWorld(cam, vp, sx, sy);
    return [Math.round(wx), Math.round(wy)];
}

export function pan(cam: Camera, dxPx: number, dyPx: number): void {
    cam.x -= dxPx / cam.zoom;
    cam.y += dyPx / cam.zoom;
}

/** Scale the zoom, keeping the world point under (sx, sy) fixed. */
export function zoomAt(cam: Camera, vp: Viewport, sx: number, sy: number, factor: number): void {
    const [wx, wy] = screenToWorld(cam, vp, sx, sy);
    cam.zoom = clampZoom(cam.zoom * factor);
    const [nx, ny] = screenToWorld(cam, vp, sx, sy);
    cam.x += wx - nx;
    cam.y += wy - ny;
}

/** Center the camera on the cached cells, zoomed to fit the viewport. */
export function fitCamera(vm: ViewModel, vp: Viewport): void {
    if (vm.cells.size === 0) {
        vm.camera = { x: 0, y: 0, zoom: 24 };
        return;
    }
    let minX = Infinity;
    let minY = Infinity;
    let maxX = -Infinity;
    let maxY = -Infinity;
    for (const key of vm.cells.keys()) {
        const p = keyPos(key);
        minX = Math.min(minX, p[0] ?? 0);
        maxX = Math.max(maxX, p[0] ?? 0);
        minY = Math.min(minY, p[1] ?? 0);
        maxY = Math.max(maxY, p[1] ?? 0);
    }
    const spanX = maxX - minX + 3;
    const spanY = maxY - minY + 3;
    vm.camera = {
        x: (minX + maxX) / 2,
        y: (minY + maxY) / 2,
        zoom: clampZoom(Math.min(vp.width / spanX, vp.height / spanY)),
    };
}

/** Box to request from the region endpoint for the current viewport. */
export function visibleBox(cam: Camera, vp: Viewport, dim: number, slice = 0): [Pos, Pos] {
    const [wx0, wy1] = screenToWorld(cam, vp, 0, 0);
    const [wx1, wy0] = screenToWorld(cam, vp, vp.width, vp.height);
    const lo: Pos = [Math.floor(wx0) - 1, Math.floor(wy0) - 1];
    const hi: Pos = [Math.ceil(wx1) + 1, Math.ceil(wy1) + 1];
    if (dim === 3) {
        lo.push(slice);
        hi.push(slice);
    }
    return [lo, hi];
}
