/** Browser entry point: wires the panels to the session service.
 *
 * One event loop drives everything: each user action awaits the server
 * ack, then a sync pass polls the event stream, resyncs from snapshots
 * when the stream says so, and schedules a throttled redraw. The UI
 * never predicts outcomes locally.
 */

import { ApiError, Client } from "./api.js";
import { breakpointSpecs, describeRunOutcome, describeStepOutcome } from "./controls.js";
import {
    addOp,
    blankTile,
    duplicateIndex,
    modifyOp,
    removeOp,
    reorderOp,
    sideLetters,
    unusedTypes,
    withGlue,
} from "./editor.js";
import { pollEvents } from "./events.js";
import { describeCell, describeEmpty } from "./inspector.js";
import { beginBox, boxForDim, dragBox, maskPayload, updateBox } from "./mask.js";
import { overviewClickToWorld, renderOverview } from "./overview.js";
import type { OverviewLayout } from "./overview.js";
import { renderScene } from "./render.js";
import type { OverviewJson, Pos, StatusJson, TileJson } from "./types.js";
import {
    applyEvent,
    applyRegion,
    applyStatus,
    cellAt,
    createViewModel,
    fitCamera,
    frontierStateAt,
    pan,
    posKey,
    visibleBox,
    zoomAt,
} from "./viewmodel.js";
import type { ViewModel } from "./viewmodel.js";
import type { BoxDrag } from "./mask.js";

function must<T extends HTMLElement>(id: string): T {
    const el = document.getElementById(id);
    if (el === null) {
        throw new Error(`missing element #${id}`);
    }
    return el as T;
}

const els = {
    baseUrl: () => must<HTMLInputElement>("base-url"),
    systemDoc: () => must<HTMLTextAreaElement>("system-doc"),
    rngSeed: () => must<HTMLInputElement>("rng-seed"),
    loadBtn: () => must<HTMLButtonElement>("load-btn"),
    stepBtn: () => must<HTMLButtonElement>("step-btn"),
    backBtn: () => must<HTMLButtonElement>("back-btn"),
    runBtn: () => must<HTMLButtonElement>("run-btn"),
    budget: () => must<HTMLInputElement>("budget"),
    breakStep: () => must<HTMLInputElement>("break-step"),
    breakType: () => must<HTMLInputElement>("break-type"),
    resetBtn: () => must<HTMLButtonElement>("reset-btn"),
    modeSelect: () => must<HTMLSelectElement>("mode-select"),
    maskToggle: () => must<HTMLInputElement>("mask-toggle"),
    maskOff: () => must<HTMLSelectElement>("mask-off"),
    sliceRow: () => must<HTMLElement>("slice-row"),
    slice: () => must<HTMLInputElement>("slice"),
    fitBtn: () => must<HTMLButtonElement>("fit-btn"),
    canvas: () => must<HTMLCanvasElement>("canvas"),
    overview: () => must<HTMLCanvasElement>("overview-canvas"),
    inspector: () => must<HTMLElement>("inspector"),
    statusLine: () => must<HTMLElement>("status-line"),
    message: () => must<HTMLElement>("message"),
    diagnostics: () => must<HTMLUListElement>("diagnostics"),
    tileList: () => must<HTMLUListElement>("tile-list"),
    search: () => must<HTMLInputElement>("search"),
    tileForm: () => must<HTMLFormElement>("tile-form"),
    addTile: () => must<HTMLButtonElement>("add-tile"),
    removeTile: () => must<HTMLButtonElement>("remove-tile"),
    applyTile: () => must<HTMLButtonElement>("apply-tile"),
    rotateTile: () => must<HTMLButtonElement>("rotate-tile"),
    commitBtn: () => must<HTMLButtonElement>("commit-btn"),
    binderSide: () => must<HTMLSelectElement>("binder-side"),
    binderOut: () => must<HTMLElement>("binder-results"),
};

interface AppState {
    client: Client;
    sid: string | null;
    vm: ViewModel;
    cursor: number;
    editorTiles: TileJson[];
    overview: OverviewJson | null;
    overviewLayout: OverviewLayout | null;
    unused: Set<string>;
    dupGroups: Map<string, number>;
    searchHits: Set<string> | null;
    maskMode: boolean;
    maskDrag: BoxDrag | null;
    panDrag: { x: number; y: number } | null;
    drawQueued: boolean;
    syncing: boolean;
    editorListKey: string;
}

const state: AppState = {
    client: new Client(""),
    sid: null,
    vm: createViewModel(),
    cursor: 0,
    editorTiles: [],
    overview: null,
    overviewLayout: null,
    unused: new Set(),
    dupGroups: new Map(),
    searchHits: null,
    maskMode: false,
    maskDrag: null,
    panDrag: null,
    drawQueued: false,
    syncing: false,
    editorListKey: "",
};

function toast(text: string, isError = false): void {
    const el = els.message();
    el.textContent = text;
    el.className = isError ? "message error" : "message";
}

function reportError(err: unknown): void {
    if (err instanceof ApiError) {
        toast(`${err.code}: ${err.message}`, true);
    } else {
        toast(String(err), true);
    }
}

/** Run a server action, then fold its consequences back into the view. */
async function withAck(fn: () => Promise<void>): Promise<void> {
    try {
        await fn();
    } catch (err) {
        reportError(err);
    }
    await sync();
}

// -- sync loop ---------------------------------------------------------------

function viewport(): { width: number; height: number } {
    const canvas = els.canvas();
    return { width: canvas.width, height: canvas.height };
}

async function sync(): Promise<void> {
    if (state.sid === null || state.syncing) {
        return;
    }
    state.syncing = true;
    try {
        const batch = await pollEvents(state.client, state.sid, state.cursor);
        state.cursor = batch.next;
        for (const ev of batch.events) {
            applyEvent(state.vm, ev);
        }
        if (batch.epoch !== state.vm.epoch) {
            state.vm.needsResync = true;
        }
        if (state.vm.lastRun !== null) {
            const r = state.vm.lastRun;
            state.vm.lastRun = null;
            toast(
                describeRunOutcome({
                    outcome: r.outcome as "budget" | "terminal" | "halted" | "breakpoint",
                    steps: r.steps,
                    breakpoint: r.breakpoint,
                    reason: r.reason,
                    status: state.vm.status as StatusJson,
                }),
            );
        }
        if (state.vm.needsResync) {
            await resync();
        }
        await refreshStatus();
        await refreshEditor();
        requestDraw();
    } catch (err) {
        reportError(err);
    } finally {
        state.syncing = false;
    }
}

async function resync(): Promise<void> {
    if (state.sid === null) {
        return;
    }
    const status = await state.client.status(state.sid);
    applyStatus(state.vm, status);
    const box = visibleBox(state.vm.camera, viewport(), status.dim, state.vm.slice);
    applyRegion(state.vm, await state.client.region(state.sid, box[0], box[1]));
    state.overview = await state.client.overview(state.sid);
}

async function refreshStatus(): Promise<void> {
    if (state.sid === null) {
        return;
    }
    const status = await state.client.status(state.sid);
    applyStatus(state.vm, status);
    if (state.vm.needsResync) {
        await resync();
    }
    state.overview = await state.client.overview(state.sid);
    const s = status;
    els.statusLine().textContent =
        `step ${s.step_counter} | tiles ${s.tiles} | frontier ${s.frontier}` +
        ` (dead ${s.dead}, masked ${s.masked}) | tau=${s.temperature} ${s.mode}` +
        ` | ${s.status}${s.dirty_tileset ? " | tile set edited" : ""}`;
    renderDiagnostics();
}

async function refreshEditor(): Promise<void> {
    if (state.sid === null) {
        return;
    }
    const ts = await state.client.tileset(state.sid);
    state.editorTiles = ts.editor;
    const usage = await state.client.usage(state.sid);
    state.unused = unusedTypes(usage.counts);
    const dups = await state.client.duplicates(state.sid);
    state.dupGroups = duplicateIndex(dups.groups);
    const listKey = JSON.stringify([ts.editor, [...state.unused].sort(), dups.groups, state.searchHits === null ? null : [...state.searchHits].sort()]);
    if (listKey !== state.editorListKey) {
        state.editorListKey = listKey;
        renderTileList();
    }
}

// -- rendering ---------------------------------------------------------------

function requestDraw(): void {
    if (state.drawQueued) {
        return;
    }
    state.drawQueued = true;
    requestAnimationFrame(() => {
        state.drawQueued = false;
        draw();
    });
}

function draw(): void {
    const canvas = els.canvas();
    const ctx = canvas.getContext("2d");
    if (ctx === null) {
        return;
    }
    renderScene(ctx, state.vm, viewport());
    if (state.maskDrag !== null) {
        drawMaskBox(ctx);
    }
    const ovCanvas = els.overview();
    const ovCtx = ovCanvas.getContext("2d");
    if (ovCtx !== null && state.overview !== null) {
        state.overviewLayout = renderOverview(ovCtx, state.overview, ovCanvas.width, ovCanvas.height);
    }
}

function drawMaskBox(ctx: CanvasRenderingContext2D): void {
    if (state.maskDrag === null) {
        return;
    }
    const [lo, hi] = dragBox(state.maskDrag);
    const vp = viewport();
    const cam = state.vm.camera;
    const x = vp.width / 2 + ((lo[0] ?? 0) - 0.5 - cam.x) * cam.zoom;
    const y = vp.height / 2 - ((hi[1] ?? 0) + 0.5 - cam.y) * cam.zoom;
    const w = ((hi[0] ?? 0) - (lo[0] ?? 0) + 1) * cam.zoom;
    const h = ((hi[1] ?? 0) - (lo[1] ?? 0) + 1) * cam.zoom;
    ctx.strokeStyle = "#d0d0d0";
    ctx.lineWidth = 1.5;
    ctx.strokeRect(x, y, w, h);
}

function renderDiagnostics(): void {
    const list = els.diagnostics();
    list.textContent = "";
    for (const d of state.vm.diagnostics.slice(-40)) {
        const li = document.createElement("li");
        const where = d.pos === null ? "" : ` at (${d.pos.join(", ")})`;
        const extra =
            d.kind === "nondeterminism"
                ? ` candidates: ${d.candidates.join(", ")}`
                : d.kind === "over-strength"
                  ? ` strength ${d.strength}`
                  : "";
        li.textContent = `step ${d.step}: ${d.kind}${where}${extra}`;
        list.append(li);
    }
}

// -- tile editor panel -------------------------------------------------------

function formValue(name: string): string {
    const el = els.tileForm().elements.namedItem(name);
    return el instanceof HTMLInputElement ? el.value : "";
}

function setFormValue(name: string, value: string): void {
    const el = els.tileForm().elements.namedItem(name);
    if (el instanceof HTMLInputElement) {
        el.value = value;
    }
}

function tileFromForm(dim: number): TileJson {
    let tile = blankTile(formValue("name").trim(), dim);
    tile.label = formValue("label");
    const rgb = formValue("color")
        .split(",")
        .map((s) => Number(s.trim()));
    if (rgb.length === 3 && rgb.every((c) => Number.isFinite(c))) {
        tile.color = rgb.map((c) => Math.max(0, Math.min(255, Math.round(c))));
    }
    const conc = formValue("conc").trim();
    if (conc !== "") {
        tile.conc = conc;
    }
    for (const side of sideLetters(dim)) {
        const color = formValue(`glue-${side}`).trim();
        const strength = Number(formValue(`strength-${side}`) || "0");
        tile = withGlue(tile, side, color, strength);
    }
    return tile;
}

function fillForm(tile: TileJson): void {
    setFormValue("name", tile.name);
    setFormValue("label", tile.label);
    setFormValue("color", tile.color.join(","));
    setFormValue("conc", tile.conc);
    for (const side of sideLetters(tile.dim)) {
        const g = tile.glues[side];
        setFormValue(`glue-${side}`, g?.color ?? "");
        setFormValue(`strength-${side}`, g === undefined ? "0" : String(g.strength));
    }
}

function renderTileList(): void {
    const list = els.tileList();
    list.textContent = "";
    state.editorTiles.forEach((tile, index) => {
        if (state.searchHits !== null && !state.searchHits.has(tile.name)) {
            return;
        }
        const li = document.createElement("li");
        li.draggable = true;
        li.dataset["name"] = tile.name;
        li.dataset["index"] = String(index);
        const swatch = document.createElement("span");
        swatch.className = "swatch";
        swatch.style.background = `rgb(${tile.color.join(",")})`;
        li.append(swatch, ` ${tile.name}`);
        if (tile.label !== "") {
            li.append(` [${tile.label}]`);
        }
        if (state.unused.has(tile.name)) {
            li.classList.add("unused");
            li.title = "never placed in the current assembly";
        }
        const dup = state.dupGroups.get(tile.name);
        if (dup !== undefined) {
            li.classList.add(`dup-${dup % 4}`);
            li.title = "glue-identical to another type";
        }
        if (tile.name === state.vm.selectedType) {
            li.classList.add("selected");
        }
        li.addEventListener("click", () => {
            state.vm.selectedType = tile.name;
            fillForm(tile);
            renderTileList();
            void refreshBinders();
        });
        li.addEventListener("dragstart", (ev) => {
            ev.dataTransfer?.setData("text/plain", tile.name);
        });
        li.addEventListener("dragover", (ev) => ev.preventDefault());
        li.addEventListener("drop", (ev) => {
            ev.preventDefault();
            const dragged = ev.dataTransfer?.getData("text/plain");
            if (dragged !== undefined && dragged !== "" && dragged !== tile.name) {
                void withAck(async () => {
                    await state.client.editTileset(state.sid as string, [reorderOp(dragged, index)]);
                });
            }
        });
        list.append(li);
    });
}

async function refreshBinders(): Promise<void> {
    if (state.sid === null || state.vm.selectedType === null) {
        els.binderOut().textContent = "";
        return;
    }
    try {
        const side = els.binderSide().value;
        const res = await state.client.binders(state.sid, state.vm.selectedType, side);
        els.binderOut().textContent = res.types.length === 0 ? "(none)" : res.types.join(", ");
    } catch (err) {
        reportError(err);
    }
}

// -- canvas interactions -----------------------------------------------------

function canvasPoint(ev: MouseEvent): [number, number] {
    const rect = els.canvas().getBoundingClientRect();
    return [ev.clientX - rect.left, ev.clientY - rect.top];
}

function hoveredCell(ev: MouseEvent): [number, number] {
    const [sx, sy] = canvasPoint(ev);
    return cellAt(state.vm.camera, viewport(), sx, sy);
}

function updateInspector(): void {
    const hover = state.vm.hover;
    const el = els.inspector();
    if (hover === null) {
        el.textContent = "";
        return;
    }
    const pos: Pos = state.vm.status?.dim === 3 ? [...hover, state.vm.slice] : hover;
    const key = posKey(pos);
    const cell = state.vm.cells.get(key);
    if (cell !== undefined) {
        const tile =
            state.editorTiles.find((t) => t.name === cell.name) ??
            undefined;
        el.textContent = describeCell(pos, cell, tile).join("\n");
    } else {
        el.textContent = describeEmpty(pos, frontierStateAt(state.vm, key)).join("\n");
    }
}

function bindCanvas(): void {
    const canvas = els.canvas();
    canvas.addEventListener("pointerdown", (ev) => {
        if (ev.button !== 0) {
            return;
        }
        canvas.setPointerCapture(ev.pointerId);
        const [cx, cy] = hoveredCell(ev);
        if (state.maskMode) {
            state.maskDrag = beginBox(cx, cy);
        } else {
            state.panDrag = { x: ev.clientX, y: ev.clientY };
        }
    });
    canvas.addEventListener("pointermove", (ev) => {
        if (state.panDrag !== null) {
            pan(state.vm.camera, ev.clientX - state.panDrag.x, ev.clientY - state.panDrag.y);
            state.panDrag = { x: ev.clientX, y: ev.clientY };
            requestDraw();
            return;
        }
        const [cx, cy] = hoveredCell(ev);
        if (state.maskDrag !== null) {
            updateBox(state.maskDrag, cx, cy);
            requestDraw();
        }
        const prev = state.vm.hover;
        if (prev === null || prev[0] !== cx || prev[1] !== cy) {
            state.vm.hover = [cx, cy];
            updateInspector();
            requestDraw();
        }
    });
    canvas.addEventListener("pointerup", () => {
        state.panDrag = null;
        if (state.maskDrag !== null && state.sid !== null) {
            const drag = state.maskDrag;
            state.maskDrag = null;
            const dim = state.vm.status?.dim ?? 2;
            const box = boxForDim(dragBox(drag), dim, state.vm.slice);
            const off = els.maskOff().value === "off";
            void withAck(async () => {
                const payload = maskPayload(box, off);
                await state.client.maskBox(state.sid as string, payload.box, payload.off);
                toast(off ? "masked the selected box" : "unmasked the selected box");
            });
        }
    });
    canvas.addEventListener("pointerleave", () => {
        state.vm.hover = null;
        updateInspector();
        requestDraw();
    });
    canvas.addEventListener("wheel", (ev) => {
        ev.preventDefault();
        const [sx, sy] = canvasPoint(ev);
        zoomAt(state.vm.camera, viewport(), sx, sy, Math.pow(1.0015, -ev.deltaY));
        state.vm.needsResync = true;
        requestDraw();
        void sync();
    });
    canvas.addEventListener("contextmenu", (ev) => {
        ev.preventDefault();
        if (state.sid === null) {
            return;
        }
        const [cx, cy] = hoveredCell(ev);
        const dim = state.vm.status?.dim ?? 2;
        const pos: Pos = dim === 3 ? [cx, cy, state.vm.slice] : [cx, cy];
        if (ev.shiftKey) {
            void withAck(async () => {
                await state.client.removeSeedTile(state.sid as string, pos);
                toast(`removed seed tile at (${pos.join(", ")})`);
            });
            return;
        }
        const name = state.vm.selectedType;
        if (name === null) {
            toast("select a tile type first to place seed tiles", true);
            return;
        }
        void withAck(async () => {
            await state.client.placeSeedTile(state.sid as string, pos, name);
            toast(`placed seed ${name} at (${pos.join(", ")})`);
        });
    });
    els.overview().addEventListener("click", (ev) => {
        if (state.overview === null || state.overviewLayout === null) {
            return;
        }
        const rect = els.overview().getBoundingClientRect();
        const target = overviewClickToWorld(
            state.overview,
            state.overviewLayout,
            ev.clientX - rect.left,
            ev.clientY - rect.top,
        );
        if (target !== null) {
            state.vm.camera.x = target[0];
            state.vm.camera.y = target[1];
            state.vm.needsResync = true;
            void sync();
        }
    });
}

// -- toolbar and panels ------------------------------------------------------

function bindControls(): void {
    els.loadBtn().addEventListener("click", () => {
        void withAck(async () => {
            state.client = new Client(els.baseUrl().value.trim());
            const seedText = els.rngSeed().value.trim();
            const seed = seedText === "" ? undefined : Number(seedText);
            const status = await state.client.createSession(els.systemDoc().value, seed);
            state.sid = status.session;
            state.vm = createViewModel();
            state.cursor = 0;
            state.editorListKey = "";
            applyStatus(state.vm, status);
            state.vm.needsResync = true;
            els.sliceRow().hidden = status.dim !== 3;
            els.modeSelect().value = status.mode;
            toast(`session ${status.session}: ${status.tiles} tiles, tau=${status.temperature}`);
            await resync();
            fitCamera(state.vm, viewport());
            await resync();
        });
    });
    els.stepBtn().addEventListener("click", () => {
        void withAck(async () => {
            const res = await state.client.step(state.sid as string);
            toast(describeStepOutcome(res));
        });
    });
    els.backBtn().addEventListener("click", () => {
        void withAck(async () => {
            const res = await state.client.stepBack(state.sid as string);
            toast(describeStepOutcome(res));
        });
    });
    els.runBtn().addEventListener("click", () => {
        void withAck(async () => {
            const budget = Number(els.budget().value) || 0;
            const controls = state.vm.controls;
            controls.budget = budget;
            controls.breakStep = els.breakStep().value === "" ? null : Number(els.breakStep().value);
            controls.breakType = els.breakType().value.trim();
            const res = await state.client.run(state.sid as string, budget, breakpointSpecs(controls));
            toast(describeRunOutcome(res));
        });
    });
    els.resetBtn().addEventListener("click", () => {
        void withAck(async () => {
            await state.client.reset(state.sid as string);
            toast("reset to the seed");
        });
    });
    els.modeSelect().addEventListener("change", () => {
        void withAck(async () => {
            const mode = els.modeSelect().value as "single" | "parallel";
            await state.client.setMode(state.sid as string, mode);
            toast(`step mode: ${mode}`);
        });
    });
    els.maskToggle().addEventListener("change", () => {
        state.maskMode = els.maskToggle().checked;
    });
    els.slice().addEventListener("change", () => {
        state.vm.slice = Number(els.slice().value) || 0;
        state.vm.needsResync = true;
        void sync();
    });
    els.fitBtn().addEventListener("click", () => {
        fitCamera(state.vm, viewport());
        state.vm.needsResync = true;
        void sync();
    });
}

function bindEditor(): void {
    els.search().addEventListener("input", () => {
        const q = els.search().value;
        if (state.sid === null) {
            return;
        }
        if (q === "") {
            state.searchHits = null;
            state.editorListKey = "";
            void refreshEditor().then(requestDraw);
            return;
        }
        void state.client
            .searchTypes(state.sid, q)
            .then((res) => {
                state.searchHits = new Set(res.types);
                state.editorListKey = "";
                renderTileList();
            })
            .catch(reportError);
    });
    els.addTile().addEventListener("click", () => {
        void withAck(async () => {
            const dim = state.vm.status?.dim ?? 2;
            const tile = tileFromForm(dim);
            if (tile.name === "") {
                throw new ApiError(0, "bad-tile", "the new tile needs a name");
            }
            await state.client.editTileset(state.sid as string, [addOp(tile)]);
            state.vm.selectedType = tile.name;
            toast(`added ${tile.name} (uncommitted)`);
        });
    });
    els.removeTile().addEventListener("click", () => {
        void withAck(async () => {
            const name = state.vm.selectedType;
            if (name === null) {
                return;
            }
            await state.client.editTileset(state.sid as string, [removeOp(name)]);
            state.vm.selectedType = null;
            toast(`removed ${name} (uncommitted)`);
        });
    });
    els.applyTile().addEventListener("click", () => {
        void withAck(async () => {
            const name = state.vm.selectedType;
            if (name === null) {
                return;
            }
            const dim = state.vm.status?.dim ?? 2;
            const tile = tileFromForm(dim);
            await state.client.editTileset(state.sid as string, [modifyOp(name, tile)]);
            if (tile.name !== name) {
                state.vm.selectedType = name;
            }
            toast(`modified ${name} (uncommitted)`);
        });
    });
    els.rotateTile().addEventListener("click", () => {
        void (async () => {
            const name = state.vm.selectedType;
            if (state.sid === null || name === null) {
                return;
            }
            try {
                const res = await state.client.rotate(state.sid, name);
                fillForm({ ...res.tile, name });
                toast(`rotated ${name} a quarter turn; apply to keep it`);
            } catch (err) {
                reportError(err);
            }
        })();
    });
    els.commitBtn().addEventListener("click", () => {
        void withAck(async () => {
            const status = await state.client.commitTileset(state.sid as string);
            toast(`committed tile set; back at step ${status.step_counter}`);
        });
    });
    els.binderSide().addEventListener("change", () => {
        void refreshBinders();
    });
}

function defaultBaseUrl(): string {
    return location.protocol.startsWith("http") ? "" : "http://127.0.0.1:8765";
}

function start(): void {
    els.baseUrl().value = defaultBaseUrl();
    bindControls();
    bindEditor();
    bindCanvas();
    window.setInterval(() => {
        void sync();
    }, 1500);
    requestDraw();
}

start();
