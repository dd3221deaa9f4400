import { describe, expect, it } from "vitest";

import { BACKGROUND, FRONTIER_COLORS, renderScene } from "../src/render.js";
import type { Ctx2D } from "../src/render.js";
import { applyRegion, createViewModel } from "../src/viewmodel.js";
import type { CellJson, RegionJson, StatusJson } from "../src/types.js";

interface Rect {
    x: number;
    y: number;
    w: number;
    h: number;
    style: string;
}

class Recorder implements Ctx2D {
    fillStyle: string | CanvasGradient | CanvasPattern = "";
    strokeStyle: string | CanvasGradient | CanvasPattern = "";
    lineWidth = 1;
    font = "";
    textAlign = "";
    textBaseline = "";
    fills: Rect[] = [];
    strokes: Rect[] = [];
    texts: { text: string; x: number; y: number }[] = [];
    paths = 0;

    fillRect(x: number, y: number, w: number, h: number): void {
        this.fills.push({ x, y, w, h, style: String(this.fillStyle) });
    }

    strokeRect(x: number, y: number, w: number, h: number): void {
        this.strokes.push({ x, y, w, h, style: String(this.strokeStyle) });
    }

    fillText(text: string, x: number, y: number): void {
        this.texts.push({ text, x, y });
    }

    beginPath(): void {}
    moveTo(): void {}
    lineTo(): void {}
    stroke(): void {
        this.paths += 1;
    }
}

const VP = { width: 400, height: 300 };

function makeRegion(cells: CellJson[], frontier: RegionJson["frontier"]): RegionJson {
    return {
        epoch: 0,
        step_counter: 0,
        box: [
            [-20, -20],
            [20, 20],
        ],
        cells,
        frontier,
    };
}

function cellJson(pos: number[], label = ""): CellJson {
    return { pos, name: "t", label, color: [10, 200, 30], step: 2 };
}

describe("renderScene", () => {
    it("paints the background, every visible cell, and each mark once", () => {
        const vm = createViewModel();
        vm.camera = { x: 0, y: 0, zoom: 20 };
        applyRegion(
            vm,
            makeRegion(
                [cellJson([0, 0]), cellJson([1, 0])],
                [
                    { pos: [0, 1], state: "active" },
                    { pos: [2, 0], state: "dead" },
                    { pos: [-1, 0], state: "masked" },
                ],
            ),
        );
        const ctx = new Recorder();
        const stats = renderScene(ctx, vm, VP);
        expect(stats).toEqual({ cellsDrawn: 2, marksDrawn: 3 });
        expect(ctx.fills[0]).toMatchObject({ x: 0, y: 0, w: VP.width, h: VP.height, style: BACKGROUND });
        const styles = ctx.fills.map((f) => f.style);
        expect(styles).toContain(FRONTIER_COLORS.active);
        expect(styles).toContain(FRONTIER_COLORS.dead);
        expect(styles).toContain(FRONTIER_COLORS.masked);
        expect(styles).toContain("rgb(10,200,30)");
    });

    it("culls cells outside the viewport", () => {
        const vm = createViewModel();
        vm.camera = { x: 0, y: 0, zoom: 20 };
        applyRegion(vm, makeRegion([cellJson([0, 0]), cellJson([500, 500])], []));
        const stats = renderScene(new Recorder(), vm, VP);
        expect(stats.cellsDrawn).toBe(1);
    });

    it("shows labels only when cells are large enough to carry them", () => {
        const vm = createViewModel();
        applyRegion(vm, makeRegion([cellJson([0, 0], "X")], []));
        vm.camera = { x: 0, y: 0, zoom: 6 };
        const small = new Recorder();
        renderScene(small, vm, VP);
        expect(small.texts).toHaveLength(0);
        vm.camera = { x: 0, y: 0, zoom: 30 };
        const big = new Recorder();
        renderScene(big, vm, VP);
        expect(big.texts.map((t) => t.text)).toEqual(["X"]);
    });

    it("gives dead marks precedence over masked on the same location", () => {
        const vm = createViewModel();
        vm.camera = { x: 0, y: 0, zoom: 20 };
        applyRegion(vm, makeRegion([], []));
        vm.dead.add("0,0");
        vm.masked.add("0,0");
        const ctx = new Recorder();
        const stats = renderScene(ctx, vm, VP);
        expect(stats.marksDrawn).toBe(1);
        expect(ctx.fills.map((f) => f.style)).toContain(FRONTIER_COLORS.dead);
        expect(ctx.fills.map((f) => f.style)).not.toContain(FRONTIER_COLORS.masked);
    });

    it("draws only the active plane of a 3-D session", () => {
        const vm = createViewModel();
        vm.camera = { x: 0, y: 0, zoom: 20 };
        vm.status = { dim: 3 } as StatusJson;
        vm.slice = 0;
        applyRegion(vm, makeRegion([cellJson([0, 0, 0]), cellJson([1, 0, 4])], []));
        const stats = renderScene(new Recorder(), vm, VP);
        expect(stats.cellsDrawn).toBe(1);
        vm.slice = 4;
        const stats4 = renderScene(new Recorder(), vm, VP);
        expect(stats4.cellsDrawn).toBe(1);
    });

    it("outlines the hovered cell", () => {
        const vm = createViewModel();
        vm.camera = { x: 0, y: 0, zoom: 20 };
        applyRegion(vm, makeRegion([], []));
        vm.hover = [0, 0];
        const ctx = new Recorder();
        renderScene(ctx, vm, VP);
        expect(ctx.strokes).toHaveLength(1);
    });
});
