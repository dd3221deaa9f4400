/** Canvas painting for the assembly viewport.
 *
 * Drawing goes through a minimal 2-D context interface so the painter is
 * testable without a DOM; CanvasRenderingContext2D satisfies it directly.
 * Frontier marks follow the fixed color language: eligible locations
 * blue, dead locations red, masked locations gray.
 */

import { keyPos, worldToScreen } from "./viewmodel.js";
import type { Camera, ViewModel, Viewport } from "./viewmodel.js";

type Paint = string | CanvasGradient | CanvasPattern;

export interface Ctx2D {
    fillStyle: Paint;
    strokeStyle: Paint;
    lineWidth: number;
    font: string;
    textAlign: string;
    textBaseline: string;
    fillRect(x: number, y: number, w: number, h: number): void;
    strokeRect(x: number, y: number, w: number, h: number): void;
    fillText(text: string, x: number, y: number): void;
    beginPath(): void;
    moveTo(x: number, y: number): void;
    lineTo(x: number, y: number): void;
    stroke(): void;
}

export const FRONTIER_COLORS = {
    active: "#3a6ea5",
    dead: "#b03030",
    masked: "#8a8a8a",
} as const;

export const BACKGROUND = "#1b1b1f";
export const GRID_COLOR = "#2e2e34";

export interface RenderStats {
    cellsDrawn: number;
    marksDrawn: number;
}

/** Label text only once cells are large enough to carry it. */
const LABEL_MIN_ZOOM = 14;
const GRID_MIN_ZOOM = 8;

function cssColor(rgb: number[]): string {
    const [r = 0, g = 0, b = 0] = rgb;
    return `rgb(${r},${g},${b})`;
}

function visible(vp: Viewport, sx: number, sy: number, size: number): boolean {
    return sx + size >= 0 && sy + size >= 0 && sx <= vp.width && sy <= vp.height;
}

function drawGrid(ctx: Ctx2D, cam: Camera, vp: Viewport): void {
    ctx.strokeStyle = GRID_COLOR;
    ctx.lineWidth = 1;
    ctx.beginPath();
    const x0 = Math.floor(cam.x - vp.width / 2 / cam.zoom) - 1;
    const x1 = Math.ceil(cam.x + vp.width / 2 / cam.zoom) + 1;
    const y0 = Math.floor(cam.y - vp.height / 2 / cam.zoom) - 1;
    const y1 = Math.ceil(cam.y + vp.height / 2 / cam.zoom) + 1;
    for (let x = x0; x <= x1; x++) {
        const [sx] = worldToScreen(cam, vp, x - 0.5, 0);
        ctx.moveTo(sx, 0);
        ctx.lineTo(sx, vp.height);
    }
    for (let y = y0; y <= y1; y++) {
        const [, sy] = worldToScreen(cam, vp, 0, y - 0.5);
        ctx.moveTo(0, sy);
        ctx.lineTo(vp.width, sy);
    }
    ctx.stroke();
}

/** Paint the viewport; returns how many cells and marks were drawn. */
export function renderScene(ctx: Ctx2D, vm: ViewModel, vp: Viewport): RenderStats {
    const cam = vm.camera;
    const size = cam.zoom;
    ctx.fillStyle = BACKGROUND;
    ctx.fillRect(0, 0, vp.width, vp.height);
    if (size >= GRID_MIN_ZOOM) {
        drawGrid(ctx, cam, vp);
    }
    const stats: RenderStats = { cellsDrawn: 0, marksDrawn: 0 };
    const depth = vm.status?.dim === 3 ? vm.slice : null;
    for (const [key, cell] of vm.cells) {
        const p = keyPos(key);
        if (depth !== null && p[2] !== depth) {
            continue;
        }
        const [sx, sy] = worldToScreen(cam, vp, (p[0] ?? 0) - 0.5, (p[1] ?? 0) + 0.5);
        if (!visible(vp, sx, sy, size)) {
            continue;
        }
        ctx.fillStyle = cssColor(cell.color);
        ctx.fillRect(sx, sy, size, size);
        stats.cellsDrawn += 1;
        if (size >= LABEL_MIN_ZOOM && cell.label !== "") {
            ctx.fillStyle = "#101014";
            ctx.font = `${Math.floor(size * 0.45)}px sans-serif`;
            ctx.textAlign = "center";
            ctx.textBaseline = "middle";
            ctx.fillText(cell.label, sx + size / 2, sy + size / 2);
        }
    }
    for (const group of ["dead", "masked", "active"] as const) {
        const keys = vm[group];
        for (const key of keys) {
            if (vm.cells.has(key)) {
                continue;
            }
            if (group !== "dead" && vm.dead.has(key)) {
                continue;
            }
            if (group === "active" && vm.masked.has(key)) {
                continue;
            }
            const p = keyPos(key);
            if (depth !== null && p[2] !== depth) {
                continue;
            }
            const [sx, sy] = worldToScreen(cam, vp, (p[0] ?? 0) - 0.5, (p[1] ?? 0) + 0.5);
            if (!visible(vp, sx, sy, size)) {
                continue;
            }
            ctx.fillStyle = FRONTIER_COLORS[group];
            const inset = Math.max(1, size * 0.18);
            ctx.fillRect(sx + inset, sy + inset, size - 2 * inset, size - 2 * inset);
            stats.marksDrawn += 1;
        }
    }
    if (vm.hover !== null) {
        const [hx, hy] = [vm.hover[0] ?? 0, vm.hover[1] ?? 0];
        const [sx, sy] = worldToScreen(cam, vp, hx - 0.5, hy + 0.5);
        ctx.strokeStyle = "#e8e8e8";
        ctx.lineWidth = 2;
        ctx.strokeRect(sx, sy, size, size);
    }
    return stats;
}
