/** Box-drawing mask tool: drag state and the control payload it yields.
 *
 * Dragging sweeps out a lattice box; releasing toggles the enclosed
 * locations off (or back on). The server owns the ruling on which of
 * them were eligible; the client only names the box.
 */

import type { Pos } from "./types.js";

export interface BoxDrag {
    anchor: [number, number];
    current: [number, number];
}

export function beginBox(cellX: number, cellY: number): BoxDrag {
    return { anchor: [cellX, cellY], current: [cellX, cellY] };
}

export function updateBox(drag: BoxDrag, cellX: number, cellY: number): void {
    drag.current = [cellX, cellY];
}

/** Normalized lattice box, whichever way the drag traveled. */
export function dragBox(drag: BoxDrag): [Pos, Pos] {
    const [ax, ay] = drag.anchor;
    const [cx, cy] = drag.current;
    return [
        [Math.min(ax, cx), Math.min(ay, cy)],
        [Math.max(ax, cx), Math.max(ay, cy)],
    ];
}

/** Extend a 2-D box with the active slice for 3-D sessions. */
export function boxForDim(box: [Pos, Pos], dim: number, slice: number): [Pos, Pos] {
    if (dim !== 3) {
        return box;
    }
    return [
        [...box[0], slice],
        [...box[1], slice],
    ];
}

export interface MaskPayload {
    action: "mask";
    box: [Pos, Pos];
    off: boolean;
}

export function maskPayload(box: [Pos, Pos], off: boolean): MaskPayload {
    return { action: "mask", box, off };
}
