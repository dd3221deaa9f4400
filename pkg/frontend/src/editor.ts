/** Tile-set editor helpers: edit-op payloads and highlight sets.
 *
 * The editor panel works against the server's editor copy of the tile
 * set, which is independent of the simulator's copy until commit; edits
 * survive simulation resets for the same reason. The modify op replaces
 * the whole tile, so callers send the complete updated record, not a
 * sparse patch.
 */

import type { EditOp, TileJson } from "./types.js";

export function sideLetters(dim: number): string[] {
    return dim === 3 ? ["n", "e", "s", "w", "u", "d"] : ["n", "e", "s", "w"];
}

export function blankTile(name: string, dim: number): TileJson {
    return { name, label: "", color: [204, 204, 204], conc: "1", glues: {}, dim };
}

export function addOp(tile: TileJson): EditOp {
    return { op: "add", tile };
}

export function removeOp(name: string): EditOp {
    return { op: "remove", name };
}

/** Replace a tile wholesale; `tile` must carry every surviving field. */
export function modifyOp(name: string, tile: TileJson): EditOp {
    return { op: "modify", name, tile };
}

/** Drop a tile at a list row; the server pops it first, so the target
 * row is the insert index whichever direction the drag travels. */
export function reorderOp(name: string, index: number): EditOp {
    return { op: "reorder", name, index };
}

/** Copy a tile with one glue changed; empty color clears the side. */
export function withGlue(tile: TileJson, side: string, color: string, strength: number): TileJson {
    const glues = { ...tile.glues };
    if (color === "" || strength < 1) {
        delete glues[side];
    } else {
        glues[side] = { color, strength };
    }
    return { ...tile, glues };
}

/** Type names never placed in the current assembly. */
export function unusedTypes(counts: Record<string, number>): Set<string> {
    const out = new Set<string>();
    for (const [name, n] of Object.entries(counts)) {
        if (n === 0) {
            out.add(name);
        }
    }
    return out;
}

/** Map each type name to its equivalence-group index for highlighting. */
export function duplicateIndex(groups: string[][]): Map<string, number> {
    const out = new Map<string, number>();
    groups.forEach((group, i) => {
        for (const name of group) {
            out.set(name, i);
        }
    });
    return out;
}
