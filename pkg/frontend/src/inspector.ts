/** Tile inspector: textual description of the hovered cell or a type. */

import type { CellJson, Pos, TileJson } from "./types.js";

const SIDE_ORDER = ["n", "e", "s", "w", "u", "d"];

const SIDE_NAMES: Record<string, string> = {
    n: "north",
    e: "east",
    s: "south",
    w: "west",
    u: "up",
    d: "down",
};

export function glueLines(tile: TileJson): string[] {
    const lines: string[] = [];
    for (const letter of SIDE_ORDER) {
        const g = tile.glues[letter];
        if (g !== undefined) {
            lines.push(`${SIDE_NAMES[letter]}: ${g.color} (strength ${g.strength})`);
        }
    }
    return lines;
}

/** Lines for an occupied cell: identity, glues, step, coordinates. */
export function describeCell(pos: Pos, cell: CellJson, tile: TileJson | undefined): string[] {
    const lines = [cell.label === "" ? cell.name : `${cell.name} [${cell.label}]`];
    if (tile !== undefined) {
        lines.push(...glueLines(tile));
        if (tile.conc !== "1") {
            lines.push(`concentration ${tile.conc}`);
        }
    }
    lines.push(`attached at step ${cell.step}`);
    lines.push(`at (${pos.join(", ")})`);
    return lines;
}

/** Lines for an empty hovered location. */
export function describeEmpty(pos: Pos, state: "active" | "dead" | "masked" | null): string[] {
    const what =
        state === "active"
            ? "frontier location"
            : state === "dead"
              ? "dead frontier location"
              : state === "masked"
                ? "masked location"
                : "empty";
    return [what, `at (${pos.join(", ")})`];
}
