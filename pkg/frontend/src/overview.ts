/** Overview pane: whole-assembly density map plus click-to-center math. */

import type { Ctx2D } from "./render.js";
import type { OverviewJson } from "./types.js";

export interface OverviewLayout {
    /** Screen pixels per overview bucket. */
    scale: number;
    /** Top-left corner of the drawn grid inside the pane. */
    originX: number;
    originY: number;
}

/** Fit the bucket grid inside a pane, centered, preserving aspect. */
export function layoutOverview(ov: OverviewJson, paneW: number, paneH: number): OverviewLayout {
    const scale = Math.max(1, Math.floor(Math.min(paneW / ov.width, paneH / ov.height)));
    return {
        scale,
        originX: Math.floor((paneW - ov.width * scale) / 2),
        originY: Math.floor((paneH - ov.height * scale) / 2),
    };
}

/** World coordinates of the bucket under a pane click, or null if outside.
 *
 * The bucket row 0 holds the lowest world y, and the pane draws it at the
 * bottom, so pane rows are flipped relative to grid rows.
 */
export function overviewClickToWorld(
    ov: OverviewJson,
    layout: OverviewLayout,
    px: number,
    py: number,
): [number, number] | null {
    const gx = Math.floor((px - layout.originX) / layout.scale);
    const gyScreen = Math.floor((py - layout.originY) / layout.scale);
    if (gx < 0 || gx >= ov.width || gyScreen < 0 || gyScreen >= ov.height) {
        return null;
    }
    const gy = ov.height - 1 - gyScreen;
    const [mins] = ov.box;
    return [
        (mins[0] ?? 0) + gx * ov.cell + (ov.cell - 1) / 2,
        (mins[1] ?? 0) + gy * ov.cell + (ov.cell - 1) / 2,
    ];
}

/** Paint the density map; darker buckets hold more tiles. */
export function renderOverview(ctx: Ctx2D, ov: OverviewJson, paneW: number, paneH: number): OverviewLayout {
    ctx.fillStyle = "#111114";
    ctx.fillRect(0, 0, paneW, paneH);
    const layout = layoutOverview(ov, paneW, paneH);
    const peak = Math.max(1, ...ov.grid.map((row) => Math.max(0, ...row)));
    for (let gy = 0; gy < ov.height; gy++) {
        const row = ov.grid[gy] ?? [];
        const sy = layout.originY + (ov.height - 1 - gy) * layout.scale;
        for (let gx = 0; gx < ov.width; gx++) {
            const count = row[gx] ?? 0;
            if (count === 0) {
                continue;
            }
            const level = Math.round(90 + 165 * (count / peak));
            ctx.fillStyle = `rgb(${level},${level},${Math.min(255, level + 20)})`;
            ctx.fillRect(layout.originX + gx * layout.scale, sy, layout.scale, layout.scale);
        }
    }
    return layout;
}
