import { describe, expect, it } from "vitest";

import { describeCell, describeEmpty } from "../src/inspector.js";
import type { CellJson, TileJson } from "../src/types.js";

const CELL: CellJson = { pos: [3, -4], name: "lsb1", label: "1", color: [0, 0, 0], step: 12 };

const TILE: TileJson = {
    name: "lsb1",
    label: "1",
    color: [0, 0, 0],
    conc: "1",
    glues: {
        n: { color: "carry", strength: 2 },
        s: { color: "bit1", strength: 2 },
    },
    dim: 2,
};

describe("describeCell", () => {
    it("lists identity, glues, step, and coordinates", () => {
        const lines = describeCell([3, -4], CELL, TILE);
        expect(lines[0]).toBe("lsb1 [1]");
        expect(lines).toContain("north: carry (strength 2)");
        expect(lines).toContain("south: bit1 (strength 2)");
        expect(lines).toContain("attached at step 12");
        expect(lines).toContain("at (3, -4)");
        expect(lines.join("\n")).not.toContain("east");
    });

    it("mentions concentration only when it differs from 1", () => {
        const heavy = { ...TILE, conc: "3/2" };
        expect(describeCell([0, 0], CELL, heavy)).toContain("concentration 3/2");
        expect(describeCell([0, 0], CELL, TILE).join("\n")).not.toContain("concentration");
    });

    it("degrades gracefully without type details", () => {
        const lines = describeCell([0, 0], { ...CELL, label: "" }, undefined);
        expect(lines[0]).toBe("lsb1");
        expect(lines).toContain("attached at step 12");
    });
});

describe("describeEmpty", () => {
    it("names the frontier state of the hovered location", () => {
        expect(describeEmpty([1, 2], "active")[0]).toBe("frontier location");
        expect(describeEmpty([1, 2], "dead")[0]).toBe("dead frontier location");
        expect(describeEmpty([1, 2], "masked")[0]).toBe("masked location");
        expect(describeEmpty([1, 2], null)[0]).toBe("empty");
        expect(describeEmpty([1, 2], null)).toContain("at (1, 2)");
    });
});
