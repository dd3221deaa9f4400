import { describe, expect, it } from "vitest";

import { breakpointSpecs, describeRunOutcome, describeStepOutcome } from "../src/controls.js";
import type { RunResultJson, StatusJson, StepResultJson } from "../src/types.js";

const STATUS = { step_counter: 7 } as StatusJson;

function runResult(overrides: Partial<RunResultJson>): RunResultJson {
    return { outcome: "budget", steps: 0, breakpoint: null, reason: "", status: STATUS, ...overrides };
}

function stepResult(overrides: Partial<StepResultJson>): StepResultJson {
    return { outcome: "placed", stepped: true, placements: [], removed: [], diagnostics: [], status: STATUS, ...overrides };
}

describe("breakpointSpecs", () => {
    it("builds specs from the filled-in fields only", () => {
        expect(breakpointSpecs({ budget: 10, breakStep: null, breakType: "", running: false })).toEqual([]);
        expect(breakpointSpecs({ budget: 10, breakStep: 25, breakType: "hub", running: false })).toEqual([
            { kind: "step-count", n: 25 },
            { kind: "type", name: "hub" },
        ]);
    });

    it("ignores nonpositive step counts", () => {
        expect(breakpointSpecs({ budget: 1, breakStep: 0, breakType: "", running: false })).toEqual([]);
    });
});

describe("describeRunOutcome", () => {
    it("reports NoEligibleFrontier when the run halts on masked or dead locations", () => {
        const msg = describeRunOutcome(
            runResult({ outcome: "halted", reason: "every eligible location is masked" }),
        );
        expect(msg).toContain("NoEligibleFrontier");
        expect(msg).toContain("masked");
    });

    it("names the breakpoint that fired", () => {
        const msg = describeRunOutcome(
            runResult({ outcome: "breakpoint", steps: 12, breakpoint: "step-count=12" }),
        );
        expect(msg).toContain("step-count=12");
        expect(msg).toContain("12 steps");
    });

    it("covers budget and terminal endings", () => {
        expect(describeRunOutcome(runResult({ outcome: "budget", steps: 50 }))).toContain("50");
        expect(describeRunOutcome(runResult({ outcome: "terminal", steps: 3 }))).toContain("terminal");
    });
});

describe("describeStepOutcome", () => {
    it("names a single placement", () => {
        const msg = describeStepOutcome(
            stepResult({
                placements: [{ pos: [2, 3], name: "c0", label: "", color: [0, 0, 0], step: 8 }],
            }),
        );
        expect(msg).toContain("c0");
        expect(msg).toContain("(2, 3)");
    });

    it("counts a parallel wave", () => {
        const cells = [
            { pos: [0, 1], name: "a", label: "", color: [0, 0, 0], step: 1 },
            { pos: [1, 0], name: "b", label: "", color: [0, 0, 0], step: 1 },
        ];
        expect(describeStepOutcome(stepResult({ placements: cells }))).toContain("2 tiles");
    });

    it("reports NoEligibleFrontier on a blocked step", () => {
        expect(describeStepOutcome(stepResult({ outcome: "no-eligible-frontier", stepped: false }))).toContain(
            "NoEligibleFrontier",
        );
    });

    it("reports undo with the step it landed on", () => {
        expect(describeStepOutcome(stepResult({ outcome: "undone" }))).toContain("step 7");
    });
});
