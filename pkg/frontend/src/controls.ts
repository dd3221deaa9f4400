/** Run/step controls: breakpoint payloads and outcome messages. */

import type { BreakpointSpec, RunResultJson, StepResultJson } from "./types.js";
import type { RunControls } from "./viewmodel.js";

/** Breakpoint specs for the current control panel state. */
export function breakpointSpecs(controls: RunControls): BreakpointSpec[] {
    const specs: BreakpointSpec[] = [];
    if (controls.breakStep !== null && controls.breakStep >= 1) {
        specs.push({ kind: "step-count", n: controls.breakStep });
    }
    if (controls.breakType !== "") {
        specs.push({ kind: "type", name: controls.breakType });
    }
    return specs;
}

/** Status-line message for a finished run. */
export function describeRunOutcome(res: RunResultJson): string {
    switch (res.outcome) {
        case "budget":
            return `ran ${res.steps} steps (budget spent)`;
        case "terminal":
            return `terminal after ${res.steps} steps: nothing can attach anywhere`;
        case "breakpoint":
            return `breakpoint ${res.breakpoint ?? ""} hit after ${res.steps} steps`;
        case "halted":
            return `NoEligibleFrontier after ${res.steps} steps: ${res.reason}`;
    }
}

/** Status-line message for a single step or undo. */
export function describeStepOutcome(res: StepResultJson): string {
    switch (res.outcome) {
        case "placed": {
            const n = res.placements.length;
            return n === 1
                ? `placed ${res.placements[0]?.name ?? "?"} at (${res.placements[0]?.pos.join(", ") ?? ""})`
                : `placed ${n} tiles`;
        }
        case "no-eligible-frontier":
            return "NoEligibleFrontier: every open location is dead or masked";
        case "terminal":
            return "terminal: nothing can attach anywhere";
        case "undone":
            return `undid one step, back at step ${res.status.step_counter}`;
    }
}
