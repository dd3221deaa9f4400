/** Wire shapes for the session service JSON API (see docs/api.md). */

/** Lattice coordinate; length 2 or 3 depending on the session dimension. */
export type Pos = number[];

/** One occupied lattice cell as reported by snapshots and placed events. */
export interface CellJson {
    pos: Pos;
    name: string;
    label: string;
    color: number[];
    step: number;
}

export type FrontierState = "active" | "dead" | "masked";

export interface FrontierMarkJson {
    pos: Pos;
    state: FrontierState;
}

export interface DiagnosticJson {
    kind: string;
    step: number;
    pos: Pos | null;
    type: string | null;
    candidates: string[];
    strength: number;
}

export interface StatusJson {
    session: string;
    epoch: number;
    step_counter: number;
    tiles: number;
    seed_tiles: number;
    frontier: number;
    dead: number;
    masked: number;
    temperature: number;
    mode: "single" | "parallel";
    concentrations: boolean;
    dim: number;
    rng_seed: number;
    status: "idle" | "terminal";
    diagnostics: number;
    history: number;
    dirty_tileset: boolean;
    digest: string;
}

export interface StepResultJson {
    outcome: "placed" | "no-eligible-frontier" | "terminal" | "undone";
    stepped: boolean;
    placements: CellJson[];
    removed: { pos: Pos }[];
    diagnostics: DiagnosticJson[];
    status: StatusJson;
}

export interface RunResultJson {
    outcome: "budget" | "terminal" | "halted" | "breakpoint";
    steps: number;
    /** Human form of the breakpoint that fired, e.g. "step-count=50". */
    breakpoint: string | null;
    reason: string;
    status: StatusJson;
}

export type BreakpointSpec =
    | { kind: "step-count"; n: number }
    | { kind: "location"; pos: Pos }
    | { kind: "type"; name: string };

export interface RegionJson {
    epoch: number;
    step_counter: number;
    box: [Pos, Pos];
    cells: CellJson[];
    frontier: FrontierMarkJson[];
}

export interface OverviewJson {
    box: [Pos, Pos];
    /** Lattice cells per overview bucket along each axis. */
    cell: number;
    width: number;
    height: number;
    /** Row-major bucket occupancy counts, grid[y][x]. */
    grid: number[][];
    tiles: number;
}

export interface GlueJson {
    color: string;
    strength: number;
}

export interface TileJson {
    name: string;
    label: string;
    color: number[];
    /** Concentration as a fraction string, "3" or "1/2". */
    conc: string;
    /** Keyed by side letter; sides with strength 0 are omitted. */
    glues: Record<string, GlueJson>;
    dim: number;
}

export interface TilesetJson {
    dim: number;
    dirty: boolean;
    editor: TileJson[];
    simulator: TileJson[];
}

export type EditOp =
    | { op: "add"; tile: TileJson }
    | { op: "remove"; name: string }
    | { op: "modify"; name: string; tile: Partial<TileJson> }
    | { op: "reorder"; name: string; index: number };

export interface EditResultJson {
    dirty: boolean;
    editor: TileJson[];
}

export interface UsageJson {
    counts: Record<string, number>;
    tiles: number;
}

/** Events replayed by the SSE endpoint, one JSON document per frame. */
export type SessionEvent =
    | { kind: "hello"; epoch: number; next: number }
    | { kind: "placed"; id: number; step: number; cells: CellJson[] }
    | { kind: "removed"; id: number; step: number; cells: { pos: Pos }[] }
    | {
          kind: "frontier-delta";
          id: number;
          from_step: number;
          to_step: number;
          added: Pos[];
          removed: Pos[];
          dead_added: Pos[];
          dead_removed: Pos[];
          masked_added: Pos[];
          masked_removed: Pos[];
      }
    | { kind: "diagnostic"; id: number; step: number; diagnostic: DiagnosticJson }
    | {
          kind: "run-ended";
          id: number;
          step: number;
          outcome: string;
          steps: number;
          breakpoint: string | null;
          reason: string;
      }
    | { kind: "reset"; id: number; epoch: number }
    | { kind: "tileset-committed"; id: number; epoch: number };

export interface ErrorJson {
    error: string;
    detail: string;
}
