/** Thin typed client for the session service.
 *
 * Every method maps to one endpoint and returns the parsed JSON body.
 * The fetch implementation is injectable so tests can run without a network.
 */

import type {
    BreakpointSpec,
    EditOp,
    EditResultJson,
    OverviewJson,
    Pos,
    RegionJson,
    RunResultJson,
    StatusJson,
    StepResultJson,
    TileJson,
    TilesetJson,
    UsageJson,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
    constructor(
        readonly status: number,
        readonly code: string,
        detail: string,
    ) {
        super(detail);
        this.name = "ApiError";
    }
}

async function decode<T>(resp: Response): Promise<T> {
    if (resp.status === 204) {
        return undefined as T;
    }
    const text = await resp.text();
    let body: unknown = null;
    try {
        body = text === "" ? null : JSON.parse(text);
    } catch {
        body = null;
    }
    if (!resp.ok) {
        const err = body as { error?: string; detail?: string } | null;
        throw new ApiError(
            resp.status,
            err?.error ?? "http-error",
            err?.detail ?? `HTTP ${resp.status}`,
        );
    }
    return body as T;
}

export class Client {
    private readonly base: string;
    private readonly fetchFn: FetchLike;

    constructor(base = "", fetchFn?: FetchLike) {
        this.base = base.replace(/\/$/, "");
        this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
    }

    private url(path: string): string {
        return `${this.base}/api/v1${path}`;
    }

    private async get<T>(path: string): Promise<T> {
        return decode<T>(await this.fetchFn(this.url(path)));
    }

    private async send<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method };
        if (body !== undefined) {
            init.headers = { "content-type": "application/json" };
            init.body = JSON.stringify(body);
        }
        return decode<T>(await this.fetchFn(this.url(path), init));
    }

    // -- sessions -----------------------------------------------------------

    createSession(system: string, rngSeed?: number): Promise<StatusJson> {
        return this.send("POST", "/sessions", { system, rng_seed: rngSeed ?? null });
    }

    status(sid: string): Promise<StatusJson> {
        return this.get(`/sessions/${sid}`);
    }

    deleteSession(sid: string): Promise<void> {
        return this.send("DELETE", `/sessions/${sid}`);
    }

    loadSystem(sid: string, system: string, rngSeed?: number): Promise<StatusJson> {
        return this.send("PUT", `/sessions/${sid}/system`, {
            system,
            rng_seed: rngSeed ?? null,
        });
    }

    async systemDocument(sid: string): Promise<string> {
        const body = await this.get<{ system: string }>(`/sessions/${sid}/system`);
        return body.system;
    }

    // -- control ------------------------------------------------------------

    step(sid: string): Promise<StepResultJson> {
        return this.send("POST", `/sessions/${sid}/control`, { action: "step" });
    }

    stepBack(sid: string): Promise<StepResultJson> {
        return this.send("POST", `/sessions/${sid}/control`, { action: "step_back" });
    }

    run(sid: string, budget: number, breakpoints?: BreakpointSpec[]): Promise<RunResultJson> {
        return this.send("POST", `/sessions/${sid}/control`, {
            action: "run",
            budget,
            breakpoints: breakpoints ?? [],
        });
    }

    reset(sid: string, rngSeed?: number): Promise<StatusJson> {
        return this.send("POST", `/sessions/${sid}/control`, {
            action: "reset",
            rng_seed: rngSeed ?? null,
        });
    }

    setMode(sid: string, mode: "single" | "parallel"): Promise<StatusJson> {
        return this.send("POST", `/sessions/${sid}/control`, {
            action: "mode",
            value: mode,
        });
    }

    maskBox(sid: string, box: [Pos, Pos], off = true): Promise<StatusJson> {
        return this.send("POST", `/sessions/${sid}/control`, {
            action: "mask",
            box,
            off,
        });
    }

    maskCells(sid: string, cells: Pos[], off = true): Promise<StatusJson> {
        return this.send("POST", `/sessions/${sid}/control`, {
            action: "mask",
            cells,
            off,
        });
    }

    placeSeedTile(sid: string, pos: Pos, type: string): Promise<StatusJson> {
        return this.send("POST", `/sessions/${sid}/control`, {
            action: "place_seed_tile",
            pos,
            type,
        });
    }

    removeSeedTile(sid: string, pos: Pos): Promise<StatusJson> {
        return this.send("POST", `/sessions/${sid}/control`, {
            action: "remove_seed_tile",
            pos,
        });
    }

    // -- views --------------------------------------------------------------

    region(sid: string, lo: Pos, hi: Pos): Promise<RegionJson> {
        const q = new URLSearchParams({
            x0: String(lo[0]),
            y0: String(lo[1]),
            x1: String(hi[0]),
            y1: String(hi[1]),
        });
        if (lo.length === 3) {
            q.set("z0", String(lo[2]));
            q.set("z1", String(hi[2]));
        }
        return this.get(`/sessions/${sid}/region?${q}`);
    }

    overview(sid: string, maxSize = 64): Promise<OverviewJson> {
        return this.get(`/sessions/${sid}/overview?max_size=${maxSize}`);
    }

    // -- tile-set editing -----------------------------------------------------

    tileset(sid: string): Promise<TilesetJson> {
        return this.get(`/sessions/${sid}/tileset`);
    }

    editTileset(sid: string, ops: EditOp[]): Promise<EditResultJson> {
        return this.send("POST", `/sessions/${sid}/tileset/edits`, { ops });
    }

    commitTileset(sid: string): Promise<StatusJson> {
        return this.send("POST", `/sessions/${sid}/tileset/commit`);
    }

    searchTypes(sid: string, q: string): Promise<{ types: string[] }> {
        return this.get(`/sessions/${sid}/tileset/query?op=search&q=${encodeURIComponent(q)}`);
    }

    binders(sid: string, type: string, side: string): Promise<{ types: string[] }> {
        const q = new URLSearchParams({ op: "binders", type, side });
        return this.get(`/sessions/${sid}/tileset/query?${q}`);
    }

    usage(sid: string): Promise<UsageJson> {
        return this.get(`/sessions/${sid}/tileset/query?op=usage`);
    }

    duplicates(sid: string): Promise<{ groups: string[][] }> {
        return this.get(`/sessions/${sid}/tileset/query?op=duplicates`);
    }

    rotate(sid: string, type: string, turns = 1, axis = "z"): Promise<{ tile: TileJson }> {
        const q = new URLSearchParams({ op: "rotate", type, turns: String(turns), axis });
        return this.get(`/sessions/${sid}/tileset/query?${q}`);
    }

    // -- events ---------------------------------------------------------------

    /** Raw SSE text of the replay stream; the server closes after the tail. */
    async eventText(sid: string, after = 0, coalesce = 1): Promise<string> {
        const resp = await this.fetchFn(
            this.url(`/sessions/${sid}/events?after=${after}&coalesce=${coalesce}`),
        );
        if (!resp.ok) {
            return decode(resp);
        }
        return resp.text();
    }
}
