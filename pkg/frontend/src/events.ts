/** Parsing and polling for the session event stream.
 *
 * The server replays the log tail as text/event-stream frames and then
 * closes, so a plain fetch of the body text is a complete batch; no
 * long-lived EventSource is needed. Each poll passes the cursor from the
 * previous hello frame to pick up where it left off.
 */

import type { SessionEvent } from "./types.js";

/** The one Client method polling needs; kept narrow for tests. */
export interface EventFeed {
    eventText(sid: string, after?: number, coalesce?: number): Promise<string>;
}

export interface EventBatch {
    /** Epoch the server reported in the hello frame. */
    epoch: number;
    /** Cursor to pass as `after` on the next poll. */
    next: number;
    /** Replayed events, hello excluded, in log order. */
    events: SessionEvent[];
}

/** Parse SSE text into JSON events, tolerating \r\n line endings.
 *
 * Only the fields the service emits are honored: `data:` carries one JSON
 * document per frame (multiple data lines concatenate per the SSE spec)
 * and `id:` is informational. Comment lines and blank frames are skipped.
 */
export function parseEventText(text: string): SessionEvent[] {
    const events: SessionEvent[] = [];
    for (const frame of text.split(/\r?\n\r?\n/)) {
        const data: string[] = [];
        for (const line of frame.split(/\r?\n/)) {
            if (line.startsWith("data:")) {
                data.push(line.slice(5).replace(/^ /, ""));
            }
        }
        if (data.length === 0) {
            continue;
        }
        events.push(JSON.parse(data.join("\n")) as SessionEvent);
    }
    return events;
}

/** Fetch one batch of events at the given cursor. */
export async function pollEvents(
    client: EventFeed,
    sid: string,
    after: number,
    coalesce = 1,
): Promise<EventBatch> {
    const text = await client.eventText(sid, after, coalesce);
    const parsed = parseEventText(text);
    const hello = parsed[0];
    if (hello === undefined || hello.kind !== "hello") {
        throw new Error("event stream did not start with a hello frame");
    }
    return { epoch: hello.epoch, next: hello.next, events: parsed.slice(1) };
}
