import { Transport } from "../src/api.js";

export interface TranscriptEntry {
  method: string;
  url: string;
  body: unknown;
  status: number;
  response: unknown;
}

/**
 * Serves a recorded transcript strictly in order; any request that
 * deviates from the recording (method, URL, or body) throws.  This both
 * replays server responses deterministically and asserts that the UI
 * never issues an un-recorded request — i.e. no client-side mutation.
 */
export class ReplayTransport implements Transport {
  private cursor = 0;

  constructor(private readonly transcript: TranscriptEntry[]) {}

  get consumed(): number {
    return this.cursor;
  }

  async request(method: string, url: string, body?: unknown) {
    const expected = this.transcript[this.cursor];
    if (!expected) {
      throw new Error(`unexpected extra request: ${method} ${url}`);
    }
    const sentBody = body === undefined ? null : body;
    if (
      expected.method !== method ||
      expected.url !== url ||
      JSON.stringify(expected.body) !== JSON.stringify(sentBody)
    ) {
      throw new Error(
        `request mismatch at #${this.cursor}:\n` +
          `  expected ${expected.method} ${expected.url} ${JSON.stringify(expected.body)}\n` +
          `  got      ${method} ${url} ${JSON.stringify(sentBody)}`,
      );
    }
    this.cursor += 1;
    return { status: expected.status, body: expected.response };
  }
}

/** Scripted single-purpose transport for unit tests. */
export class StubTransport implements Transport {
  requests: { method: string; url: string; body?: unknown }[] = [];

  constructor(
    private readonly handler: (
      method: string,
      url: string,
      body?: unknown,
    ) => { status: number; body: unknown },
  ) {}

  async request(method: "GET" | "POST", url: string, body?: unknown) {
    this.requests.push({ method, url, body });
    return this.handler(method, url, body);
  }
}
