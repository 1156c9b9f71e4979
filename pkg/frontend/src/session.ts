/**
 * One enroll/unlock attempt against the service: timing marks,
 * submission, outcome classification, and telemetry with queued retry.
 */

import type { Board } from './board.js';
import type { AttemptEventPayload, LayoutManifest, VerifyResponse } from './types.js';

export type Mode = 'enroll' | 'unlock';

export interface SubmitOutcome {
  kind: 'enrolled' | 'accepted' | 'rejected' | 'locked' | 'error';
  remaining?: number;
  retryAfter?: number;
  detail?: string;
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async post(path: string, body: unknown): Promise<{ status: number; body: any }> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
    return { status: res.status, body: await res.json().catch(() => ({})) };
  }

  async layout(): Promise<LayoutManifest> {
    const res = await this.fetchImpl(`${this.baseUrl}/api/layout`);
    if (!res.ok) throw new Error(`layout fetch failed: ${res.status}`);
    return (await res.json()) as LayoutManifest;
  }

  enroll(user: string, canonical: string) {
    return this.post('/api/enroll', { user, canonical });
  }

  verify(user: string, canonical: string) {
    return this.post('/api/verify', { user, canonical });
  }

  postEvents(records: AttemptEventPayload[]) {
    return this.post('/api/events', { records });
  }
}

export interface SessionOptions {
  pid?: string;
  session?: number;
  now?: () => number;
}

export class UiSession {
  readyAt: number | null = null;
  firstTouchAt: number | null = null;
  completedAt: number | null = null;

  private readonly pid: string;
  private readonly sessionNo: number;
  private readonly now: () => number;
  private eventQueue: AttemptEventPayload[] = [];
  private eventCounter = 0;

  constructor(
    readonly api: ApiClient,
    readonly board: Board,
    readonly mode: Mode,
    opts: SessionOptions = {},
  ) {
    this.pid = opts.pid ?? 'web';
    this.sessionNo = opts.session ?? 1;
    this.now = opts.now ?? Date.now;
  }

  markReady(): void {
    this.readyAt = this.now();
  }

  markFirstTouch(): void {
    if (this.firstTouchAt === null) this.firstTouchAt = this.now();
  }

  get pendingEvents(): number {
    return this.eventQueue.length;
  }

  async submit(user: string): Promise<SubmitOutcome> {
    const canonical = this.board.canonical;
    const minMoves = this.board.layout.policy.min_moves;
    if (this.board.committed.length < minMoves) {
      return { kind: 'error', detail: `need at least ${minMoves} moves` };
    }
    this.completedAt = this.now();
    let outcome: SubmitOutcome;
    try {
      if (this.mode === 'enroll') {
        const { status, body } = await this.api.enroll(user, canonical);
        outcome =
          status === 200 && body.ok
            ? { kind: 'enrolled' }
            : { kind: 'error', detail: body.detail ?? `enroll failed (${status})` };
      } else {
        const { status, body } = await this.api.verify(user, canonical);
        const v = body as VerifyResponse;
        if (status === 423) {
          outcome = { kind: 'locked', retryAfter: v.retry_after ?? 0, remaining: 0 };
        } else if (status === 200 && v.ok) {
          outcome = { kind: 'accepted', remaining: v.remaining };
        } else if (status === 200) {
          outcome = { kind: 'rejected', remaining: v.remaining };
        } else {
          outcome = { kind: 'error', detail: (body as any).detail ?? `verify failed (${status})` };
        }
      }
    } catch (err) {
      outcome = { kind: 'error', detail: String(err) };
    }
    this.queueAttemptEvent(outcome.kind === 'enrolled' || outcome.kind === 'accepted');
    await this.flushEvents();
    return outcome;
  }

  private queueAttemptEvent(ok: boolean): void {
    this.eventCounter += 1;
    // globally unique so the service's idempotent storage never conflates
    // attempts from different sessions
    const unique =
      typeof crypto !== 'undefined' && 'randomUUID' in crypto
        ? crypto.randomUUID()
        : `${Date.now()}-${Math.random().toString(36).slice(2)}`;
    this.eventQueue.push({
      pid: this.pid,
      tech: 'SEMANTIC',
      session: this.sessionNo,
      ready: this.readyAt,
      touch: this.firstTouchAt,
      done: ok ? this.completedAt : null,
      ok,
      id: `${this.pid}-${this.eventCounter}-${unique}`,
    });
  }

  /** Post queued telemetry; on network failure the queue is kept for retry. */
  async flushEvents(): Promise<boolean> {
    if (this.eventQueue.length === 0) return true;
    try {
      const { status } = await this.api.postEvents(this.eventQueue);
      if (status === 200) {
        this.eventQueue = [];
        return true;
      }
    } catch {
      // network failure: keep the queue, caller retries later
    }
    return false;
  }
}

/** Retry wrapper for the initial layout fetch; surfaces failures to a banner. */
export async function fetchLayoutWithRetry(
  api: ApiClient,
  attempts: number,
  onRetry?: (attempt: number, error: unknown) => void,
  delayMs = 500,
): Promise<LayoutManifest> {
  let lastError: unknown;
  for (let i = 1; i <= attempts; i++) {
    try {
      return await api.layout();
    } catch (err) {
      lastError = err;
      onRetry?.(i, err);
      if (i < attempts) await new Promise((r) => setTimeout(r, delayMs));
    }
  }
  throw lastError;
}
