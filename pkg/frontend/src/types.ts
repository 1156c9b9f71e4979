/** Wire types shared with the authentication service. */

export interface IconEntry {
  id: string;
  ordinal: number;
  col: number;
  row: number;
}

export interface LayoutManifest {
  grid: { cols: number; rows: number };
  icons: IconEntry[];
  snap: { radius: number; tie_break: string[] };
  policy: { min_moves: number; max_failures: number; lockout_seconds: number };
  token?: { token: string; issued_at: number; technique: string };
}

/** Side codes in tie-break order: left, top, right, bottom. */
export const SIDES = ['L', 'T', 'R', 'B'] as const;
export type SideCode = (typeof SIDES)[number];

export const SIDE_OFFSET: Record<SideCode, [number, number]> = {
  L: [-1, 0],
  T: [0, -1],
  R: [1, 0],
  B: [0, 1],
};

export interface CommittedMove {
  moved: string;
  anchor: string;
  side: SideCode;
}

export function moveToken(move: CommittedMove): string {
  return `${move.moved}>${move.anchor}:${move.side}`;
}

export function canonicalOf(moves: CommittedMove[]): string {
  return moves.map(moveToken).join('|');
}

/** Recorded pointer activity, in cell units, one JSON object per line. */
export interface DragEventRecord {
  t: number;
  ev: 'begin' | 'move' | 'end';
  icon?: string;
  x: number;
  y: number;
}

export function eventsToJsonl(events: DragEventRecord[]): string {
  return events.map((e) => JSON.stringify(e)).join('\n') + '\n';
}

export interface VerifyResponse {
  ok: boolean;
  locked: boolean;
  remaining: number;
  retry_after?: number;
  error?: string;
}

export interface AttemptEventPayload {
  pid: string;
  tech: 'SEMANTIC';
  session: number;
  ready: number | null;
  touch: number | null;
  done: number | null;
  ok: boolean;
  id?: string;
}
