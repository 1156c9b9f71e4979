/**
 * Interactive lock-screen board.
 *
 * Keeps a local mirror of the placement state (occupancy, committed
 * moves) and records every drag as replayable events in cell units.
 * The imperative beginDrag/moveDrag/endDrag API carries all semantics;
 * pointer listeners are a thin pixel-to-cell adapter around it, so a
 * recorded session replays identically through the server-side engine.
 */

import { cellKey, nearestCandidate, parseCellKey, type Occupancy, type PlacedIcon, type SnapCandidate } from './snap.js';
import {
  canonicalOf,
  eventsToJsonl,
  type CommittedMove,
  type DragEventRecord,
  type LayoutManifest,
} from './types.js';

const GLYPHS: Record<string, string> = {
  cup: '☕',
  person: '\u{1F464}',
  board: '\u{1F4CB}',
  bottle: '\u{1F37C}',
  cheese: '\u{1F9C0}',
  leaf: '\u{1F343}',
};

const PLACEHOLDER_GLYPH = '◇';
const GLIDE_MS = 120;

export interface BoardOptions {
  now?: () => number;
  /** Pixel rect of the board, injectable for tests. */
  metrics?: () => { left: number; top: number; width: number; height: number };
  onFirstTouch?: () => void;
  onCommit?: (move: CommittedMove) => void;
}

interface ActiveDrag {
  icon: PlacedIcon;
  origin: [number, number];
  element: HTMLElement | null;
}

export class Board {
  readonly layout: LayoutManifest;
  readonly cols: number;
  readonly rows: number;
  readonly radius: number;

  occupancy: Occupancy = new Map();
  committed: CommittedMove[] = [];
  events: DragEventRecord[] = [];
  active: ActiveDrag | null = null;

  private readonly container: HTMLElement | null;
  private readonly opts: BoardOptions;
  private readonly startedAt: number;
  private readonly iconEls = new Map<string, HTMLElement>();
  private ghostEl: HTMLElement | null = null;
  private touched = false;

  constructor(container: HTMLElement | null, layout: LayoutManifest, opts: BoardOptions = {}) {
    this.container = container;
    this.layout = layout;
    this.cols = layout.grid.cols;
    this.rows = layout.grid.rows;
    this.radius = layout.snap.radius;
    this.opts = opts;
    this.startedAt = this.now();
    this.render();
    this.reset();
  }

  private now(): number {
    return this.opts.now ? this.opts.now() : Date.now();
  }

  private stamp(): number {
    return this.now() - this.startedAt;
  }

  get canonical(): string {
    return canonicalOf(this.committed);
  }

  recordedJsonl(): string {
    return eventsToJsonl(this.events);
  }

  reset(): void {
    this.occupancy = new Map();
    for (const icon of this.layout.icons) {
      this.occupancy.set(cellKey(icon.col, icon.row), { id: icon.id, ordinal: icon.ordinal });
    }
    this.committed = [];
    this.events = [];
    this.active = null;
    this.clearHighlight();
    for (const icon of this.layout.icons) {
      this.placeElement(icon.id, [icon.col, icon.row], false);
    }
  }

  cellOf(iconId: string): [number, number] {
    for (const [key, icon] of this.occupancy) {
      if (icon.id === iconId) return parseCellKey(key);
    }
    throw new Error(`icon ${iconId} is not placed`);
  }

  beginDrag(iconId: string): void {
    if (this.active) throw new Error('drag already in progress');
    const cell = this.cellOf(iconId);
    const icon = this.occupancy.get(cellKey(cell[0], cell[1]))!;
    this.occupancy.delete(cellKey(cell[0], cell[1]));
    this.active = { icon, origin: cell, element: this.iconEls.get(iconId) ?? null };
    this.active.element?.classList.add('dragging');
    this.events.push({ t: this.stamp(), ev: 'begin', icon: iconId, x: cell[0] + 0.5, y: cell[1] + 0.5 });
    if (!this.touched) {
      this.touched = true;
      this.opts.onFirstTouch?.();
    }
  }

  moveDrag(x: number, y: number): SnapCandidate | null {
    if (!this.active) throw new Error('no drag in progress');
    this.events.push({ t: this.stamp(), ev: 'move', x, y });
    this.positionElementAt(this.active.element, x, y);
    const candidate = nearestCandidate([x, y], this.occupancy, this.cols, this.rows, this.radius);
    this.highlight(candidate);
    return candidate;
  }

  endDrag(x: number, y: number): CommittedMove | null {
    if (!this.active) throw new Error('no drag in progress');
    const drag = this.active;
    this.active = null;
    this.events.push({ t: this.stamp(), ev: 'end', x, y });
    const candidate = nearestCandidate([x, y], this.occupancy, this.cols, this.rows, this.radius);
    this.clearHighlight();
    drag.element?.classList.remove('dragging');
    if (!candidate) {
      this.occupancy.set(cellKey(drag.origin[0], drag.origin[1]), drag.icon);
      this.placeElement(drag.icon.id, drag.origin, true);
      return null;
    }
    this.occupancy.set(cellKey(candidate.cell[0], candidate.cell[1]), drag.icon);
    const move: CommittedMove = { moved: drag.icon.id, anchor: candidate.anchor.id, side: candidate.side };
    this.committed.push(move);
    this.placeElement(drag.icon.id, candidate.cell, true);
    this.opts.onCommit?.(move);
    return move;
  }

  // --- DOM ---------------------------------------------------------------

  private render(): void {
    if (!this.container) return;
    this.container.classList.add('semlock-board');
    this.container.style.setProperty('--cols', String(this.cols));
    this.container.style.setProperty('--rows', String(this.rows));
    this.container.innerHTML = '';
    this.ghostEl = document.createElement('div');
    this.ghostEl.className = 'snap-ghost';
    this.ghostEl.hidden = true;
    this.container.appendChild(this.ghostEl);
    for (const icon of this.layout.icons) {
      const el = document.createElement('div');
      el.className = 'icon';
      el.dataset.icon = icon.id;
      el.textContent = GLYPHS[icon.id] ?? PLACEHOLDER_GLYPH;
      el.title = icon.id;
      this.container.appendChild(el);
      this.iconEls.set(icon.id, el);
    }
    this.attachPointers();
  }

  private placeElement(iconId: string, cell: [number, number], glide: boolean): void {
    const el = this.iconEls.get(iconId);
    if (!el) return;
    el.style.transition = glide ? `left ${GLIDE_MS}ms ease-out, top ${GLIDE_MS}ms ease-out` : 'none';
    el.style.left = `${(cell[0] / this.cols) * 100}%`;
    el.style.top = `${(cell[1] / this.rows) * 100}%`;
  }

  private positionElementAt(el: HTMLElement | null, x: number, y: number): void {
    if (!el) return;
    el.style.transition = 'none';
    el.style.left = `${((x - 0.5) / this.cols) * 100}%`;
    el.style.top = `${((y - 0.5) / this.rows) * 100}%`;
  }

  private highlight(candidate: SnapCandidate | null): void {
    this.clearHighlight();
    if (!candidate || !this.container) return;
    const anchorEl = this.iconEls.get(candidate.anchor.id);
    anchorEl?.classList.add('snap-anchor');
    if (this.ghostEl) {
      this.ghostEl.hidden = false;
      this.ghostEl.dataset.side = candidate.side;
      this.ghostEl.style.left = `${(candidate.cell[0] / this.cols) * 100}%`;
      this.ghostEl.style.top = `${(candidate.cell[1] / this.rows) * 100}%`;
    }
  }

  private clearHighlight(): void {
    for (const el of this.iconEls.values()) el.classList.remove('snap-anchor');
    if (this.ghostEl) this.ghostEl.hidden = true;
  }

  private metrics(): { left: number; top: number; width: number; height: number } {
    if (this.opts.metrics) return this.opts.metrics();
    const rect = this.container!.getBoundingClientRect();
    return { left: rect.left, top: rect.top, width: rect.width, height: rect.height };
  }

  pixelToCell(clientX: number, clientY: number): [number, number] {
    const m = this.metrics();
    return [((clientX - m.left) / m.width) * this.cols, ((clientY - m.top) / m.height) * this.rows];
  }

  private attachPointers(): void {
    if (!this.container) return;
    for (const [iconId, el] of this.iconEls) {
      el.addEventListener('pointerdown', (ev) => {
        if (this.active) return;
        ev.preventDefault?.();
        this.beginDrag(iconId);
      });
    }
    this.container.addEventListener('pointermove', (ev) => {
      if (!this.active) return;
      const p = ev as PointerEvent;
      const [x, y] = this.pixelToCell(p.clientX, p.clientY);
      this.moveDrag(x, y);
    });
    this.container.addEventListener('pointerup', (ev) => {
      if (!this.active) return;
      const p = ev as PointerEvent;
      const [x, y] = this.pixelToCell(p.clientX, p.clientY);
      this.endDrag(x, y);
    });
  }
}
