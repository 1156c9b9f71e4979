/**
 * Sticky-snap candidate search.
 *
 * The rule is configuration received from the server (radius via the
 * layout manifest) and mirrors the engine exactly: candidates are the
 * free side cells of every placed icon; the nearest within the radius
 * wins, ties breaking by smaller anchor ordinal, then side order
 * L < T < R < B.  Positions are in cell units; the cell (col, row) has
 * its center at (col + 0.5, row + 0.5).
 */

import { SIDES, SIDE_OFFSET, type SideCode } from './types.js';

export interface PlacedIcon {
  id: string;
  ordinal: number;
}

export type Occupancy = Map<string, PlacedIcon>; // "col,row" -> icon

export function cellKey(col: number, row: number): string {
  return `${col},${row}`;
}

export function parseCellKey(key: string): [number, number] {
  const [c, r] = key.split(',').map(Number);
  return [c, r];
}

export interface SnapCandidate {
  anchor: PlacedIcon;
  side: SideCode;
  cell: [number, number];
  distance: number;
}

export function nearestCandidate(
  pos: [number, number],
  occupancy: Occupancy,
  cols: number,
  rows: number,
  radius: number,
): SnapCandidate | null {
  let best: SnapCandidate | null = null;
  let bestKey: [number, number, number] | null = null;
  for (const [key, anchor] of occupancy) {
    const [col, row] = parseCellKey(key);
    for (let s = 0; s < SIDES.length; s++) {
      const side = SIDES[s];
      const [dc, dr] = SIDE_OFFSET[side];
      const target: [number, number] = [col + dc, row + dr];
      if (target[0] < 0 || target[0] >= cols || target[1] < 0 || target[1] >= rows) continue;
      if (occupancy.has(cellKey(target[0], target[1]))) continue;
      const dx = pos[0] - (target[0] + 0.5);
      const dy = pos[1] - (target[1] + 0.5);
      const distance = Math.hypot(dx, dy);
      if (distance > radius) continue;
      const key3: [number, number, number] = [distance, anchor.ordinal, s];
      if (
        bestKey === null ||
        key3[0] < bestKey[0] ||
        (key3[0] === bestKey[0] &&
          (key3[1] < bestKey[1] || (key3[1] === bestKey[1] && key3[2] < bestKey[2])))
      ) {
        bestKey = key3;
        best = { anchor, side, cell: target, distance };
      }
    }
  }
  return best;
}
