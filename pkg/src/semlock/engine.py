"""Deterministic drag/snap state machine for interactive password entry.

Positions are continuous canvas coordinates in cell units; the cell at
(col, row) spans [col, col+1) x [row, row+1) and has its center at
(col + 0.5, row + 0.5).  While an icon is being dragged its cell is
vacated, so its own former cell is a legal snap target.  Any placed icon
can serve as an anchor, including icons moved earlier in the attempt,
which is what lets a second move chain off the first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import (
    DragInProgress,
    EmptyAttempt,
    NoActiveDrag,
    ParseError,
    PlacementError,
    UnknownIcon,
)
from .model import GridSpec, IconId, Move, SemanticPassword, Side

#: Default snap radius, in cell units, from drop point to candidate cell center.
DEFAULT_SNAP_RADIUS = 1.25


@dataclass(frozen=True)
class SnapCandidate:
    """A free side cell of a placed icon within snapping range."""

    anchor: IconId
    side: Side
    cell: tuple[int, int]
    distance: float


@dataclass
class _ActiveDrag:
    icon: IconId
    origin: tuple[int, int]
    pos: tuple[float, float]


def cell_center(cell: tuple[int, int]) -> tuple[float, float]:
    return (cell[0] + 0.5, cell[1] + 0.5)


class PlacementState:
    """Board state for one password-entry session.

    Mutated by exactly one caller at a time; independent sessions are
    independent objects.
    """

    def __init__(self, grid: GridSpec, snap_radius: float = DEFAULT_SNAP_RADIUS):
        self.grid = grid
        self.snap_radius = snap_radius
        self.occupancy: dict[tuple[int, int], IconId] = {}
        self.committed: list[Move] = []
        self.active: _ActiveDrag | None = None
        self.reset()

    def reset(self) -> None:
        """Back to the default layout with no committed moves."""
        self.occupancy = {cell: self.grid.icon(icon_id) for icon_id, cell in self.grid.placement.items()}
        self.committed = []
        self.active = None

    def begin_drag(self, icon_id: str) -> None:
        if self.active is not None:
            raise DragInProgress(f"already dragging {self.active.icon.id!r}")
        icon = self.grid.icon(icon_id)
        cell = self._cell_of(icon)
        del self.occupancy[cell]
        self.active = _ActiveDrag(icon=icon, origin=cell, pos=cell_center(cell))

    def update_drag(self, pos: tuple[float, float]) -> SnapCandidate | None:
        """Nearest snap candidate for the current pointer position, if any.

        Ties on distance break by smaller anchor ordinal, then by side
        order LEFT < TOP < RIGHT < BOTTOM.
        """
        if self.active is None:
            raise NoActiveDrag("no drag in progress")
        self.active.pos = (float(pos[0]), float(pos[1]))
        best = None
        best_key = None
        for cell, anchor in self.occupancy.items():
            for side in Side:
                dc, dr = side.offset
                target = (cell[0] + dc, cell[1] + dr)
                if not self.grid.in_bounds(target) or target in self.occupancy:
                    continue
                cx, cy = cell_center(target)
                dist = math.hypot(pos[0] - cx, pos[1] - cy)
                if dist > self.snap_radius:
                    continue
                key = (dist, anchor.ordinal, side.order)
                if best_key is None or key < best_key:
                    best_key = key
                    best = SnapCandidate(anchor=anchor, side=side, cell=target, distance=dist)
        return best

    def end_drag(self, pos: tuple[float, float]) -> Move | None:
        """Drop the dragged icon: snap and commit, or return it home."""
        if self.active is None:
            raise NoActiveDrag("no drag in progress")
        candidate = self.update_drag(pos)
        drag = self.active
        self.active = None
        if candidate is None:
            self.occupancy[drag.origin] = drag.icon
            return None
        self.occupancy[candidate.cell] = drag.icon
        move = Move(moved=drag.icon, anchor=candidate.anchor, side=candidate.side)
        self.committed.append(move)
        return move

    def capture(self) -> SemanticPassword:
        if not self.committed:
            raise EmptyAttempt("no committed moves to capture")
        return SemanticPassword(tuple(self.committed))

    def assert_consistent(self) -> None:
        """Occupancy injectivity and exactly-once placement (drag aside)."""
        ids = [icon.id for icon in self.occupancy.values()]
        if len(set(ids)) != len(ids):
            raise AssertionError("an icon occupies two cells")
        expected = set(self.grid.icon_ids)
        if self.active is not None:
            expected.discard(self.active.icon.id)
        if set(ids) != expected:
            raise AssertionError(f"placed icons {sorted(ids)} != expected {sorted(expected)}")
        for cell in self.occupancy:
            if not self.grid.in_bounds(cell):
                raise AssertionError(f"icon parked out of bounds at {cell}")

    def _cell_of(self, icon: IconId) -> tuple[int, int]:
        for cell, placed in self.occupancy.items():
            if placed.id == icon.id:
                return cell
        raise UnknownIcon(f"icon {icon.id!r} is not placed")


# --- recorded drag-event sessions -----------------------------------------
#
# Replay format (JSON Lines, one event per line):
#   {"t": ms, "ev": "begin"|"move"|"end", "icon": id?, "x": float, "y": float}

_EVENT_KINDS = ("begin", "move", "end")


@dataclass(frozen=True)
class DragEvent:
    t: float
    ev: str
    x: float
    y: float
    icon: str | None = None

    def to_dict(self) -> dict:
        d = {"t": self.t, "ev": self.ev, "x": self.x, "y": self.y}
        if self.icon is not None:
            d["icon"] = self.icon
        return d


def event_from_dict(obj: dict) -> DragEvent:
    ev = obj.get("ev")
    if ev not in _EVENT_KINDS:
        raise ParseError(0, f"unknown drag event kind {ev!r}")
    if ev == "begin" and not obj.get("icon"):
        raise ParseError(0, "begin event needs an icon id")
    return DragEvent(
        t=float(obj.get("t", 0.0)),
        ev=ev,
        x=float(obj.get("x", 0.0)),
        y=float(obj.get("y", 0.0)),
        icon=obj.get("icon"),
    )


def events_to_jsonl(events: Iterable[DragEvent]) -> str:
    return "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in events)


def events_from_jsonl(text: str) -> list[DragEvent]:
    events = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        events.append(event_from_dict(json.loads(line)))
    return events


def replay(
    grid: GridSpec,
    events: Sequence[DragEvent],
    snap_radius: float = DEFAULT_SNAP_RADIUS,
    on_step: Callable[[PlacementState, DragEvent], None] | None = None,
) -> PlacementState:
    """Run a recorded event sequence through a fresh session.

    Replaying the same events always reproduces the same committed moves.
    """
    state = PlacementState(grid, snap_radius=snap_radius)
    for event in events:
        if event.ev == "begin":
            state.begin_drag(event.icon)
        elif event.ev == "move":
            state.update_drag((event.x, event.y))
        else:
            state.end_drag((event.x, event.y))
        if on_step is not None:
            on_step(state, event)
    return state


def apply_moves(grid: GridSpec, moves: Sequence[Move]) -> dict[str, tuple[int, int]]:
    """Final icon positions after committing `moves` from the default layout.

    Raises PlacementError when a move targets an occupied or out-of-bounds
    cell, which a snapped interactive session can never produce.
    """
    positions = dict(grid.placement)
    for move in moves:
        anchor_cell = positions.get(move.anchor.id)
        if anchor_cell is None:
            raise PlacementError(f"anchor {move.anchor.id!r} is not on the board")
        dc, dr = move.side.offset
        target = (anchor_cell[0] + dc, anchor_cell[1] + dr)
        if not grid.in_bounds(target):
            raise PlacementError(f"move {move.token!r} leaves the board at {target}")
        occupied = {cell for icon_id, cell in positions.items() if icon_id != move.moved.id}
        if target in occupied:
            raise PlacementError(f"move {move.token!r} targets occupied cell {target}")
        positions[move.moved.id] = target
    return positions
